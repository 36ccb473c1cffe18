#pragma once

#include <span>
#include <unordered_map>

#include "tigre/dataset.hpp"
#include "tigre/graph_state.hpp"
#include "tigre/model.hpp"

namespace tigre {

/// Streams the chronological edge stream through the model: encodes staged
/// messages, evolves embeddings with the gated ODE, writes node memory, and
/// produces future embeddings via temporal attention.
///
/// Per batch the phases are:
///   1. run_update   — consume staged (pre-batch) messages, solve, write memory
///   2. future_embedding — per endpoint / negative, read-only
///   3. finalize_batch — register the batch's edges in the neighbor index
/// An interaction's own features therefore never influence its own score.
class Engine {
public:
    Engine(Model& model, const Dataset& data);

    void reset();

    Model& model() { return model_; }
    const Dataset& data() const { return data_; }
    Memory& memory() { return memory_; }
    const Memory& memory() const { return memory_; }
    NeighborIndex& neighbor_index() { return index_; }

    struct UpdateResult {
        ad::Tensor terminal;  // [n_active, d]; live (on tape) during training
        std::vector<std::int32_t> active;
        std::unordered_map<std::int32_t, std::size_t> row_of;
    };

    struct ForwardOptions {
        bool training = false;
        std::mt19937_64* dropout_rng = nullptr;
    };

    UpdateResult run_update(std::span<const Interaction> batch, const ForwardOptions& options = {});

    /// Future embedding of `node` at time `t` ([1, d]). When `live` contains
    /// the node, its on-tape row is used so gradients reach the update path;
    /// otherwise the memory value is read (the convention for negatives).
    ad::Tensor future_embedding(std::int32_t node, double t, const UpdateResult* live,
                                const ForwardOptions& options = {});

    void finalize_batch(std::span<const Interaction> batch);

    /// Advances memory and the neighbor index through [range.begin, range.end)
    /// without scoring. Equivalent to a full pass as far as state goes.
    void advance(Range range, std::size_t batch_size);

    std::span<const Interaction> batch_at(std::size_t begin, std::size_t batch_size,
                                          std::size_t range_end) const;

private:
    Model& model_;
    const Dataset& data_;
    Memory memory_;
    NeighborIndex index_;
    std::mt19937_64 neighbor_rng_;
};

} // namespace tigre
