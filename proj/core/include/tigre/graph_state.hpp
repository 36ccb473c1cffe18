#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "tigre/dataset.hpp"

namespace tigre {

/// Per-node persisted state: latest embedding, latest partner r_v, latest
/// timestamp tau_v, and the staged raw message (an ordinal into the stream)
/// that will feed the node's next update. Node id 0 is the sentinel row and
/// keeps a zero embedding.
class Memory {
public:
    static constexpr std::size_t kNoStagedMessage = std::numeric_limits<std::size_t>::max();

    Memory(std::int32_t num_nodes, std::size_t dim);

    void reset();

    std::size_t dim() const { return dim_; }
    std::int32_t num_nodes() const { return num_nodes_; }

    std::span<const double> embedding(std::int32_t node) const;
    std::int32_t partner(std::int32_t node) const { return partner_[check(node)]; }
    double timestamp(std::int32_t node) const { return ts_[check(node)]; }
    std::size_t staged_message(std::int32_t node) const { return staged_[check(node)]; }
    bool has_staged_message(std::int32_t node) const {
        return staged_[check(node)] != kNoStagedMessage;
    }

    /// Replaces embedding, partner and timestamp atomically.
    /// Throws EngineError when t is older than the node's latest timestamp.
    void update(std::int32_t node, std::span<const double> embedding, std::int32_t partner,
                double t);

    void stage(std::int32_t node, std::size_t interaction_ordinal);

    /// Raw buffers for snapshotting.
    const std::vector<double>& embedding_data() const { return emb_; }
    const std::vector<std::int32_t>& partner_data() const { return partner_; }
    const std::vector<double>& timestamp_data() const { return ts_; }
    const std::vector<std::size_t>& staged_data() const { return staged_; }
    void restore(std::vector<double> emb, std::vector<std::int32_t> partner,
                 std::vector<double> ts, std::vector<std::size_t> staged);

private:
    std::size_t check(std::int32_t node) const;

    std::int32_t num_nodes_;
    std::size_t dim_;
    std::vector<double> emb_;  // (num_nodes + 1) * dim
    std::vector<std::int32_t> partner_;
    std::vector<double> ts_;
    std::vector<std::size_t> staged_;
};

enum class NeighborStrategy { MostRecent, Uniform };

/// Append-only per-node history of (partner, ordinal, timestamp), sorted by
/// timestamp. Queries at time t only ever see entries strictly before t.
class NeighborIndex {
public:
    struct Entry {
        std::int32_t partner;
        std::size_t ordinal;
        double t;
    };

    explicit NeighborIndex(std::int32_t num_nodes);

    void reset();

    /// Registers the interaction for both endpoints.
    void insert(const Interaction& event);

    /// Up to k entries with timestamp strictly < t. MostRecent returns the
    /// latest first; Uniform samples without replacement (ascending time).
    std::vector<Entry> query(std::int32_t node, double t, std::size_t k,
                             NeighborStrategy strategy = NeighborStrategy::MostRecent,
                             std::mt19937_64* rng = nullptr) const;

    std::size_t history_size(std::int32_t node) const;

private:
    std::vector<std::vector<Entry>> lists_;
};

} // namespace tigre
