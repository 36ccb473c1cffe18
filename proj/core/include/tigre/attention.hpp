#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "tigre/dataset.hpp"
#include "tigre/graph_state.hpp"
#include "tigre/ops.hpp"
#include "tigre/optim.hpp"
#include "tigre/time_encoding.hpp"

namespace tigre {

enum class QueryTimeMode { ZeroDelta, Absolute };

/// Dropout behaviour for a forward pass; rng may be null in evaluation mode.
struct DropoutContext {
    double p = 0.0;
    std::mt19937_64* rng = nullptr;
    bool training = false;
};

/// Assembled attention inputs for one query node at time t. Padding rows are
/// all-zero and masked out.
struct AttentionInputs {
    ad::Tensor query;        // [1, d + time_dim]
    ad::Tensor neighbors;    // [k, d + feature_dim + time_dim]
    std::vector<char> mask;  // size k; 1 = real neighbor row
};

/// Temporal multi-head self-attention over up to k historical neighbors,
/// followed by a linear combiner on (multi-head output || own embedding).
class TemporalAttention {
public:
    TemporalAttention(ad::ParameterStore& params, const std::string& path, std::size_t dim,
                      std::size_t feature_dim, std::size_t time_dim, std::size_t heads,
                      std::size_t neighbor_budget, std::mt19937_64& rng);

    std::size_t heads() const { return head_params_.size(); }
    std::size_t neighbor_budget() const { return neighbor_budget_; }
    std::size_t head_width() const { return head_width_; }

    /// Builds query and key/value inputs. `h_v` is the query node's current
    /// embedding as a [1, d] tensor (live for batch endpoints).
    AttentionInputs assemble(const ad::Tensor& h_v, double t,
                             std::span<const NeighborIndex::Entry> neighbors,
                             const Memory& memory, const Dataset& data,
                             const TimeEncoder& time_encoder,
                             QueryTimeMode query_time = QueryTimeMode::ZeroDelta) const;

    /// Scaled dot-product attention for one head. Masked rows get exactly
    /// zero weight; with no unmasked rows the result is the zero vector.
    ad::Tensor attend_one_head(std::size_t head, const ad::Tensor& query,
                               const ad::Tensor& neighbors, const std::vector<char>& mask) const;

    /// Full layer: all heads, concat, dropout, combiner. Returns [1, d].
    ad::Tensor transform(const AttentionInputs& inputs, const ad::Tensor& h_v,
                         const DropoutContext& dropout = {}) const;

private:
    struct HeadParams {
        ad::Tensor w_query, w_key, w_value;
    };
    std::vector<HeadParams> head_params_;
    ad::Tensor w_out_, b_out_;
    std::size_t head_width_ = 0;
    std::size_t neighbor_budget_ = 0;
};

} // namespace tigre
