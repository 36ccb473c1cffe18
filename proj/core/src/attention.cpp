#include "tigre/attention.hpp"

#include <cmath>

#include "tigre/errors.hpp"

namespace tigre {

using ad::Tensor;

namespace {
constexpr double kMaskBias = -1e30;  // exp() underflows to exactly 0 after the max shift
}

TemporalAttention::TemporalAttention(ad::ParameterStore& params, const std::string& path,
                                     std::size_t dim, std::size_t feature_dim,
                                     std::size_t time_dim, std::size_t heads,
                                     std::size_t neighbor_budget, std::mt19937_64& rng) {
    if (heads == 0) throw ConfigError("attention: heads must be >= 1");
    if (dim % heads != 0)
        throw ConfigError("attention: embedding dim must be divisible by head count");
    if (neighbor_budget == 0) throw ConfigError("attention: neighbor budget must be >= 1");
    head_width_ = dim / heads;
    neighbor_budget_ = neighbor_budget;
    const std::size_t query_width = dim + time_dim;
    const std::size_t key_width = dim + feature_dim + time_dim;
    for (std::size_t m = 0; m < heads; ++m) {
        const std::string prefix = path + "/head" + std::to_string(m);
        HeadParams h;
        h.w_query = params.create(prefix + "/w_query", {query_width, head_width_}, query_width, rng);
        h.w_key = params.create(prefix + "/w_key", {key_width, head_width_}, key_width, rng);
        h.w_value = params.create(prefix + "/w_value", {key_width, head_width_}, key_width, rng);
        head_params_.push_back(std::move(h));
    }
    w_out_ = params.create(path + "/w_out", {2 * dim, dim}, 2 * dim, rng);
    b_out_ = params.create(path + "/b_out", {dim}, 2 * dim, rng);
}

AttentionInputs TemporalAttention::assemble(const Tensor& h_v, double t,
                                            std::span<const NeighborIndex::Entry> neighbors,
                                            const Memory& memory, const Dataset& data,
                                            const TimeEncoder& time_encoder,
                                            QueryTimeMode query_time) const {
    const std::size_t k = neighbor_budget_;
    const std::size_t d = memory.dim();
    const std::size_t feat = data.feature_dim;
    if (neighbors.size() > k) throw EngineError("attention: more neighbors than budget");
    for (const auto& n : neighbors)
        if (n.t >= t) throw EngineError("attention: neighbor not strictly before query time");

    AttentionInputs out;
    const double query_delta = query_time == QueryTimeMode::ZeroDelta ? 0.0 : t;
    out.query = ad::concat_cols({h_v, time_encoder.encode_one(query_delta)});

    // Constant block: neighbor embeddings and edge features; padding rows stay zero.
    std::vector<double> block(k * (d + feat), 0.0);
    std::vector<double> deltas;
    deltas.reserve(neighbors.size());
    for (std::size_t j = 0; j < neighbors.size(); ++j) {
        auto emb = memory.embedding(neighbors[j].partner);
        std::copy(emb.begin(), emb.end(), block.begin() + j * (d + feat));
        auto f = data.features(neighbors[j].ordinal);
        std::copy(f.begin(), f.end(), block.begin() + j * (d + feat) + d);
        deltas.push_back(t - neighbors[j].t);
    }
    Tensor const_block = Tensor::from({k, d + feat}, std::move(block));
    Tensor time_block = ad::pad_rows(time_encoder.encode(deltas), k);
    out.neighbors = ad::concat_cols({const_block, time_block});

    out.mask.assign(k, 0);
    for (std::size_t j = 0; j < neighbors.size(); ++j) out.mask[j] = 1;
    return out;
}

Tensor TemporalAttention::attend_one_head(std::size_t head, const Tensor& query,
                                          const Tensor& neighbors,
                                          const std::vector<char>& mask) const {
    const auto& hp = head_params_.at(head);
    if (mask.size() != neighbors.rows()) throw EngineError("attention: mask/rows mismatch");
    Tensor q = ad::matmul(query, hp.w_query);                       // [1, hw]
    Tensor keys = ad::matmul(neighbors, hp.w_key);                  // [k, hw]
    Tensor values = ad::matmul(neighbors, hp.w_value);              // [k, hw]
    Tensor scores = ad::scale(ad::matmul(q, ad::transpose(keys)),
                              1.0 / std::sqrt(static_cast<double>(head_width_)));  // [1, k]
    std::vector<double> bias(mask.size(), 0.0);
    for (std::size_t j = 0; j < mask.size(); ++j)
        if (!mask[j]) bias[j] = kMaskBias;
    Tensor weights = ad::softmax_rows(ad::add(scores, Tensor::from({1, mask.size()}, std::move(bias))));
    return ad::matmul(weights, values);  // [1, hw]
}

Tensor TemporalAttention::transform(const AttentionInputs& inputs, const Tensor& h_v,
                                    const DropoutContext& dropout) const {
    std::vector<Tensor> head_outputs;
    head_outputs.reserve(head_params_.size());
    for (std::size_t m = 0; m < head_params_.size(); ++m)
        head_outputs.push_back(attend_one_head(m, inputs.query, inputs.neighbors, inputs.mask));
    Tensor multi = ad::concat_cols(head_outputs);  // [1, d]
    if (dropout.training && dropout.p > 0.0 && dropout.rng)
        multi = ad::dropout(multi, dropout.p, *dropout.rng, true);
    return ad::linear(ad::concat_cols({multi, h_v}), w_out_, b_out_);
}

} // namespace tigre
