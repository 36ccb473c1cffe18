#include "tigre/engine.hpp"

#include <algorithm>

#include "tigre/errors.hpp"

namespace tigre {

using ad::Tensor;

Engine::Engine(Model& model, const Dataset& data)
    : model_(model),
      data_(data),
      memory_(data.num_nodes(), model.config().dim),
      index_(data.num_nodes()),
      neighbor_rng_(model.config().seed ^ 0x9e3779b97f4a7c15ull) {
    if (model.feature_dim() != data.feature_dim)
        throw EngineError("engine: model feature dim does not match dataset");
}

void Engine::reset() {
    memory_.reset();
    index_.reset();
    neighbor_rng_.seed(model_.config().seed ^ 0x9e3779b97f4a7c15ull);
}

Engine::UpdateResult Engine::run_update(std::span<const Interaction> batch,
                                        const ForwardOptions&) {
    if (batch.empty()) throw EngineError("run_update: empty batch");
    const auto& cfg = model_.config();
    const std::size_t d = cfg.dim;
    const std::size_t feat = data_.feature_dim;

    UpdateResult result;
    std::vector<double> now;  // reference time per active node
    auto touch = [&](std::int32_t node, double t) {
        if (node == 0) return;
        auto [it, inserted] = result.row_of.emplace(node, result.active.size());
        if (inserted) {
            result.active.push_back(node);
            now.push_back(t);
        } else {
            now[it->second] = std::max(now[it->second], t);
        }
    };
    // Active set: batch endpoints plus their current latest partners.
    for (const auto& e : batch) {
        touch(e.src, e.t);
        touch(e.dst, e.t);
        touch(memory_.partner(e.src), e.t);
        touch(memory_.partner(e.dst), e.t);
    }
    const std::size_t n = result.active.size();

    // Encoder inputs from the staged (pre-batch) state:
    //   own embedding || partner embedding || staged edge features || F_T(now - tau).
    std::vector<double> block(n * (2 * d + feat), 0.0);
    std::vector<double> deltas(n);
    std::vector<std::int32_t> partners(n);
    for (std::size_t r = 0; r < n; ++r) {
        const std::int32_t v = result.active[r];
        const std::int32_t rv = memory_.partner(v);
        partners[r] = rv;
        double* row = block.data() + r * (2 * d + feat);
        auto own = memory_.embedding(v);
        std::copy(own.begin(), own.end(), row);
        auto par = memory_.embedding(rv);
        std::copy(par.begin(), par.end(), row + d);
        if (feat > 0 && memory_.has_staged_message(v)) {
            auto f = data_.features(memory_.staged_message(v));
            std::copy(f.begin(), f.end(), row + 2 * d);
        }
        deltas[r] = now[r] - memory_.timestamp(v);
    }
    Tensor const_block = Tensor::from({n, 2 * d + feat}, std::move(block));
    Tensor time_block = model_.update_time_encoder().encode(deltas);
    Tensor h0 = model_.encoder().encode_rows(ad::concat_cols({const_block, time_block}));

    if (cfg.ablation.no_update) {
        result.terminal = h0;
    } else {
        LatestAdjacency adjacency = build_adjacency(result.active, partners, cfg.beta);
        if (cfg.ode_real_interval) {
            std::vector<double> scale_data(n * d);
            for (std::size_t r = 0; r < n; ++r)
                std::fill_n(scale_data.begin() + r * d, d, deltas[r]);
            Tensor time_scale = Tensor::from({n, d}, std::move(scale_data));
            OdeOptions unit{cfg.ode_solver, cfg.ode_steps, 1.0};
            result.terminal =
                model_.dynamics().solve(adjacency.matrix, h0, unit, cfg.ablation, &time_scale);
        } else {
            result.terminal =
                model_.dynamics().solve(adjacency.matrix, h0, model_.ode_options(), cfg.ablation);
        }
    }

    // Memory advances for batch endpoints only; partners took part in the
    // dynamics but keep their stored state.
    auto terminal_values = result.terminal.values();
    for (const auto& e : batch) {
        const std::size_t row_src = result.row_of.at(e.src);
        const std::size_t row_dst = result.row_of.at(e.dst);
        memory_.update(e.src, terminal_values.subspan(row_src * d, d), e.dst, e.t);
        memory_.update(e.dst, terminal_values.subspan(row_dst * d, d), e.src, e.t);
        memory_.stage(e.src, e.ordinal);
        memory_.stage(e.dst, e.ordinal);
    }
    return result;
}

Tensor Engine::future_embedding(std::int32_t node, double t, const UpdateResult* live,
                                const ForwardOptions& options) {
    const auto& cfg = model_.config();
    Tensor h_v;
    if (live) {
        auto it = live->row_of.find(node);
        if (it == live->row_of.end())
            throw EngineError("future_embedding: node not in the live update result");
        h_v = ad::select_rows(live->terminal, {it->second});
    } else {
        auto emb = memory_.embedding(node);
        h_v = Tensor::from({1, cfg.dim}, {emb.begin(), emb.end()});
    }
    if (cfg.ablation.no_transform) return h_v;

    auto neighbors = index_.query(node, t, cfg.neighbors, cfg.neighbor_strategy, &neighbor_rng_);
    AttentionInputs inputs =
        model_.attention().assemble(h_v, t, neighbors, memory_, data_,
                                    model_.transform_time_encoder(), cfg.query_time);
    DropoutContext dropout{cfg.dropout, options.dropout_rng, options.training};
    return model_.attention().transform(inputs, h_v, dropout);
}

void Engine::finalize_batch(std::span<const Interaction> batch) {
    for (const auto& e : batch) index_.insert(e);
}

void Engine::advance(Range range, std::size_t batch_size) {
    for (std::size_t pos = range.begin; pos < range.end;) {
        auto batch = batch_at(pos, batch_size, range.end);
        run_update(batch);
        finalize_batch(batch);
        pos += batch.size();
    }
}

std::span<const Interaction> Engine::batch_at(std::size_t begin, std::size_t batch_size,
                                              std::size_t range_end) const {
    const std::size_t end = std::min(begin + batch_size, range_end);
    return {data_.events.data() + begin, end - begin};
}

} // namespace tigre
