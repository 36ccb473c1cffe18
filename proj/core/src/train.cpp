#include "tigre/train.hpp"

#include <algorithm>

#include "tigre/errors.hpp"

namespace tigre {

using ad::Tensor;

NegativeSampler::NegativeSampler(std::int32_t lo, std::int32_t hi, std::uint64_t seed)
    : dist_(lo, hi), rng_(seed) {
    if (lo > hi) throw EngineError("negative sampler: empty node space");
}

NegativeSampler NegativeSampler::destinations(const Dataset& data, bool bipartite,
                                              std::uint64_t seed) {
    if (bipartite && data.num_items > 0)
        return NegativeSampler(data.first_item(), data.last_item(), seed);
    return NegativeSampler(1, data.num_nodes(), seed);
}

std::int32_t NegativeSampler::sample() { return dist_(rng_); }

Tensor bce_link_loss(const Tensor& pos_logits, const Tensor& neg_logits, bool paper_literal) {
    if (pos_logits.size() == 0) throw EngineError("bce_link_loss: no positives");
    const double inv_b = 1.0 / static_cast<double>(pos_logits.size());
    Tensor pos_term = paper_literal ? ad::log_sigmoid(ad::scale(pos_logits, -1.0))
                                    : ad::log_sigmoid(pos_logits);
    Tensor loss = ad::scale(ad::sum(pos_term), -inv_b);
    if (neg_logits.size() > 0) {
        Tensor neg_term = ad::log_sigmoid(ad::scale(neg_logits, -1.0));
        loss = ad::add(loss, ad::scale(ad::sum(neg_term), -inv_b));
    }
    return loss;
}

EpochStats train_epoch(Engine& engine, ad::Adam& optimizer, Range range,
                       const TrainConfig& config, NegativeSampler& negatives,
                       std::mt19937_64& dropout_rng) {
    if (config.batch_size == 0) throw ConfigError("train: batch_size must be >= 1");
    if (config.negatives == 0) throw ConfigError("train: negatives must be >= 1");
    EpochStats stats;
    double loss_sum = 0.0;
    Engine::ForwardOptions fwd{/*training=*/true, &dropout_rng};
    for (std::size_t pos = range.begin; pos < range.end;) {
        auto batch = engine.batch_at(pos, config.batch_size, range.end);
        ad::Tape tape;
        ad::TapeScope scope(tape);

        auto update = engine.run_update(batch, fwd);
        std::vector<Tensor> pos_scores, neg_scores;
        pos_scores.reserve(batch.size());
        neg_scores.reserve(batch.size() * config.negatives);
        for (const auto& e : batch) {
            Tensor h_src = engine.future_embedding(e.src, e.t, &update, fwd);
            Tensor h_dst = engine.future_embedding(e.dst, e.t, &update, fwd);
            pos_scores.push_back(engine_model_score(engine, h_src, h_dst));
            for (std::size_t q = 0; q < config.negatives; ++q) {
                const std::int32_t neg = negatives.sample();
                Tensor h_neg = engine.future_embedding(neg, e.t, nullptr, fwd);
                neg_scores.push_back(engine_model_score(engine, h_src, h_neg));
            }
        }
        Tensor loss = bce_link_loss(ad::concat_cols(pos_scores), ad::concat_cols(neg_scores),
                                    config.paper_literal_loss);
        loss_sum += loss.item();
        tape.backward(loss);
        optimizer.step();
        optimizer.zero_grad();

        engine.finalize_batch(batch);
        ++stats.steps;
        pos += batch.size();
    }
    stats.mean_loss = stats.steps > 0 ? loss_sum / static_cast<double>(stats.steps) : 0.0;
    return stats;
}

std::vector<ScoredEvent> score_link_range(Engine& engine, Range range, std::size_t batch_size,
                                          NegativeSampler& negatives,
                                          const std::vector<char>* filter) {
    std::vector<ScoredEvent> scored;
    for (std::size_t pos = range.begin; pos < range.end;) {
        auto batch = engine.batch_at(pos, batch_size, range.end);
        auto update = engine.run_update(batch);
        for (const auto& e : batch) {
            const std::int32_t neg = negatives.sample();
            if (filter && !(*filter)[e.ordinal]) continue;
            Tensor h_src = engine.future_embedding(e.src, e.t, nullptr);
            Tensor h_dst = engine.future_embedding(e.dst, e.t, nullptr);
            Tensor h_neg = engine.future_embedding(neg, e.t, nullptr);
            ScoredEvent s;
            s.ordinal = e.ordinal;
            s.pos_score = engine_model_score(engine, h_src, h_dst).item();
            s.neg_score = engine_model_score(engine, h_src, h_neg).item();
            scored.push_back(s);
        }
        engine.finalize_batch(batch);
        pos += batch.size();
    }
    return scored;
}

std::vector<Prediction> to_predictions(const std::vector<ScoredEvent>& events) {
    std::vector<Prediction> out;
    out.reserve(events.size() * 2);
    for (const auto& e : events) {
        out.push_back({e.pos_score, 1});
        out.push_back({e.neg_score, 0});
    }
    return out;
}

FitResult fit(Model& model, const Dataset& data, const Split& split, const TrainConfig& config) {
    Engine engine(model, data);
    ad::AdamConfig adam_cfg;
    adam_cfg.lr = config.lr;
    ad::Adam optimizer(model.params().tensors(), adam_cfg);

    std::mt19937_64 dropout_rng(config.seed ^ 0xd1b54a32d192ed03ull);
    FitResult result;
    std::vector<std::vector<double>> best_params = snapshot_params(model.params());

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        engine.reset();
        NegativeSampler train_neg =
            NegativeSampler::destinations(data, config.bipartite, config.seed + epoch);
        EpochStats stats =
            train_epoch(engine, optimizer, split.train, config, train_neg, dropout_rng);

        // Validation continues from the post-train memory state, without
        // gradient steps; negatives are fixed across epochs.
        NegativeSampler val_neg =
            NegativeSampler::destinations(data, config.bipartite, config.seed ^ 0xabcdef12345ull);
        auto scored = score_link_range(engine, split.val, config.batch_size, val_neg);
        auto preds = to_predictions(scored);
        const double val_ap = average_precision(preds);

        result.train_loss.push_back(stats.mean_loss);
        result.val_ap.push_back(val_ap);
        result.epochs_run = epoch;
        if (val_ap > result.best_val_ap || result.best_epoch == 0) {
            result.best_val_ap = val_ap;
            result.best_epoch = epoch;
            best_params = snapshot_params(model.params());
        }
        if (epoch - result.best_epoch >= config.patience) break;
    }
    restore_params(model.params(), best_params);
    return result;
}

std::vector<std::vector<double>> snapshot_params(const ad::ParameterStore& params) {
    std::vector<std::vector<double>> snap;
    snap.reserve(params.items().size());
    for (const auto& [_, t] : params.items()) snap.emplace_back(t.values().begin(), t.values().end());
    return snap;
}

void restore_params(ad::ParameterStore& params, const std::vector<std::vector<double>>& snapshot) {
    if (snapshot.size() != params.items().size())
        throw EngineError("restore_params: snapshot layout mismatch");
    std::size_t i = 0;
    for (auto& [_, t] : const_cast<std::vector<std::pair<std::string, ad::Tensor>>&>(params.items())) {
        if (snapshot[i].size() != t.size())
            throw EngineError("restore_params: parameter size mismatch");
        std::copy(snapshot[i].begin(), snapshot[i].end(), t.values_mut().begin());
        ++i;
    }
}

} // namespace tigre
