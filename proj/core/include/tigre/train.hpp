#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tigre/engine.hpp"
#include "tigre/metrics.hpp"
#include "tigre/optim.hpp"

namespace tigre {

/// Uniform destination sampler: items for bipartite datasets, all nodes
/// otherwise. Seedable and deterministic.
class NegativeSampler {
public:
    NegativeSampler(std::int32_t lo, std::int32_t hi, std::uint64_t seed);
    static NegativeSampler destinations(const Dataset& data, bool bipartite, std::uint64_t seed);

    std::int32_t sample();

private:
    std::uniform_int_distribution<std::int32_t> dist_;
    std::mt19937_64 rng_;
};

/// Mean over positives of -log s(s_pos) - sum_q log s(-s_neg_q).
/// `neg_logits` holds the negatives of every positive, concatenated.
/// With `paper_literal` the positive term applies sigma(-x) as printed in the
/// source objective (kept for auditability; it rewards separating positives).
ad::Tensor bce_link_loss(const ad::Tensor& pos_logits, const ad::Tensor& neg_logits,
                         bool paper_literal = false);

struct TrainConfig {
    std::size_t batch_size = 200;
    std::size_t epochs = 50;
    std::size_t negatives = 1;  // Q, per positive
    double lr = 1e-4;
    double dropout = 0.1;
    std::uint64_t seed = 42;
    std::size_t patience = 5;
    bool paper_literal_loss = false;
    bool deterministic = false;
    bool bipartite = true;
};

struct EpochStats {
    double mean_loss = 0.0;
    std::size_t steps = 0;
};

/// One chronological pass over the range: per batch, update from staged
/// messages, score positives against sampled negatives, backprop, Adam step,
/// then register the batch's edges. Memory must be positioned at range.begin.
EpochStats train_epoch(Engine& engine, ad::Adam& optimizer, Range range, const TrainConfig& config,
                       NegativeSampler& negatives, std::mt19937_64& dropout_rng);

struct ScoredEvent {
    std::size_t ordinal = 0;
    double pos_score = 0.0;
    double neg_score = 0.0;
};

/// Streams [range.begin, range.end) without gradient steps, pairing each
/// positive with one uniform negative destination. Memory advances with true
/// edges only. `filter`, when given, selects which ordinals get scored.
std::vector<ScoredEvent> score_link_range(Engine& engine, Range range, std::size_t batch_size,
                                          NegativeSampler& negatives,
                                          const std::vector<char>* filter = nullptr);

std::vector<Prediction> to_predictions(const std::vector<ScoredEvent>& events);

struct FitResult {
    double best_val_ap = 0.0;
    std::size_t best_epoch = 0;  // 1-based
    std::size_t epochs_run = 0;
    std::vector<double> train_loss;  // per epoch
    std::vector<double> val_ap;      // per epoch
};

/// Full training loop: per epoch the memory is re-initialized and the train
/// range replayed, then the validation range is scored. Early-stops after
/// `patience` non-improving epochs and leaves the best parameters installed.
FitResult fit(Model& model, const Dataset& data, const Split& split, const TrainConfig& config);

/// Value snapshots for best-epoch tracking and checkpoint probes.
std::vector<std::vector<double>> snapshot_params(const ad::ParameterStore& params);
void restore_params(ad::ParameterStore& params, const std::vector<std::vector<double>>& snapshot);

} // namespace tigre
