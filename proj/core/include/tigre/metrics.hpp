#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tigre {

struct Prediction {
    double score = 0.0;
    int label = 0;  // 1 positive, 0 negative
};

/// Mean over positives, in score-descending order (stable on ties), of the
/// precision at that rank. Requires at least one positive.
double average_precision(std::span<const Prediction> predictions);

/// Probability a random positive outranks a random negative, ties counting
/// one half (Mann-Whitney). Requires at least one positive and one negative.
double roc_auc(std::span<const Prediction> predictions);

/// Fraction of per-event ranks that are <= k (ranks are 1-based).
double recall_at_k(std::span<const std::size_t> ranks, std::size_t k);

/// 1-based rank of `true_index` among all scores, descending, with
/// pessimistic ties: equal-scored competitors count as ranked ahead.
std::size_t rank_of_true(std::span<const double> scores, std::size_t true_index);

} // namespace tigre
