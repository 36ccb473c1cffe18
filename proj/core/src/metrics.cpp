#include "tigre/metrics.hpp"

#include <algorithm>
#include <numeric>

#include "tigre/errors.hpp"

namespace tigre {

double average_precision(std::span<const Prediction> predictions) {
    std::vector<std::size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predictions[a].score > predictions[b].score;
    });
    double positives_seen = 0.0;
    double precision_sum = 0.0;
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        if (predictions[order[rank]].label == 1) {
            positives_seen += 1.0;
            precision_sum += positives_seen / static_cast<double>(rank + 1);
        }
    }
    if (positives_seen == 0.0) throw EngineError("average_precision: no positive labels");
    return precision_sum / positives_seen;
}

double roc_auc(std::span<const Prediction> predictions) {
    std::vector<std::size_t> order(predictions.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return predictions[a].score < predictions[b].score;
    });
    // Average ranks across tied scores, then Mann-Whitney U.
    double rank_sum_pos = 0.0;
    std::size_t n_pos = 0, n_neg = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() &&
               predictions[order[j]].score == predictions[order[i]].score)
            ++j;
        const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) {
            if (predictions[order[k]].label == 1) {
                rank_sum_pos += avg_rank;
                ++n_pos;
            } else {
                ++n_neg;
            }
        }
        i = j;
    }
    if (n_pos == 0 || n_neg == 0) throw EngineError("roc_auc: need both classes");
    const double u = rank_sum_pos - static_cast<double>(n_pos) * (n_pos + 1) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double recall_at_k(std::span<const std::size_t> ranks, std::size_t k) {
    if (ranks.empty()) throw EngineError("recall_at_k: no ranks");
    std::size_t hits = 0;
    for (std::size_t r : ranks)
        if (r <= k) ++hits;
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

std::size_t rank_of_true(std::span<const double> scores, std::size_t true_index) {
    if (true_index >= scores.size()) throw EngineError("rank_of_true: index out of range");
    const double target = scores[true_index];
    std::size_t ahead = 0;
    for (std::size_t j = 0; j < scores.size(); ++j) {
        if (j == true_index) continue;
        if (scores[j] >= target) ++ahead;
    }
    return ahead + 1;
}

} // namespace tigre
