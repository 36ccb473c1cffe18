#include "tigre/graph_state.hpp"

#include <algorithm>

#include "tigre/errors.hpp"

namespace tigre {

Memory::Memory(std::int32_t num_nodes, std::size_t dim) : num_nodes_(num_nodes), dim_(dim) {
    reset();
}

void Memory::reset() {
    const std::size_t rows = static_cast<std::size_t>(num_nodes_) + 1;
    emb_.assign(rows * dim_, 0.0);
    partner_.assign(rows, 0);
    ts_.assign(rows, 0.0);
    staged_.assign(rows, kNoStagedMessage);
}

std::size_t Memory::check(std::int32_t node) const {
    if (node < 0 || node > num_nodes_) throw EngineError("memory: node id out of range");
    return static_cast<std::size_t>(node);
}

std::span<const double> Memory::embedding(std::int32_t node) const {
    return {emb_.data() + check(node) * dim_, dim_};
}

void Memory::update(std::int32_t node, std::span<const double> embedding, std::int32_t partner,
                    double t) {
    const std::size_t idx = check(node);
    if (idx == 0) throw EngineError("memory: cannot update the sentinel node 0");
    if (embedding.size() != dim_) throw EngineError("memory: embedding dimension mismatch");
    if (t < ts_[idx]) throw EngineError("memory: timestamp regression on update");
    std::copy(embedding.begin(), embedding.end(), emb_.begin() + idx * dim_);
    partner_[idx] = partner;
    ts_[idx] = t;
}

void Memory::stage(std::int32_t node, std::size_t interaction_ordinal) {
    staged_[check(node)] = interaction_ordinal;
}

void Memory::restore(std::vector<double> emb, std::vector<std::int32_t> partner,
                     std::vector<double> ts, std::vector<std::size_t> staged) {
    const std::size_t rows = static_cast<std::size_t>(num_nodes_) + 1;
    if (emb.size() != rows * dim_ || partner.size() != rows || ts.size() != rows ||
        staged.size() != rows)
        throw EngineError("memory: snapshot size mismatch");
    emb_ = std::move(emb);
    partner_ = std::move(partner);
    ts_ = std::move(ts);
    staged_ = std::move(staged);
}

NeighborIndex::NeighborIndex(std::int32_t num_nodes)
    : lists_(static_cast<std::size_t>(num_nodes) + 1) {}

void NeighborIndex::reset() {
    for (auto& l : lists_) l.clear();
}

void NeighborIndex::insert(const Interaction& event) {
    auto push = [this](std::int32_t node, std::int32_t partner, const Interaction& e) {
        auto& list = lists_.at(static_cast<std::size_t>(node));
        if (!list.empty() && e.t < list.back().t)
            throw EngineError("neighbor index: out-of-order insert");
        list.push_back(Entry{partner, e.ordinal, e.t});
    };
    push(event.src, event.dst, event);
    push(event.dst, event.src, event);
}

std::vector<NeighborIndex::Entry> NeighborIndex::query(std::int32_t node, double t, std::size_t k,
                                                       NeighborStrategy strategy,
                                                       std::mt19937_64* rng) const {
    if (k == 0) throw EngineError("neighbor index: k must be >= 1");
    const auto& list = lists_.at(static_cast<std::size_t>(node));
    // First entry with timestamp >= t bounds the visible history.
    const auto cut = std::lower_bound(list.begin(), list.end(), t,
                                      [](const Entry& e, double v) { return e.t < v; });
    const std::size_t visible = static_cast<std::size_t>(cut - list.begin());
    const std::size_t take = std::min(k, visible);
    std::vector<Entry> out;
    out.reserve(take);
    if (take == 0) return out;

    if (strategy == NeighborStrategy::MostRecent || visible <= k) {
        for (std::size_t i = 0; i < take; ++i) out.push_back(list[visible - 1 - i]);
        if (strategy == NeighborStrategy::Uniform)
            std::reverse(out.begin(), out.end());
        return out;
    }

    // Uniform without replacement via partial Fisher-Yates over indices.
    if (!rng) throw EngineError("neighbor index: uniform strategy needs an RNG");
    std::vector<std::size_t> idx(visible);
    for (std::size_t i = 0; i < visible; ++i) idx[i] = i;
    for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, visible - 1);
        std::swap(idx[i], idx[pick(*rng)]);
    }
    idx.resize(take);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx) out.push_back(list[i]);
    return out;
}

std::size_t NeighborIndex::history_size(std::int32_t node) const {
    return lists_.at(static_cast<std::size_t>(node)).size();
}

} // namespace tigre
