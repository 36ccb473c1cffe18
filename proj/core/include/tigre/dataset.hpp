#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tigre {

/// One timestamped attributed edge event from the stream. Node ids are dense
/// and start at 1; id 0 is reserved as the "no previous partner" sentinel.
struct Interaction {
    std::int32_t src = 0;
    std::int32_t dst = 0;
    double t = 0.0;
    std::int32_t label = 0;
    std::size_t ordinal = 0;
};

/// The full chronological stream plus flat per-event feature storage.
struct Dataset {
    std::vector<Interaction> events;
    std::vector<double> feature_data;  // events.size() * feature_dim, row-major
    std::size_t feature_dim = 0;
    std::int32_t num_users = 0;  // ids 1..num_users
    std::int32_t num_items = 0;  // ids num_users+1..num_users+num_items

    std::int32_t num_nodes() const { return num_users + num_items; }
    std::size_t size() const { return events.size(); }
    double max_time() const { return events.empty() ? 0.0 : events.back().t; }

    std::span<const double> features(std::size_t ordinal) const {
        return {feature_data.data() + ordinal * feature_dim, feature_dim};
    }

    /// First/last item node ids, for destination (negative) sampling.
    std::int32_t first_item() const { return num_users + 1; }
    std::int32_t last_item() const { return num_users + num_items; }
};

/// Parses a CSV with header `user_id,item_id,timestamp,state_label,...features`.
/// User and item raw ids get disjoint dense ids (users first), starting at 1.
/// Rows must be in non-decreasing timestamp order and feature rows rectangular.
Dataset load_stream(const std::filesystem::path& path);

/// Half-open ordinal range [begin, end) into Dataset::events.
struct Range {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
    bool contains(std::size_t ordinal) const { return ordinal >= begin && ordinal < end; }
};

struct SplitFractions {
    double train = 0.70;
    double val = 0.15;
    double test = 0.15;
};

/// Chronological split by interaction count: train and val counts are floored,
/// the remainder goes to test. New nodes are those absent from the train range.
struct Split {
    Range train, val, test;
    std::vector<char> is_new_node;           // indexed by node id
    std::vector<std::size_t> inductive_test; // test ordinals with >= 1 new endpoint
};

Split chronological_split(const Dataset& data, SplitFractions fractions = {});

/// Per-event interval: t minus the timestamp of the source node's previous
/// appearance (as source or target); 0 at the node's first appearance.
std::vector<double> interaction_intervals(const Dataset& data);

double interaction_interval(const Dataset& data, const Interaction& event);

} // namespace tigre
