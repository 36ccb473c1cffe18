#include "tigre/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string>

#include "tigre/errors.hpp"

namespace tigre {

namespace {

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view s, std::size_t line_no, const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " field '" +
                        std::string(s) + "'");
    return v;
}

std::int64_t parse_int(std::string_view s, std::size_t line_no, const char* what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " field '" +
                        std::string(s) + "'");
    return v;
}

} // namespace

Dataset load_stream(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open data file: " + path.string());

    std::string header;
    if (!std::getline(is, header)) throw DataError("empty data file: " + path.string());

    struct Row {
        std::int64_t user, item;
        double t;
        std::int32_t label;
        std::vector<double> feats;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 1;
    std::size_t feature_dim = 0;
    double prev_t = -1.0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        auto fields = split_csv(line);
        if (fields.size() < 4)
            throw DataError("line " + std::to_string(line_no) + ": expected at least 4 fields");
        Row row;
        row.user = parse_int(fields[0], line_no, "user_id");
        row.item = parse_int(fields[1], line_no, "item_id");
        row.t = parse_double(fields[2], line_no, "timestamp");
        row.label = static_cast<std::int32_t>(parse_int(fields[3], line_no, "state_label"));
        if (row.t < 0.0 || !std::isfinite(row.t))
            throw DataError("line " + std::to_string(line_no) + ": invalid timestamp");
        if (row.t < prev_t)
            throw DataError("line " + std::to_string(line_no) +
                            ": timestamps out of order (stream must be chronological)");
        prev_t = row.t;
        // An empty trailing feature list ("...,label,") counts as zero features.
        std::size_t nfeat = fields.size() - 4;
        if (nfeat == 1 && fields[4].empty()) nfeat = 0;
        row.feats.reserve(nfeat);
        for (std::size_t i = 0; i < nfeat; ++i)
            row.feats.push_back(parse_double(fields[4 + i], line_no, "feature"));
        if (rows.empty()) {
            feature_dim = nfeat;
        } else if (nfeat != feature_dim) {
            throw DataError("line " + std::to_string(line_no) + ": ragged feature row (" +
                            std::to_string(nfeat) + " vs " + std::to_string(feature_dim) + ")");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("data file has no interaction rows: " + path.string());

    // Dense re-indexing: distinct users get 1..U, distinct items U+1..U+I.
    std::map<std::int64_t, std::int32_t> user_ids, item_ids;
    for (const auto& r : rows) user_ids.emplace(r.user, 0);
    for (const auto& r : rows) item_ids.emplace(r.item, 0);
    std::int32_t next = 1;
    for (auto& [_, id] : user_ids) id = next++;
    for (auto& [_, id] : item_ids) id = next++;

    Dataset data;
    data.num_users = static_cast<std::int32_t>(user_ids.size());
    data.num_items = static_cast<std::int32_t>(item_ids.size());
    data.feature_dim = feature_dim;
    data.events.reserve(rows.size());
    data.feature_data.reserve(rows.size() * feature_dim);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Interaction e;
        e.src = user_ids[rows[i].user];
        e.dst = item_ids[rows[i].item];
        e.t = rows[i].t;
        e.label = rows[i].label;
        e.ordinal = i;
        data.events.push_back(e);
        data.feature_data.insert(data.feature_data.end(), rows[i].feats.begin(),
                                 rows[i].feats.end());
    }
    return data;
}

Split chronological_split(const Dataset& data, SplitFractions fractions) {
    const double total = fractions.train + fractions.val + fractions.test;
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
    const std::size_t n = data.size();
    const auto n_train = static_cast<std::size_t>(std::floor(fractions.train * n));
    const auto n_val = static_cast<std::size_t>(std::floor(fractions.val * n));
    if (n_train == 0 || n_val + n_train >= n)
        throw ConfigError("split produces an empty range (stream too short)");

    Split split;
    split.train = {0, n_train};
    split.val = {n_train, n_train + n_val};
    split.test = {n_train + n_val, n};

    split.is_new_node.assign(static_cast<std::size_t>(data.num_nodes()) + 1, 1);
    for (std::size_t i = split.train.begin; i < split.train.end; ++i) {
        split.is_new_node[data.events[i].src] = 0;
        split.is_new_node[data.events[i].dst] = 0;
    }
    for (std::size_t i = split.test.begin; i < split.test.end; ++i) {
        const auto& e = data.events[i];
        if (split.is_new_node[e.src] || split.is_new_node[e.dst])
            split.inductive_test.push_back(i);
    }
    return split;
}

std::vector<double> interaction_intervals(const Dataset& data) {
    std::vector<double> intervals(data.size(), 0.0);
    std::vector<double> last_seen(static_cast<std::size_t>(data.num_nodes()) + 1, -1.0);
    for (const auto& e : data.events) {
        intervals[e.ordinal] = last_seen[e.src] < 0.0 ? 0.0 : e.t - last_seen[e.src];
        last_seen[e.src] = e.t;
        last_seen[e.dst] = e.t;
    }
    return intervals;
}

double interaction_interval(const Dataset& data, const Interaction& event) {
    if (event.ordinal >= data.size()) throw EngineError("interaction does not belong to dataset");
    double last = -1.0;
    for (std::size_t i = 0; i < event.ordinal; ++i) {
        const auto& e = data.events[i];
        if (e.src == event.src || e.dst == event.src) last = e.t;
    }
    return last < 0.0 ? 0.0 : event.t - last;
}

} // namespace tigre
