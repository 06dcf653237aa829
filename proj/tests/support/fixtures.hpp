#pragma once

// Shared test fixtures: small dataset builders, the bundled corpus, and a
// seeded generator of random small nominal datasets.

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tendmine/dataset.hpp"
#include "tendmine/io.hpp"

#ifndef TENDMINE_DATA_DIR
#error "TENDMINE_DATA_DIR must point at the data/ directory"
#endif

namespace tendmine::testing {

inline std::string data_path(const std::string& name) { return std::string(TENDMINE_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline const Dataset& bloggers() {
    static const Dataset d = parse_arff(read_file(data_path("bloggers.arff")));
    return d;
}

/// Rows of string tokens, "?" for missing; the last column is the class.
struct RawTable {
    std::vector<AttributeSpec> attributes;
    std::vector<std::vector<std::string>> rows;
    std::vector<double> weights;  // empty means all 1
};

inline Dataset to_dataset(const RawTable& raw) {
    DatasetSchema schema("test", raw.attributes, raw.attributes.size() - 1);
    std::vector<Instance> out;
    for (std::size_t r = 0; r < raw.rows.size(); ++r) {
        Instance inst;
        for (std::size_t a = 0; a < raw.rows[r].size(); ++a) {
            const auto& tok = raw.rows[r][a];
            inst.values.push_back(tok == "?" ? Cell{} : schema.attribute(a).index_of(tok));
        }
        if (!raw.weights.empty()) inst.weight = raw.weights[r];
        out.push_back(std::move(inst));
    }
    return Dataset(std::move(schema), std::move(out));
}

/// Dataset from rows; every column's value list is given explicitly.
inline Dataset make_dataset(std::vector<AttributeSpec> attrs, std::vector<std::vector<std::string>> rows) {
    return to_dataset({std::move(attrs), std::move(rows), {}});
}

struct RandomTableOptions {
    std::size_t max_instances = 12;
    std::size_t max_attributes = 3;
    std::size_t max_values = 3;
    std::size_t max_classes = 3;
    double missing_rate = 0.0;
    bool fractional_weights = false;
};

inline RawTable random_table(std::mt19937_64& rng, const RandomTableOptions& opt = {}) {
    auto pick = [&](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    RawTable t;
    const std::size_t num_attrs = pick(1, opt.max_attributes);
    for (std::size_t a = 0; a < num_attrs; ++a) {
        AttributeSpec spec{"a" + std::to_string(a), {}};
        const std::size_t m = pick(1, opt.max_values);
        for (std::size_t v = 0; v < m; ++v) spec.values.push_back("v" + std::to_string(v));
        t.attributes.push_back(std::move(spec));
    }
    AttributeSpec cls{"class", {}};
    const std::size_t k = pick(2, opt.max_classes);
    for (std::size_t c = 0; c < k; ++c) cls.values.push_back("c" + std::to_string(c));
    t.attributes.push_back(std::move(cls));

    const std::size_t n = pick(1, opt.max_instances);
    std::bernoulli_distribution missing(opt.missing_rate);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::string> row;
        for (std::size_t a = 0; a < t.attributes.size(); ++a) {
            const bool is_class = a + 1 == t.attributes.size();
            if (!is_class && opt.missing_rate > 0.0 && missing(rng)) {
                row.push_back("?");
                continue;
            }
            row.push_back(t.attributes[a].values[pick(0, t.attributes[a].size() - 1)]);
        }
        t.rows.push_back(std::move(row));
        if (opt.fractional_weights) t.weights.push_back(0.25 * static_cast<double>(pick(1, 8)));
    }
    return t;
}

}  // namespace tendmine::testing
