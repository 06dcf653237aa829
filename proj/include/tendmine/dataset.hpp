#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace tendmine {

/// Base for every failure caused by bad input data (as opposed to misuse of the API).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text. Carries the 1-based line number of the offending line.
class ParseError : public DataError {
public:
    ParseError(std::size_t line, const std::string& message)
        : DataError("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that uses something outside the supported subset (numeric attributes etc).
class UnsupportedFeatureError : public ParseError {
public:
    using ParseError::ParseError;
};

inline std::string fold_case(std::string_view token) {
    std::string out(token);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

/// A nominal attribute: a name plus its ordered, case-folded value tokens.
struct AttributeSpec {
    std::string name;
    std::vector<std::string> values;

    std::size_t size() const noexcept { return values.size(); }

    /// Position of `token` (compared after case folding), if admissible.
    std::optional<std::size_t> index_of(std::string_view token) const {
        const std::string folded = fold_case(token);
        auto it = std::find(values.begin(), values.end(), folded);
        if (it == values.end()) return std::nullopt;
        return static_cast<std::size_t>(it - values.begin());
    }

    bool operator==(const AttributeSpec&) const = default;
};

class DatasetSchema {
public:
    DatasetSchema() = default;

    DatasetSchema(std::string relation, std::vector<AttributeSpec> attributes, std::size_t class_index)
        : relation_(std::move(relation)), attributes_(std::move(attributes)), class_index_(class_index) {
        if (attributes_.empty()) throw std::invalid_argument("schema has no attributes");
        if (class_index_ >= attributes_.size())
            throw std::invalid_argument("class index " + std::to_string(class_index_) + " out of range");
        std::unordered_set<std::string> names;
        for (auto& attr : attributes_) {
            if (!names.insert(attr.name).second)
                throw std::invalid_argument("duplicate attribute name '" + attr.name + "'");
            if (attr.values.empty())
                throw std::invalid_argument("attribute '" + attr.name + "' has no values");
            std::unordered_set<std::string> seen;
            for (auto& v : attr.values) {
                if (v != fold_case(v))
                    throw std::invalid_argument("value '" + v + "' of '" + attr.name + "' is not case-folded");
                if (!seen.insert(v).second)
                    throw std::invalid_argument("duplicate value '" + v + "' in '" + attr.name + "'");
            }
        }
    }

    const std::string& relation() const noexcept { return relation_; }
    const std::vector<AttributeSpec>& attributes() const noexcept { return attributes_; }
    const AttributeSpec& attribute(std::size_t i) const { return attributes_.at(i); }
    std::size_t size() const noexcept { return attributes_.size(); }

    std::size_t class_index() const noexcept { return class_index_; }
    const AttributeSpec& class_attribute() const { return attributes_.at(class_index_); }
    std::size_t num_classes() const { return class_attribute().size(); }

    std::optional<std::size_t> index_of(std::string_view name) const {
        for (std::size_t i = 0; i < attributes_.size(); ++i)
            if (attributes_[i].name == name) return i;
        return std::nullopt;
    }

    /// Non-class attribute indices in schema order.
    std::vector<std::size_t> predictors() const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < attributes_.size(); ++i)
            if (i != class_index_) out.push_back(i);
        return out;
    }

    DatasetSchema with_class(std::size_t class_index) const {
        return DatasetSchema(relation_, attributes_, class_index);
    }

    /// Throws std::invalid_argument unless `a` names a non-class attribute.
    void require_predictor(std::size_t a) const {
        if (a >= attributes_.size())
            throw std::invalid_argument("attribute index " + std::to_string(a) + " not in schema");
        if (a == class_index_)
            throw std::invalid_argument("attribute '" + attributes_[a].name + "' is the class attribute");
    }

    bool operator==(const DatasetSchema&) const = default;

private:
    std::string relation_;
    std::vector<AttributeSpec> attributes_;
    std::size_t class_index_ = 0;
};

/// Index into an attribute's value list; disengaged means MISSING.
using Cell = std::optional<std::size_t>;

struct Instance {
    std::vector<Cell> values;
    double weight = 1.0;

    bool operator==(const Instance&) const = default;
};

/// Immutable table of instances conforming to one schema.
class Dataset {
public:
    Dataset() = default;

    Dataset(DatasetSchema schema, std::vector<Instance> instances)
        : schema_(std::move(schema)), instances_(std::move(instances)) {
        for (std::size_t r = 0; r < instances_.size(); ++r) {
            const auto& inst = instances_[r];
            if (inst.values.size() != schema_.size())
                throw std::invalid_argument("instance " + std::to_string(r) + " has " +
                                            std::to_string(inst.values.size()) + " values, schema has " +
                                            std::to_string(schema_.size()));
            if (!(inst.weight >= 0.0) || !std::isfinite(inst.weight))
                throw std::invalid_argument("instance " + std::to_string(r) + " has invalid weight");
            for (std::size_t a = 0; a < inst.values.size(); ++a)
                if (inst.values[a] && *inst.values[a] >= schema_.attribute(a).size())
                    throw std::invalid_argument("instance " + std::to_string(r) + " value out of range for '" +
                                                schema_.attribute(a).name + "'");
        }
    }

    const DatasetSchema& schema() const noexcept { return schema_; }
    std::span<const Instance> instances() const noexcept { return instances_; }
    const Instance& operator[](std::size_t i) const { return instances_.at(i); }
    std::size_t size() const noexcept { return instances_.size(); }
    bool empty() const noexcept { return instances_.empty(); }

    double total_weight() const {
        double w = 0.0;
        for (auto& inst : instances_) w += inst.weight;
        return w;
    }

    Cell class_of(const Instance& inst) const { return inst.values[schema_.class_index()]; }

    /// Same schema, different rows.
    Dataset with_instances(std::vector<Instance> instances) const { return Dataset(schema_, std::move(instances)); }

    /// Instances whose class cell is present.
    Dataset labeled() const {
        std::vector<Instance> kept;
        for (auto& inst : instances_)
            if (class_of(inst)) kept.push_back(inst);
        return with_instances(std::move(kept));
    }

    bool operator==(const Dataset&) const = default;

private:
    DatasetSchema schema_;
    std::vector<Instance> instances_;
};

/// Summed weights per class, aligned with the class attribute's value list.
struct ClassDistribution {
    std::vector<double> weights;

    ClassDistribution() = default;
    explicit ClassDistribution(std::size_t num_classes) : weights(num_classes, 0.0) {}
    explicit ClassDistribution(std::vector<double> w) : weights(std::move(w)) {}

    std::size_t size() const noexcept { return weights.size(); }
    double operator[](std::size_t c) const { return weights.at(c); }

    double total() const {
        double t = 0.0;
        for (double w : weights) t += w;
        return t;
    }

    double proportion(std::size_t c) const {
        const double t = total();
        return t > 0.0 ? weights.at(c) / t : 0.0;
    }

    /// Class with maximal weight; ties go to the lowest index.
    std::size_t majority() const {
        std::size_t best = 0;
        for (std::size_t c = 1; c < weights.size(); ++c)
            if (weights[c] > weights[best]) best = c;
        return best;
    }

    /// Weight not belonging to the majority class.
    double errors() const { return weights.empty() ? 0.0 : total() - weights[majority()]; }

    /// At most one class carries positive weight.
    bool pure() const {
        return std::count_if(weights.begin(), weights.end(), [](double w) { return w > 0.0; }) <= 1;
    }

    void add(std::size_t c, double w) { weights.at(c) += w; }

    ClassDistribution& operator+=(const ClassDistribution& other) {
        if (weights.size() != other.weights.size()) throw std::invalid_argument("class count mismatch");
        for (std::size_t c = 0; c < weights.size(); ++c) weights[c] += other.weights[c];
        return *this;
    }

    bool operator==(const ClassDistribution&) const = default;
};

/// Per-class summed instance weight. Instances with a missing class are skipped.
inline ClassDistribution class_distribution(const Dataset& d) {
    ClassDistribution dist(d.schema().num_classes());
    for (auto& inst : d.instances())
        if (auto c = d.class_of(inst)) dist.add(*c, inst.weight);
    return dist;
}

namespace detail {

/// Fraction of the known weight that falls on each value of `a`. Uniform when nothing is known.
inline std::vector<double> branch_proportions(const Dataset& d, std::size_t a) {
    const std::size_t m = d.schema().attribute(a).size();
    std::vector<double> w(m, 0.0);
    double known = 0.0;
    for (auto& inst : d.instances())
        if (auto v = inst.values[a]) {
            w[*v] += inst.weight;
            known += inst.weight;
        }
    for (auto& x : w) x = known > 0.0 ? x / known : 1.0 / static_cast<double>(m);
    return w;
}

}  // namespace detail

/// One subset per value of `a`. Instances missing `a` go to every subset, with
/// their weight scaled by that subset's share of the known weight.
inline std::vector<Dataset> partition_by_attribute(const Dataset& d, std::size_t a) {
    d.schema().require_predictor(a);
    const std::size_t m = d.schema().attribute(a).size();
    const auto share = detail::branch_proportions(d, a);
    std::vector<std::vector<Instance>> parts(m);
    for (auto& inst : d.instances()) {
        if (auto v = inst.values[a]) {
            parts[*v].push_back(inst);
            continue;
        }
        for (std::size_t b = 0; b < m; ++b) {
            if (share[b] <= 0.0) continue;
            Instance routed = inst;
            routed.weight = inst.weight * share[b];
            parts[b].push_back(std::move(routed));
        }
    }
    std::vector<Dataset> out;
    out.reserve(m);
    for (auto& p : parts) out.push_back(d.with_instances(std::move(p)));
    return out;
}

/// Weights of (attribute value x class). Rows follow the attribute's value order.
struct Crosstab {
    std::size_t attribute = 0;
    std::vector<std::vector<double>> cells;

    double row_total(std::size_t v) const {
        double t = 0.0;
        for (double w : cells.at(v)) t += w;
        return t;
    }

    double column_total(std::size_t c) const {
        double t = 0.0;
        for (auto& row : cells) t += row.at(c);
        return t;
    }

    double total() const {
        double t = 0.0;
        for (std::size_t v = 0; v < cells.size(); ++v) t += row_total(v);
        return t;
    }
};

/// Missing attribute values are routed fractionally, as in partition_by_attribute,
/// so row totals match the partition's subset weights for labeled data.
inline Crosstab attribute_class_crosstab(const Dataset& d, std::size_t a) {
    d.schema().require_predictor(a);
    Crosstab table;
    table.attribute = a;
    const auto parts = partition_by_attribute(d, a);
    for (auto& part : parts) table.cells.push_back(class_distribution(part).weights);
    return table;
}

}  // namespace tendmine
