#pragma once

// Entropy-based split criteria over nominal attributes. All quantities in bits.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "dataset.hpp"

namespace tendmine {

inline constexpr double kGainEpsilon = 1e-12;

/// Shannon entropy (base 2) of the normalized weights; 0 for an all-zero vector.
inline double entropy(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double w : weights) {
        if (w <= 0.0) continue;
        const double p = w / total;
        h -= p * std::log2(p);
    }
    return h;
}

inline double entropy(const ClassDistribution& dist) { return entropy(dist.weights); }

struct SplitEvaluation {
    std::size_t attribute = 0;
    double info_gain = 0.0;
    double split_info = 0.0;
    std::optional<double> gain_ratio;  // absent when split_info is ~0
    std::vector<double> branch_weights;  // known weight per attribute value
};

namespace detail {

struct SplitTally {
    std::vector<ClassDistribution> per_value;
    ClassDistribution known;
    double missing_weight = 0.0;  // labeled instances lacking the attribute
    double total_weight = 0.0;    // labeled instances
};

inline SplitTally tally(const Dataset& d, std::size_t a) {
    d.schema().require_predictor(a);
    const std::size_t k = d.schema().num_classes();
    SplitTally t{std::vector<ClassDistribution>(d.schema().attribute(a).size(), ClassDistribution(k)),
                 ClassDistribution(k), 0.0, 0.0};
    for (auto& inst : d.instances()) {
        auto c = d.class_of(inst);
        if (!c) continue;
        t.total_weight += inst.weight;
        if (auto v = inst.values[a]) {
            t.per_value[*v].add(*c, inst.weight);
            t.known.add(*c, inst.weight);
        } else {
            t.missing_weight += inst.weight;
        }
    }
    return t;
}

inline double clamp_tiny_negative(double x) { return (x < 0.0 && x > -kGainEpsilon) ? 0.0 : x; }

}  // namespace detail

/// Evaluates every criterion for splitting `d` on predictor `a` in one pass.
///
/// Gain is measured on the instances whose value of `a` is known and scaled by
/// the known fraction of the weight. Split information treats the missing
/// instances as one extra branch.
inline SplitEvaluation evaluate_split(const Dataset& d, std::size_t a) {
    const auto t = detail::tally(d, a);
    SplitEvaluation out;
    out.attribute = a;
    const double known = t.known.total();
    for (auto& dist : t.per_value) out.branch_weights.push_back(dist.total());
    if (t.total_weight <= 0.0 || known <= 0.0) return out;

    double remainder = 0.0;
    for (auto& dist : t.per_value) {
        const double w = dist.total();
        if (w > 0.0) remainder += (w / known) * entropy(dist);
    }
    out.info_gain = detail::clamp_tiny_negative((known / t.total_weight) * (entropy(t.known) - remainder));

    std::vector<double> sizes = out.branch_weights;
    if (t.missing_weight > 0.0) sizes.push_back(t.missing_weight);
    out.split_info = entropy(sizes);
    if (out.split_info > kGainEpsilon) out.gain_ratio = out.info_gain / out.split_info;
    return out;
}

inline double information_gain(const Dataset& d, std::size_t a) { return evaluate_split(d, a).info_gain; }

inline double split_info(const Dataset& d, std::size_t a) { return evaluate_split(d, a).split_info; }

inline std::optional<double> gain_ratio(const Dataset& d, std::size_t a) { return evaluate_split(d, a).gain_ratio; }

}  // namespace tendmine
