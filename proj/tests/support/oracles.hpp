#pragma once

// Independent reference computations. These work from raw string rows or
// plain probability lists and never call into the library's metric code.

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "fixtures.hpp"

namespace tendmine::testing::oracle {

inline double entropy_of_counts(const std::map<std::string, double>& counts) {
    double total = 0.0;
    for (auto& [_, w] : counts) total += w;
    if (total == 0.0) return 0.0;
    double h = 0.0;
    for (auto& [_, w] : counts)
        if (w > 0.0) h -= (w / total) * std::log2(w / total);
    return h;
}

inline double row_weight(const RawTable& t, std::size_t r) { return t.weights.empty() ? 1.0 : t.weights[r]; }

/// Entropy(S) - sum_v |S_v|/|S| Entropy(S_v), tallied directly from the rows.
/// Complete data only.
inline double information_gain(const RawTable& t, std::size_t attr) {
    const std::size_t cls = t.attributes.size() - 1;
    std::map<std::string, double> all;
    std::map<std::string, std::map<std::string, double>> by_value;
    double total = 0.0;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double w = row_weight(t, r);
        all[t.rows[r][cls]] += w;
        by_value[t.rows[r][attr]][t.rows[r][cls]] += w;
        total += w;
    }
    double remainder = 0.0;
    for (auto& [v, counts] : by_value) {
        double sv = 0.0;
        for (auto& [_, w] : counts) sv += w;
        remainder += (sv / total) * entropy_of_counts(counts);
    }
    return entropy_of_counts(all) - remainder;
}

inline double split_info(const RawTable& t, std::size_t attr) {
    std::map<std::string, double> sizes;
    for (std::size_t r = 0; r < t.rows.size(); ++r) sizes[t.rows[r][attr]] += row_weight(t, r);
    return entropy_of_counts(sizes);
}

struct Scored {
    double score;
    bool positive;
    double weight;
};

/// Exhaustive positive x negative pair counting, ties worth one half.
inline double pairwise_auc(const std::vector<Scored>& items) {
    double num = 0.0, pos = 0.0, neg = 0.0;
    for (auto& a : items) (a.positive ? pos : neg) += a.weight;
    for (auto& a : items) {
        if (!a.positive) continue;
        for (auto& b : items) {
            if (b.positive) continue;
            const double credit = a.score > b.score ? 1.0 : (a.score == b.score ? 0.5 : 0.0);
            num += a.weight * b.weight * credit;
        }
    }
    return num / (pos * neg);
}

struct Metrics {
    std::vector<std::vector<double>> confusion;
    double accuracy = 0.0;
    double kappa = 0.0;
    double mae = 0.0, rmse = 0.0, rae = 0.0, rrse = 0.0;
    double kb_bits = 0.0, kb_relative = 0.0;
    double order0 = 0.0, scheme = 0.0;
    std::vector<double> tp_rate, fp_rate, precision, f_measure;
};

/// Recomputes every report quantity from per-instance probability vectors,
/// one shared prior, unit weights, argmax labels with lowest-index ties.
inline Metrics from_first_principles(const std::vector<std::vector<double>>& probs, const std::vector<std::size_t>& actual,
                                     const std::vector<double>& prior) {
    const std::size_t n = probs.size();
    const std::size_t k = prior.size();
    Metrics m;
    m.confusion.assign(k, std::vector<double>(k, 0.0));
    std::vector<std::size_t> predicted(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < k; ++c)
            if (probs[i][c] > probs[i][best]) best = c;
        predicted[i] = best;
        m.confusion[actual[i]][best] += 1.0;
    }

    double agree = 0.0;
    for (std::size_t i = 0; i < n; ++i) agree += predicted[i] == actual[i];
    m.accuracy = agree / static_cast<double>(n);
    double chance = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        double fa = 0.0, fp = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            fa += actual[i] == c;
            fp += predicted[i] == c;
        }
        chance += (fa / static_cast<double>(n)) * (fp / static_cast<double>(n));
    }
    m.kappa = chance >= 1.0 ? 0.0 : (m.accuracy - chance) / (1.0 - chance);

    for (std::size_t c = 0; c < k; ++c) {
        double tp = 0, fn = 0, fp = 0, tn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool is = actual[i] == c, said = predicted[i] == c;
            tp += is && said;
            fn += is && !said;
            fp += !is && said;
            tn += !is && !said;
        }
        const double tpr = tp + fn > 0 ? tp / (tp + fn) : 0.0;
        const double fpr = fp + tn > 0 ? fp / (fp + tn) : 0.0;
        const double prec = tp + fp > 0 ? tp / (tp + fp) : 0.0;
        m.tp_rate.push_back(tpr);
        m.fp_rate.push_back(fpr);
        m.precision.push_back(prec);
        m.f_measure.push_back(prec + tpr > 0 ? 2 * prec * tpr / (prec + tpr) : 0.0);
    }

    double abs_sum = 0, sq_sum = 0, pabs = 0, psq = 0;
    double prior_h = 0.0;
    for (double p : prior) prior_h -= p * std::log2(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            const double y = c == actual[i] ? 1.0 : 0.0;
            abs_sum += std::fabs(probs[i][c] - y);
            sq_sum += std::pow(probs[i][c] - y, 2);
            pabs += std::fabs(prior[c] - y);
            psq += std::pow(prior[c] - y, 2);
        }
        const double q = probs[i][actual[i]];
        const double p = prior[actual[i]];
        const double s = q >= p ? std::log2(q / p) : -std::log2((1 - q) / (1 - p));
        m.kb_bits += s;
        m.kb_relative += 100.0 * s / prior_h;
        m.order0 -= std::log2(p);
        m.scheme -= std::log2(std::max(q, 1e-45));
    }
    const double cells = static_cast<double>(n * k);
    m.mae = abs_sum / cells;
    m.rmse = std::sqrt(sq_sum / cells);
    m.rae = 100.0 * m.mae / (pabs / cells);
    m.rrse = 100.0 * m.rmse / std::sqrt(psq / cells);
    return m;
}

}  // namespace tendmine::testing::oracle
