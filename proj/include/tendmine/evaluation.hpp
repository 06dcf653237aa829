#pragma once

// Classifier evaluation: confusion-matrix rates, kappa, ROC area, probability
// error measures, Kononenko-Bratko information score and class-complexity
// (SF) scores, under train/test or stratified cross-validation protocols.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "folds.hpp"
#include "induction.hpp"
#include "infotheory.hpp"
#include "tree.hpp"

namespace tendmine {

/// Rows are actual classes, columns predicted classes.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t k) : counts_(k, std::vector<double>(k, 0.0)) {}
    explicit ConfusionMatrix(std::vector<std::vector<double>> counts) : counts_(std::move(counts)) {
        for (auto& row : counts_) {
            if (row.size() != counts_.size()) throw std::invalid_argument("confusion matrix must be square");
            for (double x : row)
                if (!(x >= 0.0)) throw std::invalid_argument("confusion matrix cells must be non-negative");
        }
    }

    std::size_t size() const noexcept { return counts_.size(); }
    double operator()(std::size_t actual, std::size_t predicted) const { return counts_.at(actual).at(predicted); }
    const std::vector<std::vector<double>>& counts() const noexcept { return counts_; }

    void add(std::size_t actual, std::size_t predicted, double weight = 1.0) {
        counts_.at(actual).at(predicted) += weight;
    }

    double total() const {
        double t = 0.0;
        for (auto& row : counts_)
            for (double x : row) t += x;
        return t;
    }
    double trace() const {
        double t = 0.0;
        for (std::size_t c = 0; c < counts_.size(); ++c) t += counts_[c][c];
        return t;
    }
    double actual_total(std::size_t c) const {
        double t = 0.0;
        for (double x : counts_.at(c)) t += x;
        return t;
    }
    double predicted_total(std::size_t c) const {
        double t = 0.0;
        for (auto& row : counts_) t += row.at(c);
        return t;
    }

    bool operator==(const ConfusionMatrix&) const = default;

private:
    std::vector<std::vector<double>> counts_;
};

struct ClassMetricsRow {
    double tp_rate = 0.0;
    double fp_rate = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    std::optional<double> roc_area;
};

/// One scored item for a one-vs-rest ROC: the predicted probability of the
/// class of interest and whether the instance actually belongs to it.
struct ScoredItem {
    double score = 0.0;
    bool positive = false;
    double weight = 1.0;
};

/// Probability that a random positive outranks a random negative, ties
/// counting one half (weighted Mann-Whitney U with midranks). Absent unless
/// both positive and negative weight are present.
inline std::optional<double> roc_area(std::span<const ScoredItem> items) {
    std::vector<ScoredItem> sorted(items.begin(), items.end());
    std::sort(sorted.begin(), sorted.end(), [](const ScoredItem& a, const ScoredItem& b) { return a.score < b.score; });
    double pos = 0.0, neg = 0.0, u = 0.0;
    double neg_below = 0.0;  // negative weight strictly below the current tie group
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        double group_pos = 0.0, group_neg = 0.0;
        while (j < sorted.size() && sorted[j].score == sorted[i].score) {
            (sorted[j].positive ? group_pos : group_neg) += sorted[j].weight;
            ++j;
        }
        u += group_pos * (neg_below + 0.5 * group_neg);
        neg_below += group_neg;
        pos += group_pos;
        neg += group_neg;
        i = j;
    }
    if (pos <= 0.0 || neg <= 0.0) return std::nullopt;
    return u / (pos * neg);
}

/// Rates for class `c` treated as positive. `scores`, when given, feed the ROC area.
inline ClassMetricsRow per_class_metrics(const ConfusionMatrix& m, std::size_t c,
                                         std::optional<std::span<const ScoredItem>> scores = std::nullopt) {
    if (c >= m.size()) throw std::out_of_range("class index " + std::to_string(c) + " out of range");
    ClassMetricsRow row;
    const double tp = m(c, c);
    const double actual = m.actual_total(c);
    const double predicted = m.predicted_total(c);
    const double negatives = m.total() - actual;
    const double fp = predicted - tp;
    row.tp_rate = actual > 0.0 ? tp / actual : 0.0;
    row.fp_rate = negatives > 0.0 ? fp / negatives : 0.0;
    row.precision = predicted > 0.0 ? tp / predicted : 0.0;
    row.recall = row.tp_rate;
    row.f_measure = row.precision + row.recall > 0.0 ? 2.0 * row.precision * row.recall / (row.precision + row.recall) : 0.0;
    if (scores) row.roc_area = roc_area(*scores);
    return row;
}

/// Cohen's kappa; 0 when chance agreement is already 1.
inline double kappa(const ConfusionMatrix& m) {
    const double total = m.total();
    if (m.size() == 0 || total <= 0.0) throw std::invalid_argument("kappa of an empty confusion matrix");
    const double observed = m.trace() / total;
    double chance = 0.0;
    for (std::size_t c = 0; c < m.size(); ++c) chance += m.actual_total(c) * m.predicted_total(c);
    chance /= total * total;
    if (chance >= 1.0) return 0.0;
    return (observed - chance) / (1.0 - chance);
}

/// Class priors from training counts with add-one smoothing.
class PriorModel {
public:
    explicit PriorModel(std::vector<double> probabilities) : p_(std::move(probabilities)) {
        double sum = 0.0;
        for (double x : p_) {
            if (!(x > 0.0)) throw std::invalid_argument("prior probabilities must be positive");
            sum += x;
        }
        if (p_.empty() || std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("prior probabilities must sum to 1");
    }

    static PriorModel from_training(const Dataset& training) {
        auto dist = class_distribution(training);
        const double denom = dist.total() + static_cast<double>(dist.size());
        std::vector<double> p;
        for (double w : dist.weights) p.push_back((w + 1.0) / denom);
        return PriorModel(std::move(p));
    }

    std::size_t size() const noexcept { return p_.size(); }
    double operator[](std::size_t c) const { return p_.at(c); }
    std::span<const double> probabilities() const noexcept { return p_; }
    double entropy() const { return tendmine::entropy(p_); }

private:
    std::vector<double> p_;
};

struct ErrorMetrics {
    double mae = 0.0;
    double rmse = 0.0;
    double rae_percent = 0.0;
    double rrse_percent = 0.0;
};

struct KbInformation {
    double relative_percent = 0.0;
    double total_bits = 0.0;
    double bits_per_instance = 0.0;
};

struct ComplexityScores {
    double order0_bits = 0.0;
    double scheme_bits = 0.0;
    double improvement_bits = 0.0;
};

struct EvaluationReport {
    std::vector<std::string> class_labels;
    double correct_count = 0.0;
    double incorrect_count = 0.0;
    double correct_percent = 0.0;
    double kappa = 0.0;
    double kb_relative_percent = 0.0;
    double kb_total_bits = 0.0;
    double kb_bits_per_instance = 0.0;
    double class_complexity_order0_bits = 0.0;
    double class_complexity_scheme_bits = 0.0;
    double sf_improvement_bits = 0.0;
    double mae = 0.0;
    double rmse = 0.0;
    double rae_percent = 0.0;
    double rrse_percent = 0.0;
    double total_instances = 0.0;
    std::vector<ClassMetricsRow> per_class;
    ConfusionMatrix confusion;
};

inline constexpr double kProbabilityFloor = 1e-45;

/// Information score of one prediction: log2(q) - log2(p) when the predicted
/// probability q of the actual class is at least its prior p, otherwise
/// -(log2(1-q) - log2(1-p)).
inline double kb_score(double predicted, double prior) {
    const double s = predicted >= prior ? std::log2(predicted) - std::log2(prior)
                                        : -(std::log2(1.0 - predicted) - std::log2(1.0 - prior));
    if (!std::isfinite(s))
        throw std::domain_error("information score needs probabilities strictly inside (0, 1)");
    return s;
}

/// Running sums behind every probabilistic metric. Each prediction carries
/// the prior it is judged against, so cross-validation folds can mix priors.
class MetricAccumulator {
public:
    explicit MetricAccumulator(std::size_t num_classes)
        : k_(num_classes), confusion_(num_classes), scores_(num_classes) {}

    void add(const Prediction& pred, std::size_t actual, const PriorModel& prior, double weight = 1.0) {
        if (pred.probabilities.size() != k_ || prior.size() != k_ || actual >= k_)
            throw std::invalid_argument("prediction, prior and class count disagree");
        confusion_.add(actual, pred.label, weight);
        for (std::size_t c = 0; c < k_; ++c) {
            const double y = c == actual ? 1.0 : 0.0;
            const double p = pred.probabilities[c];
            abs_err_ += weight * std::abs(p - y);
            sq_err_ += weight * (p - y) * (p - y);
            prior_abs_err_ += weight * std::abs(prior[c] - y);
            prior_sq_err_ += weight * (prior[c] - y) * (prior[c] - y);
            scores_[c].push_back({p, c == actual, weight});
        }
        const double q = pred.probabilities[actual];
        const double p = prior[actual];
        const double score = kb_score(q, p);
        kb_bits_ += weight * score;
        const double h = prior.entropy();
        if (h > 0.0) kb_relative_ += 100.0 * weight * score / h;
        order0_ += -weight * std::log2(p);
        scheme_ += -weight * std::log2(std::max(q, kProbabilityFloor));
        weight_ += weight;
    }

    double weight() const noexcept { return weight_; }
    const ConfusionMatrix& confusion() const noexcept { return confusion_; }

    ErrorMetrics error_metrics() const {
        ErrorMetrics e;
        if (weight_ <= 0.0) return e;
        const double cells = weight_ * static_cast<double>(k_);
        e.mae = abs_err_ / cells;
        e.rmse = std::sqrt(sq_err_ / cells);
        const double prior_mae = prior_abs_err_ / cells;
        const double prior_rmse = std::sqrt(prior_sq_err_ / cells);
        e.rae_percent = prior_mae > 0.0 ? 100.0 * e.mae / prior_mae : 0.0;
        e.rrse_percent = prior_rmse > 0.0 ? 100.0 * e.rmse / prior_rmse : 0.0;
        return e;
    }

    KbInformation kb_information() const {
        return {kb_relative_, kb_bits_, weight_ > 0.0 ? kb_bits_ / weight_ : 0.0};
    }

    ComplexityScores complexity() const { return {order0_, scheme_, order0_ - scheme_}; }

    EvaluationReport report(std::vector<std::string> class_labels) const {
        if (weight_ <= 0.0) throw DataError("no instances were evaluated");
        EvaluationReport r;
        r.class_labels = std::move(class_labels);
        r.confusion = confusion_;
        r.total_instances = weight_;
        r.correct_count = confusion_.trace();
        r.incorrect_count = confusion_.total() - r.correct_count;
        r.correct_percent = 100.0 * r.correct_count / confusion_.total();
        r.kappa = tendmine::kappa(confusion_);
        const auto kb = kb_information();
        r.kb_relative_percent = kb.relative_percent;
        r.kb_total_bits = kb.total_bits;
        r.kb_bits_per_instance = kb.bits_per_instance;
        const auto cx = complexity();
        r.class_complexity_order0_bits = cx.order0_bits;
        r.class_complexity_scheme_bits = cx.scheme_bits;
        r.sf_improvement_bits = cx.improvement_bits;
        const auto err = error_metrics();
        r.mae = err.mae;
        r.rmse = err.rmse;
        r.rae_percent = err.rae_percent;
        r.rrse_percent = err.rrse_percent;
        for (std::size_t c = 0; c < k_; ++c)
            r.per_class.push_back(per_class_metrics(confusion_, c, std::span<const ScoredItem>(scores_[c])));
        return r;
    }

private:
    std::size_t k_;
    ConfusionMatrix confusion_;
    std::vector<std::vector<ScoredItem>> scores_;
    double abs_err_ = 0.0, sq_err_ = 0.0, prior_abs_err_ = 0.0, prior_sq_err_ = 0.0;
    double kb_bits_ = 0.0, kb_relative_ = 0.0, order0_ = 0.0, scheme_ = 0.0;
    double weight_ = 0.0;
};

namespace detail {

inline MetricAccumulator accumulate(std::span<const Prediction> predictions, std::span<const std::size_t> actuals,
                                    const PriorModel& prior) {
    if (predictions.size() != actuals.size()) throw std::invalid_argument("predictions and actuals differ in length");
    if (predictions.empty()) throw std::invalid_argument("no predictions to score");
    MetricAccumulator acc(prior.size());
    for (std::size_t i = 0; i < predictions.size(); ++i) acc.add(predictions[i], actuals[i], prior);
    return acc;
}

}  // namespace detail

/// Mean absolute and root mean squared error over instances and classes
/// (indicator-vector targets), and both relative to the prior predictor.
inline ErrorMetrics probabilistic_error_metrics(std::span<const Prediction> predictions,
                                                std::span<const std::size_t> actuals, const PriorModel& prior) {
    return detail::accumulate(predictions, actuals, prior).error_metrics();
}

inline KbInformation kb_information(std::span<const Prediction> predictions, std::span<const std::size_t> actuals,
                                    const PriorModel& prior) {
    return detail::accumulate(predictions, actuals, prior).kb_information();
}

inline ComplexityScores sf_complexity(std::span<const Prediction> predictions, std::span<const std::size_t> actuals,
                                      const PriorModel& prior) {
    return detail::accumulate(predictions, actuals, prior).complexity();
}

namespace detail {

inline void score_dataset(const DecisionTree& t, const Dataset& test, const PriorModel& prior, MetricAccumulator& acc) {
    for (auto& inst : test.instances()) {
        auto actual = test.class_of(inst);
        if (!actual) throw DataError("test instance without a class label");
        acc.add(classify(t, inst), *actual, prior, inst.weight);
    }
}

}  // namespace detail

inline EvaluationReport evaluate_model(const DecisionTree& t, const Dataset& test, const PriorModel& prior) {
    if (!(test.schema() == t.schema())) throw DataError("test data schema does not match the tree");
    if (test.empty()) throw DataError("empty test set");
    MetricAccumulator acc(t.schema().num_classes());
    detail::score_dataset(t, test, prior, acc);
    return acc.report(t.schema().class_attribute().values);
}

/// Stratified k-fold cross-validation. Each fold trains a tree and a prior on
/// the remaining folds; all held-out predictions pool into one report.
/// Folds are scored in order, so the result depends only on (d, k, seed, cfg).
inline EvaluationReport cross_validate(const Dataset& d, std::size_t k, std::uint64_t seed,
                                       const InductionConfig& cfg = {}) {
    const Dataset labeled = d.labeled();
    auto folds = stratified_folds(labeled, k, seed);
    MetricAccumulator acc(d.schema().num_classes());
    for (auto& fold : folds) {
        const auto tree = build_tree(fold.train, cfg);
        const auto prior = PriorModel::from_training(fold.train);
        detail::score_dataset(tree, fold.test, prior, acc);
    }
    return acc.report(d.schema().class_attribute().values);
}

}  // namespace tendmine
