#pragma once

#include <cmath>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "evaluation.hpp"

namespace tendmine {

enum class ReportFormat { text, json };

namespace detail {

inline std::string fixed4(double x) {
    // Avoid printing "-0.0000".
    if (std::abs(x) < 5e-5) x = 0.0;
    return fmt::format("{:.4f}", x);
}

inline std::string count_text(double x) {
    if (std::abs(x - std::round(x)) < 1e-9) return fmt::format("{}", static_cast<long long>(std::llround(x)));
    return fixed4(x);
}

inline double round4(double x) {
    const double r = std::round(x * 1e4) / 1e4;
    return r == 0.0 ? 0.0 : r;
}

inline std::string cell(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

inline std::string render_text(const EvaluationReport& r) {
    std::string out = "=== Detailed Accuracy By Class ===\n\n";
    const std::size_t w = 11;
    out += fmt::format("{:<12}", "Class");
    for (const char* h : {"TP Rate", "FP Rate", "Precision", "Recall", "F-Measure", "ROC Area"}) out += cell(h, w);
    out += '\n';
    for (std::size_t c = 0; c < r.per_class.size(); ++c) {
        const auto& row = r.per_class[c];
        out += fmt::format("{:<12}", r.class_labels.at(c));
        for (double v : {row.tp_rate, row.fp_rate, row.precision, row.recall, row.f_measure}) out += cell(fixed4(v), w);
        out += cell(row.roc_area ? fixed4(*row.roc_area) : std::string("-"), w);
        out += '\n';
    }

    const double n = r.total_instances;
    auto per_instance = [&](double bits) { return fixed4(n > 0.0 ? bits / n : 0.0); };
    out += "\n=== Summary ===\n\n";
    out += "Correctly Classified instances  " + count_text(r.correct_count) + "  " + fixed4(r.correct_percent) + " %\n";
    out += "Incorrectly Classified Instances  " + count_text(r.incorrect_count) + "  " +
           fixed4(100.0 - r.correct_percent) + " %\n";
    out += "Kappa statistic  " + fixed4(r.kappa) + "\n";
    out += "K&B Relative Info Score  " + fixed4(r.kb_relative_percent) + " %\n";
    out += "K&B Information Score  " + fixed4(r.kb_total_bits) + " bits  " + fixed4(r.kb_bits_per_instance) +
           " bits/instance\n";
    out += "Class complexity order 0  " + fixed4(r.class_complexity_order0_bits) + " bits  " +
           per_instance(r.class_complexity_order0_bits) + " bits/instance\n";
    out += "Class complexity Scheme  " + fixed4(r.class_complexity_scheme_bits) + " bits  " +
           per_instance(r.class_complexity_scheme_bits) + " bits/instance\n";
    out += "Complexity improvement (SF)  " + fixed4(r.sf_improvement_bits) + " bits  " +
           per_instance(r.sf_improvement_bits) + " bits/instance\n";
    out += "Mean absolute error  " + fixed4(r.mae) + "\n";
    out += "Root mean squared error  " + fixed4(r.rmse) + "\n";
    out += "Relative absolute error  " + fixed4(r.rae_percent) + " %\n";
    out += "Root relative squared error  " + fixed4(r.rrse_percent) + " %\n";
    out += "Total Number of Instances  " + count_text(r.total_instances) + "\n";

    out += "\n=== Confusion Matrix ===\n\n";
    for (std::size_t c = 0; c < r.class_labels.size(); ++c) out += cell(r.class_labels[c], w);
    out += "   <-- classified as\n";
    for (std::size_t a = 0; a < r.confusion.size(); ++a) {
        for (std::size_t p = 0; p < r.confusion.size(); ++p) out += cell(count_text(r.confusion(a, p)), w);
        out += "   | " + r.class_labels.at(a) + "\n";
    }
    return out;
}

inline nlohmann::ordered_json to_json(const EvaluationReport& r) {
    nlohmann::ordered_json j;
    j["correct_count"] = round4(r.correct_count);
    j["incorrect_count"] = round4(r.incorrect_count);
    j["correct_percent"] = round4(r.correct_percent);
    j["kappa"] = round4(r.kappa);
    j["kb_relative_percent"] = round4(r.kb_relative_percent);
    j["kb_total_bits"] = round4(r.kb_total_bits);
    j["kb_bits_per_instance"] = round4(r.kb_bits_per_instance);
    j["class_complexity_order0_bits"] = round4(r.class_complexity_order0_bits);
    j["class_complexity_scheme_bits"] = round4(r.class_complexity_scheme_bits);
    j["sf_improvement_bits"] = round4(r.sf_improvement_bits);
    j["mae"] = round4(r.mae);
    j["rmse"] = round4(r.rmse);
    j["rae_percent"] = round4(r.rae_percent);
    j["rrse_percent"] = round4(r.rrse_percent);
    j["total_instances"] = round4(r.total_instances);
    j["class_labels"] = r.class_labels;
    auto rows = nlohmann::ordered_json::array();
    for (auto& row : r.per_class) {
        nlohmann::ordered_json o;
        o["tp_rate"] = round4(row.tp_rate);
        o["fp_rate"] = round4(row.fp_rate);
        o["precision"] = round4(row.precision);
        o["recall"] = round4(row.recall);
        o["f_measure"] = round4(row.f_measure);
        o["roc_area"] = row.roc_area ? nlohmann::ordered_json(round4(*row.roc_area)) : nlohmann::ordered_json(nullptr);
        rows.push_back(std::move(o));
    }
    j["per_class"] = std::move(rows);
    auto matrix = nlohmann::ordered_json::array();
    for (auto& row : r.confusion.counts()) {
        auto jr = nlohmann::ordered_json::array();
        for (double x : row) jr.push_back(round4(x));
        matrix.push_back(std::move(jr));
    }
    j["confusion"] = std::move(matrix);
    return j;
}

}  // namespace detail

/// Text mirrors the classic per-class table followed by the summary block;
/// JSON is one object with a key per report field. Numbers carry 4 decimals.
inline std::string render_report(const EvaluationReport& r, ReportFormat format) {
    if (format == ReportFormat::json) return detail::to_json(r).dump(2) + "\n";
    return detail::render_text(r);
}

inline EvaluationReport report_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    EvaluationReport r;
    r.correct_count = j.at("correct_count");
    r.incorrect_count = j.at("incorrect_count");
    r.correct_percent = j.at("correct_percent");
    r.kappa = j.at("kappa");
    r.kb_relative_percent = j.at("kb_relative_percent");
    r.kb_total_bits = j.at("kb_total_bits");
    r.kb_bits_per_instance = j.at("kb_bits_per_instance");
    r.class_complexity_order0_bits = j.at("class_complexity_order0_bits");
    r.class_complexity_scheme_bits = j.at("class_complexity_scheme_bits");
    r.sf_improvement_bits = j.at("sf_improvement_bits");
    r.mae = j.at("mae");
    r.rmse = j.at("rmse");
    r.rae_percent = j.at("rae_percent");
    r.rrse_percent = j.at("rrse_percent");
    r.total_instances = j.at("total_instances");
    r.class_labels = j.at("class_labels").get<std::vector<std::string>>();
    for (auto& o : j.at("per_class")) {
        ClassMetricsRow row;
        row.tp_rate = o.at("tp_rate");
        row.fp_rate = o.at("fp_rate");
        row.precision = o.at("precision");
        row.recall = o.at("recall");
        row.f_measure = o.at("f_measure");
        if (!o.at("roc_area").is_null()) row.roc_area = o.at("roc_area").get<double>();
        r.per_class.push_back(row);
    }
    r.confusion = ConfusionMatrix(j.at("confusion").get<std::vector<std::vector<double>>>());
    return r;
}

}  // namespace tendmine
