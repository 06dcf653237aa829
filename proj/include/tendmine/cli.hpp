#pragma once

// Command-line front end: train | evaluate | cv | predict | stats | export.
//
// Exit codes: 0 success, 1 usage error, 2 data or parse error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dataset.hpp"
#include "evaluation.hpp"
#include "export.hpp"
#include "induction.hpp"
#include "io.hpp"
#include "report.hpp"
#include "tree_io.hpp"

namespace tendmine::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

/// Footer for subcommand help; the top-level help lists subcommands itself.
inline constexpr const char* kSubcommandList =
    "Subcommands:\n"
    "  train     induce a tree from a dataset and write a tree file\n"
    "  evaluate  score a tree file against a labeled dataset\n"
    "  cv        stratified k-fold cross-validation on a dataset\n"
    "  predict   label the rows of a dataset with a tree file\n"
    "  stats     attribute x class tables for every attribute\n"
    "  export    render a tree (or a tree induced from a dataset) as text or DOT\n";

/// Parsed invocation. Flag defaults equal the InductionConfig defaults.
struct CliInvocation {
    std::string subcommand;
    std::vector<std::string> inputs;
    std::string output;
    std::string format = "text";
    std::string criterion = "gainratio";
    bool no_prune = false;
    double confidence_factor = 0.25;
    std::size_t min_leaf = 2;
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::string class_name;

    InductionConfig config() const {
        InductionConfig cfg;
        cfg.criterion = criterion == "infogain" ? SplitCriterion::info_gain : SplitCriterion::gain_ratio;
        cfg.pruning = !no_prune;
        cfg.confidence_factor = confidence_factor;
        cfg.min_instances_per_leaf = min_leaf;
        return cfg;
    }
};

/// Input file that a data error refers to.
class InputError : public DataError {
public:
    using DataError::DataError;
};

namespace detail {

/// "-" reads stdin. Relative paths that do not exist are retried under $TENDMINE_DATA.
inline std::string read_input(const std::string& path, std::istream& in) {
    if (path == "-") return tendmine::detail::slurp(in);
    std::filesystem::path p(path);
    if (!std::filesystem::exists(p) && p.is_relative()) {
        if (const char* dir = std::getenv("TENDMINE_DATA")) {
            auto alt = std::filesystem::path(dir) / p;
            if (std::filesystem::exists(alt)) p = alt;
        }
    }
    std::ifstream f(p, std::ios::binary);
    if (!f) throw InputError(path + ": cannot open file");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

inline std::optional<std::string_view> class_flag(const CliInvocation& inv) {
    if (inv.class_name.empty()) return std::nullopt;
    return std::string_view(inv.class_name);
}

inline Dataset load_dataset(const CliInvocation& inv, const std::string& path, std::istream& in) {
    const auto text = read_input(path, in);
    try {
        return parse_dataset(text, guess_format(path, text), class_flag(inv));
    } catch (const DataError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline DecisionTree load_tree(const std::string& path, std::istream& in) {
    const auto text = read_input(path, in);
    try {
        return read_tree(text);
    } catch (const DataError& e) {
        throw InputError(path + ": " + e.what());
    }
}

inline void write_output(const CliInvocation& inv, const std::string& content, std::ostream& out) {
    if (inv.output.empty() || inv.output == "-") {
        out << content;
        return;
    }
    std::ofstream f(inv.output, std::ios::binary);
    if (!f) throw InputError(inv.output + ": cannot open for writing");
    f << content;
}

inline ReportFormat report_format(const CliInvocation& inv) {
    return inv.format == "json" ? ReportFormat::json : ReportFormat::text;
}

inline PriorModel prior_of(const DecisionTree& t) {
    const auto& root = t.root().distribution;
    const double denom = root.total() + static_cast<double>(root.size());
    std::vector<double> p;
    for (double w : root.weights) p.push_back((w + 1.0) / denom);
    return PriorModel(std::move(p));
}

inline std::string render_stats(const Dataset& d, bool as_json) {
    const auto& schema = d.schema();
    const auto& classes = schema.class_attribute().values;
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::string out;
    for (auto a : schema.predictors()) {
        const auto table = attribute_class_crosstab(d, a);
        const auto& attr = schema.attribute(a);
        if (as_json) {
            nlohmann::ordered_json t;
            for (std::size_t v = 0; v < attr.size(); ++v) {
                nlohmann::ordered_json row;
                for (std::size_t c = 0; c < classes.size(); ++c)
                    row[classes[c]] = tendmine::detail::round4(table.cells[v][c]);
                t[attr.values[v]] = std::move(row);
            }
            j[attr.name] = std::move(t);
            continue;
        }
        std::size_t width = attr.name.size();
        for (auto& v : attr.values) width = std::max(width, v.size());
        width += 2;
        out += fmt::format("=== {} x {} ===\n", attr.name, schema.class_attribute().name);
        out += fmt::format("{:<{}}", attr.name, width);
        for (auto& c : classes) out += fmt::format("{:>10}", c);
        out += fmt::format("{:>10}\n", "total");
        for (std::size_t v = 0; v < attr.size(); ++v) {
            out += fmt::format("{:<{}}", attr.values[v], width);
            for (std::size_t c = 0; c < classes.size(); ++c)
                out += fmt::format("{:>10}", tendmine::detail::count_text(table.cells[v][c]));
            out += fmt::format("{:>10}\n", tendmine::detail::count_text(table.row_total(v)));
        }
        out += fmt::format("{:<{}}", "total", width);
        for (std::size_t c = 0; c < classes.size(); ++c)
            out += fmt::format("{:>10}", tendmine::detail::count_text(table.column_total(c)));
        out += fmt::format("{:>10}\n\n", tendmine::detail::count_text(table.total()));
    }
    return as_json ? j.dump(2) + "\n" : out;
}

inline int dispatch(const CliInvocation& inv, std::istream& in, std::ostream& out) {
    const auto& sub = inv.subcommand;
    if (sub == "train") {
        const auto data = load_dataset(inv, inv.inputs.at(0), in);
        write_output(inv, write_tree(build_tree(data, inv.config())), out);
    } else if (sub == "evaluate") {
        const auto tree = load_tree(inv.inputs.at(0), in);
        const auto& path = inv.inputs.at(1);
        const auto text = read_input(path, in);
        Dataset data;
        try {
            data = parse_rows(text, guess_format(path, text), tree.schema());
        } catch (const DataError& e) {
            throw InputError(path + ": " + e.what());
        }
        write_output(inv, render_report(evaluate_model(tree, data, prior_of(tree)), report_format(inv)), out);
    } else if (sub == "cv") {
        const auto data = load_dataset(inv, inv.inputs.at(0), in);
        write_output(inv, render_report(cross_validate(data, inv.folds, inv.seed, inv.config()), report_format(inv)),
                     out);
    } else if (sub == "predict") {
        const auto tree = load_tree(inv.inputs.at(0), in);
        const auto& path = inv.inputs.at(1);
        const auto text = read_input(path, in);
        Dataset rows;
        try {
            rows = parse_rows(text, guess_format(path, text), tree.schema());
        } catch (const DataError& e) {
            throw InputError(path + ": " + e.what());
        }
        std::string result;
        const auto& labels = tree.schema().class_attribute().values;
        for (auto& inst : rows.instances()) {
            const auto p = classify(tree, inst);
            result += fmt::format("{} {:.4f}\n", labels[p.label], p.probabilities[p.label]);
        }
        write_output(inv, result, out);
    } else if (sub == "stats") {
        const auto data = load_dataset(inv, inv.inputs.at(0), in);
        write_output(inv, render_stats(data, inv.format == "json"), out);
    } else if (sub == "export") {
        const auto& path = inv.inputs.at(0);
        const auto text = read_input(path, in);
        std::optional<DecisionTree> tree;
        try {
            if (looks_like_tree(text))
                tree = read_tree(text);
            else
                tree = build_tree(parse_dataset(text, guess_format(path, text), class_flag(inv)), inv.config());
        } catch (const DataError& e) {
            throw InputError(path + ": " + e.what());
        }
        write_output(inv, inv.format == "dot" ? export_dot(*tree) : export_text(*tree), out);
    }
    return kExitOk;
}

}  // namespace detail

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CliInvocation inv;
    CLI::App app{"Decision-tree induction and evaluation for nominal data", "tendmine"};
    app.require_subcommand(1);

    auto add_config = [&](CLI::App* s) {
        s->add_option("--criterion", inv.criterion, "Split criterion")
            ->check(CLI::IsMember({"gainratio", "infogain"}))
            ->capture_default_str();
        s->add_flag("--no-prune", inv.no_prune, "Skip pessimistic pruning");
        s->add_option("--cf", inv.confidence_factor, "Pruning confidence factor in (0, 0.5]")
            ->check(CLI::Range(1e-12, 0.5))
            ->capture_default_str();
        s->add_option("--min-leaf", inv.min_leaf, "Minimum instances per leaf")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };
    auto add_class = [&](CLI::App* s) { s->add_option("--class", inv.class_name, "Class attribute name"); };
    auto add_format = [&](CLI::App* s, std::vector<std::string> allowed) {
        s->add_option("--format", inv.format, "Output format")->check(CLI::IsMember(allowed))->capture_default_str();
    };
    auto add_output = [&](CLI::App* s) { s->add_option("-o,--output", inv.output, "Output path (default stdout)"); };

    auto* train = app.add_subcommand("train", "Induce a tree and write a tendmine-tree file");
    train->add_option("data", inv.inputs, "Dataset (ARFF or CSV)")->required()->expected(1);
    add_config(train);
    add_class(train);
    add_output(train);

    auto* evaluate = app.add_subcommand("evaluate", "Score a tree on a labeled dataset");
    evaluate->add_option("files", inv.inputs, "Tree file, then dataset")->required()->expected(2);
    add_format(evaluate, {"text", "json"});
    add_output(evaluate);

    auto* cv = app.add_subcommand("cv", "Stratified k-fold cross-validation");
    cv->add_option("data", inv.inputs, "Dataset (ARFF or CSV)")->required()->expected(1);
    cv->add_option("--folds", inv.folds, "Number of folds")->check(CLI::Range(2, 1 << 30))->capture_default_str();
    cv->add_option("--seed", inv.seed, "Shuffle seed")->capture_default_str();
    add_config(cv);
    add_class(cv);
    add_format(cv, {"text", "json"});
    add_output(cv);

    auto* predict = app.add_subcommand("predict", "Label dataset rows with a tree");
    predict->add_option("files", inv.inputs, "Tree file, then rows (ARFF or CSV)")->required()->expected(2);
    add_output(predict);

    auto* stats = app.add_subcommand("stats", "Attribute x class tables");
    stats->add_option("data", inv.inputs, "Dataset (ARFF or CSV)")->required()->expected(1);
    add_class(stats);
    add_format(stats, {"text", "json"});
    add_output(stats);

    auto* exp = app.add_subcommand("export", "Render a tree as text or DOT");
    exp->add_option("input", inv.inputs, "Tree file, or a dataset to induce from")->required()->expected(1);
    add_config(exp);
    add_class(exp);
    add_format(exp, {"text", "dot"});
    add_output(exp);

    for (auto* s : app.get_subcommands({})) s->footer(kSubcommandList);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    for (auto* s : app.get_subcommands()) inv.subcommand = s->get_name();
    try {
        return detail::dispatch(inv, in, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

}  // namespace tendmine::cli
