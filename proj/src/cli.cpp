#include "kam/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "kam/analysis.hpp"
#include "kam/dataset.hpp"
#include "kam/error.hpp"
#include "kam/kam_core.hpp"
#include "kam/report_io.hpp"

namespace kam::cli {

namespace {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

class Log {
public:
    explicit Log(std::ostream &err) : err_(err) {
        if (const char *env = std::getenv("KAM_LOG")) {
            const std::string v(env);
            if (v == "info") {
                level_ = LogLevel::Info;
            } else if (v == "debug") {
                level_ = LogLevel::Debug;
            }
        }
    }

    std::ostream *at(LogLevel l) {
        if (static_cast<int>(l) > static_cast<int>(level_)) {
            return nullptr;
        }
        err_ << "kam: ";
        if (l == LogLevel::Error) {
            err_ << "error: ";
        }
        return &err_;
    }

private:
    std::ostream &err_;
    LogLevel level_ = LogLevel::Error;
};

struct Args {
    std::string input_path;
    std::string epsilon_mode = "proportional";
    std::optional<double> epsilon;
    std::vector<double> epsilon_in;
    std::vector<double> epsilon_out;
    std::string weights = "unit";
    std::string weights_file;
    std::string delta_rule = "tenth";
    std::optional<double> delta;
    std::string format = "json";
    std::string output_path;
    std::string chart_path;
    double tech_tol = 1e-7;
    double score_tol = 1e-9;
    bool serial = false;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text) || !out.flush()) {
        throw ConfigError("cannot write '" + path + "'");
    }
}

// Weights file: dataset CSV layout with a single row; factors matched by name.
WeightPolicy load_weights(const std::string &path, const Dataset &d) {
    Dataset w;
    try {
        w = parse_dataset(read_file(path));
    } catch (const ParseError &e) {
        throw ConfigError("weights file '" + path + "': " + e.what());
    }
    if (w.size() != 1) {
        throw ConfigError("weights file '" + path + "' must hold exactly one row, found " + std::to_string(w.size()));
    }
    const auto pick = [&](const std::vector<std::string> &want, const std::vector<std::string> &have,
                          std::span<const double> row, const char *side) {
        std::vector<double> out;
        for (const auto &name : want) {
            const auto it = std::find(have.begin(), have.end(), name);
            if (it == have.end()) {
                throw ConfigError("weights file '" + path + "' has no weight for " + side + " '" + name + "'");
            }
            out.push_back(row[static_cast<std::size_t>(it - have.begin())]);
        }
        return out;
    };
    return WeightPolicy::explicit_weights(pick(d.input_names(), w.input_names(), w.input_row(0), "input"),
                                          pick(d.output_names(), w.output_names(), w.output_row(0), "output"));
}

KamConfig make_config(const Args &a, const Dataset &d) {
    KamConfig cfg;
    if (a.epsilon_mode == "proportional") {
        if (!a.epsilon_in.empty() || !a.epsilon_out.empty()) {
            throw ConfigError("--epsilon-in/--epsilon-out require --epsilon-mode absolute");
        }
        if (!a.epsilon) {
            throw ConfigError("--epsilon-mode proportional requires --epsilon");
        }
        cfg.epsilon = EpsilonPolicy::proportional(*a.epsilon);
    } else {
        if (a.epsilon) {
            throw ConfigError("--epsilon requires --epsilon-mode proportional");
        }
        if (a.epsilon_in.empty() && a.epsilon_out.empty()) {
            throw ConfigError("--epsilon-mode absolute requires --epsilon-in and/or --epsilon-out");
        }
        auto in = a.epsilon_in.empty() ? std::vector<double>(d.num_inputs(), 0.0) : a.epsilon_in;
        auto out = a.epsilon_out.empty() ? std::vector<double>(d.num_outputs(), 0.0) : a.epsilon_out;
        if (in.size() != d.num_inputs()) {
            throw ConfigError("--epsilon-in has " + std::to_string(in.size()) + " values, dataset has " +
                              std::to_string(d.num_inputs()) + " inputs");
        }
        if (out.size() != d.num_outputs()) {
            throw ConfigError("--epsilon-out has " + std::to_string(out.size()) + " values, dataset has " +
                              std::to_string(d.num_outputs()) + " outputs");
        }
        cfg.epsilon = EpsilonPolicy::absolute(std::move(in), std::move(out));
    }

    if (a.weights == "unit") {
        cfg.weights = WeightPolicy::unit();
    } else if (a.weights == "inverse") {
        cfg.weights = WeightPolicy::inverse_data();
    } else {
        if (a.weights_file.empty()) {
            throw ConfigError("--weights file requires --weights-file");
        }
        cfg.weights = load_weights(a.weights_file, d);
    }
    if (a.weights != "file" && !a.weights_file.empty()) {
        throw ConfigError("--weights-file requires --weights file");
    }

    if (a.delta_rule == "explicit") {
        if (!a.delta) {
            throw ConfigError("--delta-rule explicit requires --delta");
        }
        cfg.delta = DeltaRule::explicit_delta(*a.delta);
    } else {
        if (a.delta) {
            throw ConfigError("--delta requires --delta-rule explicit");
        }
        cfg.delta = a.delta_rule == "tenth" ? DeltaRule::tenth() : DeltaRule::per_factor();
    }
    cfg.tech_efficiency_tolerance = a.tech_tol;
    cfg.score_tolerance = a.score_tol;
    check_config(cfg);
    return cfg;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    Log log(err);
    Args a;

    CLI::App app{"Evaluate, classify and rank decision making units with the Kourosh and Arash Method (VRS)", "kam"};
    app.add_option("input", a.input_path, "Dataset CSV (header: dmu,I:<input>...,O:<output>...)")->required();
    app.add_option("--epsilon-mode", a.epsilon_mode, "How epsilon is given")
        ->check(CLI::IsMember({"absolute", "proportional"}))
        ->capture_default_str();
    app.add_option("--epsilon", a.epsilon, "Proportional epsilon: eps_j = epsilon * datum (0 runs 0-KAM)");
    app.add_option("--epsilon-in", a.epsilon_in, "Absolute input epsilons, comma separated")->delimiter(',');
    app.add_option("--epsilon-out", a.epsilon_out, "Absolute output epsilons, comma separated")->delimiter(',');
    app.add_option("--weights", a.weights, "Slack weights")
        ->check(CLI::IsMember({"unit", "inverse", "file"}))
        ->capture_default_str();
    app.add_option("--weights-file", a.weights_file, "Single-row CSV of weights (same header layout as the dataset)");
    app.add_option("--delta-rule", a.delta_rule, "Classification threshold rule")
        ->check(CLI::IsMember({"tenth", "per-factor", "explicit"}))
        ->capture_default_str();
    app.add_option("--delta", a.delta, "Threshold for --delta-rule explicit");
    app.add_option("--format", a.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("-o,--output", a.output_path, "Write the report here instead of standard output");
    app.add_option("--chart", a.chart_path, "Write an SVG bar chart of the sorted scores");
    app.add_option("--tech-tol", a.tech_tol, "0-KAM objective at or below which a DMU is technically efficient")
        ->capture_default_str();
    app.add_option("--score-tol", a.score_tol, "Score comparison tolerance")->capture_default_str();
    app.add_flag("--serial", a.serial, "Evaluate DMUs on one thread");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError &e) {
        if (auto *l = log.at(LogLevel::Error)) {
            *l << e.what() << '\n';
        }
        return kConfigError;
    }

    Dataset data;
    try {
        data = parse_dataset(read_file(a.input_path));
    } catch (const ParseError &e) {
        if (auto *l = log.at(LogLevel::Error)) {
            *l << a.input_path << ": " << e.what() << '\n';
        }
        return kValidationFailure;
    } catch (const ConfigError &e) {
        if (auto *l = log.at(LogLevel::Error)) {
            *l << e.what() << '\n';
        }
        return kConfigError;
    }

    if (const auto issues = validate_dataset(data); !issues.empty()) {
        if (auto *l = log.at(LogLevel::Error)) {
            *l << a.input_path << ": " << issues.size() << " validation issue(s)\n";
        }
        for (const auto &issue : issues) {
            err << "  " << to_string(issue.code) << ": " << issue.message << '\n';
        }
        return kValidationFailure;
    }
    if (auto *l = log.at(LogLevel::Info)) {
        *l << "loaded " << data.size() << " DMUs, " << data.num_inputs() << " inputs, " << data.num_outputs()
           << " outputs\n";
    }

    try {
        const KamConfig cfg = make_config(a, data);
        auto evaluations = evaluate_all(data, cfg, a.serial ? Execution::Serial : Execution::Parallel);
        if (auto *l = log.at(LogLevel::Debug)) {
            for (const auto &e : evaluations) {
                *l << data.dmu_names()[e.dmu_index] << ": 0-KAM objective " << format_number(e.zero_objective)
                   << ", eps-KAM objective " << format_number(e.eps_objective) << ", ka0 " << fixed6(e.ka0)
                   << ", ka_eps " << fixed6(e.ka_eps) << '\n';
            }
        }
        const Report report = build_report(data, cfg, std::move(evaluations));
        if (auto *l = log.at(LogLevel::Info)) {
            for (const auto &f : report.adequacy) {
                *l << "adequacy " << f.rule << " (" << f.statement << ", threshold " << format_number(f.threshold)
                   << "): " << (f.passed ? "pass" : "fail, advisory only") << '\n';
            }
        }

        const std::string text = a.format == "csv" ? report_to_csv(report) : report_json_text(report);
        if (a.output_path.empty()) {
            out << text;
        } else {
            write_file(a.output_path, text);
        }
        if (!a.chart_path.empty()) {
            write_file(a.chart_path, render_score_chart(report));
        }
    } catch (const ConfigError &e) {
        if (auto *l = log.at(LogLevel::Error)) {
            *l << e.what() << '\n';
        }
        return kConfigError;
    } catch (const Error &e) {
        if (auto *l = log.at(LogLevel::Error)) {
            *l << "internal: " << e.what() << '\n';
        }
        return kInternalError;
    }
    return kOk;
}

} // namespace kam::cli
