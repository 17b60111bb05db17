#include "kam/kam_core.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

#include "kam/error.hpp"

namespace kam {

EpsilonPolicy EpsilonPolicy::absolute(std::vector<double> in, std::vector<double> out) {
    return {Mode::Absolute, std::move(in), std::move(out), 0.0};
}

EpsilonPolicy EpsilonPolicy::proportional(double scale) {
    return {Mode::Proportional, {}, {}, scale};
}

WeightPolicy WeightPolicy::explicit_weights(std::vector<double> in, std::vector<double> out) {
    return {Mode::Explicit, std::move(in), std::move(out)};
}

DeltaRule DeltaRule::explicit_delta(double delta) {
    return {Mode::Explicit, delta};
}

std::string_view to_string(EpsilonPolicy::Mode m) noexcept {
    return m == EpsilonPolicy::Mode::Absolute ? "absolute" : "proportional";
}

std::string_view to_string(WeightPolicy::Mode m) noexcept {
    switch (m) {
        case WeightPolicy::Mode::Unit:        return "unit";
        case WeightPolicy::Mode::InverseData: return "inverse";
        case WeightPolicy::Mode::Explicit:    return "explicit";
    }
    return "unknown";
}

std::string_view to_string(DeltaRule::Mode m) noexcept {
    switch (m) {
        case DeltaRule::Mode::Tenth:     return "tenth";
        case DeltaRule::Mode::PerFactor: return "per-factor";
        case DeltaRule::Mode::Explicit:  return "explicit";
    }
    return "unknown";
}

namespace {

bool all_nonnegative(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a) && a >= 0.0; });
}

bool all_positive(const std::vector<double> &v) {
    return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a) && a > 0.0; });
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void check_index(const Dataset &d, std::size_t dmu) {
    if (dmu >= d.size()) {
        throw std::invalid_argument("DMU index " + std::to_string(dmu) + " out of range (n=" +
                                    std::to_string(d.size()) + ")");
    }
}

void check_lengths(const FactorVectors &v, const Dataset &d, const char *what) {
    if (v.in.size() != d.num_inputs() || v.out.size() != d.num_outputs()) {
        throw ConfigError(std::string(what) + " vectors have lengths (" + std::to_string(v.in.size()) + ", " +
                          std::to_string(v.out.size()) + "), dataset has m=" + std::to_string(d.num_inputs()) +
                          ", p=" + std::to_string(d.num_outputs()));
    }
}

} // namespace

void check_config(const KamConfig &cfg) {
    const auto &e = cfg.epsilon;
    if (e.mode == EpsilonPolicy::Mode::Absolute) {
        if (!all_nonnegative(e.eps_in) || !all_nonnegative(e.eps_out)) {
            throw ConfigError("absolute epsilon components must be finite and >= 0");
        }
    } else if (!(std::isfinite(e.scale) && e.scale >= 0.0)) {
        throw ConfigError("proportional epsilon must be finite and >= 0");
    }
    const auto &w = cfg.weights;
    if (w.mode == WeightPolicy::Mode::Explicit && (!all_positive(w.w_in) || !all_positive(w.w_out))) {
        throw ConfigError("explicit weights must be finite and > 0");
    }
    if (cfg.delta.mode == DeltaRule::Mode::Explicit && !(std::isfinite(cfg.delta.value) && cfg.delta.value >= 0.0)) {
        throw ConfigError("explicit delta must be finite and >= 0");
    }
    if (!(cfg.tech_efficiency_tolerance > 0.0) || !(cfg.score_tolerance > 0.0)) {
        throw ConfigError("tolerances must be > 0");
    }
}

FactorVectors resolve_epsilon(const EpsilonPolicy &policy, const Dataset &d, std::size_t dmu) {
    check_index(d, dmu);
    if (policy.mode == EpsilonPolicy::Mode::Absolute) {
        FactorVectors v{policy.eps_in, policy.eps_out};
        check_lengths(v, d, "epsilon");
        return v;
    }
    FactorVectors v;
    for (const double x : d.input_row(dmu)) {
        v.in.push_back(policy.scale * x);
    }
    for (const double y : d.output_row(dmu)) {
        v.out.push_back(policy.scale * y);
    }
    return v;
}

FactorVectors resolve_weights(const WeightPolicy &policy, const Dataset &d, std::size_t dmu) {
    check_index(d, dmu);
    switch (policy.mode) {
        case WeightPolicy::Mode::Unit:
            return {std::vector<double>(d.num_inputs(), 1.0), std::vector<double>(d.num_outputs(), 1.0)};
        case WeightPolicy::Mode::Explicit: {
            FactorVectors v{policy.w_in, policy.w_out};
            check_lengths(v, d, "weight");
            return v;
        }
        case WeightPolicy::Mode::InverseData:
            break;
    }
    FactorVectors v;
    const auto invert = [&](std::span<const double> row, const std::vector<std::string> &names, const char *side,
                            std::vector<double> &out) {
        for (std::size_t f = 0; f < row.size(); ++f) {
            if (!(row[f] > 0.0)) {
                throw ConfigError("inverse-data weights undefined: DMU '" + d.dmu_names()[dmu] + "' has zero " +
                                  side + " '" + names[f] + "'");
            }
            out.push_back(1.0 / row[f]);
        }
    };
    invert(d.input_row(dmu), d.input_names(), "input", v.in);
    invert(d.output_row(dmu), d.output_names(), "output", v.out);
    return v;
}

lp::LinearProgram build_kam_lp(const Dataset &d, std::size_t dmu, const FactorVectors &eps,
                               const FactorVectors &weights) {
    check_index(d, dmu);
    const std::size_t n = d.size();
    const std::size_t m = d.num_inputs();
    const std::size_t p = d.num_outputs();
    if (eps.in.size() != m || eps.out.size() != p || weights.in.size() != m || weights.out.size() != p) {
        throw std::invalid_argument("build_kam_lp: epsilon/weight vectors do not match m=" + std::to_string(m) +
                                    ", p=" + std::to_string(p));
    }
    const std::size_t vars = n + m + p;
    const auto s_in = [n](std::size_t j) { return n + j; };
    const auto s_out = [n, m](std::size_t k) { return n + m + k; };
    const auto x_l = d.input_row(dmu);
    const auto y_l = d.output_row(dmu);

    lp::LinearProgram lp;
    lp.num_vars = vars;
    lp.objective.assign(vars, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        lp.objective[s_in(j)] = weights.in[j];
    }
    for (std::size_t k = 0; k < p; ++k) {
        lp.objective[s_out(k)] = weights.out[k];
    }

    for (std::size_t j = 0; j < m; ++j) {
        lp::Constraint c{std::vector<double>(vars, 0.0), x_l[j] + eps.in[j]};
        for (std::size_t i = 0; i < n; ++i) {
            c.coefficients[i] = d.inputs()(i, j);
        }
        c.coefficients[s_in(j)] = 1.0;
        lp.equalities.push_back(std::move(c));
    }
    for (std::size_t k = 0; k < p; ++k) {
        lp::Constraint c{std::vector<double>(vars, 0.0), y_l[k] - eps.out[k]};
        for (std::size_t i = 0; i < n; ++i) {
            c.coefficients[i] = d.outputs()(i, k);
        }
        c.coefficients[s_out(k)] = -1.0;
        lp.equalities.push_back(std::move(c));
    }
    {
        lp::Constraint c{std::vector<double>(vars, 0.0), 1.0};
        std::fill_n(c.coefficients.begin(), n, 1.0);
        lp.equalities.push_back(std::move(c));
    }

    for (std::size_t j = 0; j < m; ++j) {
        lp::Constraint c{std::vector<double>(vars, 0.0), -x_l[j]};
        c.coefficients[s_in(j)] = -1.0;
        lp.lower_bounded.push_back(std::move(c));
    }
    for (std::size_t k = 0; k < p; ++k) {
        lp::Constraint c{std::vector<double>(vars, 0.0), 2.0 * eps.out[k] - y_l[k]};
        c.coefficients[s_out(k)] = 1.0;
        lp.lower_bounded.push_back(std::move(c));
    }
    return lp;
}

Point compute_target(std::span<const double> x, std::span<const double> y, std::span<const double> slack_in,
                     std::span<const double> slack_out, const FactorVectors &eps) {
    if (slack_in.size() != x.size() || eps.in.size() != x.size() || slack_out.size() != y.size() ||
        eps.out.size() != y.size()) {
        throw std::invalid_argument("compute_target: dimension mismatch");
    }
    Point t;
    for (std::size_t j = 0; j < x.size(); ++j) {
        t.inputs.push_back(x[j] - slack_in[j] + eps.in[j]);
    }
    for (std::size_t k = 0; k < y.size(); ++k) {
        t.outputs.push_back(y[k] + slack_out[k] - eps.out[k]);
    }
    return t;
}

double weighted_productivity(std::span<const double> x, std::span<const double> y, const FactorVectors &weights) {
    if (weights.in.size() != x.size() || weights.out.size() != y.size()) {
        throw std::invalid_argument("weighted_productivity: dimension mismatch");
    }
    const double in = dot(weights.in, x);
    if (!(in > 0.0)) {
        throw DegenerateScoreError("weighted input is zero");
    }
    return dot(weights.out, y) / in;
}

double compute_score(std::span<const double> x, std::span<const double> y, const Point &target,
                     const FactorVectors &weights) {
    if (target.inputs.size() != x.size() || weights.in.size() != x.size() || target.outputs.size() != y.size() ||
        weights.out.size() != y.size()) {
        throw std::invalid_argument("compute_score: dimension mismatch");
    }
    const double in = dot(weights.in, x);
    const double in_target = dot(weights.in, target.inputs);
    const double out_target = dot(weights.out, target.outputs);
    if (!(in > 0.0) || !(in_target > 0.0) || !(out_target > 0.0)) {
        throw DegenerateScoreError("KA score has a zero denominator (weighted input " + format_number(in) +
                                   ", target input " + format_number(in_target) + ", target output " +
                                   format_number(out_target) + ")");
    }
    return (dot(weights.out, y) / in) / (out_target / in_target);
}

double delta_value(const DeltaRule &rule, double epsilon, std::size_t m, std::size_t p) {
    switch (rule.mode) {
        case DeltaRule::Mode::Tenth:     return 0.1 * epsilon;
        case DeltaRule::Mode::PerFactor: return epsilon / static_cast<double>(m + p);
        case DeltaRule::Mode::Explicit:  return rule.value;
    }
    return 0.0;
}

double delta_epsilon(const EpsilonPolicy &policy, const FactorVectors &resolved) {
    if (policy.mode == EpsilonPolicy::Mode::Proportional) {
        return policy.scale;
    }
    double e = 0.0;
    for (const double v : resolved.in) {
        e = std::max(e, v);
    }
    for (const double v : resolved.out) {
        e = std::max(e, v);
    }
    return e;
}

bool classify(double ka0, double ka_eps, double delta, bool technically_efficient, double score_tolerance) {
    return technically_efficient && ka0 - ka_eps <= delta + score_tolerance;
}

double neighbor_distance(std::span<const double> eps_in, std::span<const double> eps_out) {
    double s = 0.0;
    for (const double v : eps_in) {
        s += v * v;
    }
    for (const double v : eps_out) {
        s += v * v;
    }
    return std::sqrt(s);
}

KamEvaluation evaluate(const Dataset &d, std::size_t dmu, const KamConfig &cfg) {
    check_index(d, dmu);
    check_config(cfg);
    const std::size_t n = d.size();
    const std::size_t m = d.num_inputs();
    const std::size_t p = d.num_outputs();
    const auto x = d.input_row(dmu);
    const auto y = d.output_row(dmu);

    KamEvaluation ev;
    ev.dmu_index = dmu;
    ev.epsilon = resolve_epsilon(cfg.epsilon, d, dmu);
    ev.weights = resolve_weights(cfg.weights, d, dmu);

    const auto solve_kam = [&](const FactorVectors &eps) {
        const auto lp = build_kam_lp(d, dmu, eps, ev.weights);
        auto out = lp::solve(lp, cfg.solver);
        if (out.status != lp::Status::Optimal) {
            throw SolverError("KAM program for DMU '" + d.dmu_names()[dmu] + "' reported " +
                              std::string(lp::to_string(out.status)) + "; a feasible point exists by construction");
        }
        return out;
    };
    const auto slices = [&](const lp::Outcome &o) {
        const auto v = std::span<const double>(o.values);
        return std::pair{v.subspan(n, m), v.subspan(n + m, p)};
    };

    const FactorVectors zero{std::vector<double>(m, 0.0), std::vector<double>(p, 0.0)};
    const auto zero_kam = solve_kam(zero);
    {
        const auto [s_in, s_out] = slices(zero_kam);
        ev.ka0 = compute_score(x, y, compute_target(x, y, s_in, s_out, zero), ev.weights);
    }
    ev.zero_objective = zero_kam.objective_value;
    ev.technically_efficient = zero_kam.objective_value <= cfg.tech_efficiency_tolerance;

    const bool eps_is_zero = ev.epsilon == zero;
    const auto eps_kam = eps_is_zero ? zero_kam : solve_kam(ev.epsilon);
    const auto [s_in, s_out] = slices(eps_kam);
    ev.lambda.assign(eps_kam.values.begin(), eps_kam.values.begin() + static_cast<std::ptrdiff_t>(n));
    ev.input_slacks.assign(s_in.begin(), s_in.end());
    ev.output_slacks.assign(s_out.begin(), s_out.end());
    ev.target = compute_target(x, y, s_in, s_out, ev.epsilon);
    ev.ka_eps = compute_score(x, y, ev.target, ev.weights);
    ev.eps_objective = eps_kam.objective_value;
    ev.neighbor_distance = neighbor_distance(ev.epsilon.in, ev.epsilon.out);

    ev.delta = delta_value(cfg.delta, delta_epsilon(cfg.epsilon, ev.epsilon), m, p);
    ev.kam_efficient = classify(ev.ka0, ev.ka_eps, ev.delta, ev.technically_efficient, cfg.score_tolerance);
    return ev;
}

std::vector<KamEvaluation> evaluate_all(const Dataset &d, const KamConfig &cfg, Execution exec) {
    check_config(cfg);
    const auto n = static_cast<std::ptrdiff_t>(d.size());
    std::vector<KamEvaluation> out(d.size());

    if (exec == Execution::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) {
            out[i] = evaluate(d, static_cast<std::size_t>(i), cfg);
        }
        return out;
    }

    // Errors are re-raised for the lowest failing DMU so the outcome does not
    // depend on thread scheduling.
    std::vector<std::exception_ptr> errors(d.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = evaluate(d, static_cast<std::size_t>(i), cfg);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

} // namespace kam
