#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "kam/dataset.hpp"
#include "kam/lp_solver.hpp"

namespace kam {

// Perturbation of the evaluated DMU: inputs are worsened by eps_in, outputs
// by eps_out. Proportional mode scales the DMU's own data by one scalar.
struct EpsilonPolicy {
    enum class Mode { Absolute, Proportional };

    Mode mode = Mode::Proportional;
    std::vector<double> eps_in;  // Absolute: length m
    std::vector<double> eps_out; // Absolute: length p
    double scale = 0.0;          // Proportional

    static EpsilonPolicy absolute(std::vector<double> in, std::vector<double> out);
    static EpsilonPolicy proportional(double scale);
};

struct WeightPolicy {
    enum class Mode { Unit, InverseData, Explicit };

    Mode mode = Mode::Unit;
    std::vector<double> w_in;
    std::vector<double> w_out;

    static WeightPolicy unit() { return {}; }
    static WeightPolicy inverse_data() { return {Mode::InverseData, {}, {}}; }
    static WeightPolicy explicit_weights(std::vector<double> in, std::vector<double> out);
};

// Classification threshold on KA_0 - KA_eps: a tenth of epsilon, epsilon
// spread over the m + p factors, or a fixed value.
struct DeltaRule {
    enum class Mode { Tenth, PerFactor, Explicit };

    Mode mode = Mode::Tenth;
    double value = 0.0; // Explicit only

    static DeltaRule tenth() { return {}; }
    static DeltaRule per_factor() { return {Mode::PerFactor, 0.0}; }
    static DeltaRule explicit_delta(double delta);
};

struct KamConfig {
    EpsilonPolicy epsilon;
    WeightPolicy weights;
    DeltaRule delta;
    // A 0-KAM optimum at or below this counts as zero weighted slack.
    double tech_efficiency_tolerance = 1e-7;
    double score_tolerance = 1e-9;
    lp::SolverOptions solver;
};

std::string_view to_string(EpsilonPolicy::Mode m) noexcept;
std::string_view to_string(WeightPolicy::Mode m) noexcept;
std::string_view to_string(DeltaRule::Mode m) noexcept;

// Throws ConfigError on negative epsilon, non-positive weights, missing
// explicit vectors or non-positive tolerances.
void check_config(const KamConfig &cfg);

struct FactorVectors {
    std::vector<double> in;
    std::vector<double> out;

    bool operator==(const FactorVectors &) const = default;
};

FactorVectors resolve_epsilon(const EpsilonPolicy &policy, const Dataset &d, std::size_t dmu);

// Throws ConfigError naming the factor when InverseData meets a zero datum.
FactorVectors resolve_weights(const WeightPolicy &policy, const Dataset &d, std::size_t dmu);

// Variables are ordered (lambda_1..lambda_n, s_in_1..s_in_m, s_out_1..s_out_p).
// Equalities: one per input, one per output, then sum(lambda) = 1.
// Lower bounds: x_lj - s_in_j >= 0 per input, y_lk + s_out_k - 2 eps_out_k >= 0 per output.
lp::LinearProgram build_kam_lp(const Dataset &d, std::size_t dmu, const FactorVectors &eps,
                               const FactorVectors &weights);

struct Point {
    std::vector<double> inputs;
    std::vector<double> outputs;

    bool operator==(const Point &) const = default;
};

// x* = x - s_in + eps_in,  y* = y + s_out - eps_out.
Point compute_target(std::span<const double> x, std::span<const double> y, std::span<const double> slack_in,
                     std::span<const double> slack_out, const FactorVectors &eps);

// w_out·y / w_in·x. Throws DegenerateScoreError when w_in·x is zero.
double weighted_productivity(std::span<const double> x, std::span<const double> y, const FactorVectors &weights);

// (w_out·y / w_in·x) / (w_out·y* / w_in·x*). Throws DegenerateScoreError on a
// zero denominator.
double compute_score(std::span<const double> x, std::span<const double> y, const Point &target,
                     const FactorVectors &weights);

double delta_value(const DeltaRule &rule, double epsilon, std::size_t m, std::size_t p);

// Scalar epsilon used by the delta rules: the proportional scale, or the
// largest resolved component for absolute policies.
double delta_epsilon(const EpsilonPolicy &policy, const FactorVectors &resolved);

bool classify(double ka0, double ka_eps, double delta, bool technically_efficient, double score_tolerance = 1e-9);

// Euclidean length of the concatenated epsilon vector: the distance between
// the evaluated DMU and the neighbour KAM actually scores.
double neighbor_distance(std::span<const double> eps_in, std::span<const double> eps_out);

struct KamEvaluation {
    std::size_t dmu_index = 0;
    std::vector<double> lambda;
    std::vector<double> input_slacks;
    std::vector<double> output_slacks;
    Point target;
    double ka0 = 1.0;
    double ka_eps = 1.0;
    bool technically_efficient = false;
    bool kam_efficient = false;
    double neighbor_distance = 0.0;
    double delta = 0.0;
    // Optimal weighted slack sums of the 0-KAM and epsilon-KAM programs.
    double zero_objective = 0.0;
    double eps_objective = 0.0;
    FactorVectors epsilon;
    FactorVectors weights;

    bool operator==(const KamEvaluation &) const = default;
};

// Solves 0-KAM (technical efficiency, KA_0) and epsilon-KAM (target, KA_eps)
// for one DMU. Expects a dataset with no validation issues.
KamEvaluation evaluate(const Dataset &d, std::size_t dmu, const KamConfig &cfg);

enum class Execution { Serial, Parallel };

// One evaluation per DMU, in dataset order. Parallel execution distributes
// DMUs across OpenMP threads and returns results identical to Serial.
std::vector<KamEvaluation> evaluate_all(const Dataset &d, const KamConfig &cfg,
                                        Execution exec = Execution::Parallel);

} // namespace kam
