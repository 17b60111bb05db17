#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace kam::lp {

struct Constraint {
    std::vector<double> coefficients;
    double rhs = 0.0;
};

// maximize objective·v  s.t.  equalities: a·v = rhs,  lower_bounded: a·v >= rhs,  v >= 0.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<Constraint> equalities;
    std::vector<Constraint> lower_bounded;
};

enum class Status { Optimal, Infeasible, Unbounded };

std::string_view to_string(Status s) noexcept;

struct Outcome {
    Status status = Status::Infeasible;
    std::vector<double> values;
    double objective_value = 0.0;
    std::size_t iterations = 0;

    bool operator==(const Outcome &) const = default;
};

struct SolverOptions {
    double feasibility_tolerance = 1e-9;
    double optimality_tolerance = 1e-9;
    double pivot_tolerance = 1e-11;
    // 0 selects a limit proportional to the tableau size.
    std::size_t max_iterations = 0;
};

// Two-phase primal simplex on a dense tableau with Bland's rule. The final
// basis is re-solved against the original constraint matrix, so the returned
// point carries no accumulated pivoting error. Deterministic for identical input.
//
// Throws std::invalid_argument when coefficient vectors do not match num_vars
// or hold non-finite entries, and kam::SolverError if the iteration limit is hit.
Outcome solve(const LinearProgram &lp, const SolverOptions &options = {});

// Largest absolute violation of any constraint (including v >= 0) at `values`.
double max_violation(const LinearProgram &lp, const std::vector<double> &values);

} // namespace kam::lp
