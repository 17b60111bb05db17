#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kam/dataset.hpp"
#include "kam/error.hpp"
#include "kam/kam_core.hpp"

namespace kam::oracle {

// No grid point (or vertex) satisfied the KAM constraints; refine the grid.
class InfeasibleAtResolution : public Error {
public:
    using Error::Error;
};

struct OracleResult {
    double best_objective = 0.0;
    std::vector<double> best_lambda;
    // Effective grid step 1/K.
    double resolution = 0.0;
    // The true optimum lies in [best_objective - 1e-9, best_objective + bound].
    double bound = 0.0;
    std::size_t grid_points = 0;
    std::size_t feasible_points = 0;
    // Largest minimum constraint slack seen at a feasible grid point; the
    // bound is only informative when this is positive.
    double best_margin = 0.0;
};

// Brute-force KAM optimum: enumerates lambda on the simplex grid with step
// h (rounded to 1/K), derives the slacks from the equality constraints and
// keeps points meeting every bound within 1e-9.
//
// Gap bound: with L the objective's Lipschitz constant over the simplex in
// the L1 norm, Kc the same for the constraint functions, D = n·h the grid
// rounding radius and q the feasible grid point of largest margin mq, moving
// the optimum a fraction t = Kc·D/mq towards q and rounding to the grid
// stays feasible, so  bound = min(2L, L·D + 2L·Kc·D/mq).
OracleResult oracle_evaluate(const Dataset &d, std::size_t dmu, const FactorVectors &eps,
                             const FactorVectors &weights, double h, Execution exec = Execution::Parallel);

// Grid step keeping the enumeration near 1e7 points: 1e-3 for n <= 2.
double default_resolution(std::size_t n);

// Number of points on the simplex grid with K subdivisions in n dimensions.
double grid_size(std::size_t n, std::size_t k);

struct VertexResult {
    double best_objective = 0.0;
    std::vector<double> best_lambda;
    std::size_t bases_checked = 0;
    std::size_t feasible_vertices = 0;
};

// Exact KAM optimum by enumerating every vertex of the feasible lambda
// polytope: each choice of n-1 active bounds plus sum(lambda) = 1. Cost grows
// as C(n + 2(m+p), n-1); intended for n <= 8.
VertexResult oracle_vertex_evaluate(const Dataset &d, std::size_t dmu, const FactorVectors &eps,
                                    const FactorVectors &weights);

// Seeded dataset with entries uniform on [0.5, 10.5].
Dataset random_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t p);

} // namespace kam::oracle
