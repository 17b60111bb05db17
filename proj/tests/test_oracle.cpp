#include "doctest.h"

#include <cmath>

#include "fixtures.hpp"
#include "kam/kam_core.hpp"
#include "kam/lp_solver.hpp"
#include "kam/oracle.hpp"

using namespace kam;
using namespace kam::oracle;
using doctest::Approx;

namespace {

const FactorVectors unit12{{1.0}, {1.0, 1.0}};

} // namespace

TEST_CASE("grid oracle on the two-DMU example") {
    const auto d = testing::two_dmu();
    const auto r = oracle_evaluate(d, 0, {{0.0}, {0.5, 0.5}}, unit12, 0.01);
    CHECK(r.resolution == Approx(0.01));
    CHECK(r.best_objective == Approx(3.5).epsilon(1e-12));
    CHECK(r.best_lambda[1] == Approx(0.5));
    CHECK(r.grid_points == 101);
    CHECK(r.bound >= 0.0);

    const auto b0 = oracle_evaluate(d, 1, {{0.0}, {0.0, 0.0}}, unit12, 0.01);
    CHECK(b0.best_objective == Approx(0.0));
    CHECK(b0.best_lambda == std::vector<double>{0.0, 1.0});
}

TEST_CASE("oracles on a single DMU") {
    const auto d = Dataset::from_rows({"S"}, {"x"}, {"y1", "y2"}, {{2.0}}, {{4.0, 8.0}});
    const FactorVectors eps{{0.2}, {0.4, 0.8}};
    const FactorVectors w{{0.5}, {0.25, 0.125}};
    const double forced = 0.5 * 0.2 + 0.25 * 0.4 + 0.125 * 0.8;
    const auto r = oracle_evaluate(d, 0, eps, w, 0.1);
    CHECK(r.best_lambda == std::vector<double>{1.0});
    CHECK(r.best_objective == Approx(forced));
    CHECK(r.bound == 0.0);
    CHECK(oracle_vertex_evaluate(d, 0, eps, w).best_objective == Approx(forced));
}

TEST_CASE("vertex oracle on the two-DMU example") {
    const auto d = testing::two_dmu();
    const auto v = oracle_vertex_evaluate(d, 0, {{0.0}, {0.5, 0.5}}, unit12);
    CHECK(v.best_objective == Approx(3.5).epsilon(1e-12));
    CHECK(v.best_lambda[1] == Approx(0.5));
    CHECK(oracle_vertex_evaluate(d, 1, {{0.0}, {0.0, 0.0}}, unit12).best_objective == Approx(0.0));
}

TEST_CASE("random_instance contract") {
    CHECK(random_instance(42, 5, 2, 2) == random_instance(42, 5, 2, 2));
    CHECK_FALSE(random_instance(42, 5, 2, 2) == random_instance(43, 5, 2, 2));
    const auto d = random_instance(9, 5, 2, 2);
    CHECK(validate_dataset(d).empty());
    for (const double v : d.inputs().values()) {
        CHECK(v >= 0.5);
        CHECK(v <= 10.5);
    }
    CHECK_THROWS_AS(random_instance(1, 0, 1, 1), std::invalid_argument);
}

TEST_CASE("default resolution caps the grid") {
    CHECK(default_resolution(2) == Approx(1e-3));
    for (std::size_t n = 3; n <= 6; ++n) {
        const auto k = static_cast<std::size_t>(std::lround(1.0 / default_resolution(n)));
        CHECK(grid_size(n, k) <= 1e7);
        CHECK((k == 1000 || grid_size(n, k + 1) > 1e7));
    }
    CHECK(grid_size(2, 100) == Approx(101));
    CHECK(grid_size(3, 2) == Approx(6));
}

TEST_CASE("parallel grid matches the serial walk") {
    const auto d = random_instance(5, 4, 2, 1);
    const auto eps = resolve_epsilon(EpsilonPolicy::proportional(0.1), d, 2);
    const auto w = resolve_weights(WeightPolicy::inverse_data(), d, 2);
    const auto a = oracle_evaluate(d, 2, eps, w, 0.02, Execution::Serial);
    const auto b = oracle_evaluate(d, 2, eps, w, 0.02, Execution::Parallel);
    CHECK(a.best_objective == b.best_objective);
    CHECK(a.best_lambda == b.best_lambda);
    CHECK(a.bound == b.bound);
    CHECK(a.feasible_points == b.feasible_points);
}

TEST_CASE("property: halving the grid step never loses more than the previous bound") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        const auto d = random_instance(seed, 2 + seed % 3, 1, 2);
        const auto l = static_cast<std::size_t>(seed % d.size());
        const auto eps = resolve_epsilon(EpsilonPolicy::proportional(0.1), d, l);
        const auto w = resolve_weights(WeightPolicy::unit(), d, l);
        const auto coarse = oracle_evaluate(d, l, eps, w, 1.0 / 20);
        const auto fine = oracle_evaluate(d, l, eps, w, 1.0 / 40);
        CHECK(fine.best_objective >= coarse.best_objective - coarse.bound);
        CHECK(fine.best_objective >= coarse.best_objective - 1e-12);
    }
}

TEST_CASE("property: solver agrees with both oracles") {
    std::size_t informative = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto n = 1 + seed % 5;
        const auto m = 1 + seed % 2;
        const auto p = 1 + (seed / 2) % 2;
        const auto d = random_instance(seed, n, m, p);
        const auto l = static_cast<std::size_t>(seed % n);
        for (const double e : {0.0, 0.1}) {
            const auto eps = resolve_epsilon(EpsilonPolicy::proportional(e), d, l);
            const auto w = resolve_weights(WeightPolicy::inverse_data(), d, l);
            const auto solved = lp::solve(build_kam_lp(d, l, eps, w));
            REQUIRE(solved.status == lp::Status::Optimal);

            const auto vertex = oracle_vertex_evaluate(d, l, eps, w);
            CHECK(std::abs(solved.objective_value - vertex.best_objective) <= 1e-7);

            const auto grid = oracle_evaluate(d, l, eps, w, n <= 2 ? default_resolution(n) : 1.0 / 50);
            CHECK(solved.objective_value >= grid.best_objective - 1e-9);
            CHECK(solved.objective_value <= grid.best_objective + grid.bound + 1e-9);
            if (grid.bound < 0.1 * (std::abs(grid.best_objective) + 1.0)) {
                ++informative;
            }
        }
    }
    MESSAGE("grid bound informative on " << informative << " of 80 checks");
    CHECK(informative > 0);
}
