#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "fixtures.hpp"
#include "kam/analysis.hpp"
#include "kam/oracle.hpp"

using namespace kam;
using doctest::Approx;

namespace {

KamEvaluation scored(std::size_t index, double ka_eps, double ka0 = 1.0) {
    KamEvaluation e;
    e.dmu_index = index;
    e.ka_eps = ka_eps;
    e.ka0 = ka0;
    return e;
}

Dataset named(std::size_t n) {
    std::vector<std::string> names;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back("D" + std::to_string(i));
        rows.push_back({1.0});
    }
    return Dataset::from_rows(names, {"x"}, {"y"}, rows, rows);
}

} // namespace

TEST_CASE("rank orders by score with competition ties") {
    const auto d = testing::two_dmu();
    const std::vector<KamEvaluation> ev{scored(0, 0.848485), scored(1, 1.0)};
    const auto r = rank(d, ev);
    REQUIRE(r.size() == 2);
    CHECK(r[0].dmu == "B");
    CHECK(r[0].rank == 1);
    CHECK(r[1].dmu == "A");
    CHECK(r[1].rank == 2);

    const auto d4 = named(4);
    const std::vector<KamEvaluation> all_equal{scored(0, 0.9), scored(1, 0.9), scored(2, 0.9), scored(3, 0.9)};
    for (const auto &e : rank(d4, all_equal)) {
        CHECK(e.rank == 1);
    }

    const std::vector<KamEvaluation> mixed{scored(0, 0.9, 0.95), scored(1, 1.0), scored(2, 0.9, 1.0), scored(3, 0.9, 1.0)};
    const auto rm = rank(d4, mixed);
    CHECK(rm[0].dmu == "D1");
    CHECK(rm[0].rank == 1);
    CHECK(rm[1].dmu == "D2"); // ka0 breaks the tie, then dataset order
    CHECK(rm[1].rank == 2);
    CHECK(rm[2].dmu == "D3");
    CHECK(rm[2].rank == 2);
    CHECK(rm[3].dmu == "D0");
    CHECK(rm[3].rank == 4);

    const auto one = rank(named(1), std::vector<KamEvaluation>{scored(0, 0.7)});
    REQUIRE(one.size() == 1);
    CHECK(one[0].rank == 1);
}

TEST_CASE("summary statistics") {
    const auto ones = summary(std::vector<double>{1, 1, 1});
    CHECK(ones.mean == 1.0);
    CHECK(ones.std == 0.0);
    CHECK(summary(std::vector<double>{0.8, 0.9, 1.0, 1.0}).mean == Approx(0.925));

    const auto s = summary(std::vector<double>{8, 1, 7, 2, 6, 3, 5, 4});
    CHECK(s.mean == Approx(4.5));
    CHECK(s.std == Approx(std::sqrt(5.25)));
    CHECK(s.iq_mean == Approx(4.5));
    CHECK(s.iq_std == Approx(std::sqrt(1.25)));

    // N = 5 drops one value from each end.
    CHECK(summary(std::vector<double>{0, 10, 1, 2, 3}).iq_mean == Approx(2.0));
    CHECK_THROWS_AS(summary(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("adequacy rules of thumb") {
    const auto big = adequacy_report(32, 20, 25);
    REQUIRE(big.size() == 3);
    CHECK(big[0].threshold == 90.0);
    CHECK(big[1].threshold == 135.0);
    CHECK(big[2].threshold == 1000.0);
    CHECK(std::none_of(big.begin(), big.end(), [](const auto &f) { return f.passed; }));

    const auto ok = adequacy_report(100, 2, 3);
    CHECK(std::all_of(ok.begin(), ok.end(), [](const auto &f) { return f.passed; }));

    const auto boundary = adequacy_report(10, 2, 3);
    CHECK(boundary[0].threshold == 10.0);
    CHECK_FALSE(boundary[0].passed);
    CHECK(adequacy_report(10, 2, 3) == boundary);
}

TEST_CASE("neighbor_distance") {
    CHECK(neighbor_distance(std::vector<double>{}, std::vector<double>{0.5, 0.5}) == Approx(0.7071067811865476));
    CHECK(neighbor_distance(std::vector<double>{}, std::vector<double>{0.1, 0.1}) == Approx(0.1414213562373095));
    CHECK(neighbor_distance(std::vector<double>{0.0}, std::vector<double>{0.0, 0.0}) == 0.0);
}

TEST_CASE("build_report") {
    const auto d = testing::two_dmu();
    const auto cfg = testing::two_dmu_config();
    const auto r = build_report(d, cfg, evaluate_all(d, cfg));
    REQUIRE(r.ranking.size() == 2);
    CHECK(r.ranking[0].dmu == "B");
    CHECK(r.ranking[1].dmu == "A");
    CHECK(r.summary.mean == Approx((1.0 + 14.0 / 16.5) / 2.0));
    CHECK(r.summary.mean == Approx(0.924242).epsilon(1e-6));

    const auto single = Dataset::from_rows({"S"}, {"x"}, {"y"}, {{1.0}}, {{1.0}});
    KamConfig c1;
    c1.epsilon = EpsilonPolicy::proportional(0.001);
    const auto r1 = build_report(single, c1, evaluate_all(single, c1));
    CHECK(r1.summary.mean == Approx(1.0));
    CHECK(r1.summary.std == Approx(0.0));

    CHECK_THROWS_AS(build_report(d, cfg, {}), std::invalid_argument);
}

TEST_CASE("property: ranking and summary invariants") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto d = oracle::random_instance(seed, 32, 2, 2);
        KamConfig cfg;
        cfg.epsilon = EpsilonPolicy::proportional(0.1);
        cfg.weights = WeightPolicy::inverse_data();
        const auto r = build_report(d, cfg, evaluate_all(d, cfg));
        REQUIRE(r.ranking.size() == d.size());
        std::vector<std::string> names;
        for (std::size_t i = 0; i < r.ranking.size(); ++i) {
            names.push_back(r.ranking[i].dmu);
            if (i > 0) {
                CHECK(r.ranking[i].ka_eps <= r.ranking[i - 1].ka_eps);
                CHECK(r.ranking[i].rank >= r.ranking[i - 1].rank);
            }
        }
        CHECK(r.ranking.front().rank == 1);
        std::sort(names.begin(), names.end());
        auto expected = d.dmu_names();
        std::sort(expected.begin(), expected.end());
        CHECK(names == expected);

        std::vector<double> scores;
        for (const auto &e : r.evaluations) {
            scores.push_back(e.ka_eps);
        }
        const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
        CHECK(r.summary.mean >= *lo - 1e-12);
        CHECK(r.summary.mean <= *hi + 1e-12);
        std::sort(scores.begin(), scores.end());
        CHECK(r.summary.iq_mean >= scores[scores.size() / 4] - 1e-12);
        CHECK(r.summary.iq_mean <= scores[scores.size() - 1 - scores.size() / 4] + 1e-12);
    }
}
