#pragma once

#include <string>
#include <vector>

#include "kam/dataset.hpp"
#include "kam/kam_core.hpp"

namespace kam::testing {

// Two non-dominated DMUs with one unit input and two outputs.
inline Dataset two_dmu(bool mirrored = false) {
    if (mirrored) {
        return Dataset::from_rows({"A", "B"}, {"in1"}, {"out1", "out2"}, {{1}, {1}}, {{10, 4}, {9, 10}});
    }
    return Dataset::from_rows({"A", "B"}, {"in1"}, {"out1", "out2"}, {{1}, {1}}, {{4, 10}, {10, 9}});
}

inline KamConfig two_dmu_config(double eps = 0.5) {
    KamConfig cfg;
    cfg.epsilon = EpsilonPolicy::absolute({0.0}, {eps, eps});
    cfg.weights = WeightPolicy::unit();
    cfg.delta = DeltaRule::tenth();
    return cfg;
}

// Eight DMUs with input 1 and outputs on the segment out1 + out2 = 14.
inline Dataset collinear_frontier() {
    std::vector<std::string> names;
    std::vector<std::vector<double>> x, y;
    for (int i = 0; i < 8; ++i) {
        names.push_back(std::string(1, static_cast<char>('A' + i)));
        x.push_back({1.0});
        const double o1 = 4.0 + 6.0 * i / 7.0;
        y.push_back({o1, 14.0 - o1});
    }
    return Dataset::from_rows(names, {"in1"}, {"out1", "out2"}, x, y);
}

} // namespace kam::testing
