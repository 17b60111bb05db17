#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kam/dataset.hpp"
#include "kam/kam_core.hpp"

namespace kam {

struct RankEntry {
    std::size_t rank = 1;
    std::size_t dmu_index = 0;
    std::string dmu;
    double ka_eps = 0.0;
    double ka0 = 0.0;
    bool kam_efficient = false;

    bool operator==(const RankEntry &) const = default;
};

// Most to least efficient: descending KA_eps, then descending KA_0, then
// dataset order. Entries whose (KA_eps, KA_0) match within `tie_tolerance`
// share a rank number (competition ranking: 1, 1, 3, ...).
std::vector<RankEntry> rank(const Dataset &d, std::span<const KamEvaluation> evaluations,
                            double tie_tolerance = 1e-9);

struct SummaryStats {
    double mean = 0.0;
    double std = 0.0;
    double iq_mean = 0.0;
    double iq_std = 0.0;

    bool operator==(const SummaryStats &) const = default;
};

// Population mean/standard deviation over all scores, and over the middle
// half once floor(N/4) values are dropped from each end of the sorted list.
// Throws std::invalid_argument on an empty sequence.
SummaryStats summary(std::span<const double> scores);

struct AdequacyFinding {
    std::string rule;      // short identifier
    std::string statement; // the rule of thumb as an inequality
    double threshold = 0.0;
    bool passed = false;

    bool operator==(const AdequacyFinding &) const = default;
};

// Rules of thumb relating the number of DMUs to the number of factors:
// n > 2(m+p), n > 3(m+p), n > 2mp. Advisory only.
std::vector<AdequacyFinding> adequacy_report(std::size_t n, std::size_t m, std::size_t p);

struct Report {
    KamConfig config;
    std::vector<std::string> dmu_names;
    std::vector<std::string> input_names;
    std::vector<std::string> output_names;
    std::vector<KamEvaluation> evaluations;
    std::vector<RankEntry> ranking;
    SummaryStats summary;
    std::vector<AdequacyFinding> adequacy;
};

// Expects exactly one evaluation per DMU, in dataset order.
Report build_report(const Dataset &d, const KamConfig &cfg, std::vector<KamEvaluation> evaluations);

} // namespace kam
