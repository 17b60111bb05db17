#include "kam/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kam {

std::vector<RankEntry> rank(const Dataset &d, std::span<const KamEvaluation> evaluations, double tie_tolerance) {
    std::vector<std::size_t> order(evaluations.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto &ea = evaluations[a];
        const auto &eb = evaluations[b];
        if (ea.ka_eps != eb.ka_eps) {
            return ea.ka_eps > eb.ka_eps;
        }
        if (ea.ka0 != eb.ka0) {
            return ea.ka0 > eb.ka0;
        }
        return ea.dmu_index < eb.dmu_index;
    });

    std::vector<RankEntry> out;
    out.reserve(order.size());
    const KamEvaluation *leader = nullptr;
    std::size_t leader_rank = 0;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
        const auto &e = evaluations[order[pos]];
        if (e.dmu_index >= d.size()) {
            throw std::invalid_argument("rank: evaluation refers to DMU " + std::to_string(e.dmu_index) +
                                        " outside the dataset");
        }
        const bool tied = leader != nullptr && std::abs(leader->ka_eps - e.ka_eps) <= tie_tolerance &&
                          std::abs(leader->ka0 - e.ka0) <= tie_tolerance;
        if (!tied) {
            leader = &e;
            leader_rank = pos + 1;
        }
        out.push_back({leader_rank, e.dmu_index, d.dmu_names()[e.dmu_index], e.ka_eps, e.ka0, e.kam_efficient});
    }
    return out;
}

namespace {

std::pair<double, double> mean_std(std::span<const double> v) {
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / n)};
}

} // namespace

SummaryStats summary(std::span<const double> scores) {
    if (scores.empty()) {
        throw std::invalid_argument("summary: no scores");
    }
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t cut = sorted.size() / 4;
    const auto middle = std::span<const double>(sorted).subspan(cut, sorted.size() - 2 * cut);

    SummaryStats s;
    std::tie(s.mean, s.std) = mean_std(scores);
    std::tie(s.iq_mean, s.iq_std) = mean_std(middle);
    return s;
}

std::vector<AdequacyFinding> adequacy_report(std::size_t n, std::size_t m, std::size_t p) {
    const auto nd = static_cast<double>(n);
    const auto factors = static_cast<double>(m + p);
    const auto finding = [nd](std::string rule, std::string statement, double threshold) {
        return AdequacyFinding{std::move(rule), std::move(statement), threshold, nd > threshold};
    };
    return {
        finding("golany-roll", "n > 2(m+p)", 2.0 * factors),
        finding("banker", "n > 3(m+p)", 3.0 * factors),
        finding("dyson", "n > 2mp", 2.0 * static_cast<double>(m) * static_cast<double>(p)),
    };
}

Report build_report(const Dataset &d, const KamConfig &cfg, std::vector<KamEvaluation> evaluations) {
    if (evaluations.size() != d.size()) {
        throw std::invalid_argument("build_report: expected " + std::to_string(d.size()) + " evaluations, got " +
                                    std::to_string(evaluations.size()));
    }
    for (std::size_t i = 0; i < evaluations.size(); ++i) {
        if (evaluations[i].dmu_index != i) {
            throw std::invalid_argument("build_report: evaluations must be in dataset order");
        }
    }

    Report r;
    r.config = cfg;
    r.dmu_names = d.dmu_names();
    r.input_names = d.input_names();
    r.output_names = d.output_names();
    r.ranking = rank(d, evaluations, cfg.score_tolerance);
    std::vector<double> scores;
    scores.reserve(evaluations.size());
    for (const auto &e : evaluations) {
        scores.push_back(e.ka_eps);
    }
    r.summary = summary(scores);
    r.adequacy = adequacy_report(d.size(), d.num_inputs(), d.num_outputs());
    r.evaluations = std::move(evaluations);
    return r;
}

} // namespace kam
