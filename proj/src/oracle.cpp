#include "kam/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace kam::oracle {

namespace {

constexpr double kFeasTol = 1e-9;

struct KamGeometry {
    std::size_t n, m, p;
    std::vector<double> x_l, y_l;
    FactorVectors eps, w;
};

KamGeometry geometry(const Dataset &d, std::size_t dmu, const FactorVectors &eps, const FactorVectors &weights) {
    if (dmu >= d.size()) {
        throw std::invalid_argument("oracle: DMU index out of range");
    }
    if (eps.in.size() != d.num_inputs() || eps.out.size() != d.num_outputs() ||
        weights.in.size() != d.num_inputs() || weights.out.size() != d.num_outputs()) {
        throw std::invalid_argument("oracle: epsilon/weight vectors do not match the dataset");
    }
    const auto x = d.input_row(dmu);
    const auto y = d.output_row(dmu);
    return {d.size(), d.num_inputs(), d.num_outputs(), {x.begin(), x.end()}, {y.begin(), y.end()}, eps, weights};
}

// Objective and minimum constraint slack at the point with combined inputs
// xs and outputs ys (both already divided by K).
struct PointEval {
    double objective;
    double margin;
};

PointEval eval_point(const KamGeometry &g, const double *xs, const double *ys) {
    double obj = 0.0;
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < g.m; ++j) {
        const double s = g.x_l[j] + g.eps.in[j] - xs[j];
        margin = std::min({margin, s, g.x_l[j] - s});
        obj += g.w.in[j] * s;
    }
    for (std::size_t k = 0; k < g.p; ++k) {
        const double s = ys[k] - g.y_l[k] + g.eps.out[k];
        margin = std::min({margin, s, g.y_l[k] + s - 2.0 * g.eps.out[k]});
        obj += g.w.out[k] * s;
    }
    return {obj, margin};
}

struct GridBest {
    bool found = false;
    double objective = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> counts;
    double margin = -std::numeric_limits<double>::infinity();
    std::size_t points = 0;
    std::size_t feasible = 0;
};

// Enumerates all compositions with counts[0] fixed; accumulators hold
// sum_i counts_i * row_i per level, so each leaf costs O(m + p).
class GridWalker {
public:
    GridWalker(const Dataset &d, const KamGeometry &g, std::size_t k_total)
        : d_(d), g_(g), k_(k_total), counts_(g.n, 0),
          acc_((g.n + 1) * (g.m + g.p), 0.0), leaf_(g.m + g.p) {}

    GridBest run(std::size_t first) {
        best_ = GridBest{};
        counts_[0] = first;
        add_level(0, first);
        if (g_.n == 1) {
            leaf();
        } else {
            descend(1, k_ - first);
        }
        return best_;
    }

private:
    double *level(std::size_t i) { return acc_.data() + i * (g_.m + g_.p); }

    // level(i + 1) = level(i) + c * row_i
    void add_level(std::size_t i, std::size_t c) {
        const double *src = level(i);
        double *dst = level(i + 1);
        const auto cd = static_cast<double>(c);
        const auto x = d_.input_row(i);
        const auto y = d_.output_row(i);
        for (std::size_t j = 0; j < g_.m; ++j) {
            dst[j] = src[j] + cd * x[j];
        }
        for (std::size_t k = 0; k < g_.p; ++k) {
            dst[g_.m + k] = src[g_.m + k] + cd * y[k];
        }
    }

    void descend(std::size_t i, std::size_t remaining) {
        if (i + 1 == g_.n) {
            counts_[i] = remaining;
            add_level(i, remaining);
            leaf();
            return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
            counts_[i] = c;
            add_level(i, c);
            descend(i + 1, remaining - c);
        }
    }

    void leaf() {
        const double *acc = level(g_.n);
        const auto kd = static_cast<double>(k_);
        for (std::size_t t = 0; t < g_.m + g_.p; ++t) {
            leaf_[t] = acc[t] / kd;
        }
        ++best_.points;
        const auto e = eval_point(g_, leaf_.data(), leaf_.data() + g_.m);
        if (e.margin < -kFeasTol) {
            return;
        }
        ++best_.feasible;
        best_.margin = std::max(best_.margin, e.margin);
        if (!best_.found || e.objective > best_.objective) {
            best_.found = true;
            best_.objective = e.objective;
            best_.counts = counts_;
        }
    }

    const Dataset &d_;
    const KamGeometry &g_;
    std::size_t k_;
    std::vector<std::size_t> counts_;
    std::vector<double> acc_;
    std::vector<double> leaf_;
    GridBest best_;
};

double half_range(const Dataset &d, bool outputs, std::size_t f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double v = outputs ? d.outputs()(i, f) : d.inputs()(i, f);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return (hi - lo) / 2.0;
}

} // namespace

double grid_size(std::size_t n, std::size_t k) {
    // C(k + n - 1, n - 1)
    double c = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        c = c * static_cast<double>(k + i) / static_cast<double>(i);
    }
    return c;
}

double default_resolution(std::size_t n) {
    constexpr std::size_t kMaxK = 1000;
    constexpr double kMaxPoints = 1e7;
    if (n <= 2) {
        return 1.0 / static_cast<double>(kMaxK);
    }
    std::size_t k = 1;
    while (k < kMaxK && grid_size(n, k + 1) <= kMaxPoints) {
        ++k;
    }
    return 1.0 / static_cast<double>(k);
}

OracleResult oracle_evaluate(const Dataset &d, std::size_t dmu, const FactorVectors &eps,
                             const FactorVectors &weights, double h, Execution exec) {
    const auto g = geometry(d, dmu, eps, weights);
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw std::invalid_argument("oracle_evaluate: resolution must be > 0");
    }
    const auto k_total = static_cast<std::size_t>(std::max(1.0, std::round(1.0 / h)));

    // One chunk per value of the first lambda count; merged in order so the
    // winner does not depend on the execution mode.
    const std::size_t chunks = g.n == 1 ? 1 : k_total + 1;
    std::vector<GridBest> partial(chunks);
    if (g.n == 1) {
        GridWalker w(d, g, k_total);
        partial[0] = w.run(k_total);
    } else if (exec == Execution::Serial) {
        GridWalker w(d, g, k_total);
        for (std::size_t c = 0; c < chunks; ++c) {
            partial[c] = w.run(c);
        }
    } else {
#pragma omp parallel
        {
            GridWalker w(d, g, k_total);
#pragma omp for schedule(dynamic)
            for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(chunks); ++c) {
                partial[c] = w.run(static_cast<std::size_t>(c));
            }
        }
    }

    GridBest best;
    for (auto &part : partial) {
        best.points += part.points;
        best.feasible += part.feasible;
        best.margin = std::max(best.margin, part.margin);
        if (part.found && (!best.found || part.objective > best.objective)) {
            best.found = true;
            best.objective = part.objective;
            best.counts = std::move(part.counts);
        }
    }
    if (!best.found) {
        throw InfeasibleAtResolution("oracle: no feasible grid point at K=" + std::to_string(k_total) +
                                     "; refine the resolution");
    }

    OracleResult r;
    r.best_objective = best.objective;
    r.resolution = 1.0 / static_cast<double>(k_total);
    r.grid_points = best.points;
    r.feasible_points = best.feasible;
    r.best_margin = best.margin;
    for (const auto c : best.counts) {
        r.best_lambda.push_back(static_cast<double>(c) / static_cast<double>(k_total));
    }

    double g_lo = std::numeric_limits<double>::infinity();
    double g_hi = -g_lo;
    for (std::size_t i = 0; i < g.n; ++i) {
        double gi = 0.0;
        for (std::size_t j = 0; j < g.m; ++j) {
            gi -= g.w.in[j] * d.inputs()(i, j);
        }
        for (std::size_t k = 0; k < g.p; ++k) {
            gi += g.w.out[k] * d.outputs()(i, k);
        }
        g_lo = std::min(g_lo, gi);
        g_hi = std::max(g_hi, gi);
    }
    const double lip = (g_hi - g_lo) / 2.0;
    double lip_c = 0.0;
    for (std::size_t j = 0; j < g.m; ++j) {
        lip_c = std::max(lip_c, half_range(d, false, j));
    }
    for (std::size_t k = 0; k < g.p; ++k) {
        lip_c = std::max(lip_c, half_range(d, true, k));
    }
    const double radius = static_cast<double>(g.n) * r.resolution;
    r.bound = 2.0 * lip;
    if (g.n == 1 || lip == 0.0) {
        r.bound = 0.0;
    } else if (r.best_margin > 0.0) {
        r.bound = std::min(2.0 * lip, lip * radius + 2.0 * lip * lip_c * radius / r.best_margin);
    }
    return r;
}

namespace {

// Partial-pivot Gaussian elimination; nullopt-like empty result when singular.
bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n, std::vector<double> &out) {
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) {
                piv = r;
            }
        }
        if (std::abs(a[piv * n + c]) < 1e-12) {
            return false;
        }
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a[piv * n + j], a[c * n + j]);
            }
            std::swap(b[piv], b[c]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = a[r * n + c] / a[c * n + c];
            for (std::size_t j = c; j < n; ++j) {
                a[r * n + j] -= f * a[c * n + j];
            }
            b[r] -= f * b[c];
        }
    }
    out.assign(n, 0.0);
    for (std::size_t c = n; c-- > 0;) {
        double s = b[c];
        for (std::size_t j = c + 1; j < n; ++j) {
            s -= a[c * n + j] * out[j];
        }
        out[c] = s / a[c * n + c];
    }
    return true;
}

} // namespace

VertexResult oracle_vertex_evaluate(const Dataset &d, std::size_t dmu, const FactorVectors &eps,
                                    const FactorVectors &weights) {
    const auto g = geometry(d, dmu, eps, weights);
    const std::size_t n = g.n;

    // Bounds a·lambda >= b over lambda.
    std::vector<std::vector<double>> a_rows;
    std::vector<double> b_rows;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(n, 0.0);
        row[i] = 1.0;
        a_rows.push_back(std::move(row));
        b_rows.push_back(0.0);
    }
    for (std::size_t j = 0; j < g.m; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = d.inputs()(i, j);
        }
        std::vector<double> neg(n);
        std::transform(col.begin(), col.end(), neg.begin(), [](double v) { return -v; });
        a_rows.push_back(neg);                          // input slack >= 0
        b_rows.push_back(-(g.x_l[j] + g.eps.in[j]));
        a_rows.push_back(col);                          // x_lj - slack >= 0
        b_rows.push_back(g.eps.in[j]);
    }
    for (std::size_t k = 0; k < g.p; ++k) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            col[i] = d.outputs()(i, k);
        }
        a_rows.push_back(col);                          // output slack >= 0
        b_rows.push_back(g.y_l[k] - g.eps.out[k]);
        a_rows.push_back(col);                          // y_lk + slack - 2 eps >= 0
        b_rows.push_back(g.eps.out[k]);
    }
    const std::size_t bounds = a_rows.size();

    VertexResult best;
    best.best_objective = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> pick(n - 1);
    std::vector<double> lambda;
    std::vector<double> xs(g.m);
    std::vector<double> ys(g.p);

    const auto try_basis = [&] {
        ++best.bases_checked;
        std::vector<double> a(n * n, 0.0);
        std::vector<double> b(n, 0.0);
        for (std::size_t r = 0; r + 1 < n; ++r) {
            std::copy(a_rows[pick[r]].begin(), a_rows[pick[r]].end(), a.begin() + static_cast<std::ptrdiff_t>(r * n));
            b[r] = b_rows[pick[r]];
        }
        std::fill_n(a.begin() + static_cast<std::ptrdiff_t>((n - 1) * n), n, 1.0);
        b[n - 1] = 1.0;
        if (!solve_dense(std::move(a), std::move(b), n, lambda)) {
            return;
        }
        for (std::size_t r = 0; r < bounds; ++r) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += a_rows[r][i] * lambda[i];
            }
            if (s - b_rows[r] < -kFeasTol * (1.0 + std::abs(b_rows[r]))) {
                return;
            }
        }
        std::fill(xs.begin(), xs.end(), 0.0);
        std::fill(ys.begin(), ys.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < g.m; ++j) {
                xs[j] += lambda[i] * d.inputs()(i, j);
            }
            for (std::size_t k = 0; k < g.p; ++k) {
                ys[k] += lambda[i] * d.outputs()(i, k);
            }
        }
        ++best.feasible_vertices;
        const auto e = eval_point(g, xs.data(), ys.data());
        if (e.objective > best.best_objective) {
            best.best_objective = e.objective;
            best.best_lambda = lambda;
        }
    };

    // Lexicographic enumeration of (n-1)-subsets of the bounds.
    if (n - 1 > bounds) {
        throw InfeasibleAtResolution("oracle: fewer bounds than needed for a vertex");
    }
    for (std::size_t r = 0; r + 1 < n; ++r) {
        pick[r] = r;
    }
    while (true) {
        try_basis();
        std::size_t r = n - 1;
        while (r > 0 && pick[r - 1] == bounds - (n - 1) + (r - 1)) {
            --r;
        }
        if (r == 0) {
            break;
        }
        ++pick[r - 1];
        for (std::size_t q = r; q + 1 < n; ++q) {
            pick[q] = pick[q - 1] + 1;
        }
    }

    if (best.feasible_vertices == 0) {
        throw InfeasibleAtResolution("oracle: no feasible vertex found");
    }
    return best;
}

Dataset random_instance(std::uint64_t seed, std::size_t n, std::size_t m, std::size_t p) {
    if (n == 0 || m == 0 || p == 0) {
        throw std::invalid_argument("random_instance: n, m, p must be >= 1");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> value(0.5, 10.5);
    std::vector<std::string> dmus, ins, outs;
    for (std::size_t i = 0; i < n; ++i) {
        dmus.push_back("DMU" + std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < m; ++j) {
        ins.push_back("x" + std::to_string(j + 1));
    }
    for (std::size_t k = 0; k < p; ++k) {
        outs.push_back("y" + std::to_string(k + 1));
    }
    Matrix x(n, m);
    Matrix y(n, p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            x(i, j) = value(rng);
        }
        for (std::size_t k = 0; k < p; ++k) {
            y(i, k) = value(rng);
        }
    }
    return Dataset(std::move(dmus), std::move(ins), std::move(outs), std::move(x), std::move(y));
}

} // namespace kam::oracle
