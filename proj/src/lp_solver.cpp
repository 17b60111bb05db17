#include "kam/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "kam/error.hpp"
#include "kam/matrix.hpp"

namespace kam::lp {

std::string_view to_string(Status s) noexcept {
    switch (s) {
        case Status::Optimal:    return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded:  return "unbounded";
    }
    return "unknown";
}

namespace {

void check_contract(const LinearProgram &lp) {
    const auto finite = [](const std::vector<double> &v) {
        return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
    };
    if (lp.objective.size() != lp.num_vars) {
        throw std::invalid_argument("lp::solve: objective has " + std::to_string(lp.objective.size()) +
                                    " coefficients, expected " + std::to_string(lp.num_vars));
    }
    if (!finite(lp.objective)) {
        throw std::invalid_argument("lp::solve: non-finite objective coefficient");
    }
    for (const auto *group : {&lp.equalities, &lp.lower_bounded}) {
        for (const auto &c : *group) {
            if (c.coefficients.size() != lp.num_vars) {
                throw std::invalid_argument("lp::solve: constraint has " + std::to_string(c.coefficients.size()) +
                                            " coefficients, expected " + std::to_string(lp.num_vars));
            }
            if (!finite(c.coefficients) || !std::isfinite(c.rhs)) {
                throw std::invalid_argument("lp::solve: non-finite constraint entry");
            }
        }
    }
}

// Standard form A z = b, z >= 0 over the structural variables followed by one
// surplus variable per lower-bounded row. Rows are sign-normalized so b >= 0.
struct StandardForm {
    Matrix a;
    std::vector<double> b;
    std::vector<double> cost;
    std::size_t structural = 0;
};

StandardForm to_standard_form(const LinearProgram &lp) {
    const std::size_t rows = lp.equalities.size() + lp.lower_bounded.size();
    const std::size_t cols = lp.num_vars + lp.lower_bounded.size();
    StandardForm sf{Matrix(rows, cols), std::vector<double>(rows), std::vector<double>(cols, 0.0), lp.num_vars};
    std::copy(lp.objective.begin(), lp.objective.end(), sf.cost.begin());

    std::size_t r = 0;
    const auto put = [&](const Constraint &c, std::optional<std::size_t> surplus) {
        const double sign = c.rhs < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            sf.a(r, j) = sign * c.coefficients[j];
        }
        if (surplus) {
            sf.a(r, *surplus) = -sign;
        }
        sf.b[r] = sign * c.rhs;
        ++r;
    };
    for (const auto &c : lp.equalities) {
        put(c, std::nullopt);
    }
    for (std::size_t g = 0; g < lp.lower_bounded.size(); ++g) {
        put(lp.lower_bounded[g], lp.num_vars + g);
    }
    return sf;
}

class Tableau {
public:
    // Columns: standard-form variables, then one artificial per row, then rhs.
    explicit Tableau(const StandardForm &sf)
        : rows_(sf.a.rows()),
          vars_(sf.a.cols()),
          width_(vars_ + rows_ + 1),
          t_(rows_, width_),
          z_(width_, 0.0),
          basis_(rows_),
          active_(rows_, true) {
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t j = 0; j < vars_; ++j) {
                t_(r, j) = sf.a(r, j);
            }
            t_(r, vars_ + r) = 1.0;
            t_(r, rhs()) = sf.b[r];
            basis_[r] = vars_ + r;
        }
    }

    std::size_t rhs() const { return width_ - 1; }
    bool is_artificial(std::size_t col) const { return col >= vars_ && col < vars_ + rows_; }

    // Loads reduced costs for `cost` (defined over all non-rhs columns).
    void load_objective(const std::vector<double> &cost) {
        for (std::size_t j = 0; j < width_; ++j) {
            z_[j] = j < cost.size() ? cost[j] : 0.0;
        }
        z_[rhs()] = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (!active_[r]) {
                continue;
            }
            const double cb = basis_[r] < cost.size() ? cost[basis_[r]] : 0.0;
            if (cb == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < width_; ++j) {
                z_[j] -= cb * t_(r, j);
            }
        }
    }

    // Current objective value of the loaded cost vector.
    double objective() const { return -z_[rhs()]; }

    enum class Step { Optimal, Unbounded, Pivoted };

    // One Bland's-rule iteration: smallest improving column enters, smallest
    // basic index leaves among ratio ties.
    Step step(bool allow_artificial, const SolverOptions &opt) {
        std::optional<std::size_t> enter;
        for (std::size_t j = 0; j + 1 < width_; ++j) {
            if (!allow_artificial && is_artificial(j)) {
                continue;
            }
            if (z_[j] > opt.optimality_tolerance) {
                enter = j;
                break;
            }
        }
        if (!enter) {
            return Step::Optimal;
        }

        std::optional<std::size_t> leave;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < rows_; ++r) {
            if (!active_[r]) {
                continue;
            }
            const double a = t_(r, *enter);
            if (a <= opt.pivot_tolerance) {
                continue;
            }
            const double ratio = std::max(t_(r, rhs()), 0.0) / a;
            const double tie = 1e-12 * (1.0 + std::abs(best_ratio));
            if (!leave || ratio < best_ratio - tie) {
                leave = r;
                best_ratio = ratio;
            } else if (ratio <= best_ratio + tie && basis_[r] < basis_[*leave]) {
                leave = r;
                best_ratio = std::min(best_ratio, ratio);
            }
        }
        if (!leave) {
            return Step::Unbounded;
        }
        pivot(*leave, *enter);
        return Step::Pivoted;
    }

    void pivot(std::size_t row, std::size_t col) {
        const double p = t_(row, col);
        auto pr = t_.row(row);
        for (double &v : pr) {
            v /= p;
        }
        pr[col] = 1.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            if (r == row || !active_[r]) {
                continue;
            }
            const double f = t_(r, col);
            if (f == 0.0) {
                continue;
            }
            auto rr = t_.row(r);
            for (std::size_t j = 0; j < width_; ++j) {
                rr[j] -= f * pr[j];
            }
            rr[col] = 0.0;
        }
        const double f = z_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j < width_; ++j) {
                z_[j] -= f * pr[j];
            }
            z_[col] = 0.0;
        }
        basis_[row] = col;
    }

    // After phase 1: pivots zero-level artificials out of the basis; rows whose
    // structural part has vanished are redundant and get deactivated.
    void expel_artificials(const SolverOptions &opt) {
        for (std::size_t r = 0; r < rows_; ++r) {
            if (!active_[r] || !is_artificial(basis_[r])) {
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < vars_; ++j) {
                if (std::abs(t_(r, j)) > opt.pivot_tolerance * 100.0) {
                    col = j;
                    break;
                }
            }
            if (col) {
                pivot(r, *col);
            } else {
                active_[r] = false;
            }
        }
    }

    std::size_t rows() const { return rows_; }
    bool active(std::size_t r) const { return active_[r]; }
    std::size_t basic(std::size_t r) const { return basis_[r]; }
    double value(std::size_t r) const { return t_(r, rhs()); }

private:
    std::size_t rows_;
    std::size_t vars_;
    std::size_t width_;
    Matrix t_;
    std::vector<double> z_;
    std::vector<std::size_t> basis_;
    std::vector<bool> active_;
};

// Solves the square system m·v = rhs by Gaussian elimination with partial
// pivoting. Returns nullopt when m is numerically singular.
std::optional<std::vector<double>> solve_square(Matrix m, std::vector<double> rhs) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(m(r, c)) > std::abs(m(piv, c))) {
                piv = r;
            }
        }
        if (std::abs(m(piv, c)) < 1e-13) {
            return std::nullopt;
        }
        if (piv != c) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(m(piv, j), m(c, j));
            }
            std::swap(rhs[piv], rhs[c]);
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m(r, c) / m(c, c);
            if (f == 0.0) {
                continue;
            }
            for (std::size_t j = c; j < n; ++j) {
                m(r, j) -= f * m(c, j);
            }
            rhs[r] -= f * rhs[c];
        }
    }
    std::vector<double> v(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = rhs[c];
        for (std::size_t j = c + 1; j < n; ++j) {
            s -= m(c, j) * v[j];
        }
        v[c] = s / m(c, c);
    }
    return v;
}

// Recomputes the basic variables from the original data for the final basis.
std::vector<double> refine_basic_solution(const StandardForm &sf, const Tableau &t) {
    std::vector<double> z(sf.a.cols(), 0.0);
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cols;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        if (t.active(r)) {
            rows.push_back(r);
            cols.push_back(t.basic(r));
            z[t.basic(r)] = t.value(r);
        }
    }
    Matrix b(rows.size(), rows.size());
    std::vector<double> rhs(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            b(i, k) = sf.a(rows[i], cols[k]);
        }
        rhs[i] = sf.b[rows[i]];
    }
    if (const auto refined = solve_square(std::move(b), std::move(rhs))) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            z[cols[k]] = (*refined)[k];
        }
    }
    return z;
}

} // namespace

Outcome solve(const LinearProgram &lp, const SolverOptions &options) {
    check_contract(lp);

    const StandardForm sf = to_standard_form(lp);
    Tableau t(sf);
    const std::size_t vars = sf.a.cols();
    const std::size_t limit =
        options.max_iterations ? options.max_iterations : 50 * (sf.a.rows() + vars + sf.a.rows() + 1) + 1000;

    Outcome out;
    out.values.assign(lp.num_vars, 0.0);

    const auto run = [&](bool allow_artificial) {
        while (true) {
            const auto s = t.step(allow_artificial, options);
            if (s != Tableau::Step::Pivoted) {
                return s;
            }
            if (++out.iterations > limit) {
                throw SolverError("lp::solve: iteration limit of " + std::to_string(limit) + " exceeded");
            }
        }
    };

    // Phase 1: maximize -sum(artificials).
    std::vector<double> phase1(vars + sf.a.rows(), 0.0);
    std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(vars), phase1.end(), -1.0);
    t.load_objective(phase1);
    run(true);
    double b_scale = 1.0;
    for (const double b : sf.b) {
        b_scale = std::max(b_scale, std::abs(b));
    }
    if (-t.objective() > options.feasibility_tolerance * b_scale) {
        out.status = Status::Infeasible;
        return out;
    }
    t.expel_artificials(options);

    // Phase 2.
    t.load_objective(sf.cost);
    if (run(false) == Tableau::Step::Unbounded) {
        out.status = Status::Unbounded;
        return out;
    }

    const auto z = refine_basic_solution(sf, t);
    out.status = Status::Optimal;
    for (std::size_t j = 0; j < lp.num_vars; ++j) {
        const double v = z[j];
        out.values[j] = (v < 0.0 && v > -options.feasibility_tolerance) ? 0.0 : v;
        out.objective_value += lp.objective[j] * out.values[j];
    }
    return out;
}

double max_violation(const LinearProgram &lp, const std::vector<double> &values) {
    if (values.size() != lp.num_vars) {
        throw std::invalid_argument("lp::max_violation: value vector has the wrong length");
    }
    double worst = 0.0;
    for (const double v : values) {
        worst = std::max(worst, -v);
    }
    const auto dot = [&](const Constraint &c) {
        double s = 0.0;
        for (std::size_t j = 0; j < lp.num_vars; ++j) {
            s += c.coefficients[j] * values[j];
        }
        return s;
    };
    for (const auto &c : lp.equalities) {
        worst = std::max(worst, std::abs(dot(c) - c.rhs));
    }
    for (const auto &c : lp.lower_bounded) {
        worst = std::max(worst, c.rhs - dot(c));
    }
    return worst;
}

} // namespace kam::lp
