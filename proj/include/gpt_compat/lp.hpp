#pragma once

// Dense two-phase simplex solver.
//
// Problems are stated as: minimize c.x subject to rows a.x {<=, >=, =} b and
// optional per-variable bounds. Internally every variable is shifted/split to
// be nonnegative, rows are normalized to a nonnegative right-hand side, and a
// phase-one problem over artificial variables finds an initial basis. Both
// phases pivot with Bland's rule (lowest eligible index enters, ties in the
// ratio test go to the lowest basic index), so degenerate problems terminate.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gpt_compat/errors.hpp"
#include "gpt_compat/tolerances.hpp"

namespace gpt_compat {

enum class Relation { LessEqual, GreaterEqual, Equal };

struct LpConstraint {
    std::vector<double> coeffs;
    Relation relation = Relation::LessEqual;
    double rhs = 0.0;
};

class LpProblem {
public:
    explicit LpProblem(std::size_t num_variables)
        : objective(num_variables, 0.0), lower(num_variables), upper(num_variables) {}

    std::vector<double> objective; // minimized
    std::vector<LpConstraint> constraints;
    std::vector<std::optional<double>> lower;
    std::vector<std::optional<double>> upper;

    std::size_t num_variables() const { return objective.size(); }
    std::size_t num_constraints() const { return constraints.size(); }

    void add_constraint(std::vector<double> coeffs, Relation relation, double rhs) {
        constraints.push_back({std::move(coeffs), relation, rhs});
    }

    void set_bounds(std::size_t j, std::optional<double> lo, std::optional<double> hi) {
        lower.at(j) = lo;
        upper.at(j) = hi;
    }

    void validate() const {
        const std::size_t n = num_variables();
        if (n == 0)
            throw InputError("LP needs at least one variable");
        if (lower.size() != n || upper.size() != n)
            throw InputError("LP bound vectors do not match the variable count");
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            const auto& row = constraints[i];
            if (row.coeffs.size() != n)
                throw InputError("LP row " + std::to_string(i) + " has length " +
                                 std::to_string(row.coeffs.size()) + ", expected " +
                                 std::to_string(n));
            if (!std::isfinite(row.rhs) ||
                !std::all_of(row.coeffs.begin(), row.coeffs.end(),
                             [](double a) { return std::isfinite(a); }))
                throw InputError("LP row " + std::to_string(i) + " has a non-finite entry");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (lower[j] && upper[j] && *lower[j] > *upper[j])
                throw InputError("LP variable " + std::to_string(j) +
                                 " has lower bound above upper bound");
        }
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

inline const char* to_string(LpStatus s) {
    switch (s) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    }
    return "?";
}

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    double value = std::numeric_limits<double>::quiet_NaN(); // Optimal only
    std::vector<double> point;                               // Optimal only
    std::size_t iterations = 0;
};

namespace detail {

// x_j = shift + sign * y[pos] - y[neg]  (neg < 0 when absent)
struct VariableMap {
    double shift = 0.0;
    double sign = 1.0;
    long pos = -1;
    long neg = -1;
};

class Tableau {
public:
    static constexpr double pivot_tol = 1e-12;

    Tableau(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_((rows + 1) * (cols + 1), 0.0), basis_(rows, 0) {}

    double& at(std::size_t i, std::size_t j) { return data_[i * (cols_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return data_[i * (cols_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, cols_); }
    double rhs(std::size_t i) const { return at(i, cols_); }
    // Objective row holds reduced costs; its rhs slot holds -z.
    double& cost(std::size_t j) { return at(rows_, j); }
    double cost(std::size_t j) const { return at(rows_, j); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::vector<std::size_t>& basis() { return basis_; }
    const std::vector<std::size_t>& basis() const { return basis_; }

    void pivot(std::size_t r, std::size_t s) {
        const double inv = 1.0 / at(r, s);
        for (std::size_t j = 0; j <= cols_; ++j)
            at(r, j) *= inv;
        at(r, s) = 1.0;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == r)
                continue;
            const double factor = at(i, s);
            if (factor == 0.0)
                continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                at(i, j) -= factor * at(r, j);
            at(i, s) = 0.0;
        }
        basis_[r] = s;
    }

    // Reprice the objective row for cost vector c over the current basis.
    void set_objective(const std::vector<double>& c) {
        for (std::size_t j = 0; j <= cols_; ++j)
            cost(j) = j < cols_ ? c[j] : 0.0;
        for (std::size_t i = 0; i < rows_; ++i) {
            const double cb = c[basis_[i]];
            if (cb == 0.0)
                continue;
            for (std::size_t j = 0; j <= cols_; ++j)
                cost(j) -= cb * at(i, j);
        }
    }

    void remove_row(std::size_t r) {
        std::vector<double> next((rows_) * (cols_ + 1));
        std::size_t w = 0;
        for (std::size_t i = 0; i <= rows_; ++i) {
            if (i == r)
                continue;
            std::copy_n(&data_[i * (cols_ + 1)], cols_ + 1, &next[w * (cols_ + 1)]);
            ++w;
        }
        data_ = std::move(next);
        basis_.erase(basis_.begin() + static_cast<long>(r));
        --rows_;
    }

    enum class Outcome { Optimal, Unbounded };

    // Primal simplex on the current objective row. Columns at or beyond
    // `column_limit` never enter.
    Outcome run(std::size_t column_limit, double eps_opt, std::size_t& iterations,
                std::size_t max_iterations) {
        for (;;) {
            std::size_t entering = column_limit;
            for (std::size_t j = 0; j < column_limit; ++j) {
                if (cost(j) < -eps_opt) {
                    entering = j;
                    break;
                }
            }
            if (entering == column_limit)
                return Outcome::Optimal;

            std::size_t leaving = rows_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_; ++i) {
                const double a = at(i, entering);
                if (a <= pivot_tol)
                    continue;
                const double ratio = std::max(rhs(i), 0.0) / a;
                if (leaving == rows_) {
                    best = ratio;
                    leaving = i;
                    continue;
                }
                const double slack = 1e-12 * (1.0 + best);
                if (ratio < best - slack ||
                    (ratio <= best + slack && basis_[i] < basis_[leaving])) {
                    best = std::min(best, ratio);
                    leaving = i;
                }
            }
            if (leaving == rows_)
                return Outcome::Unbounded;

            if (++iterations > max_iterations)
                throw SolverError("simplex iteration limit (" + std::to_string(max_iterations) +
                                  ") exceeded");
            pivot(leaving, entering);
        }
    }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
    std::vector<std::size_t> basis_;
};

inline double row_residual(const LpConstraint& row, const std::vector<double>& x) {
    double lhs = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j)
        lhs += row.coeffs[j] * x[j];
    switch (row.relation) {
    case Relation::LessEqual: return std::max(0.0, lhs - row.rhs);
    case Relation::GreaterEqual: return std::max(0.0, row.rhs - lhs);
    case Relation::Equal: return std::abs(lhs - row.rhs);
    }
    return 0.0;
}

struct SolveOptions {
    bool feasibility_only = false;
    std::size_t iteration_limit = 0; // 0: 10000 * (m + n)
};

inline LpResult solve(const LpProblem& problem, const SolverTolerances& tol, SolveOptions opts) {
    problem.validate();
    tol.validate();

    const std::size_t n = problem.num_variables();
    const std::size_t m = problem.num_constraints();
    const std::size_t max_iterations =
        opts.iteration_limit ? opts.iteration_limit : 10000 * (m + n);

    // Map original variables onto nonnegative ones.
    std::vector<VariableMap> vars(n);
    std::vector<LpConstraint> rows;
    std::size_t ny = 0;
    for (std::size_t j = 0; j < n; ++j) {
        auto& v = vars[j];
        const auto& lo = problem.lower[j];
        const auto& hi = problem.upper[j];
        v.pos = static_cast<long>(ny++);
        if (lo) {
            v.shift = *lo;
        } else if (hi) {
            v.shift = *hi;
            v.sign = -1.0;
        } else {
            v.neg = static_cast<long>(ny++);
        }
    }
    auto to_y = [&](const std::vector<double>& a, double& rhs_shift) {
        std::vector<double> out(ny, 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            const auto& v = vars[j];
            rhs_shift += a[j] * v.shift;
            out[static_cast<std::size_t>(v.pos)] += a[j] * v.sign;
            if (v.neg >= 0)
                out[static_cast<std::size_t>(v.neg)] -= a[j];
        }
        return out;
    };
    for (const auto& row : problem.constraints) {
        double shift = 0.0;
        auto coeffs = to_y(row.coeffs, shift);
        rows.push_back({std::move(coeffs), row.relation, row.rhs - shift});
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (problem.lower[j] && problem.upper[j]) {
            std::vector<double> coeffs(ny, 0.0);
            coeffs[static_cast<std::size_t>(vars[j].pos)] = 1.0;
            rows.push_back({std::move(coeffs), Relation::LessEqual,
                            *problem.upper[j] - *problem.lower[j]});
        }
    }

    // Nonnegative right-hand sides; a ">= 0" row becomes "<= 0" so it gets a
    // slack instead of an artificial.
    for (auto& row : rows) {
        const bool flip = row.rhs < 0.0 || (row.rhs == 0.0 && row.relation == Relation::GreaterEqual);
        if (!flip)
            continue;
        row.rhs = -row.rhs;
        for (auto& a : row.coeffs)
            a = -a;
        if (row.relation == Relation::LessEqual)
            row.relation = Relation::GreaterEqual;
        else if (row.relation == Relation::GreaterEqual)
            row.relation = Relation::LessEqual;
    }

    std::size_t num_slack = 0;
    std::size_t num_artificial = 0;
    for (const auto& row : rows) {
        if (row.relation != Relation::Equal)
            ++num_slack;
        if (row.relation != Relation::LessEqual)
            ++num_artificial;
    }
    const std::size_t artificial_begin = ny + num_slack;
    const std::size_t cols = artificial_begin + num_artificial;

    Tableau t(rows.size(), cols);
    double b_scale = 1.0;
    {
        std::size_t s = ny;
        std::size_t a = artificial_begin;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            for (std::size_t j = 0; j < ny; ++j)
                t.at(i, j) = row.coeffs[j];
            t.rhs(i) = row.rhs;
            b_scale = std::max(b_scale, std::abs(row.rhs));
            switch (row.relation) {
            case Relation::LessEqual:
                t.at(i, s) = 1.0;
                t.basis()[i] = s++;
                break;
            case Relation::GreaterEqual:
                t.at(i, s++) = -1.0;
                t.at(i, a) = 1.0;
                t.basis()[i] = a++;
                break;
            case Relation::Equal:
                t.at(i, a) = 1.0;
                t.basis()[i] = a++;
                break;
            }
        }
    }

    LpResult result;

    // Phase one: minimize the sum of artificials.
    if (num_artificial > 0) {
        std::vector<double> c1(cols, 0.0);
        std::fill(c1.begin() + static_cast<long>(artificial_begin), c1.end(), 1.0);
        t.set_objective(c1);
        t.run(cols, tol.eps_opt, result.iterations, max_iterations);
        const double infeasibility = -t.rhs(t.rows());
        if (infeasibility > tol.eps_feas * b_scale) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Drive remaining (zero-valued) artificials out of the basis; rows
        // where that is impossible are redundant.
        for (std::size_t i = 0; i < t.rows();) {
            if (t.basis()[i] < artificial_begin) {
                ++i;
                continue;
            }
            std::size_t j = 0;
            while (j < artificial_begin && std::abs(t.at(i, j)) <= Tableau::pivot_tol)
                ++j;
            if (j < artificial_begin) {
                t.pivot(i, j);
                ++i;
            } else {
                t.remove_row(i);
            }
        }
    }

    std::vector<double> c2(cols, 0.0);
    if (!opts.feasibility_only) {
        double unused_shift = 0.0;
        auto cy = to_y(problem.objective, unused_shift);
        std::copy(cy.begin(), cy.end(), c2.begin());
    }
    t.set_objective(c2);
    if (t.run(artificial_begin, tol.eps_opt, result.iterations, max_iterations) ==
        Tableau::Outcome::Unbounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    std::vector<double> y(cols, 0.0);
    for (std::size_t i = 0; i < t.rows(); ++i)
        y[t.basis()[i]] = t.rhs(i);
    result.point.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const auto& v = vars[j];
        double x = v.shift + v.sign * y[static_cast<std::size_t>(v.pos)];
        if (v.neg >= 0)
            x -= y[static_cast<std::size_t>(v.neg)];
        result.point[j] = x;
    }
    result.value = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        result.value += problem.objective[j] * result.point[j];

    for (std::size_t i = 0; i < problem.constraints.size(); ++i) {
        const double r = row_residual(problem.constraints[i], result.point);
        if (r > tol.eps_feas * b_scale)
            throw SolverError("simplex returned a point violating row " + std::to_string(i) +
                              " by " + std::to_string(r));
    }
    result.status = LpStatus::Optimal;
    return result;
}

} // namespace detail

/// Minimize problem.objective over the constraint set.
///
/// Returns Infeasible/Unbounded as statuses; throws InputError for malformed
/// problems and SolverError when the iteration cap of 10000*(m+n) pivots is
/// exceeded.
inline LpResult solve_lp(const LpProblem& problem, const SolverTolerances& tol = {}) {
    return detail::solve(problem, tol, {});
}

/// Phase one only: does the constraint system admit a point?
inline bool check_feasible(const LpProblem& problem, const SolverTolerances& tol = {}) {
    return detail::solve(problem, tol, {.feasibility_only = true}).status == LpStatus::Optimal;
}

} // namespace gpt_compat
