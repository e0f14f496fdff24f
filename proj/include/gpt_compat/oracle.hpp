#pragma once

// Reference values for lambda0 that never touch the simplex solver: a closed
// form on simplices and brute-force enumeration of affine witnesses on a grid.
// Test and CI use only.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpt_compat/compat.hpp"
#include "gpt_compat/effect.hpp"
#include "gpt_compat/errors.hpp"
#include "gpt_compat/state_space.hpp"

namespace gpt_compat::oracle {

/// On a simplex the best witness takes vertex values min(e_i, f_i), so
/// lambda0 = max_i max(e_i, f_i). Values may stray from [0, 1] by `eps`.
inline double simplex_lambda0_closed_form(const std::vector<double>& e_values,
                                          const std::vector<double>& f_values,
                                          double eps = 1e-9) {
    if (e_values.size() != f_values.size())
        throw InputError("closed form needs equally many e and f values");
    if (e_values.empty())
        throw InputError("closed form needs at least one vertex value");
    double best = 0.0;
    for (std::size_t i = 0; i < e_values.size(); ++i) {
        for (double x : {e_values[i], f_values[i]}) {
            if (!(x >= -eps && x <= 1.0 + eps))
                throw InputError("closed form needs vertex values in [0, 1]");
            best = std::max(best, std::clamp(x, 0.0, 1.0));
        }
    }
    return best;
}

struct GridResult {
    double value = std::numeric_limits<double>::infinity(); // min over feasible grid witnesses
    double lower_bound = 0.0;                                // max_v max(e(v), f(v))
    double step = 0.0;                                       // coefficient spacing
    double box = 1.0;                                        // half-width of the coefficient box
    bool box_expanded = false;
    std::size_t candidates = 0;
    std::size_t feasible = 0;
};

inline constexpr std::size_t max_grid_dimension = 3;

/// Enumerate g = (c0, ..., cd) on a uniform grid over [-B, B]^{d+1} with
/// `resolution` points per axis, keep those with 0 <= g(v) <= min(e(v), f(v))
/// at every vertex, and minimize max_v (e(v) + f(v) - g(v)).
///
/// B starts at 1 and grows to cover the least-squares affine fit of the
/// pointwise minimum min(e, f); growth is flagged in box_expanded. The grid
/// value bounds lambda0 from above and lower_bound bounds it from below.
inline GridResult grid_lambda0(const StateSpace& space, const Effect& e, const Effect& f,
                               int resolution, double eps = 1e-9) {
    const std::size_t d = space.dimension();
    if (d > max_grid_dimension)
        throw InputError("grid oracle supports dimension <= 3, got " + std::to_string(d));
    if (resolution < 2)
        throw InputError("grid resolution must be at least 2");
    if (e.dimension() != d || f.dimension() != d)
        throw InputError("effect dimension does not match the state space");

    const std::size_t k = space.size();
    const auto e_vals = e.vertex_values(space);
    const auto f_vals = f.vertex_values(space);
    std::vector<double> cap(k), total(k);
    GridResult out;
    for (std::size_t i = 0; i < k; ++i) {
        cap[i] = std::min(e_vals[i], f_vals[i]);
        total[i] = e_vals[i] + f_vals[i];
        out.lower_bound = std::max({out.lower_bound, e_vals[i], f_vals[i]});
    }

    {
        Eigen::MatrixXd a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(d + 1));
        Eigen::VectorXd b(static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i) {
            a(static_cast<Eigen::Index>(i), 0) = 1.0;
            for (std::size_t j = 0; j < d; ++j)
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) =
                    space.vertex(i)[j];
            b(static_cast<Eigen::Index>(i)) = cap[i];
        }
        const Eigen::VectorXd fit = a.completeOrthogonalDecomposition().solve(b);
        const double reach = fit.cwiseAbs().maxCoeff();
        if (reach > out.box) {
            out.box = reach;
            out.box_expanded = true;
        }
    }

    const auto r = static_cast<std::size_t>(resolution);
    out.step = 2.0 * out.box / static_cast<double>(r - 1);
    std::vector<double> axis(r);
    for (std::size_t i = 0; i < r; ++i)
        axis[i] = -out.box + out.step * static_cast<double>(i);
    // Put exact zero on the grid when an odd resolution straddles it.
    if (r % 2 == 1)
        axis[r / 2] = 0.0;

    // Odometer over (d+1)-tuples of grid indices.
    std::vector<std::size_t> index(d + 1, 0);
    for (;;) {
        ++out.candidates;
        bool ok = true;
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k && ok; ++i) {
            double value = axis[index[0]];
            for (std::size_t j = 0; j < d; ++j)
                value += axis[index[j + 1]] * space.vertex(i)[j];
            ok = value >= -eps && value <= cap[i] + eps;
            worst = std::max(worst, total[i] - value);
        }
        if (ok) {
            ++out.feasible;
            out.value = std::min(out.value, worst);
        }
        std::size_t pos = 0;
        while (pos <= d && ++index[pos] == r)
            index[pos++] = 0;
        if (pos > d)
            break;
    }
    return out;
}

struct CrossCheckReport {
    double lp_lambda0 = 0.0;
    GridResult grid;
    std::optional<double> closed_form; // simplices only
    std::vector<std::string> discrepancies;
    bool ok() const { return discrepancies.empty(); }
};

/// Compare the LP value against the grid sandwich and, on simplices, the closed
/// form. Discrepancies are reported, not thrown.
inline CrossCheckReport cross_check(const StateSpace& space, const Effect& e, const Effect& f,
                                    const SolverTolerances& tol = {}, int resolution = 51) {
    CrossCheckReport report;
    auto note = [&](const std::string& what, double a, double b) {
        std::ostringstream os;
        os.precision(12);
        os << what << ": " << a << " vs " << b;
        report.discrepancies.push_back(os.str());
    };

    report.lp_lambda0 = compute_lambda0(space, e, f, tol).lambda0;
    report.grid = grid_lambda0(space, e, f, resolution, tol.eps_geom);
    if (report.lp_lambda0 < report.grid.lower_bound - tol.eps_opt)
        note("LP lambda0 below the pointwise lower bound", report.lp_lambda0,
             report.grid.lower_bound);
    if (report.lp_lambda0 > report.grid.value + report.grid.step)
        note("LP lambda0 above grid value + step", report.lp_lambda0,
             report.grid.value + report.grid.step);
    if (is_simplex(space)) {
        report.closed_form =
            simplex_lambda0_closed_form(e.vertex_values(space), f.vertex_values(space),
                                        tol.eps_geom);
        if (std::abs(report.lp_lambda0 - *report.closed_form) > tol.eps_opt)
            note("LP lambda0 differs from the simplex closed form", report.lp_lambda0,
                 *report.closed_form);
    }
    return report;
}

} // namespace gpt_compat::oracle
