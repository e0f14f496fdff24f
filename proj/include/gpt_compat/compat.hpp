#pragma once

// Joint measurability of two effects on a polytopic state space.
//
// Two effects e, f are compatible iff some effect g satisfies
//     g <= e,   g <= f,   e + f <= g + u.
// Relaxing the last inequality to e + f <= g + lambda u and minimizing lambda
// gives lambda0; the minimum is attained, and the pair is incompatible exactly
// when lambda0 > 1. Every order relation between affine functionals on a
// polytope is decided at the vertices, so lambda0 is the value of an LP in the
// d + 2 unknowns (g coefficients, lambda).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gpt_compat/effect.hpp"
#include "gpt_compat/errors.hpp"
#include "gpt_compat/lp.hpp"
#include "gpt_compat/state_space.hpp"
#include "gpt_compat/tolerances.hpp"

namespace gpt_compat {

struct CompatReport {
    double lambda0 = 0.0;
    double sigma0 = 0.0;
    bool compatible = false;
    Effect witness; // optimal g
    std::size_t lp_iterations = 0;
    SolverTolerances tolerances;
};

namespace detail {

inline std::vector<double> affine_row(const Point& v) {
    std::vector<double> row(v.size() + 1);
    row[0] = 1.0;
    std::copy(v.begin(), v.end(), row.begin() + 1);
    return row;
}

inline void require_effect(const StateSpace& space, const Effect& e, const char* what,
                           const SolverTolerances& tol) {
    if (e.dimension() != space.dimension())
        throw InputError(std::string("effect ") + what + " has dimension " +
                         std::to_string(e.dimension()) + " but '" + space.name() +
                         "' has dimension " + std::to_string(space.dimension()));
    // Effects carry their validation from construction, possibly on another space.
    effect_from_affine(space, e.functional(), tol);
}

} // namespace detail

/// LP over (g_0, ..., g_d, lambda): minimize lambda subject to, at every vertex v,
/// g(v) >= 0, g(v) <= e(v), g(v) <= f(v), g(v) + lambda >= e(v) + f(v).
inline LpProblem compatibility_lp(const StateSpace& space, const Effect& e, const Effect& f) {
    const std::size_t n = space.dimension() + 2;
    LpProblem lp(n);
    lp.objective[n - 1] = 1.0;
    for (const auto& v : space.vertices()) {
        auto row = detail::affine_row(v);
        row.push_back(0.0);
        const double ev = e(v);
        const double fv = f(v);
        lp.add_constraint(row, Relation::GreaterEqual, 0.0);
        lp.add_constraint(row, Relation::LessEqual, ev);
        lp.add_constraint(row, Relation::LessEqual, fv);
        row.back() = 1.0;
        lp.add_constraint(std::move(row), Relation::GreaterEqual, ev + fv);
    }
    return lp;
}

/// The joint-measurability system at lambda = 1, over g alone:
/// 0 <= g(v), g(v) <= e(v), g(v) <= f(v), g(v) >= e(v) + f(v) - 1.
inline LpProblem joint_measurability_system(const StateSpace& space, const Effect& e,
                                            const Effect& f) {
    LpProblem lp(space.dimension() + 1);
    for (const auto& v : space.vertices()) {
        const auto row = detail::affine_row(v);
        const double ev = e(v);
        const double fv = f(v);
        lp.add_constraint(row, Relation::GreaterEqual, 0.0);
        lp.add_constraint(row, Relation::LessEqual, ev);
        lp.add_constraint(row, Relation::LessEqual, fv);
        lp.add_constraint(row, Relation::GreaterEqual, ev + fv - 1.0);
    }
    return lp;
}

/// 2(1 - 1/lambda0), clamped below at 0 for compatible pairs.
inline double sigma0(double lambda0) {
    if (!(lambda0 > 0.0))
        throw InputError("sigma0 needs a positive lambda0");
    return std::max(0.0, 2.0 * (1.0 - 1.0 / lambda0));
}

/// Solve for lambda0 and its optimal witness g.
inline CompatReport compute_lambda0(const StateSpace& space, const Effect& e, const Effect& f,
                                    const SolverTolerances& tol = {}) {
    tol.validate();
    detail::require_effect(space, e, "e", tol);
    detail::require_effect(space, f, "f", tol);

    const LpResult lp = solve_lp(compatibility_lp(space, e, f), tol);
    if (lp.status != LpStatus::Optimal)
        throw SolverError(std::string("lambda0 LP reported ") + to_string(lp.status) +
                          "; it is feasible and bounded by construction");

    const std::size_t d = space.dimension();
    std::vector<double> g(lp.point.begin(), lp.point.begin() + static_cast<long>(d + 1));
    CompatReport report{
        .lambda0 = lp.point[d + 1],
        .sigma0 = 0.0,
        .compatible = false,
        .witness = detail::EffectAccess::trusted(AffineFunctional(std::move(g))),
        .lp_iterations = lp.iterations,
        .tolerances = tol,
    };
    // A pair of effects has lambda0 <= 2; solver noise must not push sigma0 past 1.
    report.sigma0 = report.lambda0 > 0.0 ? std::min(1.0, sigma0(report.lambda0)) : 0.0;
    report.compatible = report.lambda0 <= 1.0 + tol.eps_compat;
    return report;
}

/// lambda0 <= 1 + eps_compat. With tol.cross_check set, also decides the
/// lambda = 1 system directly and throws SolverError if the verdicts differ
/// outside the eps_compat band.
inline bool is_compatible(const StateSpace& space, const Effect& e, const Effect& f,
                          const SolverTolerances& tol = {}) {
    const CompatReport report = compute_lambda0(space, e, f, tol);
    if (tol.cross_check) {
        const bool direct = check_feasible(joint_measurability_system(space, e, f), tol);
        const bool in_band = report.lambda0 > 1.0 && report.compatible;
        if (direct != report.compatible && !in_band) {
            std::ostringstream os;
            os.precision(17);
            os << "lambda0 = " << report.lambda0 << " disagrees with direct feasibility ("
               << (direct ? "feasible" : "infeasible") << ")";
            throw SolverError(os.str());
        }
    }
    return report.compatible;
}

/// Four-outcome joint observable {g, e - g, f - g, u - e - f + g} with outcomes
/// (1,1), (1,0), (0,1), (0,0). Its margins are e and f.
///
/// Throws ValidationError naming the violated inequality when g does not satisfy
/// 0 <= g, g <= e, g <= f, e + f <= g + u at some vertex (within eps_geom).
inline Observable joint_observable_from_witness(const StateSpace& space, const Effect& e,
                                                const Effect& f, const Effect& g,
                                                const SolverTolerances& tol = {}) {
    detail::require_effect(space, e, "e", tol);
    detail::require_effect(space, f, "f", tol);
    if (g.dimension() != space.dimension())
        throw InputError("witness g has the wrong dimension");

    const double eps = tol.eps_geom;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const auto& v = space.vertex(i);
        const double gv = g(v), ev = e(v), fv = f(v);
        const char* violated = nullptr;
        double by = 0.0;
        if (gv < -eps) {
            violated = "0 <= g";
            by = -gv;
        } else if (gv > ev + eps) {
            violated = "g <= e";
            by = gv - ev;
        } else if (gv > fv + eps) {
            violated = "g <= f";
            by = gv - fv;
        } else if (ev + fv > gv + 1.0 + eps) {
            violated = "e + f <= g + u";
            by = ev + fv - gv - 1.0;
        }
        if (violated) {
            std::ostringstream os;
            os << "witness violates " << violated << " at vertex " << i << ' '
               << detail::format_point(v) << " by " << by;
            throw ValidationError(os.str());
        }
    }

    const auto eg = e.functional();
    const auto fg = f.functional();
    const auto gg = g.functional();
    const auto u = AffineFunctional::unit(space.dimension());
    return Observable({"(1,1)", "(1,0)", "(0,1)", "(0,0)"},
                      {
                          effect_from_affine(space, gg, tol),
                          effect_from_affine(space, eg - gg, tol),
                          effect_from_affine(space, fg - gg, tol),
                          effect_from_affine(space, u - eg - fg + gg, tol),
                      });
}

/// Joint observable built from the lambda0-optimal witness, or nullopt when the
/// pair is incompatible. Inside the eps_compat band above 1 the witness misses
/// e + f <= g + u by at most lambda0 - 1, and the component checks are relaxed
/// by that amount.
inline std::optional<Observable> joint_observable(const StateSpace& space, const Effect& e,
                                                  const Effect& f,
                                                  const SolverTolerances& tol = {}) {
    const CompatReport report = compute_lambda0(space, e, f, tol);
    if (!report.compatible)
        return std::nullopt;
    SolverTolerances relaxed = tol;
    relaxed.eps_geom = std::max(tol.eps_geom, report.lambda0 - 1.0 + tol.eps_geom);
    return joint_observable_from_witness(space, e, f, report.witness, relaxed);
}

/// Column-stochastic 2x2 kernel acting on a dichotomic observable.
struct MarkovKernel2x2 {
    double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

    void validate(double eps = 1e-12) const {
        for (double m : {m11, m12, m21, m22})
            if (!(m >= -eps && m <= 1.0 + eps))
                throw InputError("Markov kernel entries must lie in [0, 1]");
        if (std::abs(m11 + m21 - 1.0) > eps || std::abs(m12 + m22 - 1.0) > eps)
            throw InputError("Markov kernel columns must sum to 1");
    }

    friend bool operator==(const MarkovKernel2x2&, const MarkovKernel2x2&) = default;
};

/// {1/k, 0, 1 - 1/k, 1}: maps e to e/k. k = 1 is the identity.
inline MarkovKernel2x2 scaling_kernel(double k) {
    if (!(k >= 1.0) || !std::isfinite(k))
        throw InputError("scaling kernel needs a finite k >= 1");
    const double inv = 1.0 / k;
    return {inv, 0.0, 1.0 - inv, 1.0};
}

/// Doubly stochastic kernel with diagonal (1 + t)/2: maps e to t e + (1 - t) u/2.
inline MarkovKernel2x2 depolarizing_kernel(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw InputError("depolarizing kernel needs t in [0, 1]");
    const double keep = 0.5 * (1.0 + t);
    const double flip = 0.5 * (1.0 - t);
    return {keep, flip, flip, keep};
}

/// {m11 e + m12 e', m21 e + m22 e'} for obs = {e, e'}.
inline Observable smear(const Observable& obs, const MarkovKernel2x2& kernel) {
    kernel.validate();
    if (obs.size() != 2)
        throw InputError("smearing needs a two-outcome observable");
    const auto e = obs[0].functional();
    const auto e_prime = obs[1].functional();
    auto first = kernel.m11 * e;
    if (kernel.m12 != 0.0)
        first += kernel.m12 * e_prime;
    auto second = kernel.m22 * e_prime;
    if (kernel.m21 != 0.0)
        second += kernel.m21 * e;
    return Observable(obs.outcomes, {detail::EffectAccess::trusted(std::move(first)),
                                     detail::EffectAccess::trusted(std::move(second))});
}

/// t e + (1 - t) u/2
inline Effect depolarized(const Effect& e, double t) {
    return smear(dichotomic(e), depolarizing_kernel(t))[0];
}

/// The least k >= 1 making e/k and f/k compatible, i.e. max(1, lambda0).
///
/// Confirms e/k* and f/k* are compatible and that e/k, f/k are not at three
/// interior points of (1, k*); throws SolverError if either check fails.
/// Interior samples whose expected lambda0 falls within eps_compat of 1 are
/// skipped since the tolerance band makes their verdict indeterminate.
inline double min_scaling_noise(const StateSpace& space, const Effect& e, const Effect& f,
                                const SolverTolerances& tol = {}) {
    const double lambda0 = compute_lambda0(space, e, f, tol).lambda0;
    if (lambda0 <= 1.0)
        return 1.0;
    const double k_star = lambda0;
    if (!is_compatible(space, scaled(e, 1.0 / k_star), scaled(f, 1.0 / k_star), tol))
        throw SolverError("e/lambda0 and f/lambda0 tested incompatible");
    for (int j = 1; j <= 3; ++j) {
        const double k = 1.0 + j * (k_star - 1.0) / 4.0;
        if (lambda0 / k <= 1.0 + 2.0 * tol.eps_compat)
            continue;
        if (is_compatible(space, scaled(e, 1.0 / k), scaled(f, 1.0 / k), tol))
            throw SolverError("e/k and f/k tested compatible below k = lambda0");
    }
    return k_star;
}

/// Largest t in [0, 1] with t e + (1-t) u/2 and t f + (1-t) u/2 compatible,
/// by bisection on is_compatible. Accurate to 2^-bisection_steps.
inline double min_depolarizing_noise(const StateSpace& space, const Effect& e, const Effect& f,
                                     const SolverTolerances& tol = {}, int bisection_steps = 60) {
    if (bisection_steps < 1)
        throw InputError("bisection_steps must be at least 1");
    if (is_compatible(space, e, f, tol))
        return 1.0;
    double lo = 0.0; // u/2, u/2 are compatible (g = u/2)
    double hi = 1.0;
    for (int step = 0; step < bisection_steps; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (is_compatible(space, depolarized(e, mid), depolarized(f, mid), tol))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

} // namespace gpt_compat
