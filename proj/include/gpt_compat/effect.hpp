#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gpt_compat/errors.hpp"
#include "gpt_compat/state_space.hpp"
#include "gpt_compat/tolerances.hpp"

namespace gpt_compat {

/// f(x) = c0 + c1 x1 + ... + cd xd, stored as (c0, c1, ..., cd).
class AffineFunctional {
public:
    AffineFunctional() = default;
    explicit AffineFunctional(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
        if (coeffs_.empty())
            throw InputError("an affine functional needs at least the constant coefficient");
    }

    static AffineFunctional constant(std::size_t dimension, double value) {
        std::vector<double> c(dimension + 1, 0.0);
        c[0] = value;
        return AffineFunctional(std::move(c));
    }
    static AffineFunctional unit(std::size_t dimension) { return constant(dimension, 1.0); }
    static AffineFunctional zero(std::size_t dimension) { return constant(dimension, 0.0); }

    std::size_t dimension() const { return coeffs_.size() - 1; }
    const std::vector<double>& coefficients() const { return coeffs_; }

    double operator()(const Point& x) const {
        if (x.size() != dimension())
            throw InputError("point of dimension " + std::to_string(x.size()) +
                             " evaluated by a functional of dimension " +
                             std::to_string(dimension()));
        double value = coeffs_[0];
        for (std::size_t a = 0; a < x.size(); ++a)
            value += coeffs_[a + 1] * x[a];
        return value;
    }

    std::vector<double> vertex_values(const StateSpace& space) const {
        std::vector<double> out;
        out.reserve(space.size());
        for (const auto& v : space.vertices())
            out.push_back((*this)(v));
        return out;
    }

    AffineFunctional& operator+=(const AffineFunctional& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    AffineFunctional& operator-=(const AffineFunctional& o) {
        check_same(o);
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    AffineFunctional& operator*=(double s) {
        for (auto& c : coeffs_)
            c *= s;
        return *this;
    }
    AffineFunctional& operator/=(double s) {
        for (auto& c : coeffs_)
            c /= s;
        return *this;
    }

    friend AffineFunctional operator+(AffineFunctional a, const AffineFunctional& b) { return a += b; }
    friend AffineFunctional operator-(AffineFunctional a, const AffineFunctional& b) { return a -= b; }
    friend AffineFunctional operator*(double s, AffineFunctional a) { return a *= s; }
    friend AffineFunctional operator*(AffineFunctional a, double s) { return a *= s; }
    friend AffineFunctional operator/(AffineFunctional a, double s) { return a /= s; }
    friend bool operator==(const AffineFunctional&, const AffineFunctional&) = default;

private:
    void check_same(const AffineFunctional& o) const {
        if (o.coeffs_.size() != coeffs_.size())
            throw InputError("affine functionals of different dimension");
    }

    std::vector<double> coeffs_;
};

class Effect;

namespace detail {
struct EffectAccess;
}

/// An affine functional with values in [0,1] on a state space.
///
/// Only the validating factories below create effects from raw coefficients.
/// The complement is kept as an orientation flag so that complementing twice
/// returns the original coefficients bit for bit.
class Effect {
public:
    std::size_t dimension() const { return base_.dimension(); }

    AffineFunctional functional() const {
        return complemented_ ? AffineFunctional::unit(dimension()) - base_ : base_;
    }
    std::vector<double> coefficients() const { return functional().coefficients(); }

    double operator()(const Point& x) const {
        const double v = base_(x);
        return complemented_ ? 1.0 - v : v;
    }

    std::vector<double> vertex_values(const StateSpace& space) const {
        std::vector<double> out;
        out.reserve(space.size());
        for (const auto& v : space.vertices())
            out.push_back((*this)(v));
        return out;
    }

    friend bool operator==(const Effect& a, const Effect& b) {
        if (a.complemented_ == b.complemented_)
            return a.base_ == b.base_;
        return a.functional() == b.functional();
    }

private:
    friend struct detail::EffectAccess;
    Effect(AffineFunctional base, bool complemented)
        : base_(std::move(base)), complemented_(complemented) {}

    AffineFunctional base_;
    bool complemented_ = false;
};

namespace detail {

struct EffectAccess {
    static Effect trusted(AffineFunctional f) { return Effect(std::move(f), false); }
    static Effect flipped(const Effect& e) { return Effect(e.base_, !e.complemented_); }
};

inline std::string format_point(const Point& p) {
    std::ostringstream os;
    os.precision(12);
    os << '(';
    for (std::size_t a = 0; a < p.size(); ++a)
        os << (a ? ", " : "") << p[a];
    os << ')';
    return os.str();
}

// Index of the first vertex where f leaves [0,1] by more than eps, or size().
inline std::size_t first_out_of_range(const AffineFunctional& f, const StateSpace& space,
                                      double eps, double& value) {
    for (std::size_t i = 0; i < space.size(); ++i) {
        value = f(space.vertex(i));
        if (!(value >= -eps && value <= 1.0 + eps))
            return i;
    }
    return space.size();
}

inline void check_dimension(const StateSpace& space, std::size_t coefficient_count) {
    if (coefficient_count != space.dimension() + 1)
        throw InputError("expected " + std::to_string(space.dimension() + 1) +
                         " affine coefficients for '" + space.name() + "', got " +
                         std::to_string(coefficient_count));
}

} // namespace detail

/// Validate f as an effect on space: 0 <= f(v) <= 1 at every vertex.
inline Effect effect_from_affine(const StateSpace& space, AffineFunctional f,
                                 const SolverTolerances& tol = {}) {
    detail::check_dimension(space, f.coefficients().size());
    for (double c : f.coefficients())
        if (!std::isfinite(c))
            throw InputError("effect coefficients must be finite");
    double value = 0.0;
    const std::size_t bad = detail::first_out_of_range(f, space, tol.eps_geom, value);
    if (bad != space.size()) {
        std::ostringstream os;
        os.precision(17);
        os << "effect takes value " << value << " at vertex " << bad << ' '
           << detail::format_point(space.vertex(bad)) << " of '" << space.name()
           << "', outside [0, 1]";
        throw ValidationError(os.str());
    }
    return detail::EffectAccess::trusted(std::move(f));
}

inline Effect effect_from_affine(const StateSpace& space, std::vector<double> coefficients,
                                 const SolverTolerances& tol = {}) {
    detail::check_dimension(space, coefficients.size());
    return effect_from_affine(space, AffineFunctional(std::move(coefficients)), tol);
}

/// Fit affine coefficients to prescribed vertex values by least squares.
///
/// The assignment is accepted only when the fit reproduces every value within
/// eps_geom; on a simplex the fit is exact. Rank-deficient vertex sets get the
/// minimum-norm coefficients.
inline Effect effect_from_vertex_values(const StateSpace& space, const std::vector<double>& values,
                                        const SolverTolerances& tol = {}) {
    const std::size_t k = space.size();
    const std::size_t d = space.dimension();
    if (values.size() != k)
        throw InputError("expected " + std::to_string(k) + " vertex values for '" + space.name() +
                         "', got " + std::to_string(values.size()));
    for (std::size_t i = 0; i < k; ++i)
        if (!(values[i] >= -tol.eps_geom && values[i] <= 1.0 + tol.eps_geom))
            throw ValidationError("vertex value " + std::to_string(values[i]) + " at vertex " +
                                  std::to_string(i) + " is outside [0, 1]");

    const auto rows = static_cast<Eigen::Index>(k);
    const auto cols = static_cast<Eigen::Index>(d + 1);
    Eigen::MatrixXd a(rows, cols);
    Eigen::VectorXd b(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& v = space.vertex(static_cast<std::size_t>(i));
        a(i, 0) = 1.0;
        for (std::size_t j = 0; j < d; ++j)
            a(i, static_cast<Eigen::Index>(j + 1)) = v[j];
        b(i) = values[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(b);
    const Eigen::VectorXd residual = a * c - b;
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (std::abs(residual(i)) > tol.eps_geom) {
            std::ostringstream os;
            os.precision(6);
            os << "vertex values are not realizable by an affine functional on '" << space.name()
               << "': best fit misses vertex " << i << " by " << std::abs(residual(i));
            throw RepresentabilityError(os.str());
        }
    }
    return effect_from_affine(space, AffineFunctional(std::vector<double>(c.data(), c.data() + cols)),
                              tol);
}

inline Effect unit_effect(const StateSpace& space) {
    return detail::EffectAccess::trusted(AffineFunctional::unit(space.dimension()));
}

inline Effect zero_effect(const StateSpace& space) {
    return detail::EffectAccess::trusted(AffineFunctional::zero(space.dimension()));
}

/// c * u for c in [0, 1].
inline Effect constant_effect(const StateSpace& space, double c, const SolverTolerances& tol = {}) {
    return effect_from_affine(space, AffineFunctional::constant(space.dimension(), c), tol);
}

inline double evaluate(const Effect& effect, const Point& x) { return effect(x); }

/// u - f
inline Effect complement(const Effect& f) { return detail::EffectAccess::flipped(f); }

/// s * f for s in [0, 1]; stays an effect without revalidation.
inline Effect scaled(const Effect& f, double s) {
    if (!(s >= 0.0 && s <= 1.0))
        throw InputError("effect scale factor must lie in [0, 1]");
    return detail::EffectAccess::trusted(s * f.functional());
}

/// f <= g on the state space, i.e. f(v) <= g(v) + eps_geom at every vertex.
inline bool leq(const Effect& f, const Effect& g, const StateSpace& space,
                const SolverTolerances& tol = {}) {
    if (f.dimension() != space.dimension() || g.dimension() != space.dimension())
        throw InputError("effect dimension does not match state space '" + space.name() + "'");
    for (const auto& v : space.vertices())
        if (f(v) > g(v) + tol.eps_geom)
            return false;
    return true;
}

/// Coordinate functional x_axis rescaled to [0, 1] over the vertex set. For a
/// degenerate axis (all vertices share the coordinate) returns u/2.
inline Effect coordinate_effect(const StateSpace& space, std::size_t axis) {
    if (axis >= space.dimension())
        throw InputError("axis " + std::to_string(axis) + " out of range for '" + space.name() +
                         "'");
    double lo = space.vertex(0)[axis];
    double hi = lo;
    for (const auto& v : space.vertices()) {
        lo = std::min(lo, v[axis]);
        hi = std::max(hi, v[axis]);
    }
    std::vector<double> c(space.dimension() + 1, 0.0);
    if (hi - lo <= 0.0) {
        c[0] = 0.5;
    } else {
        c[0] = -lo / (hi - lo);
        c[axis + 1] = 1.0 / (hi - lo);
    }
    return detail::EffectAccess::trusted(AffineFunctional(std::move(c)));
}

/// An effect taking different values on vertices i and j (total convexity on
/// a polytope): the coordinate effect along the axis where they differ most.
inline Effect separating_effect(const StateSpace& space, std::size_t i, std::size_t j) {
    if (i == j)
        throw InputError("separating_effect needs two distinct vertices");
    const auto& v = space.vertex(i);
    const auto& w = space.vertex(j);
    std::size_t best = 0;
    for (std::size_t a = 1; a < space.dimension(); ++a)
        if (std::abs(v[a] - w[a]) > std::abs(v[best] - w[best]))
            best = a;
    return coordinate_effect(space, best);
}

/// Finite-outcome observable: effects indexed by outcome labels.
struct Observable {
    std::vector<std::string> outcomes;
    std::vector<Effect> effects;

    Observable(std::vector<std::string> labels, std::vector<Effect> components)
        : outcomes(std::move(labels)), effects(std::move(components)) {
        if (outcomes.size() != effects.size())
            throw InputError("observable needs one label per effect");
    }

    std::size_t size() const { return effects.size(); }
    const Effect& operator[](std::size_t i) const { return effects.at(i); }
};

/// {f, u - f} with outcomes "1" and "0".
inline Observable dichotomic(const Effect& f) { return Observable({"1", "0"}, {f, complement(f)}); }

struct ObservableCheck {
    bool valid = true;
    std::vector<std::string> issues;
    explicit operator bool() const { return valid; }
};

/// Every component an effect on space, and the components summing to u.
inline ObservableCheck is_observable(const Observable& obs, const StateSpace& space,
                                     const SolverTolerances& tol = {}) {
    ObservableCheck check;
    auto fail = [&](std::string msg) {
        check.valid = false;
        check.issues.push_back(std::move(msg));
    };
    if (obs.size() == 0) {
        fail("observable has no outcomes");
        return check;
    }
    AffineFunctional sum = AffineFunctional::zero(space.dimension());
    bool dims_ok = true;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        const auto f = obs[i].functional();
        if (f.dimension() != space.dimension()) {
            fail("component '" + obs.outcomes[i] + "' has dimension " +
                 std::to_string(f.dimension()));
            dims_ok = false;
            continue;
        }
        double value = 0.0;
        const std::size_t bad = detail::first_out_of_range(f, space, tol.eps_geom, value);
        if (bad != space.size())
            fail("component '" + obs.outcomes[i] + "' takes value " + std::to_string(value) +
                 " at vertex " + std::to_string(bad));
        sum += f;
    }
    if (!dims_ok)
        return check;
    const auto unit = AffineFunctional::unit(space.dimension());
    for (std::size_t c = 0; c < sum.coefficients().size(); ++c) {
        const double diff = sum.coefficients()[c] - unit.coefficients()[c];
        if (std::abs(diff) > tol.eps_geom) {
            fail("components do not sum to u: coefficient " + std::to_string(c) + " is off by " +
                 std::to_string(diff));
            break;
        }
    }
    return check;
}

} // namespace gpt_compat
