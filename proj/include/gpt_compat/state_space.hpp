#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gpt_compat/errors.hpp"
#include "gpt_compat/lp.hpp"
#include "gpt_compat/tolerances.hpp"

namespace gpt_compat {

using Point = std::vector<double>;

class StateSpace;
StateSpace make_state_space(std::vector<Point> vertices, std::string name,
                            const SolverTolerances& tol = {});

namespace detail {
StateSpace make_state_space_impl(std::vector<Point> vertices, std::string name,
                                 const SolverTolerances& tol, bool check_redundancy);
}

/// Convex polytope of states, held as its vertex list (V-representation).
///
/// Vertices are deduplicated on construction. A vertex lying in the hull of the
/// others is kept, since it only contributes redundant constraints, but its
/// index is recorded in redundant_vertices().
class StateSpace {
public:
    const std::string& name() const { return name_; }
    std::size_t dimension() const { return dimension_; }
    std::size_t size() const { return vertices_.size(); }
    const std::vector<Point>& vertices() const { return vertices_; }
    const Point& vertex(std::size_t i) const { return vertices_.at(i); }

    const std::vector<std::size_t>& redundant_vertices() const { return redundant_; }
    bool has_redundant_vertices() const { return !redundant_.empty(); }
    // False when the hull test was skipped (too many vertices, or a zoo model
    // whose vertices are extreme by construction).
    bool redundancy_checked() const { return redundancy_checked_; }

private:
    friend StateSpace detail::make_state_space_impl(std::vector<Point>, std::string,
                                                    const SolverTolerances&, bool);
    StateSpace() = default;

    std::string name_;
    std::size_t dimension_ = 0;
    std::vector<Point> vertices_;
    std::vector<std::size_t> redundant_;
    bool redundancy_checked_ = false;
};

// Hull membership costs one LP per vertex; above this count the check is skipped.
inline constexpr std::size_t max_vertices_for_redundancy_check = 256;

namespace detail {

// Is vertices[i] a convex combination of the other vertices?
inline bool in_hull_of_others(const std::vector<Point>& vertices, std::size_t i,
                              const SolverTolerances& tol) {
    const std::size_t k = vertices.size();
    const std::size_t d = vertices[i].size();
    if (k < 2)
        return false;
    LpProblem lp(k - 1);
    for (std::size_t j = 0; j < k - 1; ++j)
        lp.set_bounds(j, 0.0, std::nullopt);
    lp.add_constraint(std::vector<double>(k - 1, 1.0), Relation::Equal, 1.0);
    for (std::size_t a = 0; a < d; ++a) {
        std::vector<double> row;
        row.reserve(k - 1);
        for (std::size_t j = 0; j < k; ++j)
            if (j != i)
                row.push_back(vertices[j][a]);
        lp.add_constraint(std::move(row), Relation::Equal, vertices[i][a]);
    }
    return check_feasible(lp, tol);
}

inline StateSpace make_state_space_impl(std::vector<Point> vertices, std::string name,
                                        const SolverTolerances& tol, bool check_redundancy) {
    if (vertices.empty())
        throw InputError("state space '" + name + "' has no vertices");
    const std::size_t d = vertices.front().size();
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (vertices[i].size() != d)
            throw InputError("vertex " + std::to_string(i) + " of '" + name + "' has dimension " +
                             std::to_string(vertices[i].size()) + ", expected " +
                             std::to_string(d));
        for (double x : vertices[i])
            if (!std::isfinite(x))
                throw InputError("vertex " + std::to_string(i) + " of '" + name +
                                 "' has a non-finite coordinate");
    }

    std::vector<Point> unique;
    unique.reserve(vertices.size());
    for (auto& v : vertices) {
        const bool duplicate = std::any_of(unique.begin(), unique.end(), [&](const Point& w) {
            for (std::size_t a = 0; a < d; ++a)
                if (std::abs(v[a] - w[a]) > tol.eps_geom)
                    return false;
            return true;
        });
        if (!duplicate)
            unique.push_back(std::move(v));
    }

    StateSpace space;
    space.name_ = std::move(name);
    space.dimension_ = d;
    space.vertices_ = std::move(unique);
    if (check_redundancy && space.vertices_.size() <= max_vertices_for_redundancy_check) {
        space.redundancy_checked_ = true;
        for (std::size_t i = 0; i < space.vertices_.size(); ++i)
            if (in_hull_of_others(space.vertices_, i, tol))
                space.redundant_.push_back(i);
    }
    return space;
}

} // namespace detail

/// Build the polytope conv(vertices). Throws InputError for an empty list or
/// ragged dimensions.
inline StateSpace make_state_space(std::vector<Point> vertices, std::string name,
                                   const SolverTolerances& tol) {
    return detail::make_state_space_impl(std::move(vertices), std::move(name), tol, true);
}

/// Dimension of the affine hull of the vertex set.
inline std::size_t affine_rank(const StateSpace& space) {
    const std::size_t k = space.size();
    const std::size_t d = space.dimension();
    if (k < 2 || d == 0)
        return 0;
    Eigen::MatrixXd diff(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(d));
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t a = 0; a < d; ++a)
            diff(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(a)) =
                space.vertex(i)[a] - space.vertex(0)[a];
    Eigen::FullPivLU<Eigen::MatrixXd> lu(diff);
    lu.setThreshold(1e-10);
    return static_cast<std::size_t>(lu.rank());
}

/// A simplex: vertices are affinely independent.
inline bool is_simplex(const StateSpace& space) {
    return space.size() == affine_rank(space) + 1;
}

} // namespace gpt_compat
