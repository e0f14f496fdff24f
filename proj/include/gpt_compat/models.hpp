#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "gpt_compat/effect.hpp"
#include "gpt_compat/errors.hpp"
#include "gpt_compat/state_space.hpp"
#include "gpt_compat/tolerances.hpp"

namespace gpt_compat {

/// A state space together with named effects on it.
struct Model {
    StateSpace space;
    std::map<std::string, Effect> effects;
};

// Zoo polytopes list only extreme points, so the hull test is skipped.
inline StateSpace simplex(int n) {
    if (n < 1)
        throw InputError("simplex needs n >= 1");
    const auto d = static_cast<std::size_t>(n - 1);
    std::vector<Point> vertices(1, Point(d, 0.0));
    for (std::size_t a = 0; a < d; ++a) {
        Point p(d, 0.0);
        p[a] = 1.0;
        vertices.push_back(std::move(p));
    }
    return detail::make_state_space_impl(std::move(vertices), "simplex-" + std::to_string(n), {},
                                         false);
}

inline StateSpace hypercube(int d) {
    if (d < 1 || d > 16)
        throw InputError("hypercube dimension must lie in [1, 16]");
    const auto dim = static_cast<std::size_t>(d);
    std::vector<Point> vertices;
    vertices.reserve(std::size_t{1} << dim);
    for (std::size_t i = 0; i < (std::size_t{1} << dim); ++i) {
        Point p(dim);
        for (std::size_t a = 0; a < dim; ++a)
            p[a] = ((i >> (dim - 1 - a)) & 1u) ? -1.0 : 1.0;
        vertices.push_back(std::move(p));
    }
    return detail::make_state_space_impl(std::move(vertices), "hypercube-" + std::to_string(d), {},
                                         false);
}

/// Square with vertices (1,1), (1,-1), (-1,1), (-1,-1).
inline StateSpace gbit_square() {
    auto square = hypercube(2);
    return detail::make_state_space_impl(square.vertices(), "gbit", {}, false);
}

inline StateSpace regular_polygon(int n) {
    if (n < 3)
        throw InputError("regular polygon needs n >= 3");
    std::vector<Point> vertices;
    for (int j = 0; j < n; ++j) {
        const double angle = 2.0 * std::numbers::pi * j / n;
        vertices.push_back({std::cos(angle), std::sin(angle)});
    }
    return detail::make_state_space_impl(std::move(vertices), "polygon-" + std::to_string(n), {},
                                         false);
}

/// Coordinate effect names: e_x, e_y, e_z up to three dimensions, e_1 ... e_d beyond.
inline std::string coordinate_effect_name(std::size_t axis, std::size_t dimension) {
    if (dimension <= 3)
        return std::string("e_") + "xyz"[axis];
    return "e_" + std::to_string(axis + 1);
}

/// u plus the rescaled coordinate effects of every axis.
inline Model with_standard_effects(StateSpace space) {
    Model model{std::move(space), {}};
    model.effects.emplace("u", unit_effect(model.space));
    for (std::size_t a = 0; a < model.space.dimension(); ++a)
        model.effects.emplace(coordinate_effect_name(a, model.space.dimension()),
                              coordinate_effect(model.space, a));
    return model;
}

inline std::vector<std::string> zoo_names() {
    return {"simplex-1", "simplex-2", "simplex-3",  "simplex-4",  "gbit",      "hypercube-2",
            "hypercube-3", "polygon-3", "polygon-4", "polygon-5", "polygon-6"};
}

/// Resolve a zoo name: gbit, simplex-N, hypercube-D, polygon-N.
inline Model zoo_model(const std::string& name) {
    if (name == "gbit")
        return with_standard_effects(gbit_square());
    auto parameter = [&](const std::string& prefix) -> int {
        const std::string digits = name.substr(prefix.size());
        if (digits.empty() || digits.size() > 3 ||
            digits.find_first_not_of("0123456789") != std::string::npos)
            throw InputError("unknown zoo model '" + name + "'");
        return std::stoi(digits);
    };
    if (name.rfind("simplex-", 0) == 0)
        return with_standard_effects(simplex(parameter("simplex-")));
    if (name.rfind("hypercube-", 0) == 0)
        return with_standard_effects(hypercube(parameter("hypercube-")));
    if (name.rfind("polygon-", 0) == 0)
        return with_standard_effects(regular_polygon(parameter("polygon-")));
    throw InputError("unknown zoo model '" + name + "'");
}

/// Look up an effect by name. Besides the model's own effects this accepts
/// "u", "zero", and "u-NAME" for the complement of NAME.
inline Effect find_effect(const Model& model, const std::string& name) {
    if (auto it = model.effects.find(name); it != model.effects.end())
        return it->second;
    if (name == "u")
        return unit_effect(model.space);
    if (name == "zero")
        return zero_effect(model.space);
    if (name.rfind("u-", 0) == 0 && name.size() > 2)
        return complement(find_effect(model, name.substr(2)));
    throw InputError("model '" + model.space.name() + "' has no effect named '" + name + "'");
}

} // namespace gpt_compat
