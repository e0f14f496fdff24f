#pragma once

#include <algorithm>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

#include "gpt_compat/effect.hpp"
#include "gpt_compat/state_space.hpp"

namespace gpt_compat {

/// Random effect for property suites.
///
/// Draws affine coefficients uniformly from [-1, 1]^{d+1}, then shifts and
/// rescales so the vertex values span [lo, hi]: the full [0, 1] half of the
/// time (sharp-ish effects, where incompatibility lives), a random
/// subinterval otherwise. Draws that are constant on the vertices are
/// rejected. On a single-point space the result is a random constant.
template <class Rng>
Effect random_effect(const StateSpace& space, Rng& rng) {
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t d = space.dimension();

    double lo = 0.0, hi = 1.0;
    if (unit(rng) >= 0.5) {
        lo = unit(rng);
        hi = unit(rng);
        if (lo > hi)
            std::swap(lo, hi);
    }
    if (space.size() == 1)
        return constant_effect(space, 0.5 * (lo + hi));

    for (;;) {
        std::vector<double> c(d + 1);
        for (auto& x : c)
            x = coeff(rng);
        const AffineFunctional f(std::move(c));
        const auto values = f.vertex_values(space);
        const auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
        const double span = *max_it - *min_it;
        if (span < 1e-6)
            continue;
        // lo + (hi - lo) (f - min) / span
        const double scale = (hi - lo) / span;
        AffineFunctional g = scale * f;
        g += AffineFunctional::constant(d, lo - scale * *min_it);
        // Rounding can leave a vertex a hair outside [0, 1]; pull it back in.
        const auto gv = g.vertex_values(space);
        const auto [gmin, gmax] = std::minmax_element(gv.begin(), gv.end());
        if (*gmin < 0.0)
            g += AffineFunctional::constant(d, -*gmin);
        if (*gmax > 1.0)
            g -= AffineFunctional::constant(d, *gmax - 1.0);
        return effect_from_affine(space, std::move(g));
    }
}

/// Pair of independent random effects.
template <class Rng>
std::pair<Effect, Effect> random_effect_pair(const StateSpace& space, Rng& rng) {
    Effect e = random_effect(space, rng);
    Effect f = random_effect(space, rng);
    return {std::move(e), std::move(f)};
}

} // namespace gpt_compat
