#pragma once

#include "gpt_compat/errors.hpp"

namespace gpt_compat {

struct SolverTolerances {
    double eps_feas = 1e-9;   // constraint satisfaction of LP points
    double eps_opt = 1e-9;    // reduced-cost / optimality tolerance
    double eps_geom = 1e-9;   // effect bounds, deduplication, coefficient sums
    double eps_compat = 1e-7; // slack when comparing lambda0 against 1

    // Also run the lambda = 1 feasibility system in is_compatible and throw
    // SolverError if the two verdicts disagree.
    bool cross_check = false;

    void validate() const {
        if (!(eps_feas > 0) || !(eps_opt > 0) || !(eps_geom > 0) || !(eps_compat > 0))
            throw InputError("tolerances must be strictly positive");
        if (eps_compat < eps_opt)
            throw InputError("eps_compat must be at least eps_opt");
    }
};

} // namespace gpt_compat
