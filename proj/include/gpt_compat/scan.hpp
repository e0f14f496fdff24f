#pragma once

// Parameter sweeps of lambda0 under a family of smearings.

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "gpt_compat/compat.hpp"
#include "gpt_compat/effect.hpp"
#include "gpt_compat/errors.hpp"
#include "gpt_compat/report.hpp"
#include "gpt_compat/state_space.hpp"

namespace gpt_compat {

enum class ScanKernel { Scaling, Depolarizing };

inline ScanKernel parse_scan_kernel(const std::string& name) {
    if (name == "scaling")
        return ScanKernel::Scaling;
    if (name == "depolarizing")
        return ScanKernel::Depolarizing;
    throw InputError("unknown kernel '" + name + "' (expected scaling or depolarizing)");
}

struct ParamRange {
    double first = 0.0;
    double last = 0.0;
    int steps = 1;

    /// i-th of `steps` evenly spaced values; the endpoints are exact.
    double at(int i) const {
        if (steps == 1)
            return first;
        return first + (last - first) * i / (steps - 1);
    }
};

/// Parse "a:b:steps".
inline ParamRange parse_param_range(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : text.find(':', c1 + 1);
    if (c2 == std::string::npos || text.find(':', c2 + 1) != std::string::npos)
        throw InputError("parameter range '" + text + "' is not of the form a:b:steps");
    ParamRange r;
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, c1), b = text.substr(c1 + 1, c2 - c1 - 1),
                          s = text.substr(c2 + 1);
        r.first = std::stod(a, &used);
        if (used != a.size())
            throw std::invalid_argument(a);
        r.last = std::stod(b, &used);
        if (used != b.size())
            throw std::invalid_argument(b);
        r.steps = std::stoi(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
    } catch (const std::logic_error&) {
        throw InputError("parameter range '" + text + "' has a malformed number");
    }
    if (r.steps < 1)
        throw InputError("parameter range needs at least one step");
    if (!(r.first <= r.last))
        throw InputError("parameter range needs a <= b");
    return r;
}

inline void validate_range(ScanKernel kernel, const ParamRange& range) {
    if (kernel == ScanKernel::Scaling && !(range.first >= 1.0))
        throw InputError("scaling scans need k >= 1");
    if (kernel == ScanKernel::Depolarizing && !(range.first >= 0.0 && range.last <= 1.0))
        throw InputError("depolarizing scans need t in [0, 1]");
}

struct ScanRow {
    double param = 0.0;
    CompatReport report;
};

/// Smear e and f with the kernel at each parameter and recompute lambda0.
inline std::vector<ScanRow> run_scan(const StateSpace& space, const Effect& e, const Effect& f,
                                     ScanKernel kernel, const ParamRange& range,
                                     const SolverTolerances& tol = {}) {
    validate_range(kernel, range);
    std::vector<ScanRow> rows;
    rows.reserve(static_cast<std::size_t>(range.steps));
    for (int i = 0; i < range.steps; ++i) {
        const double p = range.at(i);
        const MarkovKernel2x2 mk =
            kernel == ScanKernel::Scaling ? scaling_kernel(p) : depolarizing_kernel(p);
        const Effect es = smear(dichotomic(e), mk)[0];
        const Effect fs = smear(dichotomic(f), mk)[0];
        rows.push_back({p, compute_lambda0(space, es, fs, tol)});
    }
    return rows;
}

/// One-line summary of where the compatible column changes value.
inline std::string scan_boundary_summary(const std::vector<ScanRow>& rows) {
    std::vector<std::size_t> flips;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].report.compatible != rows[i - 1].report.compatible)
            flips.push_back(i);
    if (rows.empty())
        return "# boundary: no rows";
    if (flips.empty())
        return std::string("# boundary: none; all rows ") +
               (rows.front().report.compatible ? "compatible" : "incompatible");
    if (flips.size() > 1)
        return "# boundary: not monotone; compatible changes " + std::to_string(flips.size()) +
               " times";
    const auto& before = rows[flips[0] - 1];
    const auto& after = rows[flips[0]];
    return std::string("# boundary: compatible ") + (before.report.compatible ? "true" : "false") +
           " -> " + (after.report.compatible ? "true" : "false") + " between param " +
           format_real(before.param) + " and " + format_real(after.param);
}

/// CSV: header, one row per parameter, trailing '#' summary. LF line endings.
inline void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
    out << "param,lambda0,sigma0,compatible\n";
    for (const auto& row : rows)
        out << format_real(row.param) << ',' << format_real(row.report.lambda0) << ','
            << format_real(row.report.sigma0) << ',' << (row.report.compatible ? "true" : "false")
            << '\n';
    out << scan_boundary_summary(rows) << '\n';
}

} // namespace gpt_compat
