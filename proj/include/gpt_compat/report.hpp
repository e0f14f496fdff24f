#pragma once

// Text and JSON renderings of analysis results. Reals are printed with 12
// significant digits; magnitudes below 1e-12 print as 0 so solver residue
// does not leak into reports.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpt_compat/compat.hpp"
#include "gpt_compat/effect.hpp"
#include "gpt_compat/state_space.hpp"

namespace gpt_compat {

inline constexpr int report_schema_version = 1;

inline double report_real(double x) {
    if (std::abs(x) < 1e-12)
        return 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return std::strtod(buf, nullptr);
}

inline std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", report_real(x));
    return buf;
}

inline std::string format_reals(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out += (i ? ", " : "") + format_real(xs[i]);
    return out + "]";
}

inline nlohmann::json json_reals(const std::vector<double>& xs) {
    auto out = nlohmann::json::array();
    for (double x : xs)
        out.push_back(report_real(x));
    return out;
}

inline nlohmann::json effect_json(const Effect& effect, const StateSpace& space) {
    return {{"coefficients", json_reals(effect.coefficients())},
            {"vertex_values", json_reals(effect.vertex_values(space))}};
}

inline nlohmann::json tolerances_json(const SolverTolerances& tol) {
    return {{"eps_feas", tol.eps_feas},
            {"eps_opt", tol.eps_opt},
            {"eps_geom", tol.eps_geom},
            {"eps_compat", tol.eps_compat}};
}

inline nlohmann::json check_json(const CompatReport& report, const StateSpace& space,
                                 const std::string& e_name, const std::string& f_name) {
    return {{"schema", "gpt-compat/check"},
            {"version", report_schema_version},
            {"model", space.name()},
            {"e", e_name},
            {"f", f_name},
            {"lambda0", report_real(report.lambda0)},
            {"sigma0", report_real(report.sigma0)},
            {"compatible", report.compatible},
            {"witness", effect_json(report.witness, space)},
            {"lp_iterations", report.lp_iterations},
            {"tolerances", tolerances_json(report.tolerances)}};
}

inline std::string check_text(const CompatReport& report, const StateSpace& space,
                              const std::string& e_name, const std::string& f_name) {
    std::string out;
    out += "model:      " + space.name() + "\n";
    out += "effects:    " + e_name + ", " + f_name + "\n";
    out += "lambda0:    " + format_real(report.lambda0) + "\n";
    out += "sigma0:     " + format_real(report.sigma0) + "\n";
    out += std::string("compatible: ") + (report.compatible ? "yes" : "no") + "\n";
    out += "witness g:\n";
    out += "  coefficients:  " + format_reals(report.witness.coefficients()) + "\n";
    out += "  vertex values: " + format_reals(report.witness.vertex_values(space)) + "\n";
    return out;
}

struct MarginCheck {
    double e_deviation = 0.0; // max |G(1,1) + G(1,0) - e| over coefficients
    double f_deviation = 0.0; // max |G(1,1) + G(0,1) - f|
    bool observable = false;
};

inline MarginCheck check_margins(const Observable& joint, const Effect& e, const Effect& f,
                                 const StateSpace& space, const SolverTolerances& tol = {}) {
    auto deviation = [](const AffineFunctional& a, const AffineFunctional& b) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.coefficients().size(); ++i)
            worst = std::max(worst, std::abs(a.coefficients()[i] - b.coefficients()[i]));
        return worst;
    };
    MarginCheck m;
    m.e_deviation = deviation(joint[0].functional() + joint[1].functional(), e.functional());
    m.f_deviation = deviation(joint[0].functional() + joint[2].functional(), f.functional());
    m.observable = static_cast<bool>(is_observable(joint, space, tol));
    return m;
}

inline nlohmann::json joint_json(const Observable& joint, const MarginCheck& margins,
                                 const CompatReport& report, const StateSpace& space,
                                 const std::string& e_name, const std::string& f_name) {
    auto components = nlohmann::json::array();
    for (std::size_t i = 0; i < joint.size(); ++i) {
        auto c = effect_json(joint[i], space);
        c["outcome"] = joint.outcomes[i];
        components.push_back(std::move(c));
    }
    return {{"schema", "gpt-compat/joint"},
            {"version", report_schema_version},
            {"model", space.name()},
            {"e", e_name},
            {"f", f_name},
            {"lambda0", report_real(report.lambda0)},
            {"components", std::move(components)},
            {"margins",
             {{"e_deviation", report_real(margins.e_deviation)},
              {"f_deviation", report_real(margins.f_deviation)},
              {"is_observable", margins.observable}}}};
}

inline std::string joint_text(const Observable& joint, const MarginCheck& margins,
                              const CompatReport& report, const StateSpace& space,
                              const std::string& e_name, const std::string& f_name) {
    std::string out;
    out += "model:   " + space.name() + "\n";
    out += "effects: " + e_name + ", " + f_name + "\n";
    out += "lambda0: " + format_real(report.lambda0) + "\n";
    out += "joint observable:\n";
    for (std::size_t i = 0; i < joint.size(); ++i) {
        out += "  " + joint.outcomes[i] + "\n";
        out += "    coefficients:  " + format_reals(joint[i].coefficients()) + "\n";
        out += "    vertex values: " + format_reals(joint[i].vertex_values(space)) + "\n";
    }
    out += "margins:\n";
    out += "  G(1,1) + G(1,0) - e: " + format_real(margins.e_deviation) + "\n";
    out += "  G(1,1) + G(0,1) - f: " + format_real(margins.f_deviation) + "\n";
    out += std::string("  sums to u:           ") + (margins.observable ? "yes" : "no") + "\n";
    return out;
}

} // namespace gpt_compat
