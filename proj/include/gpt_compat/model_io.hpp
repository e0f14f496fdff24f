#pragma once

// Model files.
//
//   {
//     "version": 1,
//     "name": "gbit",
//     "dimension": 2,
//     "vertices": [
//       [1, 1],
//       [1, -1]
//     ],
//     "effects": {
//       "e_x": {"affine": [0.5, 0.5, 0]},
//       "e_y": {"vertex_values": [1, 0]}
//     }
//   }
//
// "affine" lists (c0, c1, ..., cd); "vertex_values" lists one value per entry
// of "vertices", in file order, and must be realizable by an affine functional.
// Numbers are written as shortest round-trip decimals, so save/load is exact.

#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gpt_compat/effect.hpp"
#include "gpt_compat/errors.hpp"
#include "gpt_compat/models.hpp"
#include "gpt_compat/state_space.hpp"
#include "gpt_compat/tolerances.hpp"

namespace gpt_compat {

inline constexpr int model_file_version = 1;

class ModelFileError : public InputError {
public:
    using InputError::InputError;
};

namespace detail {

using nlohmann::json;

inline std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

[[noreturn]] inline void schema_error(const std::string& source, const std::string& field,
                                      const std::string& message) {
    throw ModelFileError(source + ": field '" + field + "': " + message);
}

inline std::vector<double> number_array(const json& node, const std::string& source,
                                        const std::string& field) {
    if (!node.is_array())
        schema_error(source, field, "expected an array of numbers");
    std::vector<double> out;
    out.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
        if (!node[i].is_number())
            schema_error(source, field + "/" + std::to_string(i), "expected a number");
        out.push_back(node[i].get<double>());
    }
    return out;
}

inline std::string number_text(double x) { return json(x).dump(); }

inline std::string array_text(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i)
            out += ", ";
        out += number_text(xs[i]);
    }
    return out + "]";
}

} // namespace detail

/// Parse model text. `source` names the input in diagnostics.
inline Model parse_model(const std::string& text, const std::string& source = "<model>",
                         const SolverTolerances& tol = {}) {
    using detail::json;
    using detail::schema_error;

    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& err) {
        throw ModelFileError(source + ": " + detail::line_column(text, err.byte) +
                             ": malformed JSON");
    }
    if (!doc.is_object())
        throw ModelFileError(source + ": top level must be an object");

    auto require = [&](const char* key) -> const json& {
        if (!doc.contains(key))
            schema_error(source, key, "missing");
        return doc.at(key);
    };

    const json& version = require("version");
    if (!version.is_number_integer() || version.get<long>() != model_file_version)
        schema_error(source, "version", "unsupported version (expected 1)");
    const json& name = require("name");
    if (!name.is_string())
        schema_error(source, "name", "expected a string");
    const json& dimension = require("dimension");
    if (!dimension.is_number_integer() || dimension.get<long>() < 0)
        schema_error(source, "dimension", "expected a nonnegative integer");
    const auto d = dimension.get<std::size_t>();

    const json& vertex_node = require("vertices");
    if (!vertex_node.is_array() || vertex_node.empty())
        schema_error(source, "vertices", "expected a nonempty array of points");
    std::vector<Point> vertices;
    for (std::size_t i = 0; i < vertex_node.size(); ++i) {
        const std::string field = "vertices/" + std::to_string(i);
        auto p = detail::number_array(vertex_node[i], source, field);
        if (p.size() != d)
            schema_error(source, field,
                         "has " + std::to_string(p.size()) + " coordinates, expected " +
                             std::to_string(d));
        vertices.push_back(std::move(p));
    }
    const std::vector<Point> file_vertices = vertices;

    Model model{make_state_space(std::move(vertices), name.get<std::string>(), tol), {}};

    // File vertex -> deduplicated vertex.
    std::vector<std::size_t> slot(file_vertices.size());
    for (std::size_t i = 0; i < file_vertices.size(); ++i) {
        for (std::size_t j = 0; j < model.space.size(); ++j) {
            bool same = true;
            for (std::size_t a = 0; a < d && same; ++a)
                same = std::abs(file_vertices[i][a] - model.space.vertex(j)[a]) <= tol.eps_geom;
            if (same) {
                slot[i] = j;
                break;
            }
        }
    }

    const json& effects = require("effects");
    if (!effects.is_object())
        schema_error(source, "effects", "expected an object");
    for (const auto& [effect_name, spec] : effects.items()) {
        const std::string field = "effects/" + effect_name;
        if (!spec.is_object() || spec.size() != 1 ||
            !(spec.contains("affine") || spec.contains("vertex_values")))
            schema_error(source, field, "expected exactly one of 'affine' or 'vertex_values'");
        try {
            if (spec.contains("affine")) {
                auto c = detail::number_array(spec.at("affine"), source, field + "/affine");
                model.effects.emplace(effect_name, effect_from_affine(model.space, std::move(c), tol));
            } else {
                const auto values =
                    detail::number_array(spec.at("vertex_values"), source, field + "/vertex_values");
                if (values.size() != file_vertices.size())
                    schema_error(source, field + "/vertex_values",
                                 "has " + std::to_string(values.size()) + " entries, expected " +
                                     std::to_string(file_vertices.size()));
                std::vector<double> merged(model.space.size(), 0.0);
                std::vector<bool> seen(model.space.size(), false);
                for (std::size_t i = 0; i < values.size(); ++i) {
                    const std::size_t j = slot[i];
                    if (seen[j] && std::abs(merged[j] - values[i]) > tol.eps_geom)
                        throw RepresentabilityError("duplicate vertex " + std::to_string(i) +
                                                    " is assigned a different value");
                    merged[j] = values[i];
                    seen[j] = true;
                }
                model.effects.emplace(effect_name,
                                      effect_from_vertex_values(model.space, merged, tol));
            }
        } catch (const ModelFileError&) {
            throw;
        } catch (const RepresentabilityError& err) {
            throw RepresentabilityError(source + ": field '" + field + "': " + err.what());
        } catch (const ValidationError& err) {
            throw ValidationError(source + ": field '" + field + "': " + err.what());
        } catch (const InputError& err) {
            schema_error(source, field, err.what());
        }
    }
    return model;
}

inline Model load_model(const std::string& path, const SolverTolerances& tol = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open model file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_model(buffer.str(), path, tol);
}

/// Serialize with effects in affine form. Output is deterministic.
inline std::string model_text(const Model& model) {
    using detail::json;
    std::string out = "{\n";
    out += "  \"version\": " + std::to_string(model_file_version) + ",\n";
    out += "  \"name\": " + json(model.space.name()).dump() + ",\n";
    out += "  \"dimension\": " + std::to_string(model.space.dimension()) + ",\n";
    out += "  \"vertices\": [\n";
    for (std::size_t i = 0; i < model.space.size(); ++i)
        out += "    " + detail::array_text(model.space.vertex(i)) +
               (i + 1 < model.space.size() ? ",\n" : "\n");
    out += "  ],\n";
    out += "  \"effects\": {";
    std::size_t i = 0;
    for (const auto& [name, effect] : model.effects) {
        out += (i++ ? ",\n" : "\n");
        out += "    " + json(name).dump() + ": {\"affine\": " +
               detail::array_text(effect.coefficients()) + "}";
    }
    out += model.effects.empty() ? "}\n" : "\n  }\n";
    out += "}\n";
    return out;
}

inline void save_model(const std::string& path, const Model& model) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write model file '" + path + "'");
    out << model_text(model);
    if (!out)
        throw InputError("failed writing model file '" + path + "'");
}

} // namespace gpt_compat
