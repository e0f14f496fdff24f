#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "gpt_compat/compat.hpp"
#include "gpt_compat/model_io.hpp"
#include "gpt_compat/models.hpp"
#include "gpt_compat/sampling.hpp"

namespace {

using namespace gpt_compat;

std::set<Point> vertex_set(const StateSpace& s) { return {s.vertices().begin(), s.vertices().end()}; }

TEST(Zoo, Simplices) {
    EXPECT_EQ(simplex(2).vertices(), (std::vector<Point>{{0}, {1}}));
    EXPECT_EQ(simplex(3).vertices(), (std::vector<Point>{{0, 0}, {1, 0}, {0, 1}}));
    const auto point = simplex(1);
    EXPECT_EQ(point.size(), 1u);
    EXPECT_EQ(point.dimension(), 0u);
    EXPECT_THROW(simplex(0), InputError);
    for (int n = 1; n <= 5; ++n)
        EXPECT_TRUE(is_simplex(simplex(n)));
}

TEST(Zoo, GbitSharpEffects) {
    const auto m = zoo_model("gbit");
    const Effect ex = effect_from_affine(m.space, std::vector<double>{0.5, 0.5, 0});
    const Effect ey = effect_from_affine(m.space, std::vector<double>{0.5, 0, 0.5});
    EXPECT_EQ(find_effect(m, "e_x"), ex);
    EXPECT_EQ(find_effect(m, "e_y"), ey);
    EXPECT_NEAR(compute_lambda0(m.space, ex, ey).lambda0, 2.0, 1e-9);
    EXPECT_NO_THROW(effect_from_affine(m.space, std::vector<double>{1, 0, 0}));
}

TEST(Zoo, HypercubeAndPolygon) {
    EXPECT_EQ(vertex_set(hypercube(2)), vertex_set(gbit_square()));
    EXPECT_EQ(hypercube(3).size(), 8u);
    EXPECT_THROW(hypercube(0), InputError);
    EXPECT_THROW(hypercube(17), InputError);
    EXPECT_EQ(hypercube(16).size(), 65536u);

    const auto p5 = regular_polygon(5);
    ASSERT_EQ(p5.size(), 5u);
    for (std::size_t j = 0; j < 5; ++j) {
        EXPECT_NEAR(p5.vertex(j)[0], std::cos(2 * std::numbers::pi * j / 5), 1e-15);
        EXPECT_NEAR(p5.vertex(j)[1], std::sin(2 * std::numbers::pi * j / 5), 1e-15);
    }
    EXPECT_THROW(regular_polygon(2), InputError);
}

TEST(Zoo, EveryModelAndEffectValidates) {
    for (const auto& name : zoo_names()) {
        const auto m = zoo_model(name);
        EXPECT_EQ(m.space.name(), name);
        const auto checked = make_state_space(m.space.vertices(), name);
        EXPECT_EQ(checked.size(), m.space.size()) << name;
        EXPECT_FALSE(checked.has_redundant_vertices()) << name;
        for (const auto& [effect_name, e] : m.effects)
            EXPECT_NO_THROW(effect_from_affine(m.space, e.functional())) << name << "/" << effect_name;
    }
}

TEST(Zoo, Names) {
    const auto names = zoo_names();
    for (const char* want : {"simplex-2", "simplex-3", "gbit", "hypercube-3", "polygon-5"})
        EXPECT_NE(std::find(names.begin(), names.end(), want), names.end()) << want;
    EXPECT_NO_THROW(zoo_model("polygon-12"));
    EXPECT_NO_THROW(zoo_model("hypercube-5"));
    for (const char* bad : {"nope", "simplex-", "simplex-x", "polygon-2", "gbit2", "simplex-1234"})
        EXPECT_THROW(zoo_model(bad), InputError) << bad;
}

TEST(Zoo, FindEffectForms) {
    const auto m = zoo_model("gbit");
    EXPECT_EQ(find_effect(m, "u").coefficients(), (std::vector<double>{1, 0, 0}));
    EXPECT_EQ(find_effect(m, "zero").coefficients(), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(find_effect(m, "u-e_x").vertex_values(m.space), (std::vector<double>{0, 0, 1, 1}));
    EXPECT_THROW(find_effect(m, "e_q"), InputError);
    EXPECT_THROW(find_effect(m, "u-e_q"), InputError);
}

// Polygon-4 is the gbit square rotated by pi/4 and shrunk by 1/sqrt(2).
TEST(Zoo, RotatedSquareGivesSameLambda0) {
    const auto gbit = zoo_model("gbit");
    const auto diamond = regular_polygon(4);
    // y = R x / sqrt(2) with R the rotation by pi/4; x = sqrt(2) R^T y.
    auto transport = [&](const Effect& e) {
        const auto c = e.coefficients();
        const double s = std::sqrt(2.0), h = std::sqrt(0.5);
        // x1 = s (h y1 + h y2) = y1 + y2, x2 = s (-h y1 + h y2) = -y1 + y2.
        (void)s;
        (void)h;
        return effect_from_affine(diamond, std::vector<double>{c[0], c[1] - c[2], c[1] + c[2]});
    };
    const Effect ex = transport(find_effect(gbit, "e_x"));
    const Effect ey = transport(find_effect(gbit, "e_y"));
    EXPECT_NEAR(compute_lambda0(diamond, ex, ey).lambda0,
                compute_lambda0(gbit.space, find_effect(gbit, "e_x"), find_effect(gbit, "e_y")).lambda0,
                1e-9);
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        const auto [e, f] = random_effect_pair(gbit.space, rng);
        EXPECT_NEAR(compute_lambda0(diamond, transport(e), transport(f)).lambda0,
                    compute_lambda0(gbit.space, e, f).lambda0, 1e-9);
    }
}

TEST(Zoo, TriangleIsClassical) {
    const auto tri = regular_polygon(3);
    std::mt19937_64 rng(32);
    for (int i = 0; i < 100; ++i) {
        const auto [e, f] = random_effect_pair(tri, rng);
        EXPECT_TRUE(is_compatible(tri, e, f));
    }
}

TEST(Properties, AffineInvariance) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& name : {"gbit", "polygon-5", "hypercube-3", "simplex-4"}) {
        const auto m = zoo_model(name);
        const auto d = static_cast<Eigen::Index>(m.space.dimension());
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(d, d);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                a(i, j) += 0.4 * u(rng);
        Eigen::VectorXd b(d);
        for (Eigen::Index i = 0; i < d; ++i)
            b(i) = 2 * u(rng);
        ASSERT_GT(std::abs(a.determinant()), 1e-3);
        const Eigen::MatrixXd a_inv = a.inverse();

        std::vector<Point> moved;
        for (const auto& v : m.space.vertices()) {
            const Eigen::VectorXd y = a * Eigen::Map<const Eigen::VectorXd>(v.data(), d) + b;
            moved.emplace_back(y.data(), y.data() + d);
        }
        const auto image = make_state_space(moved, std::string(name) + "-image");
        // f(x) = c0 + c.x and x = A^{-1}(y - b).
        auto pull = [&](const Effect& e) {
            const auto c = e.coefficients();
            const Eigen::VectorXd lin = Eigen::Map<const Eigen::VectorXd>(c.data() + 1, d);
            const Eigen::VectorXd w = a_inv.transpose() * lin;
            std::vector<double> out{c[0] - lin.dot(a_inv * b)};
            out.insert(out.end(), w.data(), w.data() + d);
            return effect_from_affine(image, out, {.eps_geom = 1e-9});
        };
        for (int i = 0; i < 30; ++i) {
            const auto [e, f] = random_effect_pair(m.space, rng);
            EXPECT_NEAR(compute_lambda0(image, pull(e), pull(f)).lambda0,
                        compute_lambda0(m.space, e, f).lambda0, 1e-8)
                << name;
        }
    }
}

TEST(ModelIo, RoundTripIsBitExact) {
    std::mt19937_64 rng(34);
    for (const auto& name : zoo_names()) {
        Model m = zoo_model(name);
        for (int i = 0; i < 5; ++i)
            m.effects.emplace("r" + std::to_string(i), random_effect(m.space, rng));
        const Model back = parse_model(model_text(m), name);
        EXPECT_EQ(back.space.name(), m.space.name());
        EXPECT_EQ(back.space.vertices(), m.space.vertices()) << name;
        ASSERT_EQ(back.effects.size(), m.effects.size());
        for (const auto& [effect_name, e] : m.effects)
            EXPECT_EQ(back.effects.at(effect_name).coefficients(), e.coefficients())
                << name << "/" << effect_name;
        EXPECT_EQ(model_text(back), model_text(m));
    }
}

TEST(ModelIo, SaveLoadPreservesLambda0) {
    const auto path = std::filesystem::temp_directory_path() / "gpt_compat_models_test_gbit.json";
    const Model m = zoo_model("gbit");
    save_model(path.string(), m);
    const Model back = load_model(path.string());
    EXPECT_EQ(compute_lambda0(back.space, back.effects.at("e_x"), back.effects.at("e_y")).lambda0,
              compute_lambda0(m.space, m.effects.at("e_x"), m.effects.at("e_y")).lambda0);
    std::filesystem::remove(path);
    EXPECT_THROW(load_model(path.string()), InputError);
}

const char* square_header = R"({"version": 1, "name": "sq", "dimension": 2,
 "vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1]],
 "effects": )";

TEST(ModelIo, VertexValuesAreFitted) {
    const Model m = parse_model(std::string(square_header) +
                                R"({"a": {"vertex_values": [1, 1, 0, 0]}}})");
    const auto got = m.effects.at("a").vertex_values(m.space);
    const std::vector<double> want{1, 1, 0, 0};
    for (std::size_t i = 0; i < want.size(); ++i)
        EXPECT_NEAR(got[i], want[i], 1e-15);
}

TEST(ModelIo, EffectOutOfRange) {
    EXPECT_THROW(parse_model(std::string(square_header) + R"({"a": {"affine": [1.5, 0, 0]}}})"),
                 ValidationError);
    EXPECT_THROW(
        parse_model(std::string(square_header) + R"({"a": {"vertex_values": [1.5, 1, 0, 0]}}})"),
        ValidationError);
}

TEST(ModelIo, NonAffineVertexValues) {
    try {
        parse_model(std::string(square_header) + R"({"bad": {"vertex_values": [1, 0, 0, 1]}}})",
                    "sq.json");
        FAIL() << "expected RepresentabilityError";
    } catch (const RepresentabilityError& err) {
        EXPECT_NE(std::string(err.what()).find("effects/bad"), std::string::npos) << err.what();
    }
}

TEST(ModelIo, DuplicateVerticesMapVertexValues) {
    const Model m = parse_model(R"({"version": 1, "name": "bit", "dimension": 1,
        "vertices": [[0], [1], [0]],
        "effects": {"a": {"vertex_values": [0.2, 0.7, 0.2]}}})");
    EXPECT_EQ(m.space.size(), 2u);
    EXPECT_NEAR(m.effects.at("a")({1.0}), 0.7, 1e-15);
    EXPECT_THROW(parse_model(R"({"version": 1, "name": "bit", "dimension": 1,
        "vertices": [[0], [1], [0]],
        "effects": {"a": {"vertex_values": [0.2, 0.7, 0.3]}}})"),
                 RepresentabilityError);
}

TEST(ModelIo, SchemaDiagnostics) {
    auto message = [](const std::string& text) -> std::string {
        try {
            parse_model(text, "m.json");
        } catch (const InputError& err) {
            return err.what();
        }
        return "";
    };
    EXPECT_NE(message("{\n\"version\": 1,\n  oops\n}").find("line 3"), std::string::npos);
    EXPECT_NE(message(R"({"name": "x", "dimension": 1, "vertices": [[0]], "effects": {}})")
                  .find("'version'"),
              std::string::npos);
    EXPECT_NE(message(R"({"version": 2, "name": "x", "dimension": 1, "vertices": [[0]], "effects": {}})")
                  .find("unsupported version"),
              std::string::npos);
    EXPECT_NE(message(R"({"version": 1, "name": "x", "dimension": 1, "vertices": [[0], [1, 2]], "effects": {}})")
                  .find("vertices/1"),
              std::string::npos);
    EXPECT_NE(message(R"({"version": 1, "name": "x", "dimension": 1, "vertices": [[0], ["a"]], "effects": {}})")
                  .find("vertices/1/0"),
              std::string::npos);
    EXPECT_NE(message(std::string(square_header) + R"({"a": {"affine": [1, 0, 0], "vertex_values": [1, 1, 1, 1]}}})")
                  .find("exactly one"),
              std::string::npos);
    EXPECT_NE(message(std::string(square_header) + R"({"a": {"affine": [1, 0]}}})").find("effects/a"),
              std::string::npos);
    EXPECT_NE(message("[1, 2]").find("top level"), std::string::npos);
}

} // namespace
