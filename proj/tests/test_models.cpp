#include <doctest.h>

#include "hypdim/error.hpp"
#include "hypdim/model_json.hpp"
#include "hypdim/models.hpp"
#include "hypdim/symbolic.hpp"

#include <cmath>
#include <random>

using namespace hypdim;
using doctest::Approx;

namespace {

Point pt(std::initializer_list<double> xs) {
    Point p(static_cast<int>(xs.size()));
    int i = 0;
    for (double x : xs) p[i++] = x;
    return p;
}

template <class Fn>
ErrorCode code_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an hypdim::Error");
    return ErrorCode::Unsupported;
}

std::vector<ModelSystem> builtins() {
    return {build_linear_horseshoe(3.0, 0.25), build_doubling_map(2), build_doubling_map(3),
            build_cantor_repeller(3, {0, 2}), build_cat_map(), build_golden_map()};
}

}  // namespace

TEST_CASE("evaluate on the built-in models") {
    const auto doubling = build_doubling_map(2);
    CHECK(doubling.evaluate(pt({0.3}))->coeff(0) == Approx(0.6).epsilon(1e-15));
    CHECK(doubling.evaluate(pt({0.75}))->coeff(0) == Approx(0.5).epsilon(1e-15));
    // x = 1/2 sits on the shared boundary and resolves to symbol 0, whose image 1 wraps to 0
    CHECK(doubling.branch_at(pt({0.5})) == 0);
    CHECK(doubling.evaluate(pt({0.5}))->coeff(0) == Approx(0.0));

    const auto cat = build_cat_map();
    const auto origin = cat.evaluate(pt({0.0, 0.0}));
    REQUIRE(origin);
    CHECK((*origin)[0] == 0.0);
    CHECK((*origin)[1] == 0.0);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = u(rng);
        const double y = u(rng);
        const auto img = cat.evaluate(pt({x, y}));
        REQUIRE(img);
        double ex = std::fmod(2 * x + y, 1.0);
        double ey = std::fmod(x + y, 1.0);
        CHECK((*img)[0] == Approx(ex).epsilon(1e-12));
        CHECK((*img)[1] == Approx(ey).epsilon(1e-12));
    }

    const auto hs = build_linear_horseshoe(3.0, 0.25);
    const auto a = hs.evaluate(pt({0.1, 0.5}));
    REQUIRE(a);
    CHECK((*a)[0] == Approx(0.3));
    CHECK((*a)[1] == Approx(0.125));
    const auto b = hs.evaluate(pt({0.9, 0.5}));
    REQUIRE(b);
    CHECK((*b)[0] == Approx(0.3));
    CHECK((*b)[1] == Approx(0.875));
    CHECK_FALSE(hs.evaluate(pt({0.5, 0.5})).has_value());
    CHECK(code_of([&] { hs.jacobian(pt({0.5, 0.5})); }) == ErrorCode::NoBranch);
}

TEST_CASE("jacobians are the branch linear parts") {
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    const auto j0 = hs.jacobian(pt({0.1, 0.3}));
    CHECK(j0(0, 0) == 3.0);
    CHECK(j0(1, 1) == 0.25);
    CHECK(j0(0, 1) == 0.0);
    const auto j1 = hs.jacobian(pt({0.8, 0.3}));
    CHECK(j1(0, 0) == -3.0);
    CHECK(j1(1, 1) == -0.25);

    CHECK(build_doubling_map(2).jacobian(pt({0.77}))(0, 0) == 2.0);

    const auto cat = build_cat_map();
    const auto jc = cat.jacobian(pt({0.9, 0.1}));
    CHECK(jc(0, 0) == 2.0);
    CHECK(jc(0, 1) == 1.0);
    CHECK(jc(1, 0) == 1.0);
    CHECK(jc(1, 1) == 1.0);
    CHECK(jc.determinant() == Approx(1.0));
}

TEST_CASE("cat map exposes its eigenvalues") {
    const auto cat = build_cat_map();
    const double phi2 = (3.0 + std::sqrt(5.0)) / 2.0;
    for (double lu : cat.lambda_u()) CHECK(lu == Approx(phi2).epsilon(1e-14));
    for (double ls : cat.lambda_s()) CHECK(ls == Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-14));
    const auto phi_u = potential(cat, PotentialLabel::PhiU);
    for (double v : phi_u.values) CHECK(v == Approx(-std::log(phi2)).epsilon(1e-14));
    CHECK(cat.invariant_set_is_whole_space());
    CHECK_FALSE(cat.has_geometric_coding());
}

TEST_CASE("potentials of the built-ins") {
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    for (double v : potential(hs, PotentialLabel::PhiU).values) CHECK(v == Approx(-std::log(3.0)).epsilon(1e-15));
    for (double v : potential(hs, PotentialLabel::PhiS).values) CHECK(v == Approx(std::log(0.25)).epsilon(1e-15));
    for (double v : potential(hs, PotentialLabel::Phi).values) CHECK(v == Approx(-std::log(0.75)).epsilon(1e-15));

    const auto d2 = build_doubling_map(2);
    for (double v : potential(d2, PotentialLabel::Phi).values) CHECK(v == Approx(-std::log(2.0)).epsilon(1e-15));
    CHECK(code_of([&] { potential(d2, PotentialLabel::PhiS); }) == ErrorCode::IncompatibleLabel);
    CHECK(code_of([&] { potential(d2, PotentialLabel::Custom); }) == ErrorCode::IncompatibleLabel);

    const auto shifted = potential(hs, PotentialLabel::PhiU).shifted(2.0);
    CHECK(shifted.values[0] == Approx(2.0 - std::log(3.0)));
}

TEST_CASE("horseshoe constructor and its dimensions") {
    CHECK(horseshoe_unstable_dimension(3.0) == Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-15));
    CHECK(horseshoe_unstable_dimension(3.0) == Approx(0.63093).epsilon(1e-5));
    CHECK(horseshoe_stable_dimension(0.25) == Approx(0.5).epsilon(1e-15));
    CHECK(std::abs(horseshoe_unstable_dimension(2.0 + 1e-3) - 1.0) < 1e-2);
    CHECK_NOTHROW(build_linear_horseshoe(2.0 + 1e-3, 0.25));
    CHECK(code_of([] { build_linear_horseshoe(2.0, 0.25); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { build_linear_horseshoe(3.0, 0.5); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { build_linear_horseshoe(3.0, 0.0); }) == ErrorCode::ParameterOutOfRange);
}

TEST_CASE("doubling and cantor constructors") {
    const auto d3 = build_doubling_map(3);
    CHECK(d3.symbol_count() == 3);
    for (const auto& b : d3.branches()) CHECK(b.linear(0, 0) == 3.0);
    CHECK(is_primitive(build_doubling_map(2).transition()));
    CHECK(code_of([] { build_doubling_map(1); }) == ErrorCode::ParameterOutOfRange);

    const auto cantor = build_cantor_repeller(3, {0, 2});
    CHECK(cantor.symbol_count() == 2);
    CHECK(cantor.branches()[1].domain.lo[0] == Approx(2.0 / 3.0));
    CHECK_FALSE(cantor.evaluate(pt({0.5})).has_value());
    CHECK(code_of([] { build_cantor_repeller(3, {0, 3}); }) == ErrorCode::ParameterOutOfRange);
    CHECK(code_of([] { build_cantor_repeller(3, {}); }) == ErrorCode::ParameterOutOfRange);

    // keeping every digit leaves the whole circle: the images cover it
    const auto full = build_cantor_repeller(2, {0, 1});
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) CHECK(full.evaluate(pt({u(rng)})).has_value());
}

TEST_CASE("split multiplicativity and the inverse branch") {
    for (const auto& m : builtins()) {
        if (m.kind() != MapKind::Diffeomorphism) continue;
        for (std::size_t i = 0; i < m.symbol_count(); ++i) {
            CHECK(std::abs(m.branches()[i].linear.determinant()) ==
                  Approx(m.lambda_u()[i] * m.lambda_s()[i]).epsilon(1e-14));
        }
        std::mt19937_64 rng(11);
        for (std::size_t i = 0; i < m.symbol_count(); ++i) {
            const auto& dom = m.branches()[i].domain;
            for (int t = 0; t < 50; ++t) {
                Point x(m.dim());
                for (int a = 0; a < m.dim(); ++a) {
                    x[a] = std::uniform_real_distribution<double>(dom.lo[a], dom.hi[a])(rng);
                }
                if (m.branch_at(x) != static_cast<int>(i)) continue;
                const auto y = m.evaluate(x);
                REQUIRE(y);
                const auto back = m.evaluate_inverse(*y);
                REQUIRE(back);
                CHECK(sup_distance(*back, x, m.geometry()) < 1e-12);
            }
        }
    }
}

TEST_CASE("adapted metric: one step expands unstable basis vectors by lambda_min") {
    for (const auto& m : builtins()) {
        if (!m.has_geometric_coding()) continue;
        for (std::size_t i = 0; i < m.symbol_count(); ++i) {
            const auto& L = m.branches()[i].linear;
            for (int a = 0; a < m.unstable_dim(); ++a) {
                Eigen::VectorXd e = Eigen::VectorXd::Zero(m.dim());
                e[a] = 1.0;
                CHECK((L * e).norm() >= std::pow(m.lambda_u()[i], 1.0 / m.unstable_dim()) - 1e-12);
            }
        }
    }
}

TEST_CASE("model validation") {
    const auto good = build_doubling_map(2);
    auto branches = good.branches();
    CHECK(code_of([&] {
              ModelSystem("x", good.space(), MapKind::Expanding, branches, TransitionMatrix(std::vector<std::vector<int>>{{1}}), 1);
          }) == ErrorCode::InvalidModel);
    auto shrinking = branches;
    shrinking[0].linear(0, 0) = 0.5;
    CHECK(code_of([&] {
              ModelSystem("x", good.space(), MapKind::Expanding, shrinking, good.transition(), 1);
          }) == ErrorCode::InvalidModel);
    auto outside = branches;
    outside[1].domain.hi[0] = 1.5;
    CHECK(code_of([&] {
              ModelSystem("x", good.space(), MapKind::Expanding, outside, good.transition(), 1);
          }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { TransitionMatrix({{1, 1}, {0, 0}}); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { TransitionMatrix({{1, 2}, {1, 1}}); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { TransitionMatrix(std::vector<std::vector<int>>{{1, 1}}); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { TransitionMatrix({{1, 0}, {1, 0}}); }) == ErrorCode::InvalidModel);
}

TEST_CASE("power model composes branches") {
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    const auto g = power_model(hs, 2);
    CHECK(g.symbol_count() == 4);
    CHECK(g.lambda_u()[0] == Approx(9.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int tested = 0;
    for (int i = 0; i < 2000 && tested < 200; ++i) {
        const Point x = pt({u(rng), u(rng)});
        const auto fx = hs.evaluate(x);
        if (!fx) continue;
        const auto ffx = hs.evaluate(*fx);
        if (!ffx) continue;
        const auto gx = g.evaluate(x);
        REQUIRE(gx);
        CHECK(sup_distance(*gx, *ffx, g.geometry()) < 1e-12);
        ++tested;
    }
    CHECK(tested > 50);

    const auto golden2 = power_model(build_golden_map(), 2);
    CHECK(golden2.symbol_count() == 3);  // 00, 01, 10
}

TEST_CASE("JSON round trip preserves every built-in") {
    for (const auto& m : builtins()) {
        const auto doc = model_to_json(m);
        const auto back = model_from_json(doc, m.name());
        CHECK(model_to_json(back) == doc);
        CHECK(back.kind() == m.kind());
        CHECK(back.transition() == m.transition());
        CHECK(back.has_geometric_coding() == m.has_geometric_coding());
        CHECK(doc.at("kind") == (m.kind() == MapKind::Diffeomorphism ? "diffeo" : "expanding"));
    }
}

TEST_CASE("JSON schema violations are InvalidModel") {
    auto doc = model_to_json(build_doubling_map(2));
    auto broken = doc;
    broken["space"]["geometry"] = "sphere";
    CHECK(code_of([&] { model_from_json(broken); }) == ErrorCode::InvalidModel);
    broken = doc;
    broken.erase("transition");
    CHECK(code_of([&] { model_from_json(broken); }) == ErrorCode::InvalidModel);
    broken = doc;
    broken["branches"][0]["offset"] = nlohmann::json::array({0.0, 1.0});
    CHECK(code_of([&] { model_from_json(broken); }) == ErrorCode::InvalidModel);
    broken = doc;
    broken["kind"] = 3;
    CHECK(code_of([&] { model_from_json(broken); }) == ErrorCode::InvalidModel);
    CHECK(code_of([] { load_model_file("/nonexistent/model.json"); }) == ErrorCode::InvalidModel);
}
