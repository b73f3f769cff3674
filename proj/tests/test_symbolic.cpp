#include <doctest.h>

#include "hypdim/error.hpp"
#include "hypdim/models.hpp"
#include "hypdim/symbolic.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace hypdim;
using doctest::Approx;

namespace {

const TransitionMatrix kFull2({{1, 1}, {1, 1}});
const TransitionMatrix kGolden({{1, 1}, {1, 0}});

Potential custom(std::vector<double> values) {
    Potential p;
    p.values = std::move(values);
    return p;
}

/// Independent oracle: largest eigenvalue modulus from a dense eigensolver.
double eigen_radius(const TransitionMatrix& a, const Potential& pot) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = a.allowed(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) ? std::exp(pot.values[j]) : 0.0;
        }
    }
    return Eigen::EigenSolver<Eigen::MatrixXd>(m).eigenvalues().cwiseAbs().maxCoeff();
}

/// Independent oracle: Z_k = 1^T D (A D)^(k-1) 1 with D = diag(exp(potential)).
double transfer_sum(const TransitionMatrix& a, const Potential& pot, int k) {
    const auto n = static_cast<Eigen::Index>(a.size());
    Eigen::MatrixXd ad(n, n);
    Eigen::VectorXd d(n);
    for (Eigen::Index j = 0; j < n; ++j) d[j] = std::exp(pot.values[j]);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            ad(i, j) = a.allowed(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) ? d[j] : 0.0;
        }
    }
    Eigen::RowVectorXd v = d.transpose();
    for (int t = 1; t < k; ++t) v = v * ad;
    return v.sum();
}

std::vector<ModelSystem> builtins() {
    return {build_linear_horseshoe(3.0, 0.25), build_doubling_map(2), build_doubling_map(3),
            build_cantor_repeller(3, {0, 2}), build_cat_map(), build_golden_map()};
}

PotentialLabel geometric_label(const ModelSystem& m) {
    return m.kind() == MapKind::Diffeomorphism ? PotentialLabel::PhiU : PotentialLabel::Phi;
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

}  // namespace

TEST_CASE("primitivity") {
    CHECK(is_primitive(kFull2));
    CHECK_FALSE(is_primitive(TransitionMatrix({{0, 1}, {1, 0}})));
    CHECK(is_primitive(kGolden));
    CHECK_FALSE(is_primitive(TransitionMatrix({{1, 0}, {0, 1}})));
    CHECK(code_of([] { pressure_spectral(TransitionMatrix({{0, 1}, {1, 0}}), custom({0.0, 0.0})); }) ==
          ErrorCode::NotMixing);
}

TEST_CASE("admissible words") {
    CHECK(admissible_words(kFull2, 3).size() == 8);
    const auto golden = admissible_words(kGolden, 3);
    REQUIRE(golden.size() == 5);
    CHECK(golden[0] == Word{0, 0, 0});
    CHECK(golden[1] == Word{0, 0, 1});
    CHECK(golden[2] == Word{0, 1, 0});
    CHECK(golden[3] == Word{1, 0, 0});
    CHECK(golden[4] == Word{1, 0, 1});
    const auto ones = admissible_words(kFull2, 1);
    REQUIRE(ones.size() == 2);
    CHECK(ones[0] == Word{0});
    CHECK(ones[1] == Word{1});
    // Fibonacci counts
    std::uint64_t a = 2;
    std::uint64_t b = 3;
    for (int k = 2; k < 40; ++k) {
        CHECK(count_words(kGolden, k) == b);
        const std::uint64_t c = a + b;
        a = b;
        b = c;
    }
    CHECK(code_of([] { admissible_words(kFull2, 25); }) == ErrorCode::CapExceeded);
}

TEST_CASE("Birkhoff sums") {
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    const auto phi_u = potential(hs, PotentialLabel::PhiU);
    CHECK(birkhoff_sum(phi_u, Word{0, 1, 1}) == Approx(-3.0 * std::log(3.0)).epsilon(1e-15));
    const auto phi = potential(build_doubling_map(2), PotentialLabel::Phi);
    for (int k = 1; k <= 7; ++k) CHECK(birkhoff_sum(phi, Word(k, 1)) == Approx(-k * std::log(2.0)).epsilon(1e-15));
    CHECK(birkhoff_sum(custom({0.3, -1.7}), Word{0, 1, 0}) == Approx(2 * 0.3 - 1.7).epsilon(1e-15));
}

TEST_CASE("partition sums against closed forms and the transfer oracle") {
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    const auto phi_u = potential(hs, PotentialLabel::PhiU);
    for (int k = 1; k <= 12; ++k) {
        const double z = partition_sum(hs, phi_u, k);
        CHECK(z == Approx(std::pow(2.0 / 3.0, k)).epsilon(1e-13));
        CHECK(std::log(z) / k == Approx(std::log(2.0 / 3.0)).epsilon(1e-13));
    }
    const auto d2 = build_doubling_map(2);
    for (int k = 1; k <= 12; ++k) CHECK(partition_sum(d2, potential(d2, PotentialLabel::Phi), k) == Approx(1.0).epsilon(1e-13));
    const auto golden = build_golden_map();
    CHECK(partition_sum(golden, zero_potential(golden), 3) == Approx(5.0));

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& m : builtins()) {
        const Potential pot = custom(std::vector<double>(m.symbol_count()));
        Potential random = pot;
        for (auto& v : random.values) v = u(rng);
        for (int k : {1, 2, 5, 9}) {
            CHECK(partition_sum(m, random, k) == Approx(transfer_sum(m.transition(), random, k)).epsilon(1e-12));
        }
    }
}

TEST_CASE("partition sums are multiplicative on full shifts with constant potential") {
    for (const auto& m : {build_linear_horseshoe(3.0, 0.25), build_doubling_map(2), build_doubling_map(3)}) {
        const auto pot = potential(m, geometric_label(m));
        for (int k = 1; k <= 5; ++k) {
            for (int l = 1; l <= 5; ++l) {
                const double lhs = partition_sum(m, pot, k + l);
                const double rhs = partition_sum(m, pot, k) * partition_sum(m, pot, l);
                CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(rhs));
            }
        }
    }
}

TEST_CASE("separated sets and the delta guard") {
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    CHECK(min_branch_gap(hs) == Approx(1.0 / 3.0));
    CHECK(default_delta(hs) == Approx(1.0 / 6.0));
    const auto set = separated_set(hs, 4);
    REQUIRE(set.points.size() == 16);
    for (std::size_t a = 0; a < set.points.size(); ++a) {
        for (std::size_t b = a + 1; b < set.points.size(); ++b) {
            Point y = set.points[a];
            Point z = set.points[b];
            bool separated = false;
            for (int i = 0; i < set.k && !separated; ++i) {
                if (sup_distance(y, z, hs.geometry()) >= set.delta) separated = true;
                if (i + 1 < set.k) {
                    y = *hs.evaluate(y);
                    z = *hs.evaluate(z);
                }
            }
            CHECK(separated);
        }
    }
    CHECK(code_of([&] { separated_set(hs, 3, 0.5); }) == ErrorCode::DeltaTooLarge);
    CHECK(code_of([&] { partition_sum(hs, potential(hs, PotentialLabel::PhiU), 3, 0.5); }) == ErrorCode::DeltaTooLarge);
    CHECK(default_delta(build_doubling_map(2)) > 0.0);
}

TEST_CASE("cylinder rectangles") {
    const auto cantor = build_cantor_repeller(3, {0, 2});
    const auto r = cylinder_rect(cantor, Word{0, 1});
    REQUIRE(r);
    CHECK(r->lo[0] == Approx(2.0 / 9.0));
    CHECK(r->hi[0] == Approx(1.0 / 3.0));
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    const auto b = backward_rect(hs, Word{0});
    REQUIRE(b);
    CHECK(b->lo[1] == Approx(0.0));
    CHECK(b->hi[1] == Approx(0.25));
    const auto b1 = backward_rect(hs, Word{1});
    REQUIRE(b1);
    CHECK(b1->lo[1] == Approx(0.75));
    CHECK(code_of([] { cylinder_rect(build_cat_map(), Word{0}); }) == ErrorCode::Unsupported);
}

TEST_CASE("spectral pressure against hand values and an eigensolver") {
    const auto hs = build_linear_horseshoe(3.0, 0.25);
    CHECK(pressure_spectral(hs, potential(hs, PotentialLabel::PhiU)) ==
          Approx(std::log(2.0) - std::log(3.0)).epsilon(1e-14));
    const auto d2 = build_doubling_map(2);
    CHECK(std::abs(pressure_spectral(d2, potential(d2, PotentialLabel::Phi))) < 1e-14);
    CHECK(pressure_spectral(kFull2, custom({0.0, 0.0})) == Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(pressure_spectral(kGolden, custom({0.0, 0.0})) == Approx(std::log((1 + std::sqrt(5.0)) / 2)).epsilon(1e-14));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (const auto& m : builtins()) {
        for (int t = 0; t < 10; ++t) {
            Potential pot = custom(std::vector<double>(m.symbol_count()));
            for (auto& v : pot.values) v = u(rng);
            CHECK(pressure_spectral(m, pot) == Approx(std::log(eigen_radius(m.transition(), pot))).epsilon(1e-12));
        }
    }
}

TEST_CASE("pressure translation and monotonicity") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (const auto& m : builtins()) {
        const auto base = potential(m, geometric_label(m));
        const double p0 = pressure_spectral(m, base);
        for (double c : {-1.0, 0.5, 2.0}) CHECK(std::abs(pressure_spectral(m, base.shifted(c)) - (p0 + c)) <= 1e-12);
        for (int t = 0; t < 10; ++t) {
            Potential lower = base;
            Potential upper = base;
            for (std::size_t i = 0; i < lower.values.size(); ++i) upper.values[i] += std::abs(u(rng));
            CHECK(pressure_spectral(m, lower) <= pressure_spectral(m, upper) + 1e-15);
        }
    }
}

TEST_CASE("partition sums approach the spectral value") {
    for (const auto& m : builtins()) {
        const auto pot = potential(m, geometric_label(m));
        const double p = pressure_spectral(m, pot);
        // 16 words per symbol fit the enumeration cap for two symbols; three symbols allow 15
        const int k = m.symbol_count() == 2 ? 16 : 15;
        const double gap = std::abs(std::log(partition_sum(m, pot, k)) / k - p);
        CHECK(gap < 0.2);
        const double gap16 = std::abs(std::log(transfer_sum(m.transition(), pot, 16)) / 16 - p);
        CHECK(gap16 < 0.2);
    }
}

TEST_CASE("Markov measure statistics") {
    const auto d2 = build_doubling_map(2);
    const auto phi = potential(d2, PotentialLabel::Phi);
    const auto uniform = MarkovMeasure::bernoulli({0.5, 0.5});
    const auto s = markov_measure_stats(d2, phi, uniform);
    CHECK(s.entropy == Approx(std::log(2.0)).epsilon(1e-14));
    REQUIRE(s.exponents.size() == 1);
    CHECK(s.exponents[0].value == Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(s.exponents[0].multiplicity == 1);
    CHECK(std::abs(s.entropy - s.positive_exponent_sum()) < 1e-14);

    const auto hs = build_linear_horseshoe(3.0, 0.25);
    const auto hs_stats = markov_measure_stats(hs, potential(hs, PotentialLabel::PhiU), uniform);
    CHECK(hs_stats.entropy == Approx(std::log(2.0)).epsilon(1e-14));
    REQUIRE(hs_stats.exponents.size() == 2);
    CHECK(hs_stats.exponents[0].value == Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(hs_stats.exponents[1].value == Approx(std::log(0.25)).epsilon(1e-14));
    CHECK(hs_stats.entropy < hs_stats.positive_exponent_sum());

    for (const auto& m : builtins()) {
        const auto stats = markov_measure_stats(m, zero_potential(m), MarkovMeasure::point_mass(m.symbol_count(), 0));
        CHECK(stats.entropy == Approx(0.0));
        int mult = 0;
        for (const auto& e : stats.exponents) mult += e.multiplicity;
        CHECK(mult == m.dim());
    }

    const auto golden = build_golden_map();
    CHECK(code_of([&] { markov_measure_stats(golden, zero_potential(golden), MarkovMeasure::point_mass(2, 1)); }) ==
          ErrorCode::IncompatibleStochastics);
    CHECK(code_of([&] { markov_measure_stats(golden, zero_potential(golden), MarkovMeasure::bernoulli({0.2, 0.3})); }) ==
          ErrorCode::IncompatibleStochastics);
    CHECK(code_of([&] { markov_measure_stats(golden, zero_potential(golden), MarkovMeasure::bernoulli({1.0})); }) ==
          ErrorCode::IncompatibleStochastics);
}

TEST_CASE("Margulis-Ruelle and the variational bound for random Markov measures") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (const auto& m : builtins()) {
        const auto n = static_cast<Eigen::Index>(m.symbol_count());
        const auto geometric = potential(m, geometric_label(m));
        const double p = pressure_spectral(m, geometric);
        for (int t = 0; t < 25; ++t) {
            Eigen::MatrixXd stochastic = Eigen::MatrixXd::Zero(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (m.transition().allowed(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) {
                        stochastic(i, j) = u(rng);
                    }
                }
                stochastic.row(i) /= stochastic.row(i).sum();
            }
            const auto measure = MarkovMeasure::from_transition(stochastic);
            const auto stats = markov_measure_stats(m, geometric, measure);
            CHECK(stats.entropy <= std::log(static_cast<double>(n)) + 1e-12);
            CHECK(stats.entropy + stats.potential_integral <= p + 1e-12);
            if (m.kind() == MapKind::Expanding) CHECK(stats.entropy <= -stats.potential_integral + 1e-12);
            CHECK(stats.entropy <= stats.positive_exponent_sum() + 1e-12);
        }
        const auto eq = markov_measure_stats(m, geometric, equilibrium_measure(m.transition(), geometric));
        CHECK(std::abs(eq.entropy + eq.potential_integral - p) <= 1e-12);
        const auto parry = markov_measure_stats(m, zero_potential(m), parry_measure(m.transition()));
        CHECK(std::abs(parry.entropy - pressure_spectral(m, zero_potential(m))) <= 1e-12);
    }
}
