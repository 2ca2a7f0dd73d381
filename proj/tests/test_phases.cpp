#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mobnil/nilflow.hpp"
#include "mobnil/phases.hpp"

using namespace mobnil;
using namespace mobnil::phases;
using circle::frac_mul;
using circle::norm;
using circle::reduce;

namespace {

std::vector<std::int64_t> range(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> v;
    for (std::int64_t n = lo; n <= hi; ++n) v.push_back(n);
    return v;
}

TabulatedPhase quadratic(double a, double b, double c, const std::vector<std::int64_t>& dom) {
    return TabulatedPhase::from_function(dom, [&](std::int64_t n) { return reduce(frac_mul(a, n * n) + frac_mul(b, n) + c); });
}

}  // namespace

TEST(Bohr, Norm) {
    EXPECT_EQ(bohr_norm(0, {0.3, 0.7}, 10), 0.0);
    EXPECT_DOUBLE_EQ(bohr_norm(7, {0.0, 0.0}, 100), 0.07);
    EXPECT_DOUBLE_EQ(bohr_norm(2, {0.25}, 100), 0.52);
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 1000; ++i) {
        const std::vector<double> g{u(rng), u(rng)};
        const std::int64_t n = static_cast<std::int64_t>(rng() % 20) + 1, m = static_cast<std::int64_t>(rng() % 500);
        ASSERT_LE(bohr_norm(n * m, g, 1000), n * bohr_norm(m, g, 1000) + 1e-12);
    }
}

TEST(Bohr, Enumerate) {
    BohrSetSpec s{{0.5}, 10, 0, 0.3, {-10, 10}};
    EXPECT_EQ(bohr_enumerate(s), (std::vector<std::int64_t>{-2, 0, 2}));
    s = {{0.3, 0.1}, 50, 0, 2.1, {-50, 50}};
    EXPECT_EQ(bohr_enumerate(s).size(), 101u);
    s = {{std::numbers::sqrt2}, 1000, 17, 1e-9, {0, 100}};
    EXPECT_EQ(bohr_enumerate(s), (std::vector<std::int64_t>{17}));
    s = {{0.1}, 10, 0, 0.1, {0, kMaxBohrWindow + 1}};
    EXPECT_THROW(bohr_enumerate(s), CapacityError);
}

TEST(Bohr, PropertyReport) {
    BohrSetSpec flat{{0.0}, 1000, 0, 0.1, {-1000, 1000}};
    auto r = bohr_property_report(flat, 1);
    EXPECT_EQ(r.size_rho, 199);
    EXPECT_EQ(r.size_2rho, 399);
    EXPECT_EQ(r.divisible_count, r.size_rho);
    EXPECT_TRUE(r.lower_holds && r.doubling_holds && r.divisible_holds);

    BohrSetSpec s{{std::numbers::sqrt2}, 10'000, 0, 0.1, {-10'000, 10'000}};
    r = bohr_property_report(s, 3);
    std::int64_t size = 0, div = 0;
    for (std::int64_t n = -10'000; n <= 10'000; ++n) {
        const double v = norm(n * std::numbers::sqrt2) + std::abs(n) / 10'000.0;
        if (v < 0.1) {
            ++size;
            div += n % 3 == 0;
        }
    }
    EXPECT_EQ(r.size_rho, size);
    EXPECT_EQ(r.divisible_count, div);
    EXPECT_TRUE(r.doubling_holds);
    EXPECT_TRUE(r.divisible_holds);
}

TEST(TabulatedPhase, BasicsAndCsv) {
    const TabulatedPhase p({5, 1, 3}, {0.25, 0.75, 1.5});
    EXPECT_EQ(p.domain(), (std::vector<std::int64_t>{1, 3, 5}));
    EXPECT_DOUBLE_EQ(p.at(1), -0.25);
    EXPECT_DOUBLE_EQ(p.at(3), 0.5);
    EXPECT_FALSE(p.get(2).has_value());
    EXPECT_THROW(p.at(2), DomainError);
    EXPECT_THROW(TabulatedPhase({1, 1}, {0.1, 0.2}), DomainError);
    const auto back = TabulatedPhase::from_csv(p.to_csv());
    EXPECT_EQ(back.domain(), p.domain());
    EXPECT_EQ(back.values(), p.values());
    EXPECT_EQ(p.to_csv().substr(0, 6), "n,phi\n");
    // Sparse domains skip the dense index but behave the same.
    const TabulatedPhase sparse({0, 1'000'000'000}, {0.1, 0.2});
    EXPECT_DOUBLE_EQ(sparse.at(1'000'000'000), 0.2);
    EXPECT_FALSE(sparse.contains(5));
}

TEST(LocalPolynomial, GlobalQuadraticsPass) {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 20; ++i) {
        const auto phi = quadratic(u(rng), u(rng), u(rng), range(-20, 39));
        const auto r = is_locally_polynomial(phi, 2, 1e-12);
        EXPECT_TRUE(r.exhaustive);
        EXPECT_TRUE(r.holds) << r.worst_residual;
        EXPECT_LT(r.worst_residual, 1e-12);
        EXPECT_GT(r.checked_count, 0);
    }
    // Degree 1 is stricter.
    EXPECT_FALSE(is_locally_polynomial(quadratic(0.1234, 0, 0, range(1, 30)), 1, 1e-9).holds);
    EXPECT_TRUE(is_locally_polynomial(quadratic(0, 0.1234, 0.5, range(1, 30)), 1, 1e-12).holds);
}

TEST(LocalPolynomial, RandomPhaseFailsWithWitness) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const auto phi = TabulatedPhase::from_function(range(1, 40), [&](std::int64_t) { return u(rng); });
    const auto r = is_locally_polynomial(phi, 2, 1e-6);
    EXPECT_FALSE(r.holds);
    ASSERT_EQ(r.worst_witness.size(), 4u);
    const auto& w = r.worst_witness;
    double s = 0;
    for (int mask = 0; mask < 8; ++mask) {
        std::int64_t n = w[0];
        for (int b = 0; b < 3; ++b) n += (mask >> b & 1) ? w[1 + b] : 0;
        s += (__builtin_popcount(mask) % 2 ? -1 : 1) * phi.at(n);
    }
    EXPECT_NEAR(norm(s), r.worst_residual, 1e-12);
}

TEST(LocalPolynomial, BracketOnBohrSetAndInterval) {
    const double a = std::numbers::sqrt2 - 1, b = std::numbers::sqrt3 - 1, c = 0.3137;
    auto bracket = [&](std::int64_t n) { return reduce(frac_mul(a, n) * frac_mul(b, n) * c); };
    std::vector<std::int64_t> S;
    for (std::int64_t n = -5'000; n <= 5'000; ++n) {
        if (std::abs(frac_mul(a, n)) <= 0.1 && std::abs(frac_mul(b, n)) <= 0.1) S.push_back(n);
    }
    LocalPolyOptions opt;
    opt.sample_budget = 20'000;
    auto r = is_locally_polynomial(TabulatedPhase::from_function(S, bracket), 2, 1e-9, opt);
    EXPECT_FALSE(r.exhaustive);
    EXPECT_TRUE(r.holds) << r.worst_residual;
    EXPECT_GT(r.checked_count, 0);
    r = is_locally_polynomial(TabulatedPhase::from_function(range(1, 64), bracket), 2, 1e-6);
    EXPECT_TRUE(r.exhaustive);
    EXPECT_FALSE(r.holds);
    EXPECT_EQ(r.worst_witness.size(), 4u);
}

TEST(LocalPolynomial, SampledModeIsSeeded) {
    const auto phi = quadratic(0.1, 0.2, 0, range(1, 500));
    LocalPolyOptions opt;
    opt.sample_budget = 1'000;
    const auto a = is_locally_polynomial(phi, 2, 1e-9, opt);
    const auto b = is_locally_polynomial(phi, 2, 1e-9, opt);
    EXPECT_EQ(a.worst_residual, b.worst_residual);
    EXPECT_EQ(a.checked_count, b.checked_count);
}

TEST(SecondDerivative, Properties) {
    const double a = 0.0731;
    const auto phi = quadratic(a, 0.4, 0.1, range(0, 100));
    for (std::int64_t h1 = 0; h1 <= 10; ++h1) {
        for (std::int64_t h2 = 0; h2 <= 10; ++h2) {
            const double d = second_derivative(phi, 3, h1, h2);
            EXPECT_LT(norm(d - 2 * a * h1 * h2), 1e-12);
            EXPECT_LT(norm(d - second_derivative(phi, 40, h1, h2)), 1e-12);
            EXPECT_LT(norm(d - second_derivative(phi, 3, h2, h1)), 1e-12);
            EXPECT_LT(norm(second_derivative(phi, 3, h1 + 5, h2) - d - second_derivative(phi, 3, 5, h2)), 1e-12);
        }
    }
    EXPECT_LT(norm(second_derivative(phi, 3, 0, 7)), 1e-15);
    const auto lin = quadratic(0, 0.37, 0, range(0, 50));
    EXPECT_LT(norm(second_derivative(lin, 1, 4, 9)), 1e-15);
    EXPECT_THROW(second_derivative(phi, 95, 4, 4), DomainError);
}

TEST(QuadGrowth, Examples) {
    const auto phi = quadratic(0.0731, 0.4, 0.1, range(-100, 200));
    auto r = quad_growth_check(phi, 5, 3, 20);
    EXPECT_LT(r.max_residual, 1e-12);
    r = quad_growth_check(phi, 5, 3, 2);
    EXPECT_LT(r.max_residual, 1e-15);

    // Heisenberg pi3 restricted to a Bohr set around 0.
    const nilflow::HeisII<double> g{std::numbers::sqrt2 - 1, std::numbers::sqrt3 - 1, 1.0 / 7};
    const std::int64_t h = 12;  // ||12 alpha1|| < 0.03 keeps [n alpha1] linear along the progression
    std::vector<std::int64_t> dom;
    for (std::int64_t l = 0; l <= 6; ++l) dom.push_back(l * h);
    for (std::int64_t l = 0; l <= 6; ++l) dom.push_back(2 * h + l * h);
    std::sort(dom.begin(), dom.end());
    dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
    const auto pi3 = TabulatedPhase::from_function(dom, [&](std::int64_t n) { return nilflow::heis_orbit_pi3(g, n); });
    r = quad_growth_check(pi3, 0, h, 6);
    EXPECT_LT(r.max_residual, 1e-9);
    EXPECT_THROW(quad_growth_check(phi, 190, 5, 10), DomainError);
}

TEST(QuarticGrowth, QuadraticPhase) {
    const double a = 0.01234;
    QuarticParams p{3, 2, 1, 1, 3, 3};
    std::vector<std::int64_t> dom = range(-200, 200);
    const auto phi = quadratic(a, 0, 0, dom);
    std::vector<QuarticTuple> tuples;
    std::mt19937_64 rng(24);
    for (int i = 0; i < 50; ++i) {
        auto k = [&] { return static_cast<std::int64_t>(rng() % 3) - 1; };
        tuples.push_back({k(), k(), k(), k(), k(), k()});
    }
    tuples.push_back({0, 0, 1, 0, 1, 1});
    const auto r = quartic_growth_check(phi, p, tuples);
    EXPECT_LT(r.max_residual, 1e-10);
    for (std::size_t i = 0; i < tuples.size(); ++i) {
        const auto& t = tuples[i];
        EXPECT_LT(norm(r.rhs[i] - 4 * a * t.l1 * t.l2 * t.m1 * t.m2 * 1.0), 1e-10);
        if (t.l1 == 0) EXPECT_LT(norm(r.lhs[i]), 1e-10);
    }
    const auto small = quadratic(a, 0, 0, range(-10, 10));
    EXPECT_THROW(quartic_growth_check(small, {3, 2, 1, 1, 3, 3}, {{3, 3, 3, 3, 3, 3}}), ConstraintError);
    QuarticBohrGuard guard{{0.3}, 100, 0, 0.01};
    EXPECT_THROW(quartic_growth_check(phi, p, tuples, guard), ConstraintError);
}

TEST(Lipschitz, Extension) {
    auto dist = [](double x, double y) { return std::abs(x - y); };
    const std::vector<double> Y{0.0, 1.0}, f{0.0, 0.5};
    const std::vector<double> X{-1.0, 0.0, 0.25, 0.5, 1.0, 3.0};
    const auto ext = lipschitz_extend(Y, f, X, 1.0, dist);
    const std::vector<double> want{0.5, 0.0, 0.25, 0.5, 0.5, 0.5};
    for (std::size_t i = 0; i < X.size(); ++i) EXPECT_DOUBLE_EQ(ext[i], want[i]);
    EXPECT_LE(lipschitz_constant(X, ext, dist), 1.0 + 1e-12);
    EXPECT_EQ(lipschitz_extend(Y, f, Y, 1.0, dist), f);
    const auto single = lipschitz_extend(std::vector<double>{2.0}, std::vector<double>{0.7}, X, 3.0, dist);
    for (double v : single) EXPECT_LE(v, 0.7);
    EXPECT_THROW(lipschitz_extend(std::vector<double>{}, std::vector<double>{}, X, 1.0, dist), PreconditionError);
    EXPECT_THROW(lipschitz_extend(Y, std::vector<double>{0.0, 5.0}, X, 1.0, dist), PreconditionError);
    const std::vector<cplx> fc{{0, 0}, {0.5, -0.5}};
    const auto ec = lipschitz_extend(Y, fc, X, 1.0, dist);
    EXPECT_EQ(ec[1], cplx(0, 0));
}

TEST(SoftThreshold, Examples) {
    const std::vector<double> F{-0.7, -0.05, 0.0, 0.3, 1.0};
    EXPECT_EQ(soft_threshold(F, 1.0, 0.0), F);
    EXPECT_EQ(soft_threshold(std::vector<double>(3, 0.5), 0.0, 0.2), std::vector<double>(3, 0.5));
    std::vector<double> xs;
    for (int i = 0; i <= 100; ++i) xs.push_back(i / 100.0);
    const auto t = soft_threshold(xs, 1.0, 0.1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_NEAR(t[i], std::max(xs[i] - 0.1, 0.0), 1e-15);
        EXPECT_LE(std::abs(t[i] - xs[i]), 0.1 + 1e-15);
    }
    auto dist = [](double x, double y) { return std::abs(x - y); };
    EXPECT_LE(lipschitz_constant(xs, t, dist), 1.0 + 1e-12);
    const auto c = soft_threshold(std::vector<cplx>{{0.3, 0.4}}, 1.0, 0.25);
    EXPECT_NEAR(std::abs(c[0]), 0.25, 1e-15);
    EXPECT_NEAR(std::arg(c[0]), std::arg(cplx(0.3, 0.4)), 1e-15);
}
