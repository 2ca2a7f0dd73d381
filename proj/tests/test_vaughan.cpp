#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mobnil/circle.hpp"
#include "mobnil/vaughan.hpp"

using namespace mobnil;
using namespace mobnil::vaughan;

namespace {

Sequence random_sequence(std::uint64_t seed, std::int64_t n_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    auto values = std::make_shared<std::vector<cplx>>(static_cast<std::size_t>(n_max) + 1);
    for (auto& v : *values) v = std::polar(u(rng), 2 * std::numbers::pi * u(rng));
    return [values](std::int64_t n) { return (*values)[static_cast<std::size_t>(n)]; };
}

const sieve::MobiusTable& mu_table() {
    static const auto t = sieve::sieve_mobius(200'000);
    return t;
}

}  // namespace

TEST(Params, DefaultsAndValidation) {
    EXPECT_EQ(icbrt(0), 0);
    EXPECT_EQ(icbrt(26), 2);
    EXPECT_EQ(icbrt(27), 3);
    EXPECT_EQ(icbrt(999'999'999'999), 9'999);
    const auto p = VaughanParams::defaults(10'000);
    EXPECT_EQ(p.U, 21);
    EXPECT_EQ(p.V, 21);
    EXPECT_THROW((VaughanParams{100, 20, 20}.validate()), ParameterError);
    EXPECT_THROW((VaughanParams{100, 0, 2}.validate()), ParameterError);
    EXPECT_NO_THROW((VaughanParams{100, 10, 10}.validate()));
}

TEST(Coefficients, BoundedByDivisorFunction) {
    const auto tau = sieve::sieve_divisor(10'000);
    const auto a = coeff_a_table(10'000, 21, 21, mu_table());
    const auto b = coeff_b_table(10'000, 21, mu_table());
    for (std::int64_t d = 1; d <= 10'000; ++d) {
        ASSERT_LE(std::abs(a[d]), static_cast<std::int64_t>(tau(d)));
        ASSERT_LE(std::abs(b[d]), static_cast<std::int64_t>(tau(d)));
    }
    for (std::int64_t d = 1; d <= 10'000; d += 7) {
        ASSERT_EQ(a[d], coeff_a(d, 21, 21));
        ASSERT_EQ(b[d], coeff_b(d, 21));
    }
}

TEST(PartialSums, TotalIsMobius) {
    for (std::int64_t n = 1; n <= 3'000; ++n) {
        const auto s = vaughan_partial_sums(n, 12, 9);
        ASSERT_EQ(s.s1 + s.s2 + s.s3 + s.s4, sieve::mobius_of(n)) << n;
        std::int64_t via_a = 0;
        for (std::int64_t d = 1; d <= n; ++d) {
            if (n % d == 0) via_a += coeff_a(d, 12, 9);
        }
        ASSERT_EQ(s.s1, via_a) << n;
    }
}

TEST(Decompose, ResidualVanishes) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto f = random_sequence(seed, 20'000);
        const auto r = decompose(f, {10'000, 21, 21}, mu_table());
        EXPECT_LE(r.residual, 1e-9) << seed;
    }
    const auto f = random_sequence(99, 2'000);
    const auto r = decompose(f, {1'000, 5, 40}, mu_table());
    EXPECT_LE(r.residual, 1e-9);
}

TEST(Decompose, MobiusTableTooShort) {
    const auto mu = sieve::sieve_mobius(100);
    const auto f = random_sequence(1, 1'000);
    EXPECT_THROW(decompose(f, {100, 4, 4}, mu), RangeError);
}

TEST(TypeII, MatchesBruteForce) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto f = random_sequence(seed, 2'000);
        for (std::int64_t D : {3, 8, 16}) {
            for (std::int64_t W : {5, 8, 16}) {
                cplx s{};
                for (std::int64_t d = D + 1; d <= 2 * D; ++d)
                    for (std::int64_t e = D + 1; e <= 2 * D; ++e)
                        for (std::int64_t w = W + 1; w <= 2 * W; ++w)
                            for (std::int64_t v = W + 1; v <= 2 * W; ++v)
                                s += f(d * w) * std::conj(f(e * w)) * std::conj(f(d * v)) * f(e * v);
                const double brute = s.real() / static_cast<double>(D * D * W * W);
                ASSERT_NEAR(type_ii_box(f, D, W), brute, 1e-12 * std::max(1.0, std::abs(brute)));
                ASSERT_LE(std::abs(s.imag()) / static_cast<double>(D * D * W * W), 1e-12);
            }
        }
    }
    EXPECT_THROW(type_ii_box(random_sequence(1, 10), 0, 1), ParameterError);
    EXPECT_THROW(type_ii_box(random_sequence(1, 10), kMaxTypeIIBlock + 1, 1), CapacityError);
}

TEST(TypeI, BlocksCoverOneToUV) {
    const auto f = [](std::int64_t) { return cplx{1, 0}; };
    const auto levels = type_i_scan(f, {1'000, 10, 10}, 0.5);
    ASSERT_FALSE(levels.empty());
    EXPECT_EQ(levels.front().lo, 1);
    std::int64_t next = 1;
    for (const auto& l : levels) {
        EXPECT_EQ(l.lo, next);
        next = l.hi + 1;
        // A constant sequence has every average equal to 1.
        EXPECT_EQ(static_cast<std::int64_t>(l.qualifying.size()), l.hi - l.lo + 1);
        EXPECT_TRUE(l.qualifies);
    }
    EXPECT_EQ(next, 101);
}

TEST(Dichotomy, MobiusItselfIsLarge) {
    const auto& mu = mu_table();
    const auto f = [&mu](std::int64_t n) { return cplx(mu(n), 0); };
    const auto r = inverse_dichotomy(f, VaughanParams::defaults(2'000), 0.1, mu);
    EXPECT_TRUE(r.large);
    EXPECT_NE(r.branch, Branch::None);
    EXPECT_TRUE(r.type_i_witnessed || r.type_ii_witnessed);
    // Squarefree density.
    EXPECT_NEAR(r.correlation.real(), 6 / (std::numbers::pi * std::numbers::pi), 0.03);
}

TEST(Dichotomy, SmallCorrelationStops) {
    const auto f = [](std::int64_t n) { return circle::e(circle::frac_mul(std::numbers::sqrt2, n)); };
    const auto r = inverse_dichotomy(f, VaughanParams::defaults(5'000), 0.5, mu_table());
    EXPECT_FALSE(r.large);
    EXPECT_EQ(r.branch, Branch::None);
    EXPECT_TRUE(r.type_i.empty());
    EXPECT_EQ(to_string(Branch::TypeII), "type_ii");
}
