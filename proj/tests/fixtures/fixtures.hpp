#pragma once

// Generated by tests/fixtures/generate.py; do not edit.

#include <cstdint>

namespace fixtures {

inline constexpr std::int64_t kDivisorSquareSum1e6 = 421094344;
inline constexpr double kDivisorWeighted1e5 = 1146.6926061104575;

// (1/N) sum mu(n) e(-(sqrt2 - 1) n) as {N, re, im}.
struct LinearRow { std::int64_t N; double re; double im; };
inline constexpr LinearRow kLinearSqrt2[] = {
    {1000, 0.034512369136574336, 0.0058863295761226245},
    {10000, 0.009741389912282641, 0.0008570852527974562},
    {100000, 0.0007719086447937627, 0.0018084519642255228},
    {1000000, 0.0006621710359191272, -0.00030497908360327256},
};

// E_{m<=1000} mu(m) conj chi(m), characters mod 3 by index.
inline constexpr double kCharMod3_0 = -0.006;
inline constexpr double kCharMod3_1 = 0.004;

inline constexpr std::int64_t kThreeTerm1e3Sum = 213;

// Tent on B(3N/2, 0.1) for frequencies (sqrt2-1, sqrt3-1) against the Heisenberg pi3 phase.
struct LocalRow { std::int64_t N; double re; double im; };
inline constexpr LocalRow kWeightedLocal[] = {
    {10000, 9.97688157802713e-05, -6.925394159099301e-05},
    {100000, -2.5273009754367222e-05, -2.481322210516713e-05},
    {1000000, -1.5389399196466306e-05, -8.992883190059977e-06},
};

}  // namespace fixtures
