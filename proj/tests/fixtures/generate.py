"""Regenerates fixtures.hpp by slow, independent direct summation.

Phases are reduced exactly with rationals (every double is a dyadic
rational) and sums use math.fsum, so nothing here shares code or
rounding behaviour with the library.
"""

import math
from fractions import Fraction
from pathlib import Path

import numpy as np

OUT = Path(__file__).with_name("fixtures.hpp")


def mobius(limit):
    mu = np.ones(limit + 1, dtype=np.int64)
    mu[0] = 0
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, limit + 1):
        if not is_prime[p]:
            continue
        is_prime[p * p :: p] = False
        mu[p::p] *= -1
        mu[p * p :: p * p] = 0
    return mu


def divisor_counts(limit):
    tau = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        tau[d::d] += 1
    return tau


def frac_part(x):
    """x - nearest(x) with halves rounded down, as an exact Fraction."""
    return x - math.ceil(x - Fraction(1, 2))


def e_conj(x):
    t = 2 * math.pi * float(frac_part(x))
    return math.cos(t), -math.sin(t)


def linear_correlations(mu, alpha, ns):
    a = Fraction(alpha)
    out = {}
    re, im = [], []
    top = max(ns)
    for n in range(1, top + 1):
        m = int(mu[n])
        if m:
            c, s = e_conj(a * n)
            re.append(m * c)
            im.append(m * s)
        if n in ns:
            out[n] = (math.fsum(re) / n, math.fsum(im) / n)
    return out


def three_term(mu, n):
    total = 0
    for x in range(1, n + 1):
        if mu[x]:
            d = np.arange(1, n + 1)
            total += int(mu[x]) * int(np.sum(mu[x + d] * mu[x + 2 * d]))
    return total


def heis_pi3(a1, a2, a3, n):
    k1 = math.ceil(a1 * n - Fraction(1, 2))
    t = Fraction(n * (n - 1), 2)
    return frac_part(n * a3 - t * a1 * a2 + k1 * n * a2)


def weighted_local(mu, N, rho):
    """E_{N<n<=2N} mu(n) psi(n) e(-pi3(n)) with psi a tent on B(3N/2, rho)."""
    a1 = Fraction(math.sqrt(2) - 1)
    a2 = Fraction(math.sqrt(3) - 1)
    a3 = Fraction(1 / 7)
    n0 = 3 * N // 2
    re, im = [], []
    for n in range(N + 1, 2 * N + 1):
        h = n - n0
        # Cheap float filter, then exact evaluation for candidates.
        if abs(h) / N >= rho + 1e-9:
            continue
        fl = max(abs(h * float(a1) - round(h * float(a1))), abs(h * float(a2) - round(h * float(a2))))
        if fl + abs(h) / N >= rho + 1e-9:
            continue
        norm = max(abs(frac_part(a1 * h)), abs(frac_part(a2 * h))) + Fraction(abs(h), N)
        w = 1 - float(norm) / rho
        m = int(mu[n])
        if w <= 0 or m == 0:
            continue
        c, s = e_conj(heis_pi3(a1, a2, a3, n))
        re.append(m * w * c)
        im.append(m * w * s)
    return math.fsum(re) / N, math.fsum(im) / N


def main():
    mu = mobius(2_000_000 + 10)
    tau = divisor_counts(1_000_000)

    lines = ["#pragma once", "", "// Generated by tests/fixtures/generate.py; do not edit.", "",
             "#include <cstdint>", "", "namespace fixtures {", ""]

    def emit(decl):
        lines.append(decl)

    emit(f"inline constexpr std::int64_t kDivisorSquareSum1e6 = {int(np.sum(tau[1:] ** 2))};")
    emit(f"inline constexpr double kDivisorWeighted1e5 = {math.fsum(int(t) ** 2 / k for k, t in enumerate(tau[1:100_001], 1))!r};")

    ns = [10**3, 10**4, 10**5, 10**6]
    lin = linear_correlations(mu, math.sqrt(2) - 1, set(ns))
    emit("")
    emit("// (1/N) sum mu(n) e(-(sqrt2 - 1) n) as {N, re, im}.")
    emit("struct LinearRow { std::int64_t N; double re; double im; };")
    emit("inline constexpr LinearRow kLinearSqrt2[] = {")
    for n in ns:
        emit(f"    {{{n}, {lin[n][0]!r}, {lin[n][1]!r}}},")
    emit("};")

    # q = 3: index 0 is principal, index 1 has chi(2) = -1.
    chi = {0: {1: 1, 2: 1}, 1: {1: 1, 2: -1}}
    emit("")
    emit("// E_{m<=1000} mu(m) conj chi(m), characters mod 3 by index.")
    for idx in (0, 1):
        s = sum(int(mu[m]) * chi[idx].get(m % 3, 0) for m in range(1, 1001))
        emit(f"inline constexpr double kCharMod3_{idx} = {s / 1000!r};")

    emit("")
    emit(f"inline constexpr std::int64_t kThreeTerm1e3Sum = {three_term(mu, 1000)};")

    emit("")
    emit("// Tent on B(3N/2, 0.1) for frequencies (sqrt2-1, sqrt3-1) against the Heisenberg pi3 phase.")
    emit("struct LocalRow { std::int64_t N; double re; double im; };")
    emit("inline constexpr LocalRow kWeightedLocal[] = {")
    for n in (10**4, 10**5, 10**6):
        re, im = weighted_local(mu, n, 0.1)
        emit(f"    {{{n}, {re!r}, {im!r}}},")
    emit("};")

    lines += ["", "}  // namespace fixtures", ""]
    OUT.write_text("\n".join(lines))


if __name__ == "__main__":
    main()
