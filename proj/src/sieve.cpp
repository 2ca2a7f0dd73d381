#include "mobnil/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mobnil/parallel.hpp"

namespace mobnil::sieve {

namespace {

void check_cap(std::uint64_t needed, std::uint64_t cap, const char* what) {
    if (needed > cap) {
        throw CapacityError(std::string(what) + ": needs " + std::to_string(needed) + " bytes, cap is " +
                            std::to_string(cap));
    }
}

std::int64_t isqrt(std::int64_t n) {
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

std::vector<std::int64_t> primes_up_to(std::int64_t limit) {
    std::vector<std::int64_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t p = 2; p <= limit; ++p) {
        if (composite[p]) continue;
        primes.push_back(p);
        for (std::int64_t m = p * p; m <= limit; m += p) composite[m] = true;
    }
    return primes;
}

int mobius_of(std::int64_t n) {
    if (n < 1) throw RangeError("mobius_of: argument must be positive");
    int sign = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        n /= p;
        if (n % p == 0) return 0;
        sign = -sign;
    }
    if (n > 1) sign = -sign;
    return sign;
}

MobiusTable sieve_mobius_linear(std::int64_t n_max, std::uint64_t memory_cap) {
    if (n_max < 1) throw RangeError("sieve_mobius: n_max must be at least 1");
    check_cap(3 * static_cast<std::uint64_t>(n_max + 1), memory_cap, "sieve_mobius_linear");
    MobiusTable t;
    t.n_max = n_max;
    t.values.assign(static_cast<std::size_t>(n_max) + 1, 0);
    std::vector<std::uint8_t> composite(static_cast<std::size_t>(n_max) + 1, 0);
    std::vector<std::int64_t> primes;
    t.values[1] = 1;
    for (std::int64_t i = 2; i <= n_max; ++i) {
        if (!composite[i]) {
            primes.push_back(i);
            t.values[i] = -1;
        }
        for (std::int64_t p : primes) {
            if (p * i > n_max) break;
            composite[p * i] = 1;
            if (i % p == 0) {
                t.values[p * i] = 0;
                break;
            }
            t.values[p * i] = static_cast<std::int8_t>(-t.values[i]);
        }
    }
    return t;
}

MobiusTable sieve_mobius_segmented(std::int64_t n_max, std::uint64_t memory_cap) {
    if (n_max < 1) throw RangeError("sieve_mobius: n_max must be at least 1");
    const int workers = par::threads();
    check_cap(static_cast<std::uint64_t>(n_max + 1) + static_cast<std::uint64_t>(workers) * kSegment * 9,
              memory_cap, "sieve_mobius_segmented");
    MobiusTable t;
    t.n_max = n_max;
    t.values.assign(static_cast<std::size_t>(n_max) + 1, 0);
    const std::vector<std::int64_t> primes = primes_up_to(isqrt(n_max));
    const std::int64_t nblocks = (n_max + kSegment - 1) / kSegment;
    par::for_blocks(nblocks, [&](std::int64_t b) {
        const std::int64_t lo = 1 + b * kSegment;
        const std::int64_t hi = std::min(n_max, lo + kSegment - 1);
        const auto len = static_cast<std::size_t>(hi - lo + 1);
        std::vector<std::int8_t> sign(len, 1);
        std::vector<std::uint64_t> prod(len, 1);
        for (std::int64_t p : primes) {
            if (p * p > hi) break;
            for (std::int64_t m = ((lo + p - 1) / p) * p; m <= hi; m += p) {
                const auto i = static_cast<std::size_t>(m - lo);
                sign[i] = static_cast<std::int8_t>(-sign[i]);
                prod[i] *= static_cast<std::uint64_t>(p);
            }
            const std::int64_t pp = p * p;
            for (std::int64_t m = ((lo + pp - 1) / pp) * pp; m <= hi; m += pp) sign[static_cast<std::size_t>(m - lo)] = 0;
        }
        for (std::size_t i = 0; i < len; ++i) {
            const auto n = static_cast<std::uint64_t>(lo) + i;
            std::int8_t v = sign[i];
            // A remaining cofactor is a single prime above sqrt(n).
            if (v != 0 && prod[i] != n) v = static_cast<std::int8_t>(-v);
            t.values[static_cast<std::size_t>(lo) + i] = v;
        }
    });
    return t;
}

DivisorTable sieve_divisor(std::int64_t n_max, std::uint64_t memory_cap) {
    if (n_max < 1) throw RangeError("sieve_divisor: n_max must be at least 1");
    check_cap(7 * static_cast<std::uint64_t>(n_max + 1), memory_cap, "sieve_divisor");
    DivisorTable t;
    t.n_max = n_max;
    t.values.assign(static_cast<std::size_t>(n_max) + 1, 0);
    std::vector<std::uint8_t> exponent(static_cast<std::size_t>(n_max) + 1, 0);
    std::vector<std::int64_t> primes;
    t.values[1] = 1;
    for (std::int64_t i = 2; i <= n_max; ++i) {
        if (t.values[i] == 0) {
            primes.push_back(i);
            t.values[i] = 2;
            exponent[i] = 1;
        }
        for (std::int64_t p : primes) {
            if (p * i > n_max) break;
            if (i % p == 0) {
                // p is the smallest prime of i: bump its exponent.
                const std::uint32_t e = exponent[i];
                t.values[p * i] = t.values[i] / (e + 1) * (e + 2);
                exponent[p * i] = static_cast<std::uint8_t>(e + 1);
                break;
            }
            t.values[p * i] = 2 * t.values[i];
            exponent[p * i] = 1;
        }
    }
    return t;
}

double mertens_average(const MobiusTable& table, std::int64_t n) {
    if (n < 1 || n > table.n_max) throw RangeError("mertens_average: n out of table range");
    std::int64_t s = 0;
    for (std::int64_t m = 1; m <= n; ++m) s += table(m);
    return static_cast<double>(s) / static_cast<double>(n);
}

MomentReport divisor_moment(const DivisorTable& table, int m, std::int64_t n) {
    if (n < 1 || n > table.n_max) throw RangeError("divisor_moment: n out of table range");
    if (m < 1 || m > 6) throw RangeError("divisor_moment: m must lie in 1..6");
    unsigned __int128 s = 0;
    for (std::int64_t k = 1; k <= n; ++k) {
        unsigned __int128 p = 1;
        for (int j = 0; j < m; ++j) p *= table(k);
        s += p;
    }
    MomentReport r;
    r.mean = static_cast<double>(static_cast<long double>(s) / static_cast<long double>(n));
    r.log_power = std::pow(std::log(static_cast<double>(n)), static_cast<double>((1 << m) - 1));
    r.ratio = r.mean / r.log_power;
    return r;
}

WeightedMomentReport divisor_weighted_second_moment(const DivisorTable& table, std::int64_t n) {
    if (n < 1 || n > table.n_max) throw RangeError("divisor_weighted_second_moment: n out of table range");
    WeightedMomentReport r;
    r.value = par::sum<double>(1, n + 1, [&](std::int64_t k) {
        const double t = table(k);
        return t * t / static_cast<double>(k);
    });
    r.log4 = std::pow(std::log(static_cast<double>(n)), 4);
    r.ratio = r.value / r.log4;
    return r;
}

DivisorPackingInstance DivisorPackingInstance::from_list(std::int64_t N, const std::vector<std::int64_t>& members,
                                                         std::vector<std::int64_t> divisors, double delta,
                                                         double kappa) {
    DivisorPackingInstance inst;
    inst.N = N;
    inst.in_set.assign(static_cast<std::size_t>(N) + 1, false);
    for (std::int64_t a : members) {
        if (a < 1 || a > N) throw RangeError("DivisorPackingInstance: member outside 1..N");
        inst.in_set[a] = true;
    }
    inst.divisors = std::move(divisors);
    inst.delta = delta;
    inst.kappa = kappa;
    return inst;
}

DivisorPackingReport divisor_packing_check(const DivisorPackingInstance& inst, double constant) {
    if (inst.N < 1 || static_cast<std::int64_t>(inst.in_set.size()) != inst.N + 1) {
        throw PreconditionError("divisor_packing_check: set must be a bitset over 1..N");
    }
    if (!(inst.delta > 0 && inst.delta <= 1)) throw PreconditionError("divisor_packing_check: delta must lie in (0,1]");
    if (!(inst.kappa > 0 && inst.kappa < 0.5)) throw PreconditionError("divisor_packing_check: kappa must lie in (0,1/2)");
    DivisorPackingReport r;
    r.constant = constant;
    for (std::int64_t n = 1; n <= inst.N; ++n) r.set_size += inst.in_set[n] ? 1 : 0;
    std::vector<bool> covered(static_cast<std::size_t>(inst.N) + 1, false);
    for (std::int64_t d : inst.divisors) {
        if (d < 1) throw PreconditionError("divisor_packing_check: divisors must be positive");
        std::int64_t count = 0;
        for (std::int64_t n = d; n <= inst.N; n += d) {
            if (inst.in_set[n]) {
                ++count;
                covered[n] = true;
            }
        }
        if (static_cast<double>(count) + 1e-9 < inst.delta * static_cast<double>(r.set_size)) {
            throw PreconditionError("divisor_packing_check: |A_d| < delta|A| for d = " + std::to_string(d));
        }
    }
    for (std::int64_t n = 1; n <= inst.N; ++n) r.union_size += covered[n] ? 1 : 0;
    const double A = static_cast<double>(r.set_size);
    const double D = static_cast<double>(inst.divisors.size());
    const double alpha = A / static_cast<double>(inst.N);
    const double log_exp = std::pow(2.0, 2.0 / inst.kappa);
    r.rhs_bound = inst.delta * inst.delta * D * D * A * std::pow(alpha, inst.kappa) *
                  std::pow(std::log(static_cast<double>(inst.N)), -log_exp);
    r.ratio = r.rhs_bound > 0 ? static_cast<double>(r.union_size) / r.rhs_bound : 0.0;
    r.holds = static_cast<double>(r.union_size) >= constant * r.rhs_bound;
    return r;
}

}  // namespace mobnil::sieve
