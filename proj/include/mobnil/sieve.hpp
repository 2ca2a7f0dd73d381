#pragma once

#include <cstdint>
#include <vector>

#include "mobnil/error.hpp"

namespace mobnil::sieve {

inline constexpr std::uint64_t kDefaultMemoryCap = std::uint64_t{2} << 30;
inline constexpr std::int64_t kSegment = std::int64_t{1} << 16;

// mu(1..n_max); index 0 is unused and holds 0.
struct MobiusTable {
    std::int64_t n_max = 0;
    std::vector<std::int8_t> values;

    int operator()(std::int64_t n) const { return values[static_cast<std::size_t>(n)]; }
    int at(std::int64_t n) const {
        if (n < 1 || n > n_max) throw RangeError("MobiusTable: index out of range");
        return values[static_cast<std::size_t>(n)];
    }
    bool operator==(const MobiusTable& o) const { return n_max == o.n_max && values == o.values; }
};

// tau(1..n_max); index 0 is unused.
struct DivisorTable {
    std::int64_t n_max = 0;
    std::vector<std::uint32_t> values;

    std::uint32_t operator()(std::int64_t n) const { return values[static_cast<std::size_t>(n)]; }
};

// Linear sieve over smallest prime factors.
MobiusTable sieve_mobius_linear(std::int64_t n_max, std::uint64_t memory_cap = kDefaultMemoryCap);
// Blocks of kSegment entries, sieved independently and in parallel.
MobiusTable sieve_mobius_segmented(std::int64_t n_max, std::uint64_t memory_cap = kDefaultMemoryCap);
inline MobiusTable sieve_mobius(std::int64_t n_max, std::uint64_t memory_cap = kDefaultMemoryCap) {
    return sieve_mobius_segmented(n_max, memory_cap);
}

DivisorTable sieve_divisor(std::int64_t n_max, std::uint64_t memory_cap = kDefaultMemoryCap);

// mu(n) by trial division, for isolated values.
int mobius_of(std::int64_t n);
std::vector<std::int64_t> primes_up_to(std::int64_t limit);

double mertens_average(const MobiusTable& table, std::int64_t n);

struct MomentReport {
    double mean = 0.0;
    double log_power = 0.0;  // (log n)^(2^m - 1)
    double ratio = 0.0;      // mean / log_power
};

MomentReport divisor_moment(const DivisorTable& table, int m, std::int64_t n);

struct WeightedMomentReport {
    double value = 0.0;  // sum_{k<=n} tau(k)^2 / k
    double log4 = 0.0;
    double ratio = 0.0;
};

WeightedMomentReport divisor_weighted_second_moment(const DivisorTable& table, std::int64_t n);

struct DivisorPackingInstance {
    std::int64_t N = 0;
    std::vector<bool> in_set;  // in_set[n] for n in 1..N
    std::vector<std::int64_t> divisors;
    double delta = 1.0;
    double kappa = 0.25;

    static DivisorPackingInstance from_list(std::int64_t N, const std::vector<std::int64_t>& members,
                                            std::vector<std::int64_t> divisors, double delta, double kappa = 0.25);
};

struct DivisorPackingReport {
    std::int64_t set_size = 0;
    std::int64_t union_size = 0;
    double rhs_bound = 0.0;
    double constant = 1.0;
    double ratio = 0.0;  // union_size / rhs_bound
    bool holds = false;
};

DivisorPackingReport divisor_packing_check(const DivisorPackingInstance& inst, double constant = 1.0);

}  // namespace mobnil::sieve
