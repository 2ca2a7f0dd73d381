#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mobnil/sieve.hpp"

namespace mobnil::vaughan {

using cplx = std::complex<double>;
using Sequence = std::function<cplx(std::int64_t)>;

struct VaughanParams {
    std::int64_t N = 1;
    std::int64_t U = 1;
    std::int64_t V = 1;

    // U = V = floor(N^(1/3)).
    static VaughanParams defaults(std::int64_t N);
    void validate() const;
};

std::int64_t icbrt(std::int64_t n);

// sum over bc = d with b <= U, c <= V of mu(b) mu(c).
std::int64_t coeff_a(std::int64_t d, std::int64_t U, std::int64_t V);
// sum over c | d with c > V of mu(c).
std::int64_t coeff_b(std::int64_t d, std::int64_t V);

// All a_d for d <= limit and all b_d for d <= limit, by sieving.
std::vector<std::int64_t> coeff_a_table(std::int64_t limit, std::int64_t U, std::int64_t V, const sieve::MobiusTable& mu);
std::vector<std::int64_t> coeff_b_table(std::int64_t limit, std::int64_t V, const sieve::MobiusTable& mu);

struct VaughanDecomposition {
    cplx lhs;
    cplx t_one;
    cplx t_two;
    double residual = 0.0;  // |lhs + t_one - t_two|
};

VaughanDecomposition decompose(const Sequence& f, const VaughanParams& params, const sieve::MobiusTable& mu);

// The four sums over (b, c) with bc | n split at b = U and c = V.
struct PartialSums {
    std::int64_t s1 = 0;  // b <= U, c <= V
    std::int64_t s2 = 0;  // b > U,  c <= V
    std::int64_t s3 = 0;  // b <= U, c > V
    std::int64_t s4 = 0;  // b > U,  c > V
};

PartialSums vaughan_partial_sums(std::int64_t n, std::int64_t U, std::int64_t V);

struct TypeIEntry {
    std::int64_t d = 0;
    double magnitude = 0.0;  // |E_{N/d < w <= 2N/d} f(dw)|
};

struct TypeIReport {
    std::int64_t D = 1;
    std::int64_t lo = 1;  // first d of the block
    std::int64_t hi = 1;  // last d of the block
    std::vector<TypeIEntry> qualifying;
    double threshold = 0.0;  // delta log^(-5/2) N
    double required = 0.0;   // delta^2 D log^(-5) N
    bool qualifies = false;
};

// Every dyadic level D = 1, 2, 4, ... with D <= UV; the first block is [1, 2].
std::vector<TypeIReport> type_i_scan(const Sequence& f, const VaughanParams& params, double delta);

inline constexpr std::int64_t kMaxTypeIIBlock = 10'000;

// E_{D<d,d'<=2D} E_{W<w,w'<=2W} f(dw) conj f(d'w) conj f(dw') f(d'w'), via the Gram matrix over d.
double type_ii_box(const Sequence& f, std::int64_t D, std::int64_t W);

struct TypeIIEntry {
    std::int64_t D = 0;
    std::int64_t W = 0;
    double value = 0.0;
};

enum class Branch { None, TypeI, TypeII };
std::string to_string(Branch b);

struct DichotomyReport {
    cplx correlation;
    bool large = false;
    Branch branch = Branch::None;
    bool type_i_witnessed = false;
    bool type_ii_witnessed = false;
    std::vector<TypeIReport> type_i;
    std::vector<TypeIIEntry> type_ii;
    double type_ii_threshold = 0.0;  // delta^4 log^(-14) N
    std::int64_t skipped_boxes = 0;  // D above kMaxTypeIIBlock
};

DichotomyReport inverse_dichotomy(const Sequence& f, const VaughanParams& params, double delta,
                                  const sieve::MobiusTable& mu);

}  // namespace mobnil::vaughan
