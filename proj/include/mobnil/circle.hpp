#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "mobnil/error.hpp"
#include "mobnil/parallel.hpp"

namespace mobnil::circle {

using cplx = std::complex<double>;

// Discrete interval {lo, ..., hi}.
struct Interval {
    std::int64_t lo = 1;
    std::int64_t hi = 0;
    std::int64_t size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

// Nearest integer with halves rounded down, so x - nearest(x) lies in (-1/2, 1/2].
template <class T>
inline T nearest(T x) { return std::ceil(x - T(0.5)); }

template <class T>
inline T reduce(T x) { return x - nearest(x); }

template <class T>
inline T norm(T x) { return std::abs(reduce(x)); }

inline cplx e(double x) {
    const double t = 2.0 * std::numbers::pi * reduce(x);
    return {std::cos(t), std::sin(t)};
}

// a*m as (integer k, remainder f) with f in (-1/2, 1/2], using an exact
// two-product so the remainder keeps full precision for |a*m| up to 2^62.
struct Split {
    std::int64_t k = 0;
    double f = 0.0;
};

inline Split split_mul(double a, std::int64_t m) {
    const double md = static_cast<double>(m);
    const double p = a * md;
    if (!(std::abs(p) < 4.0e18)) throw RangeError("split_mul: product out of integer range");
    const double err = std::fma(a, md, -p);
    const double kp = nearest(p);
    double r = (p - kp) + err;
    const double k2 = nearest(r);
    r -= k2;
    return {static_cast<std::int64_t>(kp) + static_cast<std::int64_t>(k2), r};
}

// {a*m} in (-1/2, 1/2] without forming a rounded product first.
inline double frac_mul(double a, std::int64_t m) {
    constexpr std::int64_t kExact = std::int64_t{1} << 52;
    if (m > -kExact && m < kExact) {
        const double md = static_cast<double>(m);
        const double p = a * md;
        const double err = std::fma(a, md, -p);
        return reduce(reduce(p) + err);
    }
    const std::int64_t hi = m >> 32;
    const std::int64_t lo = m - hi * (std::int64_t{1} << 32);
    return reduce(frac_mul(std::ldexp(a, 32), hi) + frac_mul(a, lo));
}

// {a*b*m}, carrying the rounding error of a*b.
inline double frac_mul2(double a, double b, std::int64_t m) {
    const double p = a * b;
    const double err = std::fma(a, b, -p);
    return reduce(frac_mul(p, m) + frac_mul(err, m));
}

struct DioApprox {
    std::int64_t q = 1;
    double norm_value = 0.0;
    std::int64_t Q = 1;
};

// Exhaustive min over 1 <= q <= Q of ||q x||, smallest minimizer.
DioApprox circle_norm_q(double x, std::int64_t Q);

// Searches for some q <= Q with ||q x|| <= bound, stopping at the first hit.
struct MajorArcCheck {
    bool holds = false;
    std::int64_t q = 0;
    double norm_value = 0.0;
    std::int64_t scanned = 0;
};
MajorArcCheck verify_major_arc(double x, std::int64_t Q, double bound);

template <class Phase>
cplx exp_sum(Phase&& phase, Interval I, int nthreads = par::threads()) {
    return par::sum<cplx>(I.lo, I.hi + 1, [&](std::int64_t n) { return e(phase(n)); }, nthreads);
}

inline cplx exp_sum_linear(double alpha, Interval I, int nthreads = par::threads()) {
    return exp_sum([alpha](std::int64_t n) { return frac_mul(alpha, n); }, I, nthreads);
}

// 4 min(|I|, 1/||alpha||), with 1/0 read as infinity.
double linear_sum_bound(double alpha, Interval I);

struct DiscrepancyReport {
    std::int64_t count_in_window = 0;
    double expected = 0.0;
    double delta = 0.0;
    double et_bound = 0.0;
    std::int64_t Q = 1;
    bool holds() const { return std::abs(delta) <= et_bound; }
};

DiscrepancyReport erdos_turan(const std::vector<double>& u, double alpha, double beta, std::int64_t Q);

struct DetectorPart {
    bool applicable = false;
    std::int64_t q_bound = 0;
    double rhs = 0.0;
    MajorArcCheck check;
    bool holds = true;
};

struct LinearRecurrenceReport {
    std::int64_t count = 0;
    double required = 0.0;
    bool hypothesis_holds = false;
    DetectorPart part_i;
    DetectorPart part_ii;
    bool conclusions_hold = true;
};

LinearRecurrenceReport detect_linear_recurrence(double alpha, Interval I, double delta1, double delta2);

struct WeylReport {
    double sum_mag = 0.0;
    bool hypothesis_holds = false;
    std::int64_t q_bound = 0;
    double rhs = 0.0;
    MajorArcCheck check;
    bool conclusion_holds = true;
};

WeylReport weyl_detect(double alpha, double beta, double gamma, Interval I, double delta);

// Quadratic phase (a l^2 + b l + c) / q with exact integer coefficients.
struct RationalQuadratic {
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t c = 0;
    std::int64_t q = 1;
};

struct QuadraticRecurrenceReport {
    std::int64_t count = 0;
    double required = 0.0;
    bool hypothesis_holds = false;
    double q_bound = 0.0;  // can exceed the int64 range
    double rhs = 0.0;
    MajorArcCheck check;
    bool conclusion_holds = true;
};

// The interval must have at least 2^58 points, so the count is taken exactly
// over one period of the rational phase and scaled.
QuadraticRecurrenceReport recurrent_quadratic_detect(const RationalQuadratic& phase, Interval I,
                                                     double delta1, double delta2);

// Finitely supported sequence: values[i] sits at index offset + i.
struct Sequence {
    std::int64_t offset = 0;
    std::vector<double> values;
};

double tv_norm(const Sequence& psi, std::int64_t q = 1);

struct SumPartsReport {
    double lhs = 0.0;
    double tv = 0.0;
    double sup_partial = 0.0;
    double rhs = 0.0;
    bool holds = true;
};

// f and psi are indexed by the points of I.
SumPartsReport summation_by_parts_check(const std::vector<cplx>& f, const std::vector<double>& psi,
                                        std::int64_t q = 1);

struct CompletionReport {
    double lhs = 0.0;
    double grid_sup = 0.0;
    double log_factor = 0.0;
    double empirical_c = 0.0;
    double proof_constant = 0.0;
    bool holds = true;
};

// f indexed by I = {lo, ..., lo+L-1}; J given as inclusive index pairs into f.
// An empty J list means all sub-intervals.
CompletionReport completion_check(const std::vector<cplx>& f, std::int64_t lo,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& J = {});

struct BoxNormReport {
    double lhs1 = 0.0;
    double rhs1 = 0.0;
    bool holds1 = true;
    double lhs2 = 0.0;
    double rhs2 = 0.0;
    bool holds2 = true;
};

// f is row-major |X| x |Y|.
BoxNormReport box_norm_check(const std::vector<cplx>& f, std::size_t nx, std::size_t ny,
                             const std::vector<cplx>& bx, const std::vector<cplx>& by);

struct Box4Report {
    double lhs = 0.0;
    double box = 0.0;
    bool holds = true;
};

// K on X^4 (row-major, n^4 entries) against four weights on X^3 that omit
// one coordinate each, in the order (x2,x3,x4), (x1,x3,x4), (x1,x2,x4), (x1,x2,x3).
Box4Report box4_check(const std::vector<cplx>& K, std::size_t n, const std::vector<cplx>& b1,
                      const std::vector<cplx>& b2, const std::vector<cplx>& b3, const std::vector<cplx>& b4);

}  // namespace mobnil::circle
