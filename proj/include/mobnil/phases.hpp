#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mobnil/circle.hpp"
#include "mobnil/error.hpp"

namespace mobnil::phases {

using circle::cplx;
using circle::Interval;

// ||n||_g = max_j ||n g_j|| + |n/N|.
double bohr_norm(std::int64_t n, const std::vector<double>& g, std::int64_t N);

struct BohrSetSpec {
    std::vector<double> g;
    std::int64_t N = 1;
    std::int64_t n0 = 0;
    double rho = 0.1;
    Interval window;

    bool contains(std::int64_t n) const { return bohr_norm(n - n0, g, N) < rho; }
};

inline constexpr std::int64_t kMaxBohrWindow = 100'000'000;

std::vector<std::int64_t> bohr_enumerate(const BohrSetSpec& spec);

struct BohrPropertyReport {
    std::int64_t size_rho = 0;
    std::int64_t size_2rho = 0;
    std::int64_t divisible_count = 0;
    std::int64_t divisor = 1;
    double ratio_lower = 0.0;     // size_rho / (rho^(dim+1) N)
    double ratio_doubling = 0.0;  // size_2rho / size_rho
    double ratio_divisible = 0.0; // divisible_count / (size_rho / divisor)
    double doubling_constant = 0.0;
    double divisible_constant = 0.0;
    bool lower_holds = false;
    bool doubling_holds = false;
    bool divisible_holds = false;
};

// Counts B(0, rho) and B(0, 2 rho) over spec.window; spec.n0 is ignored.
BohrPropertyReport bohr_property_report(const BohrSetSpec& spec, std::int64_t divisor);

// A phase on an explicit finite set of integers, values in (-1/2, 1/2].
class TabulatedPhase {
public:
    TabulatedPhase() = default;
    TabulatedPhase(std::vector<std::int64_t> domain, std::vector<double> values);

    template <class Fn>
    static TabulatedPhase from_function(std::vector<std::int64_t> domain, Fn&& fn) {
        std::vector<double> values;
        values.reserve(domain.size());
        for (std::int64_t n : domain) values.push_back(fn(n));
        return TabulatedPhase(std::move(domain), std::move(values));
    }

    std::size_t size() const { return domain_.size(); }
    bool empty() const { return domain_.empty(); }
    const std::vector<std::int64_t>& domain() const { return domain_; }
    const std::vector<double>& values() const { return values_; }

    bool contains(std::int64_t n) const { return find(n) >= 0; }
    std::optional<double> get(std::int64_t n) const {
        const std::int64_t i = find(n);
        if (i < 0) return std::nullopt;
        return values_[static_cast<std::size_t>(i)];
    }
    double at(std::int64_t n) const;

    std::string to_csv() const;
    static TabulatedPhase from_csv(const std::string& text);

private:
    std::int64_t find(std::int64_t n) const;

    std::vector<std::int64_t> domain_;
    std::vector<double> values_;
    std::int64_t lo_ = 0;
    std::vector<std::int32_t> dense_;  // position by n - lo_, or -1; empty when the span is too wide
};

struct LocalPolyOptions {
    std::size_t exhaustive_limit = 64;
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    std::int64_t sample_budget = 100'000;
    std::int64_t attempts_per_sample = 1000;
};

struct LocalPolyReport {
    bool holds = true;
    bool exhaustive = true;
    double worst_residual = 0.0;
    std::vector<std::int64_t> worst_witness;  // n, h_1, ..., h_{d+1}
    std::int64_t checked_count = 0;
    std::int64_t attempts = 0;
};

// Checks that every alternating sum over a (d+1)-cube inside the domain
// vanishes mod 1 within tol.
LocalPolyReport is_locally_polynomial(const TabulatedPhase& phi, int degree, double tol,
                                      const LocalPolyOptions& options = {});

double second_derivative(const TabulatedPhase& phi, std::int64_t n0, std::int64_t h1, std::int64_t h2);

struct QuadGrowthReport {
    double phi2 = 0.0;   // phi''(h, h)
    double alpha = 0.0;
    double beta = 0.0;
    double max_residual = 0.0;
};

// phi(n + h l) - l(l-1)/2 phi''(h,h) against alpha l + beta for l = 1..L.
QuadGrowthReport quad_growth_check(const TabulatedPhase& phi, std::int64_t n, std::int64_t h, std::int64_t L);

struct QuarticParams {
    std::int64_t d = 0;
    std::int64_t w = 0;
    std::int64_t s = 0;
    std::int64_t t = 0;
    std::int64_t L = 1;
    std::int64_t M = 1;
};

struct QuarticTuple {
    std::int64_t l0 = 0, l1 = 0, l2 = 0;
    std::int64_t m0 = 0, m1 = 0, m2 = 0;
};

// Optional check of L M ||st||_g <= rho0 and of the sixteen points lying in B_g(n0, rho0).
struct QuarticBohrGuard {
    std::vector<double> g;
    std::int64_t N = 1;
    std::int64_t n0 = 0;
    double rho0 = 0.0;
};

struct QuarticReport {
    double phi2 = 0.0;             // phi''(st, st)
    std::int64_t phi2_base = 0;
    std::vector<double> lhs;       // per tuple
    std::vector<double> rhs;
    std::vector<double> residuals;
    double max_residual = 0.0;
};

QuarticReport quartic_growth_check(const TabulatedPhase& phi, const QuarticParams& params,
                                   const std::vector<QuarticTuple>& tuples,
                                   const std::optional<QuarticBohrGuard>& guard = std::nullopt);

template <class Point, class Metric>
double lipschitz_constant(const std::vector<Point>& points, const std::vector<double>& values, Metric&& dist) {
    double best = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double dd = dist(points[i], points[j]);
            const double df = std::abs(values[i] - values[j]);
            if (dd > 0) {
                best = std::max(best, df / dd);
            } else if (df > 0) {
                return INFINITY;
            }
        }
    }
    return best;
}

// min(inf_y f(y) + M d(x, y), sup f).
template <class Point, class Metric>
std::vector<double> lipschitz_extend(const std::vector<Point>& Y, const std::vector<double>& f,
                                     const std::vector<Point>& X, double M, Metric&& dist) {
    if (Y.empty()) throw PreconditionError("lipschitz_extend: Y is empty");
    if (f.size() != Y.size()) throw PreconditionError("lipschitz_extend: one value per point of Y required");
    const double observed = lipschitz_constant(Y, f, dist);
    if (observed > M * (1 + 1e-12) + 1e-15) {
        throw PreconditionError("lipschitz_extend: M is below the observed Lipschitz constant");
    }
    const double top = *std::max_element(f.begin(), f.end());
    std::vector<double> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        double inf = INFINITY;
        for (std::size_t j = 0; j < Y.size(); ++j) inf = std::min(inf, f[j] + M * dist(X[i], Y[j]));
        out[i] = std::min(inf, top);
    }
    return out;
}

template <class Point, class Metric>
std::vector<cplx> lipschitz_extend(const std::vector<Point>& Y, const std::vector<cplx>& f,
                                   const std::vector<Point>& X, double M, Metric&& dist) {
    std::vector<double> re(f.size()), im(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        re[i] = f[i].real();
        im[i] = f[i].imag();
    }
    const auto er = lipschitz_extend(Y, re, X, M, dist);
    const auto ei = lipschitz_extend(Y, im, X, M, dist);
    std::vector<cplx> out(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) out[i] = {er[i], ei[i]};
    return out;
}

std::vector<double> soft_threshold(const std::vector<double>& F, double lip_norm, double delta);
std::vector<cplx> soft_threshold(const std::vector<cplx>& F, double lip_norm, double delta);

}  // namespace mobnil::phases
