#include "mobnil/vaughan.hpp"

#include <algorithm>
#include <cmath>

#include "mobnil/parallel.hpp"

namespace mobnil::vaughan {

std::int64_t icbrt(std::int64_t n) {
    if (n < 0) throw ParameterError("icbrt: negative argument");
    auto r = static_cast<std::int64_t>(std::cbrt(static_cast<double>(n)));
    while (r > 0 && r * r * r > n) --r;
    while ((r + 1) * (r + 1) * (r + 1) <= n) ++r;
    return r;
}

VaughanParams VaughanParams::defaults(std::int64_t N) {
    const std::int64_t c = std::max<std::int64_t>(1, icbrt(N));
    VaughanParams p{N, c, c};
    p.validate();
    return p;
}

void VaughanParams::validate() const {
    if (N < 1 || U < 1 || V < 1) throw ParameterError("vaughan: N, U, V must be positive");
    if (U > N / V) throw ParameterError("vaughan: U V must not exceed N");
}

std::int64_t coeff_a(std::int64_t d, std::int64_t U, std::int64_t V) {
    if (d < 1) throw RangeError("coeff_a: d must be positive");
    std::int64_t s = 0;
    for (std::int64_t b = 1; b <= U && b <= d; ++b) {
        if (d % b != 0) continue;
        const std::int64_t c = d / b;
        if (c <= V) s += sieve::mobius_of(b) * sieve::mobius_of(c);
    }
    return s;
}

std::int64_t coeff_b(std::int64_t d, std::int64_t V) {
    if (d < 1) throw RangeError("coeff_b: d must be positive");
    std::int64_t s = 0;
    for (std::int64_t c = 1; c * c <= d; ++c) {
        if (d % c != 0) continue;
        if (c > V) s += sieve::mobius_of(c);
        const std::int64_t other = d / c;
        if (other != c && other > V) s += sieve::mobius_of(other);
    }
    return s;
}

std::vector<std::int64_t> coeff_a_table(std::int64_t limit, std::int64_t U, std::int64_t V, const sieve::MobiusTable& mu) {
    if (std::max(U, V) > mu.n_max) throw RangeError("coeff_a_table: Mobius table too short");
    std::vector<std::int64_t> a(static_cast<std::size_t>(limit) + 1, 0);
    for (std::int64_t b = 1; b <= U && b <= limit; ++b) {
        if (mu(b) == 0) continue;
        for (std::int64_t c = 1; c <= V && b * c <= limit; ++c) a[b * c] += mu(b) * mu(c);
    }
    return a;
}

std::vector<std::int64_t> coeff_b_table(std::int64_t limit, std::int64_t V, const sieve::MobiusTable& mu) {
    if (limit > mu.n_max) throw RangeError("coeff_b_table: Mobius table too short");
    std::vector<std::int64_t> b(static_cast<std::size_t>(limit) + 1, 0);
    for (std::int64_t c = V + 1; c <= limit; ++c) {
        if (mu(c) == 0) continue;
        for (std::int64_t d = c; d <= limit; d += c) b[d] += mu(c);
    }
    return b;
}

VaughanDecomposition decompose(const Sequence& f, const VaughanParams& params, const sieve::MobiusTable& mu) {
    params.validate();
    const std::int64_t N = params.N, U = params.U, V = params.V;
    if (mu.n_max < 2 * N) throw RangeError("vaughan decompose: Mobius table must reach 2N");
    const double inv = 1.0 / static_cast<double>(N);
    VaughanDecomposition r;
    r.lhs = par::sum<cplx>(N + 1, 2 * N + 1, [&](std::int64_t n) {
        return mu(n) == 0 ? cplx{} : static_cast<double>(mu(n)) * std::conj(f(n));
    }) * inv;
    const std::int64_t UV = U * V;
    const auto a = coeff_a_table(UV, U, V, mu);
    r.t_one = par::sum<cplx>(1, UV + 1, [&](std::int64_t d) {
        if (a[d] == 0) return cplx{};
        cplx s{};
        for (std::int64_t w = N / d + 1; w <= 2 * N / d; ++w) s += std::conj(f(d * w));
        return static_cast<double>(a[d]) * s;
    }) * inv;
    const std::int64_t dmax = 2 * N / U;
    const auto b = coeff_b_table(dmax, V, mu);
    r.t_two = par::sum<cplx>(V + 1, dmax + 1, [&](std::int64_t d) {
        if (b[d] == 0) return cplx{};
        cplx s{};
        for (std::int64_t w = std::max(U, N / d) + 1; w <= 2 * N / d; ++w) {
            if (mu(w) != 0) s += static_cast<double>(mu(w)) * std::conj(f(d * w));
        }
        return static_cast<double>(b[d]) * s;
    }) * inv;
    r.residual = std::abs(r.lhs + r.t_one - r.t_two);
    return r;
}

PartialSums vaughan_partial_sums(std::int64_t n, std::int64_t U, std::int64_t V) {
    if (n < 1) throw RangeError("vaughan_partial_sums: n must be positive");
    PartialSums s;
    for (std::int64_t b = 1; b <= n; ++b) {
        if (n % b != 0) continue;
        const int mb = sieve::mobius_of(b);
        if (mb == 0) continue;
        const std::int64_t rest = n / b;
        for (std::int64_t c = 1; c <= rest; ++c) {
            if (rest % c != 0) continue;
            const std::int64_t term = mb * sieve::mobius_of(c);
            if (b <= U) {
                (c <= V ? s.s1 : s.s3) += term;
            } else {
                (c <= V ? s.s2 : s.s4) += term;
            }
        }
    }
    return s;
}

std::vector<TypeIReport> type_i_scan(const Sequence& f, const VaughanParams& params, double delta) {
    params.validate();
    const std::int64_t N = params.N;
    const std::int64_t UV = params.U * params.V;
    const double logN = std::log(static_cast<double>(std::max<std::int64_t>(N, 2)));
    std::vector<TypeIReport> out;
    for (std::int64_t D = 1; D <= UV; D *= 2) {
        TypeIReport rep;
        rep.D = D;
        rep.lo = D == 1 ? 1 : D + 1;
        rep.hi = std::min(2 * D, UV);
        rep.threshold = delta * std::pow(logN, -2.5);
        rep.required = delta * delta * static_cast<double>(D) * std::pow(logN, -5.0);
        const std::int64_t count = rep.hi - rep.lo + 1;
        std::vector<double> mags(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
        par::for_blocks(count, [&](std::int64_t i) {
            const std::int64_t d = rep.lo + i;
            const std::int64_t w0 = N / d + 1, w1 = 2 * N / d;
            cplx s{};
            for (std::int64_t w = w0; w <= w1; ++w) s += f(d * w);
            mags[static_cast<std::size_t>(i)] = w1 >= w0 ? std::abs(s) / static_cast<double>(w1 - w0 + 1) : 0.0;
        });
        for (std::int64_t i = 0; i < count; ++i) {
            if (mags[i] >= rep.threshold) rep.qualifying.push_back({rep.lo + i, mags[i]});
        }
        rep.qualifies = static_cast<double>(rep.qualifying.size()) >= rep.required;
        out.push_back(std::move(rep));
    }
    return out;
}

double type_ii_box(const Sequence& f, std::int64_t D, std::int64_t W) {
    if (D < 1 || W < 1) throw ParameterError("type_ii_box: D and W must be positive");
    if (D > kMaxTypeIIBlock) throw CapacityError("type_ii_box: D exceeds the exact-mode limit 1e4");
    const auto Ds = static_cast<std::size_t>(D);
    const auto Ws = static_cast<std::size_t>(W);
    // Row d holds f(dw) for w in (W, 2W].
    std::vector<cplx> rows(Ds * Ws);
    par::for_blocks(D, [&](std::int64_t i) {
        const std::int64_t d = D + 1 + i;
        for (std::int64_t j = 0; j < W; ++j) rows[static_cast<std::size_t>(i) * Ws + j] = f(d * (W + 1 + j));
    });
    std::vector<double> row_total(Ds, 0.0);
    par::for_blocks(D, [&](std::int64_t i) {
        const cplx* x = &rows[static_cast<std::size_t>(i) * Ws];
        double acc = 0.0;
        for (std::size_t k = 0; k < Ds; ++k) {
            const cplx* y = &rows[k * Ws];
            cplx g{};
            for (std::size_t j = 0; j < Ws; ++j) g += x[j] * std::conj(y[j]);
            acc += std::norm(g);
        }
        row_total[static_cast<std::size_t>(i)] = acc;
    });
    const double total = par::pairwise(row_total.data(), row_total.size());
    const double dd = static_cast<double>(D), ww = static_cast<double>(W);
    return total / (dd * dd * ww * ww);
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::TypeI: return "type_i";
        case Branch::TypeII: return "type_ii";
        default: return "none";
    }
}

DichotomyReport inverse_dichotomy(const Sequence& f, const VaughanParams& params, double delta,
                                  const sieve::MobiusTable& mu) {
    params.validate();
    const std::int64_t N = params.N;
    if (mu.n_max < 2 * N) throw RangeError("inverse_dichotomy: Mobius table must reach 2N");
    DichotomyReport r;
    r.correlation = par::sum<cplx>(N + 1, 2 * N + 1, [&](std::int64_t n) {
        return mu(n) == 0 ? cplx{} : static_cast<double>(mu(n)) * std::conj(f(n));
    }) / static_cast<double>(N);
    r.large = std::abs(r.correlation) >= delta;
    if (!r.large) return r;
    const double logN = std::log(static_cast<double>(std::max<std::int64_t>(N, 2)));
    r.type_i = type_i_scan(f, params, delta);
    for (const auto& level : r.type_i) r.type_i_witnessed = r.type_i_witnessed || level.qualifies;
    r.type_ii_threshold = std::pow(delta, 4) * std::pow(logN, -14.0);
    for (std::int64_t D = 1; D <= 4 * N / params.U; D *= 2) {
        if (2 * D < params.V) continue;
        for (std::int64_t W = 1; D * W <= 4 * N; W *= 2) {
            if (4 * D * W < N) continue;
            if (D > kMaxTypeIIBlock) {
                ++r.skipped_boxes;
                continue;
            }
            const double v = type_ii_box(f, D, W);
            r.type_ii.push_back({D, W, v});
            r.type_ii_witnessed = r.type_ii_witnessed || v >= r.type_ii_threshold;
        }
    }
    r.branch = r.type_i_witnessed ? Branch::TypeI : (r.type_ii_witnessed ? Branch::TypeII : Branch::None);
    return r;
}

}  // namespace mobnil::vaughan
