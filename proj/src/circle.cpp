#include "mobnil/circle.hpp"

#include <algorithm>
#include <limits>

namespace mobnil::circle {

namespace {

constexpr double kSlack = 1e-12;

bool le_with_slack(double lhs, double rhs) { return lhs <= rhs * (1.0 + kSlack) + 1e-15; }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t mod_pos(__int128 a, std::int64_t q) {
    __int128 r = a % q;
    if (r < 0) r += q;
    return static_cast<std::int64_t>(r);
}

}  // namespace

DioApprox circle_norm_q(double x, std::int64_t Q) {
    if (Q < 1) throw ParameterError("circle_norm_q: Q must be at least 1");
    DioApprox best{1, norm(frac_mul(x, 1)), Q};
    for (std::int64_t q = 2; q <= Q; ++q) {
        const double v = norm(frac_mul(x, q));
        if (v < best.norm_value) {
            best.norm_value = v;
            best.q = q;
        }
    }
    return best;
}

MajorArcCheck verify_major_arc(double x, std::int64_t Q, double bound) {
    MajorArcCheck out;
    if (Q < 1) throw ParameterError("verify_major_arc: Q must be at least 1");
    if (bound >= 0.5) {
        // Every norm is at most 1/2.
        out.holds = true;
        out.q = 1;
        out.norm_value = norm(x);
        return out;
    }
    constexpr std::int64_t kScanCap = 2'000'000'000;
    if (Q > kScanCap) throw CapacityError("verify_major_arc: search bound exceeds scan cap");
    for (std::int64_t q = 1; q <= Q; ++q) {
        const double v = norm(frac_mul(x, q));
        out.scanned = q;
        if (v <= bound) {
            out.holds = true;
            out.q = q;
            out.norm_value = v;
            return out;
        }
    }
    out.holds = false;
    return out;
}

double linear_sum_bound(double alpha, Interval I) {
    const double nv = norm(alpha);
    const double len = static_cast<double>(I.size());
    if (nv == 0.0) return 4.0 * len;
    return 4.0 * std::min(len, 1.0 / nv);
}

DiscrepancyReport erdos_turan(const std::vector<double>& u, double alpha, double beta, std::int64_t Q) {
    if (!(alpha >= -0.5 && alpha < beta && beta < 0.5)) {
        throw ParameterError("erdos_turan: window must satisfy -1/2 <= alpha < beta < 1/2");
    }
    if (u.empty()) throw ParameterError("erdos_turan: need at least one point");
    if (Q < 1) throw ParameterError("erdos_turan: Q must be at least 1");
    DiscrepancyReport r;
    r.Q = Q;
    const auto L = static_cast<std::int64_t>(u.size());
    for (double v : u) {
        const double x = reduce(v);
        if (x >= alpha && x <= beta) ++r.count_in_window;
    }
    r.expected = (beta - alpha) * static_cast<double>(L);
    r.delta = static_cast<double>(r.count_in_window) - r.expected;
    double acc = static_cast<double>(L) / static_cast<double>(Q);
    for (std::int64_t q = 1; q <= Q; ++q) {
        const cplx s = par::sum<cplx>(0, L, [&](std::int64_t l) {
            return e(static_cast<double>(q) * reduce(u[static_cast<std::size_t>(l)]));
        });
        acc += 3.0 * std::abs(s) / static_cast<double>(q);
    }
    r.et_bound = acc;
    return r;
}

LinearRecurrenceReport detect_linear_recurrence(double alpha, Interval I, double delta1, double delta2) {
    if (!(delta1 > 0 && delta1 < 1 && delta2 > 0 && delta2 < 1)) {
        throw ParameterError("detect_linear_recurrence: thresholds must lie in (0,1)");
    }
    if (delta1 > delta2 / 4) throw ParameterError("detect_linear_recurrence: need delta1 <= delta2/4");
    if (I.size() < 1) throw ParameterError("detect_linear_recurrence: empty interval");
    LinearRecurrenceReport r;
    r.count = par::sum<std::int64_t>(I.lo, I.hi + 1, [&](std::int64_t l) -> std::int64_t {
        return norm(frac_mul(alpha, l)) <= delta1 ? 1 : 0;
    });
    const double len = static_cast<double>(I.size());
    r.required = delta2 * len;
    // Absorbs the representation error of delta2 (e.g. 0.14 * 100).
    r.hypothesis_holds = static_cast<double>(r.count) + 1e-9 >= r.required;

    r.part_i.q_bound = static_cast<std::int64_t>(std::ceil(8.0 / delta2));
    r.part_i.rhs = 256.0 / (delta2 * delta2 * len);
    r.part_i.applicable = r.hypothesis_holds && len > 1.0 / delta2;
    if (r.part_i.applicable) {
        r.part_i.check = verify_major_arc(alpha, r.part_i.q_bound, r.part_i.rhs);
        r.part_i.holds = r.part_i.check.holds;
    }

    r.part_ii.q_bound = static_cast<std::int64_t>(std::ceil(16.0 / (delta2 * delta2)));
    r.part_ii.rhs = 32768.0 * delta1 / (std::pow(delta2, 6) * len);
    r.part_ii.applicable = r.hypothesis_holds && len > 2.0 / (delta2 * delta2);
    if (r.part_ii.applicable) {
        r.part_ii.check = verify_major_arc(alpha, r.part_ii.q_bound, r.part_ii.rhs);
        r.part_ii.holds = r.part_ii.check.holds;
    }
    r.conclusions_hold = r.part_i.holds && r.part_ii.holds;
    return r;
}

WeylReport weyl_detect(double alpha, double beta, double gamma, Interval I, double delta) {
    if (!(delta > 0 && delta < 1)) throw ParameterError("weyl_detect: delta must lie in (0,1)");
    const double len = static_cast<double>(I.size());
    if (len < 65536.0 / std::pow(delta, 6)) {
        throw PreconditionError("weyl_detect: interval too short, need |I| >= 2^16/delta^6");
    }
    if (std::max(std::abs(I.lo), std::abs(I.hi)) > 90'000'000) {
        throw RangeError("weyl_detect: interval endpoints too large for exact squares");
    }
    WeylReport r;
    const cplx s = exp_sum([&](std::int64_t l) {
        return frac_mul(alpha, l * l) + frac_mul(beta, l) + gamma;
    }, I);
    r.sum_mag = std::abs(s) / len;
    r.hypothesis_holds = r.sum_mag >= delta;
    r.q_bound = static_cast<std::int64_t>(std::ceil(4096.0 / std::pow(delta, 4)));
    r.rhs = std::ldexp(1.0, 43) / (std::pow(delta, 14) * len * len);
    if (r.hypothesis_holds) {
        r.check = verify_major_arc(alpha, r.q_bound, r.rhs);
        r.conclusion_holds = r.check.holds;
    }
    return r;
}

QuadraticRecurrenceReport recurrent_quadratic_detect(const RationalQuadratic& ph, Interval I, double delta1,
                                                     double delta2) {
    if (!(delta1 > 0 && delta1 < 1 && delta2 > 0 && delta2 < 1)) {
        throw ParameterError("recurrent_quadratic_detect: thresholds must lie in (0,1)");
    }
    if (delta1 > delta2 / 4) throw ParameterError("recurrent_quadratic_detect: need delta1 <= delta2/4");
    if (ph.q < 1) throw ParameterError("recurrent_quadratic_detect: denominator must be positive");
    if (ph.q > 100'000'000) throw CapacityError("recurrent_quadratic_detect: period too long");
    const double len = static_cast<double>(I.size());
    if (len < std::ldexp(1.0, 58) / std::pow(delta2, 12)) {
        throw PreconditionError("recurrent_quadratic_detect: interval too short, need |I| >= 2^58 delta2^-12");
    }
    QuadraticRecurrenceReport r;
    const std::int64_t q = ph.q;
    for (std::int64_t res = 0; res < q; ++res) {
        const __int128 l = res;
        const std::int64_t v = mod_pos(l * l * ph.a + l * ph.b + ph.c, q);
        const std::int64_t dist = std::min(v, q - v);
        if (static_cast<double>(dist) <= delta1 * static_cast<double>(q)) {
            r.count += floor_div(I.hi - res, q) - floor_div(I.lo - 1 - res, q);
        }
    }
    r.required = delta2 * len;
    r.hypothesis_holds = static_cast<double>(r.count) >= r.required * (1.0 - kSlack);
    r.q_bound = std::ceil(std::ldexp(1.0, 43) / std::pow(delta2, 9));
    r.rhs = std::ldexp(1.0, 141) / (std::pow(delta2, 28) * len * len);
    if (r.hypothesis_holds) {
        if (r.rhs >= 0.5) {
            r.check.holds = true;
            r.check.q = 1;
        } else {
            // Exact norms of multiples of a/q; the minimum 0 is reached at q' = q.
            const double qb = std::min(r.q_bound, static_cast<double>(q));
            for (std::int64_t k = 1; static_cast<double>(k) <= qb; ++k) {
                const std::int64_t v = mod_pos(static_cast<__int128>(k) * ph.a, q);
                const double nv = static_cast<double>(std::min(v, q - v)) / static_cast<double>(q);
                r.check.scanned = k;
                if (nv <= r.rhs) {
                    r.check = {true, k, nv, k};
                    break;
                }
            }
        }
        r.conclusion_holds = r.check.holds;
    }
    return r;
}

double tv_norm(const Sequence& psi, std::int64_t q) {
    if (q < 1) throw ParameterError("tv_norm: q must be at least 1");
    const auto len = static_cast<std::int64_t>(psi.values.size());
    auto at = [&](std::int64_t i) { return (i >= 0 && i < len) ? psi.values[static_cast<std::size_t>(i)] : 0.0; };
    double sup = 0.0;
    for (double v : psi.values) sup = std::max(sup, std::abs(v));
    double var = 0.0;
    for (std::int64_t i = -q; i < len; ++i) var += std::abs(at(i + q) - at(i));
    return sup + var;
}

SumPartsReport summation_by_parts_check(const std::vector<cplx>& f, const std::vector<double>& psi, std::int64_t q) {
    if (f.size() != psi.size()) throw ParameterError("summation_by_parts_check: size mismatch");
    if (q < 1) throw ParameterError("summation_by_parts_check: q must be at least 1");
    SumPartsReport r;
    cplx acc = 0;
    for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * psi[i];
    r.lhs = std::abs(acc);
    r.tv = tv_norm(Sequence{0, psi}, q);
    const auto len = static_cast<std::int64_t>(f.size());
    for (std::int64_t a = 0; a < q && a < len; ++a) {
        std::vector<cplx> prefix{0.0};
        for (std::int64_t i = a; i < len; i += q) prefix.push_back(prefix.back() + f[static_cast<std::size_t>(i)]);
        for (std::size_t i = 0; i < prefix.size(); ++i) {
            for (std::size_t j = i + 1; j < prefix.size(); ++j) {
                r.sup_partial = std::max(r.sup_partial, std::abs(prefix[j] - prefix[i]));
            }
        }
    }
    r.rhs = static_cast<double>(q) * r.tv * r.sup_partial;
    r.holds = le_with_slack(r.lhs, r.rhs);
    return r;
}

CompletionReport completion_check(const std::vector<cplx>& f, std::int64_t lo,
                                  const std::vector<std::pair<std::int64_t, std::int64_t>>& J) {
    CompletionReport r;
    const auto L = static_cast<std::int64_t>(f.size());
    if (L == 0) return r;
    std::vector<cplx> prefix(static_cast<std::size_t>(L) + 1, 0.0);
    for (std::int64_t i = 0; i < L; ++i) prefix[i + 1] = prefix[i] + f[static_cast<std::size_t>(i)];
    if (J.empty()) {
        for (std::int64_t a = 0; a < L; ++a) {
            for (std::int64_t b = a + 1; b <= L; ++b) r.lhs = std::max(r.lhs, std::abs(prefix[b] - prefix[a]));
        }
    } else {
        for (auto [a, b] : J) {
            if (a < 0 || b >= L || a > b) throw ParameterError("completion_check: sub-interval outside I");
            r.lhs = std::max(r.lhs, std::abs(prefix[b + 1] - prefix[a]));
        }
    }
    // Probes xi/(2L): twice the density of the natural frequency grid.
    const std::int64_t grid = 2 * L;
    std::vector<cplx> roots(static_cast<std::size_t>(grid));
    for (std::int64_t k = 0; k < grid; ++k) {
        roots[static_cast<std::size_t>(k)] = e(static_cast<double>(k) / static_cast<double>(grid));
    }
    for (std::int64_t xi = 0; xi < grid; ++xi) {
        cplx s = 0;
        for (std::int64_t i = 0; i < L; ++i) {
            const std::int64_t k = mod_pos(static_cast<__int128>(xi) * (lo + i), grid);
            s += f[static_cast<std::size_t>(i)] * roots[static_cast<std::size_t>(k)];
        }
        r.grid_sup = std::max(r.grid_sup, std::abs(s));
    }
    r.log_factor = std::log(1.0 + static_cast<double>(L));
    double kernel = 0.0;
    for (std::int64_t xi = 0; xi < L; ++xi) {
        const double nv = norm(static_cast<double>(xi) / static_cast<double>(L));
        kernel += nv == 0.0 ? 1.0 : std::min(1.0, 1.0 / (2.0 * static_cast<double>(L) * nv));
    }
    r.proof_constant = kernel / r.log_factor;
    r.empirical_c = r.grid_sup > 0 ? r.lhs / (r.log_factor * r.grid_sup) : 0.0;
    r.holds = le_with_slack(r.lhs, kernel * r.grid_sup);
    return r;
}

BoxNormReport box_norm_check(const std::vector<cplx>& f, std::size_t nx, std::size_t ny, const std::vector<cplx>& bx,
                             const std::vector<cplx>& by) {
    if (nx == 0 || ny == 0 || nx > 256 || ny > 256) throw CapacityError("box_norm_check: sizes must lie in [1,256]");
    if (f.size() != nx * ny || bx.size() != nx || by.size() != ny) {
        throw ParameterError("box_norm_check: size mismatch");
    }
    for (const auto& v : bx) if (std::abs(v) > 1.0 + 1e-12) throw ParameterError("box_norm_check: weight exceeds 1");
    for (const auto& v : by) if (std::abs(v) > 1.0 + 1e-12) throw ParameterError("box_norm_check: weight exceeds 1");
    const double X = static_cast<double>(nx);
    const double Y = static_cast<double>(ny);
    auto at = [&](std::size_t x, std::size_t y) { return f[x * ny + y]; };
    BoxNormReport r;
    cplx s1 = 0, s2 = 0;
    double row_energy = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
        cplx row = 0, roww = 0;
        for (std::size_t y = 0; y < ny; ++y) {
            row += at(x, y);
            roww += by[y] * at(x, y);
        }
        s1 += bx[x] * row;
        s2 += bx[x] * roww;
        row_energy += std::norm(row / Y);
    }
    r.lhs1 = std::abs(s1) / (X * Y);
    r.rhs1 = row_energy / X;
    r.holds1 = le_with_slack(r.lhs1, std::sqrt(r.rhs1));
    r.lhs2 = std::abs(s2) / (X * Y);
    double box = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t y2 = 0; y2 < ny; ++y2) {
            cplx g = 0;
            for (std::size_t x = 0; x < nx; ++x) g += at(x, y) * std::conj(at(x, y2));
            box += std::norm(g / X);
        }
    }
    r.rhs2 = box / (Y * Y);
    r.holds2 = le_with_slack(r.lhs2, std::pow(r.rhs2, 0.25));
    return r;
}

Box4Report box4_check(const std::vector<cplx>& K, std::size_t n, const std::vector<cplx>& b1,
                      const std::vector<cplx>& b2, const std::vector<cplx>& b3, const std::vector<cplx>& b4) {
    if (n == 0 || n > 16) throw CapacityError("box4_check: |X| must lie in [1,16]");
    const std::size_t n2 = n * n, n3 = n2 * n;
    if (K.size() != n3 * n || b1.size() != n3 || b2.size() != n3 || b3.size() != n3 || b4.size() != n3) {
        throw ParameterError("box4_check: size mismatch");
    }
    auto k = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t d) { return K[((a * n + b) * n + c) * n + d]; };
    auto w = [&](const std::vector<cplx>& v, std::size_t a, std::size_t b, std::size_t c) { return v[(a * n + b) * n + c]; };
    Box4Report r;
    cplx s = 0;
    for (std::size_t x1 = 0; x1 < n; ++x1)
        for (std::size_t x2 = 0; x2 < n; ++x2)
            for (std::size_t x3 = 0; x3 < n; ++x3)
                for (std::size_t x4 = 0; x4 < n; ++x4)
                    s += w(b1, x2, x3, x4) * w(b2, x1, x3, x4) * w(b3, x1, x2, x4) * w(b4, x1, x2, x3) *
                         k(x1, x2, x3, x4);
    const double N4 = static_cast<double>(n2 * n2);
    r.lhs = std::abs(s) / N4;
    double total = 0.0;
    std::vector<cplx> M(n2);
    for (std::size_t x1 = 0; x1 < n; ++x1)
        for (std::size_t y1 = 0; y1 < n; ++y1)
            for (std::size_t x2 = 0; x2 < n; ++x2)
                for (std::size_t y2 = 0; y2 < n; ++y2) {
                    for (std::size_t x3 = 0; x3 < n; ++x3)
                        for (std::size_t x4 = 0; x4 < n; ++x4)
                            M[x3 * n + x4] = k(x1, x2, x3, x4) * std::conj(k(y1, x2, x3, x4)) *
                                             std::conj(k(x1, y2, x3, x4)) * k(y1, y2, x3, x4);
                    for (std::size_t x3 = 0; x3 < n; ++x3)
                        for (std::size_t y3 = 0; y3 < n; ++y3) {
                            cplx g = 0;
                            for (std::size_t x4 = 0; x4 < n; ++x4) g += M[x3 * n + x4] * std::conj(M[y3 * n + x4]);
                            total += std::norm(g);
                        }
                }
    r.box = total / (N4 * N4);
    r.holds = le_with_slack(r.lhs, std::pow(r.box, 1.0 / 16.0));
    return r;
}

}  // namespace mobnil::circle
