#include "mobnil/correlate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numeric>

#include <json.hpp>

#include "mobnil/circle.hpp"
#include "mobnil/decompose.hpp"
#include "mobnil/parallel.hpp"

namespace mobnil::correlate {

using circle::frac_mul;
using circle::nearest;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw ParameterError(std::string(what) + " must be finite");
}

void check_table(const sieve::MobiusTable& mu, std::int64_t n, const char* what) {
    if (n > mu.n_max) {
        throw RangeError(std::string(what) + ": needs mu up to " + std::to_string(n) + ", table has " +
                         std::to_string(mu.n_max));
    }
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string kind_name(const PhaseSpec& spec) {
    return std::visit(overloaded{
                          [](const LinearPhase&) { return std::string("linear"); },
                          [](const QuadraticPhase&) { return std::string("quadratic"); },
                          [](const BracketPhase&) { return std::string("bracket"); },
                          [](const PeriodicPhase&) { return std::string("periodic"); },
                          [](const CharacterPhase&) { return std::string("character"); },
                          [](const NilseqPhase&) { return std::string("nilseq"); },
                          [](const TabulatedSpec&) { return std::string("tabulated"); },
                      },
                      spec);
}

void validate(const PhaseSpec& spec) {
    std::visit(overloaded{
                   [](const LinearPhase& p) { check_finite(p.alpha, "linear: alpha"); },
                   [](const QuadraticPhase& p) {
                       check_finite(p.alpha, "quadratic: alpha");
                       check_finite(p.beta, "quadratic: beta");
                       check_finite(p.gamma, "quadratic: gamma");
                   },
                   [](const BracketPhase& p) {
                       check_finite(p.alpha, "bracket: alpha");
                       check_finite(p.beta, "bracket: beta");
                   },
                   [](const PeriodicPhase& p) {
                       if (p.values.empty()) throw ParameterError("periodic: period must be at least 1");
                   },
                   [](const CharacterPhase& p) {
                       const CharacterTable table(p.q);
                       if (p.index < 0 || p.index >= table.count()) {
                           throw ParameterError("character: index must lie in 0.." + std::to_string(table.count() - 1) +
                                                " for q = " + std::to_string(p.q));
                       }
                   },
                   [](const NilseqPhase& p) {
                       for (double v : {p.g.t1, p.g.t2, p.g.t3, p.x.t1, p.x.t2, p.x.t3}) check_finite(v, "nilseq: g, x");
                       phases::builtin_nil_function(p.function);
                   },
                   [](const TabulatedSpec& p) {
                       for (std::size_t i = 0; i < p.weight.size(); ++i) {
                           const double w = p.weight[i];
                           const std::int64_t n = p.offset + static_cast<std::int64_t>(i);
                           if (!(std::abs(w) <= 1.0)) throw ParameterError("tabulated: weights must satisfy |psi| <= 1");
                           if (w != 0 && !p.phase.contains(n)) {
                               throw DomainError("tabulated: psi(" + std::to_string(n) + ") != 0 off the phase domain");
                           }
                       }
                   },
               },
               spec);
}

SequenceFn make_sequence(const PhaseSpec& spec) {
    validate(spec);
    return std::visit(
        overloaded{
            [](const LinearPhase& p) -> SequenceFn {
                return [a = p.alpha](std::int64_t n) { return circle::e(frac_mul(a, n)); };
            },
            [](const QuadraticPhase& p) -> SequenceFn {
                return [p](std::int64_t n) {
                    return circle::e(frac_mul(p.alpha, n * n) + frac_mul(p.beta, n) + p.gamma);
                };
            },
            [](const BracketPhase& p) -> SequenceFn {
                return [p](std::int64_t n) {
                    const double k = nearest(p.alpha * static_cast<double>(n));
                    return circle::e(frac_mul(p.beta, static_cast<std::int64_t>(k) * n));
                };
            },
            [](const PeriodicPhase& p) -> SequenceFn {
                return [v = p.values](std::int64_t n) {
                    const auto q = static_cast<std::int64_t>(v.size());
                    return v[static_cast<std::size_t>(((n % q) + q) % q)];
                };
            },
            [](const CharacterPhase& p) -> SequenceFn {
                auto table = std::make_shared<CharacterTable>(p.q);
                return [table, chi = p.index](std::int64_t n) { return table->value(chi, n); };
            },
            [](const NilseqPhase& p) -> SequenceFn {
                auto F = std::make_shared<phases::NilFunction>(phases::builtin_nil_function(p.function));
                return [F, g = p.g, x = p.x](std::int64_t n) { return cplx(F->eval(nilflow::heis_orbit(g, n, x))); };
            },
            [](const TabulatedSpec& p) -> SequenceFn {
                return [p](std::int64_t n) -> cplx {
                    const std::int64_t i = n - p.offset;
                    if (i < 0 || i >= static_cast<std::int64_t>(p.weight.size())) return {};
                    const double w = p.weight[static_cast<std::size_t>(i)];
                    if (w == 0) return {};
                    return w * circle::e(p.phase.at(n));
                };
            },
        },
        spec);
}

CorrelationReport correlate(const sieve::MobiusTable& mu, const PhaseSpec& spec, std::vector<std::int64_t> n_list) {
    std::sort(n_list.begin(), n_list.end());
    for (std::int64_t N : n_list) {
        if (N < 1) throw RangeError("correlate: N must be positive");
    }
    if (!n_list.empty()) check_table(mu, n_list.back(), "correlate");
    const SequenceFn f = make_sequence(spec);
    CorrelationReport report;
    report.kind = kind_name(spec);
    for (std::int64_t N : n_list) {
        CorrelationRow row;
        row.N = N;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const cplx s = par::sum<cplx>(1, N + 1, [&](std::int64_t n) -> cplx {
                const int m = mu(n);
                return m == 0 ? cplx{} : static_cast<double>(m) * std::conj(f(n));
            });
            row.value = s / static_cast<double>(N);
            row.abs = std::abs(row.value);
        } catch (const Error& e) {
            row.value = {NAN, NAN};
            row.abs = NAN;
            row.error = e.what();
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        report.rows.push_back(std::move(row));
    }
    report.fit = fit_decay(report.rows);
    return report;
}

std::optional<DecayFit> fit_decay(const std::vector<CorrelationRow>& rows) {
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (r.N >= 3 && r.error.empty() && r.abs > 0 && std::isfinite(r.abs)) {
            xs.push_back(std::log(std::log(static_cast<double>(r.N))));
            ys.push_back(std::log(r.abs));
        }
    }
    if (xs.size() < 4) return std::nullopt;
    const double k = static_cast<double>(xs.size());
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / k;
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) return std::nullopt;
    const double slope = sxy / sxx;
    return DecayFit{-slope, my - slope * mx};
}

std::string to_csv(const CorrelationReport& report, bool with_timing) {
    std::string out = "N,re,im,abs,seconds\n";
    for (const auto& r : report.rows) {
        out += std::to_string(r.N) + "," + fmt17(r.value.real()) + "," + fmt17(r.value.imag()) + "," + fmt17(r.abs) +
               "," + fmt17(with_timing ? r.seconds : 0.0) + "\n";
    }
    return out;
}

std::string to_json(const CorrelationReport& report, bool with_timing) {
    nlohmann::ordered_json j;
    j["kind"] = report.kind;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        row["n"] = r.N;
        row["re"] = r.value.real();
        row["im"] = r.value.imag();
        row["abs"] = r.abs;
        row["wall_s"] = with_timing ? r.seconds : 0.0;
        if (!r.error.empty()) row["error"] = r.error;
        j["rows"].push_back(row);
    }
    if (report.fit) {
        j["fit_a"] = report.fit->a;
        j["fit_c"] = report.fit->c;
    } else {
        j["fit_a"] = nullptr;
        j["fit_c"] = nullptr;
    }
    return j.dump(2) + "\n";
}

cplx correlate_periodic(const sieve::MobiusTable& mu, const std::vector<cplx>& f, std::int64_t n) {
    if (f.empty()) throw ParameterError("correlate_periodic: period must be at least 1");
    if (n < 1) throw RangeError("correlate_periodic: n must be positive");
    check_table(mu, n, "correlate_periodic");
    const auto q = static_cast<std::int64_t>(f.size());
    const cplx s = par::sum<cplx>(1, n + 1, [&](std::int64_t m) -> cplx {
        const int v = mu(m);
        return v == 0 ? cplx{} : static_cast<double>(v) * std::conj(f[static_cast<std::size_t>(m % q)]);
    });
    return s / static_cast<double>(n);
}

cplx correlate_periodic_via_characters(const sieve::MobiusTable& mu, const std::vector<cplx>& f, std::int64_t n) {
    if (f.empty()) throw ParameterError("correlate_periodic: period must be at least 1");
    if (n < 1) throw RangeError("correlate_periodic: n must be positive");
    check_table(mu, n, "correlate_periodic");
    const auto q = static_cast<std::int64_t>(f.size());
    const CharacterTable table(q);
    const double phi = static_cast<double>(table.totient());
    cplx total{};
    // gcd(m, q) = d with m = d m': only squarefree d contribute, and then
    // mu(m) = mu(d) mu(m') with gcd(m', q) = 1.
    for (std::int64_t d = 1; d <= q; ++d) {
        if (q % d != 0) continue;
        const int mud = sieve::mobius_of(d);
        if (mud == 0) continue;
        const std::int64_t nd = n / d;
        if (nd < 1) continue;
        const std::vector<cplx> corr = correlate_character(mu, table, nd);
        for (std::int64_t chi = 0; chi < table.count(); ++chi) {
            cplx c{};
            for (std::int64_t r = 0; r < q; ++r) {
                if (!table.coprime(r)) continue;
                c += f[static_cast<std::size_t>((d * r) % q)] * std::conj(table.value(chi, r));
            }
            c /= phi;
            total += static_cast<double>(mud) * std::conj(c) * corr[static_cast<std::size_t>(chi)] * static_cast<double>(nd);
        }
    }
    return total / static_cast<double>(n);
}

double self_correlation_3term(const sieve::MobiusTable& mu, std::int64_t n, bool truncate) {
    if (n < 1) throw RangeError("self_correlation_3term: n must be positive");
    if (n > kSelfCorrelationCap) {
        throw CapacityError("self_correlation_3term: n is capped at " + std::to_string(kSelfCorrelationCap));
    }
    check_table(mu, truncate ? n : 3 * n, "self_correlation_3term");
    std::vector<std::int64_t> rows(static_cast<std::size_t>(n) + 1, 0);
    par::for_blocks(n, [&](std::int64_t b) {
        const std::int64_t x = b + 1;
        const int a = mu(x);
        if (a == 0) return;
        std::int64_t s = 0;
        for (std::int64_t d = 1; d <= n; ++d) {
            if (truncate && x + 2 * d > n) break;
            s += mu(x + d) * mu(x + 2 * d);
        }
        rows[static_cast<std::size_t>(x)] = a * s;
    });
    const std::int64_t total = std::accumulate(rows.begin(), rows.end(), std::int64_t{0});
    return static_cast<double>(total) / (static_cast<double>(n) * static_cast<double>(n));
}

double self_correlation_parallelogram(const sieve::MobiusTable& mu, std::int64_t n, ParallelogramMode mode,
                                      bool truncate) {
    if (n < 1) throw RangeError("self_correlation_parallelogram: n must be positive");
    if (mode == ParallelogramMode::Auto) mode = n <= kParallelogramExactCap ? ParallelogramMode::Exact : ParallelogramMode::Factored;
    if (mode == ParallelogramMode::Exact && n > kParallelogramExactCap) {
        throw CapacityError("self_correlation_parallelogram: exact mode is capped at n = " +
                            std::to_string(kParallelogramExactCap));
    }
    if (n > kSelfCorrelationCap) {
        throw CapacityError("self_correlation_parallelogram: n is capped at " + std::to_string(kSelfCorrelationCap));
    }
    check_table(mu, truncate ? n : 3 * n, "self_correlation_parallelogram");
    const std::int64_t limit = truncate ? n : 3 * n;
    std::vector<std::int64_t> rows(static_cast<std::size_t>(n) + 1, 0);
    if (mode == ParallelogramMode::Exact) {
        par::for_blocks(n, [&](std::int64_t b) {
            const std::int64_t x = b + 1;
            if (mu(x) == 0) return;
            std::int64_t s = 0;
            for (std::int64_t h1 = 1; h1 <= n && x + h1 <= limit; ++h1) {
                const int a = mu(x) * mu(x + h1);
                if (a == 0) continue;
                for (std::int64_t h2 = 1; h2 <= n && x + h1 + h2 <= limit; ++h2) s += a * mu(x + h2) * mu(x + h1 + h2);
            }
            rows[static_cast<std::size_t>(x)] = s;
        });
    } else {
        // For fixed h1 with g(y) = mu(y) mu(y + h1), the inner sum over (x, h2)
        // is sum_x g(x) (G(x + n) - G(x)) with G the prefix sums of g.
        par::for_blocks(n, [&](std::int64_t b) {
            const std::int64_t h1 = b + 1;
            const std::int64_t top = 2 * n;
            std::vector<std::int64_t> G(static_cast<std::size_t>(top) + 1, 0);
            for (std::int64_t y = 1; y <= top; ++y) {
                const std::int64_t g = y + h1 <= limit ? mu(y) * mu(y + h1) : 0;
                G[static_cast<std::size_t>(y)] = G[static_cast<std::size_t>(y - 1)] + g;
            }
            std::int64_t s = 0;
            for (std::int64_t x = 1; x <= n; ++x) {
                const std::int64_t gx = G[static_cast<std::size_t>(x)] - G[static_cast<std::size_t>(x - 1)];
                if (gx != 0) s += gx * (G[static_cast<std::size_t>(x + n)] - G[static_cast<std::size_t>(x)]);
            }
            rows[static_cast<std::size_t>(h1)] = s;
        });
    }
    const std::int64_t total = std::accumulate(rows.begin(), rows.end(), std::int64_t{0});
    const double nn = static_cast<double>(n);
    return static_cast<double>(total) / (nn * nn * nn);
}

cplx correlate_weighted_local(const sieve::MobiusTable& mu, const WindowWeight& psi, const phases::TabulatedPhase& phi) {
    if (psi.N < 1) throw RangeError("correlate_weighted_local: N must be positive");
    if (static_cast<std::int64_t>(psi.values.size()) != psi.N) {
        throw ParameterError("correlate_weighted_local: weight table must cover (N, 2N]");
    }
    check_table(mu, 2 * psi.N, "correlate_weighted_local");
    for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double w = psi.values[i];
        const std::int64_t n = psi.N + 1 + static_cast<std::int64_t>(i);
        if (!(std::abs(w) <= 1.0)) throw ParameterError("correlate_weighted_local: weights must satisfy |psi| <= 1");
        if (w != 0 && !phi.contains(n)) {
            throw DomainError("correlate_weighted_local: psi(" + std::to_string(n) + ") != 0 off the phase domain");
        }
    }
    const cplx s = par::sum<cplx>(psi.N + 1, 2 * psi.N + 1, [&](std::int64_t n) -> cplx {
        const double w = psi.values[static_cast<std::size_t>(n - psi.N - 1)];
        const int m = mu(n);
        if (w == 0 || m == 0) return {};
        return static_cast<double>(m) * w * circle::e(-phi.at(n));
    });
    return s / static_cast<double>(psi.N);
}

double window_tent(double t) {
    if (t < 7.0 / 6.0 || t > 11.0 / 6.0) return 0.0;
    return t <= 1.5 ? 6.0 * (t - 7.0 / 6.0) : 6.0 * (11.0 / 6.0 - t);
}

namespace {

// sum over lo < n <= hi of tent(n / M) f(n) e(alpha n) mu(n).
cplx windowed_sum(const sieve::MobiusTable& mu, const SequenceFn& f, double alpha, double M, std::int64_t lo,
                  std::int64_t hi) {
    return par::sum<cplx>(lo + 1, hi + 1, [&](std::int64_t n) -> cplx {
        const int m = mu(n);
        if (m == 0) return {};
        const double w = window_tent(static_cast<double>(n) / M);
        if (w == 0) return {};
        return static_cast<double>(m) * w * f(n) * circle::e(frac_mul(alpha, n));
    });
}

}  // namespace

cplx windowed_correlation(const sieve::MobiusTable& mu, const SequenceFn& f, double alpha, std::int64_t N) {
    if (N < 1) throw RangeError("windowed_correlation: N must be positive");
    check_table(mu, 2 * N, "windowed_correlation");
    return windowed_sum(mu, f, alpha, static_cast<double>(N), N, 2 * N) / static_cast<double>(N);
}

TelescopingReport telescoping_check(const sieve::MobiusTable& mu, const SequenceFn& f, std::int64_t N) {
    if (N < 1) throw RangeError("telescoping_check: N must be positive");
    check_table(mu, N, "telescoping_check");
    constexpr std::int64_t kDirectBelow = 16;
    TelescopingReport rep;
    rep.direct = par::sum<cplx>(1, N + 1, [&](std::int64_t n) -> cplx {
        const int m = mu(n);
        return m == 0 ? cplx{} : static_cast<double>(m) * f(n);
    }) / static_cast<double>(N);

    cplx acc{};
    double scale = 1.0;  // 0.8^k
    std::int64_t top = N;
    while (top >= kDirectBelow) {
        const double M = 0.6 * static_cast<double>(N) * scale;
        const auto bottom = static_cast<std::int64_t>(std::floor(static_cast<double>(N) * scale * 0.8 + 1e-9));
        const SequenceFn piece = [&f, M](std::int64_t n) { return f(n) / window_tent(static_cast<double>(n) / M); };
        acc += windowed_sum(mu, piece, 0.0, M, bottom, top);
        ++rep.pieces;
        top = bottom;
        scale *= 0.8;
    }
    rep.remainder_end = top;
    for (std::int64_t n = 1; n <= top; ++n) acc += static_cast<double>(mu(n)) * f(n);
    rep.reconstructed = acc / static_cast<double>(N);
    rep.residual = std::abs(rep.reconstructed - rep.direct);
    return rep;
}

}  // namespace mobnil::correlate
