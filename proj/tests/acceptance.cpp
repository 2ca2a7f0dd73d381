// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fixtures/fixtures.hpp"
#include "mobnil/mobnil.hpp"

using namespace mobnil;
using cplx = std::complex<double>;

namespace {

constexpr double kSqrt2m1 = std::numbers::sqrt2 - 1;
constexpr double kSqrt3m1 = std::numbers::sqrt3 - 1;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), s);
    std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<cplx> random_values(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<cplx> v(n);
    for (auto& x : v) x = std::polar(u(rng), 2 * std::numbers::pi * u(rng));
    return v;
}

Outcome vaughan_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto mu = sieve::sieve_mobius(20'000);
    std::mt19937_64 rng(1);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        const auto vals = random_values(rng, 20'001);
        const vaughan::Sequence f = [&](std::int64_t n) { return vals[static_cast<std::size_t>(n)]; };
        worst = std::max(worst, vaughan::decompose(f, {10'000, 21, 21}, mu).residual);
    }
    const double s = elapsed_since(t0);
    return {worst <= 1e-9 && s < 10, "max residual " + fmt("%.3g", worst) + ", " + fmt("%.2f", s) + " s"};
}

Outcome sieve_cross_validation() {
    const auto a = sieve::sieve_mobius_linear(10'000'000);
    const auto b = sieve::sieve_mobius_segmented(10'000'000);
    if (!(a == b)) return {false, "strategies disagree at 1e7"};
    for (std::int64_t n = 1; n <= 10'000; ++n) {
        int s = 0;
        for (std::int64_t d = 1; d <= n; ++d) {
            if (n % d == 0) s += a(d);
        }
        if (s != (n == 1 ? 1 : 0)) return {false, "divisor sum fails at n = " + std::to_string(n)};
    }
    const double m = sieve::mertens_average(a, 10);
    return {m == -0.1, "tables equal to 1e7, inversion holds to 1e4, Mertens(10) = " + fmt("%.17g", m)};
}

Outcome nilflow_oracle() {
    using nilflow::HeisII;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    // The iterated product runs in long double; in double it drifts by tens of
    // ulps of the third coordinate over 1e3 steps, which is reported alongside.
    double worst = 0, drift = 0;
    for (int i = 0; i < 100; ++i) {
        const HeisII<double> g{u(rng), u(rng), u(rng)};
        const HeisII<long double> gl{g.t1, g.t2, g.t3};
        HeisII<long double> acc{};
        HeisII<double> acc_d{};
        for (std::int64_t n = 1; n <= 1'000; ++n) {
            acc = nilflow::heis_mul_ii(acc, gl);
            acc_d = nilflow::heis_mul_ii(acc_d, g);
            const auto p = nilflow::heis_pow(g, n);
            worst = std::max({worst, static_cast<double>(std::abs(p.t1 - acc.t1)), static_cast<double>(std::abs(p.t2 - acc.t2)),
                              static_cast<double>(std::abs(p.t3 - acc.t3))});
            drift = std::max(drift, static_cast<double>(std::abs(acc_d.t3 - acc.t3)));
        }
    }
    std::uniform_int_distribution<int> k(-256, 256);
    for (int i = 0; i < 10'000; ++i) {
        auto r = [&] { return static_cast<double>(k(rng)) / 16.0; };
        const HeisII<double> a{r(), r(), r()}, b{r(), r(), r()};
        const auto m = nilflow::from_matrix(nilflow::matrix_mul(nilflow::to_matrix(a), nilflow::to_matrix(b)));
        const auto p = nilflow::heis_mul_ii(a, b);
        if (m.t1 != p.t1 || m.t2 != p.t2 || m.t3 != p.t3) return {false, "matrix model mismatch"};
    }
    return {worst < 1e-9, "max power error " + fmt("%.3g", worst) + " (double iteration drifts " + fmt("%.3g", drift) +
                              "); matrix model exact on 1e4 dyadic pairs"};
}

// n <= N whose torus point lies in the box of side 1/10 centred at the origin.
std::vector<std::int64_t> box_set(std::int64_t N) {
    std::vector<std::int64_t> S;
    for (std::int64_t n = 1; n <= N; ++n) {
        if (std::abs(circle::frac_mul(kSqrt2m1, n)) < 0.05 && std::abs(circle::frac_mul(kSqrt3m1, n)) < 0.05) S.push_back(n);
    }
    return S;
}

Outcome local_quadratic_identity() {
    const nilflow::HeisII<double> g{kSqrt2m1, kSqrt3m1, 1.0 / 7};
    const auto S = box_set(10'000);
    const auto phi = phases::TabulatedPhase::from_function(S, [&](std::int64_t n) { return phases::local_pi3(g, n, 0.0); });
    phases::LocalPolyOptions opt;
    opt.exhaustive_limit = 64;
    opt.sample_budget = 100'000;
    opt.attempts_per_sample = 10'000;
    const auto r = phases::is_locally_polynomial(phi, 2, 1e-6, opt);
    const bool enough = r.exhaustive || r.checked_count >= 100'000;
    return {r.holds && enough, "|S| = " + std::to_string(S.size()) + ", " + std::to_string(r.checked_count) +
                                   " configurations, worst residual " + fmt("%.3g", r.worst_residual)};
}

Outcome local_quadratic_checker() {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double worst_quad = 0;
    std::vector<std::int64_t> line;
    for (std::int64_t n = -200; n <= 200; ++n) line.push_back(n);
    for (int i = 0; i < 20; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        const auto phi = phases::TabulatedPhase::from_function(line, [&](std::int64_t n) {
            return circle::reduce(circle::frac_mul(a, n * n) + circle::frac_mul(b, n) + c);
        });
        phases::LocalPolyOptions opt;
        opt.sample_budget = 5'000;
        opt.seed = static_cast<std::uint64_t>(i);
        worst_quad = std::max(worst_quad, phases::is_locally_polynomial(phi, 2, 1e-12, opt).worst_residual);
    }
    const double a = kSqrt2m1, b = kSqrt3m1, c = 0.3137;
    auto bracket = [&](std::int64_t n) { return circle::reduce(circle::frac_mul(a, n) * circle::frac_mul(b, n) * c); };
    const auto bohr = phases::bohr_enumerate({{a, b}, 100'000, 0, 0.05, {-100'000, 100'000}});
    phases::LocalPolyOptions opt;
    opt.sample_budget = 20'000;
    const auto on_bohr = phases::is_locally_polynomial(phases::TabulatedPhase::from_function(bohr, bracket), 2, 1e-9, opt);
    std::vector<std::int64_t> interval;
    for (std::int64_t n = 1; n <= 64; ++n) interval.push_back(n);
    const auto on_interval = phases::is_locally_polynomial(phases::TabulatedPhase::from_function(interval, bracket), 2, 1e-6);
    std::string witness;
    for (auto w : on_interval.worst_witness) witness += (witness.empty() ? "" : ",") + std::to_string(w);
    const bool pass = worst_quad < 1e-12 && on_bohr.holds && !on_interval.holds && !on_interval.worst_witness.empty();
    return {pass, "quadratic residual " + fmt("%.3g", worst_quad) + ", bracket on Bohr set " +
                      fmt("%.3g", on_bohr.worst_residual) + ", on [1,64] fails with witness (" + witness + ")"};
}

Outcome decomposition() {
    const auto t0 = std::chrono::steady_clock::now();
    const nilflow::HeisII<double> g{kSqrt2m1, kSqrt3m1, 1.0 / 7};
    const auto d = phases::heis_decompose(phases::builtin_nil_function("bump3"), g, 10'000, 0.1);
    const double s = elapsed_since(t0);
    const bool pass = d.sup_error <= 0.1 && d.phases_ok && d.weight_mean <= 1e4 && s < 60;
    return {pass, "sup error " + fmt("%.4f", d.sup_error) + ", " + std::to_string(d.pieces.size()) + " pieces, mean |w| " +
                      fmt("%.1f", d.weight_mean) + ", phases " + (d.phases_ok ? "ok" : "bad")};
}

Outcome harmonic_tools() {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    int bad = 0;
    for (int i = 0; i < 1'000; ++i) {
        const double a = u(rng);
        const std::int64_t lo = std::uniform_int_distribution<std::int64_t>(-1'000, 1'000)(rng);
        const circle::Interval I{lo, lo + std::uniform_int_distribution<std::int64_t>(0, 3'000)(rng)};
        bad += std::abs(circle::exp_sum_linear(a, I)) > circle::linear_sum_bound(a, I);
    }
    const int bad_sum = bad;
    for (int i = 0; i < 1'000; ++i) {
        std::vector<double> pts(500);
        const double a = u(rng);
        for (std::size_t k = 0; k < pts.size(); ++k) pts[k] = circle::frac_mul(a, static_cast<std::int64_t>(k + 1));
        const double lo = 0.45 * u(rng) - 0.05;
        const double hi = lo + (0.5 - lo) * (0.5 + 0.5 * u(rng)) * 0.999;
        bad += !circle::erdos_turan(pts, lo, hi, 1 + i % 30).holds();
    }
    const int bad_et = bad - bad_sum;
    for (int i = 0; i < 1'000; ++i) {
        const std::size_t L = 1 + rng() % 300;
        std::vector<cplx> f(L);
        std::vector<double> psi(L);
        for (std::size_t k = 0; k < L; ++k) {
            f[k] = {u(rng), u(rng)};
            psi[k] = u(rng);
        }
        bad += !circle::summation_by_parts_check(f, psi, 1 + static_cast<std::int64_t>(rng() % 4)).holds;
    }
    const int bad_parts = bad - bad_sum - bad_et;
    for (int i = 0; i < 1'000; ++i) {
        std::vector<cplx> f(64), bx(8), by(8);
        for (auto& x : f) x = {u(rng), u(rng)};
        for (auto& x : bx) x = std::polar(std::abs(u(rng)), 3 * u(rng));
        for (auto& x : by) x = std::polar(std::abs(u(rng)), 3 * u(rng));
        const auto r = circle::box_norm_check(f, 8, 8, bx, by);
        bad += !(r.holds1 && r.holds2);
    }
    const int bad_box = bad - bad_sum - bad_et - bad_parts;
    return {bad == 0, "violations: exp sum " + std::to_string(bad_sum) + ", Erdos-Turan " + std::to_string(bad_et) +
                          ", summation by parts " + std::to_string(bad_parts) + ", box norm " + std::to_string(bad_box)};
}

Outcome detectors() {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    int hyp_lin = 0, hyp_weyl = 0, hyp_quad = 0, bad = 0;
    for (int i = 0; i < 1'000; ++i) {
        const std::int64_t q = 1 + static_cast<std::int64_t>(rng() % 12);
        const std::int64_t a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(q));
        const double alpha = static_cast<double>(a) / static_cast<double>(q) + (u(rng) - 0.5) * 1e-7;
        {
            const double d2 = 0.05 + 0.3 * u(rng);
            const auto r = circle::detect_linear_recurrence(alpha, {1, 5'000}, d2 / 4 * u(rng) + 1e-9, d2);
            hyp_lin += r.hypothesis_holds;
            bad += r.hypothesis_holds && !r.conclusions_hold;
        }
        {
            // Rational coefficients with denominator at most 4, nudged off the rationals.
            const std::int64_t r = 1 + static_cast<std::int64_t>(rng() % 4);
            const double wa = static_cast<double>(rng() % static_cast<std::uint64_t>(r)) / static_cast<double>(r) + (u(rng) - 0.5) * 1e-12;
            const double wb = static_cast<double>(rng() % static_cast<std::uint64_t>(r)) / static_cast<double>(r) + (u(rng) - 0.5) * 1e-12;
            const double delta = 0.9 + 0.09 * u(rng);
            const auto w = circle::weyl_detect(wa, wb, u(rng), {1, std::int64_t{1} << 17}, delta);
            hyp_weyl += w.hypothesis_holds;
            bad += w.hypothesis_holds && !w.conclusion_holds;
        }
        {
            const std::int64_t qq = 1 + static_cast<std::int64_t>(rng() % 50);
            const circle::RationalQuadratic ph{static_cast<std::int64_t>(rng() % qq), static_cast<std::int64_t>(rng() % qq),
                                               static_cast<std::int64_t>(rng() % qq), qq};
            const double d2 = 0.9 + 0.09 * u(rng);
            const auto r = circle::recurrent_quadratic_detect(ph, {1, std::int64_t{1} << 62}, d2 / 4 * u(rng) + 1e-9, d2);
            hyp_quad += r.hypothesis_holds;
            bad += r.hypothesis_holds && !r.conclusion_holds;
        }
    }
    return {bad == 0, std::to_string(bad) + " violations; hypotheses held in " + std::to_string(hyp_lin) + " linear, " +
                          std::to_string(hyp_weyl) + " Weyl, " + std::to_string(hyp_quad) + " quadratic instances"};
}

correlate::CorrelationReport linear_experiment(const sieve::MobiusTable& mu) {
    std::vector<std::int64_t> ns;
    for (const auto& row : fixtures::kLinearSqrt2) ns.push_back(row.N);
    return correlate::correlate(mu, correlate::LinearPhase{kSqrt2m1}, ns);
}

Outcome decay_regression() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto mu = sieve::sieve_mobius(1'000'000);
    const auto rep = linear_experiment(mu);
    const double s = elapsed_since(t0);
    double worst = 0;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        worst = std::max({worst, std::abs(rep.rows[i].value.real() - fixtures::kLinearSqrt2[i].re),
                          std::abs(rep.rows[i].value.imag() - fixtures::kLinearSqrt2[i].im)});
    }
    const double last = rep.rows.back().abs;
    return {worst <= 1e-12 && last < 5e-3 && s < 30,
            "max deviation " + fmt("%.3g", worst) + ", |S(1e6)| = " + fmt("%.3g", last)};
}

Outcome type_ii_oracle() {
    std::mt19937_64 rng(10);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        const auto vals = random_values(rng, 64 * 64 + 1);
        const vaughan::Sequence f = [&](std::int64_t n) { return vals[static_cast<std::size_t>(n)]; };
        for (std::int64_t D : {8, 16, 32}) {
            for (std::int64_t W : {8, 16, 32}) {
                // Direct quadruple sum, accumulated per (d, d') pair.
                cplx s{};
                for (std::int64_t d = D + 1; d <= 2 * D; ++d) {
                    for (std::int64_t e = D + 1; e <= 2 * D; ++e) {
                        cplx inner{};
                        for (std::int64_t w = W + 1; w <= 2 * W; ++w)
                            for (std::int64_t v = W + 1; v <= 2 * W; ++v)
                                inner += f(d * w) * std::conj(f(e * w)) * std::conj(f(d * v)) * f(e * v);
                        s += inner;
                    }
                }
                const double brute = s.real() / static_cast<double>(D * D * W * W);
                const double fast = vaughan::type_ii_box(f, D, W);
                worst = std::max(worst, std::abs(fast - brute) / std::max(std::abs(brute), 1e-300));
            }
        }
    }
    return {worst <= 1e-12, "max relative error " + fmt("%.3g", worst)};
}

Outcome fejer_rate() {
    std::vector<double> c;
    std::string detail;
    for (int k = 4; k <= 10; ++k) {
        const int N = 1 << k;
        const auto r = fourier::fejer_approx([](const double* x) { return cplx(circle::norm(x[0])); }, N, 1);
        c.push_back(r.sup_error * N / std::log(static_cast<double>(N)));
        detail += (detail.empty() ? "" : " ") + fmt("%.4f", c.back());
    }
    const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
    return {*hi <= 2 * *lo, "error N/log N: " + detail + ", spread " + fmt("%.3f", *hi / *lo)};
}

Outcome determinism() {
    const auto mu = sieve::sieve_mobius(1'000'000);
    std::string first;
    for (int t : {1, 4, 8}) {
        par::set_threads(t);
        const std::string csv = correlate::to_csv(linear_experiment(mu));
        if (first.empty()) {
            first = csv;
        } else if (csv != first) {
            par::set_threads(0);
            return {false, "CSV differs at " + std::to_string(t) + " threads"};
        }
    }
    par::set_threads(0);
    return {true, "identical CSV for 1, 4 and 8 threads (" + std::to_string(first.size()) + " bytes)"};
}

}  // namespace

int main() {
    run(1, "Vaughan identity exactness", vaughan_exactness);
    run(2, "sieve cross-validation", sieve_cross_validation);
    run(3, "nilflow oracle equivalence", nilflow_oracle);
    run(4, "local quadratic identity on a Bohr box", local_quadratic_identity);
    run(5, "local-quadratic checker", local_quadratic_checker);
    run(6, "nilsequence decomposition", decomposition);
    run(7, "harmonic-tool inequalities", harmonic_tools);
    run(8, "detector implications", detectors);
    run(9, "decay regression", decay_regression);
    run(10, "Type II oracle", type_ii_oracle);
    run(11, "Fejer rate", fejer_rate);
    run(12, "determinism across thread counts", determinism);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
