#include "mobnil/checks.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "mobnil/circle.hpp"
#include "mobnil/correlate.hpp"
#include "mobnil/error.hpp"
#include "mobnil/mobius_cache.hpp"
#include "mobnil/nilflow.hpp"
#include "mobnil/phases.hpp"
#include "mobnil/sieve.hpp"
#include "mobnil/vaughan.hpp"

namespace mobnil::checks {

namespace {

using cplx = std::complex<double>;
using Rng = std::mt19937_64;

struct Recorder {
    std::string suite;
    SuiteSummary& out;

    void operator()(const std::string& name, const std::function<std::string()>& body) {
        CheckResult r{suite, name, false, ""};
        try {
            r.detail = body();
            r.passed = r.detail.empty();
        } catch (const std::exception& e) {
            r.detail = std::string("exception: ") + e.what();
        }
        out.results.push_back(std::move(r));
    }
};

std::string fail_if(bool bad, const std::string& msg) { return bad ? msg : std::string(); }

std::string num(double v) {
    std::ostringstream s;
    s.precision(6);
    s << v;
    return s.str();
}

double uniform(Rng& rng, double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

void sieve_suite(Recorder check, Rng&) {
    check("linear and segmented sieves agree to 1e6", [] {
        return fail_if(!(sieve::sieve_mobius_linear(1'000'000) == sieve::sieve_mobius_segmented(1'000'000)),
                       "tables differ");
    });
    check("divisor sum of mu is [n = 1] for n <= 1e4", [] {
        const auto mu = sieve::sieve_mobius(10'000);
        for (std::int64_t n = 1; n <= 10'000; ++n) {
            int s = 0;
            for (std::int64_t d = 1; d * d <= n; ++d) {
                if (n % d != 0) continue;
                s += mu(d);
                if (d * d != n) s += mu(n / d);
            }
            if (s != (n == 1 ? 1 : 0)) return "fails at n = " + std::to_string(n);
        }
        return std::string();
    });
    check("mertens average at 10 is -0.1", [] {
        const double m = sieve::mertens_average(sieve::sieve_mobius(10), 10);
        return fail_if(m != -0.1, "got " + num(m));
    });
    check("divisor sieve matches trial division to 1e4", [] {
        const auto tau = sieve::sieve_divisor(10'000);
        for (std::int64_t n = 1; n <= 10'000; ++n) {
            std::uint32_t c = 0;
            for (std::int64_t d = 1; d <= n; ++d) c += n % d == 0;
            if (tau(n) != c) return "fails at n = " + std::to_string(n);
        }
        return std::string();
    });
    check("cache encoding round-trips", [] {
        for (std::int64_t n : {1, 1000, 65537}) {
            const auto t = sieve::sieve_mobius(n);
            if (!(sieve::decode_table(sieve::encode_table(t)) == t)) return "mismatch at n_max = " + std::to_string(n);
        }
        return std::string();
    });
    check("corrupted cache raises a checksum error", [] {
        auto bytes = sieve::encode_table(sieve::sieve_mobius(100));
        bytes[20] ^= 1;
        try {
            sieve::decode_table(bytes);
        } catch (const ChecksumError&) {
            return std::string();
        }
        return std::string("no checksum error");
    });
}

void circle_suite(Recorder check, Rng& rng) {
    check("linear exponential sums obey 4 min(|I|, 1/||alpha||)", [&] {
        for (int i = 0; i < 200; ++i) {
            const double a = uniform(rng, -1, 1);
            const std::int64_t lo = std::uniform_int_distribution<std::int64_t>(-500, 500)(rng);
            const circle::Interval I{lo, lo + std::uniform_int_distribution<std::int64_t>(0, 2000)(rng)};
            const double lhs = std::abs(circle::exp_sum_linear(a, I));
            if (lhs > circle::linear_sum_bound(a, I)) return "violated at alpha = " + num(a);
        }
        return std::string();
    });
    check("Erdos-Turan holds with constant 3", [&] {
        for (int i = 0; i < 100; ++i) {
            std::vector<double> u(200);
            const double a = uniform(rng);
            for (std::size_t k = 0; k < u.size(); ++k) u[k] = circle::frac_mul(a, static_cast<std::int64_t>(k + 1));
            const double lo = uniform(rng, -0.5, 0.4);
            const auto r = circle::erdos_turan(u, lo, uniform(rng, lo, 0.5), 1 + i % 20);
            if (!r.holds()) return "violated on instance " + std::to_string(i);
        }
        return std::string();
    });
    check("circle norm search finds the best denominator", [&] {
        for (int i = 0; i < 100; ++i) {
            const double x = uniform(rng);
            const auto r = circle::circle_norm_q(x, 50);
            for (std::int64_t q = 1; q <= 50; ++q) {
                const long double p = static_cast<long double>(q) * x;
                const auto v = static_cast<double>(std::abs(p - std::round(p)));
                if (v < r.norm_value - 1e-15) return "missed q = " + std::to_string(q);
            }
        }
        return std::string();
    });
}

void nilflow_suite(Recorder check, Rng& rng) {
    using nilflow::HeisII;
    check("heis_pow agrees with repeated multiplication", [&] {
        double worst = 0;
        for (int i = 0; i < 20; ++i) {
            const HeisII<double> g{uniform(rng, -1, 1), uniform(rng, -1, 1), uniform(rng, -1, 1)};
            HeisII<double> acc{};
            for (std::int64_t n = 1; n <= 200; ++n) {
                acc = nilflow::heis_mul_ii(acc, g);
                const auto p = nilflow::heis_pow(g, n);
                worst = std::max({worst, std::abs(p.t1 - acc.t1), std::abs(p.t2 - acc.t2), std::abs(p.t3 - acc.t3)});
            }
        }
        return fail_if(worst > 1e-9, "max error " + num(worst));
    });
    check("multiplication matches the matrix model", [&] {
        for (int i = 0; i < 100; ++i) {
            auto r = [&] { return static_cast<double>(std::uniform_int_distribution<int>(-64, 64)(rng)) / 8.0; };
            const HeisII<double> a{r(), r(), r()}, b{r(), r(), r()};
            const auto m = nilflow::from_matrix(nilflow::matrix_mul(nilflow::to_matrix(a), nilflow::to_matrix(b)));
            const auto p = nilflow::heis_mul_ii(a, b);
            if (m.t1 != p.t1 || m.t2 != p.t2 || m.t3 != p.t3) return std::string("mismatch");
        }
        return std::string();
    });
    check("orbit closed form and walk agree with reduced powers", [&] {
        double worst = 0;
        for (int i = 0; i < 10; ++i) {
            const HeisII<double> g{uniform(rng), uniform(rng), uniform(rng)};
            nilflow::HeisOrbit walk(g, {}, 0);
            for (std::int64_t n = 0; n <= 300; ++n, walk.advance()) {
                const auto direct = nilflow::heis_reduce(nilflow::heis_pow(g, n)).tau;
                const auto closed = nilflow::heis_orbit(g, n);
                const auto step = walk.point();
                for (const auto& p : {closed, step}) {
                    worst = std::max({worst, circle::norm(p.t1 - direct.t1), circle::norm(p.t2 - direct.t2),
                                      circle::norm(p.t3 - direct.t3)});
                }
            }
        }
        return fail_if(worst > 1e-9, "max error " + num(worst));
    });
    check("reduction lands in the fundamental domain", [&] {
        for (int i = 0; i < 1000; ++i) {
            const HeisII<double> x{uniform(rng, -50, 50), uniform(rng, -50, 50), uniform(rng, -50, 50)};
            const auto t = nilflow::heis_reduce(x).tau;
            for (double v : {t.t1, t.t2, t.t3}) {
                if (!(v > -0.5 && v <= 0.5)) return "coordinate " + num(v) + " outside (-1/2, 1/2]";
            }
        }
        return std::string();
    });
}

void phases_suite(Recorder check, Rng& rng) {
    check("quadratic phases are locally quadratic", [&] {
        const double a = uniform(rng), b = uniform(rng);
        std::vector<std::int64_t> dom;
        for (std::int64_t n = 1; n <= 40; ++n) dom.push_back(n);
        const auto phi = phases::TabulatedPhase::from_function(
            dom, [&](std::int64_t n) { return circle::reduce(circle::frac_mul(a, n * n) + circle::frac_mul(b, n)); });
        const auto r = phases::is_locally_polynomial(phi, 2, 1e-12);
        return fail_if(!r.holds, "residual " + num(r.worst_residual));
    });
    check("bracket phase is locally quadratic on its Bohr set", [&] {
        const double a = std::numbers::sqrt2 - 1, b = std::numbers::sqrt3 - 1, c = uniform(rng);
        phases::BohrSetSpec spec{{a, b}, 100'000, 0, 0.05, {-100'000, 100'000}};
        const auto dom = phases::bohr_enumerate(spec);
        const auto phi = phases::TabulatedPhase::from_function(dom, [&](std::int64_t n) {
            return circle::reduce(circle::frac_mul(a, n) * circle::frac_mul(b, n) * c);
        });
        phases::LocalPolyOptions opt;
        opt.sample_budget = 20'000;
        const auto r = phases::is_locally_polynomial(phi, 2, 1e-9, opt);
        return fail_if(!r.holds, "residual " + num(r.worst_residual));
    });
    check("second derivative is symmetric", [&] {
        const double a = uniform(rng);
        std::vector<std::int64_t> dom;
        for (std::int64_t n = 0; n <= 60; ++n) dom.push_back(n);
        const auto phi = phases::TabulatedPhase::from_function(dom, [&](std::int64_t n) { return circle::frac_mul(a, n * n); });
        for (std::int64_t h1 = 1; h1 <= 10; ++h1) {
            for (std::int64_t h2 = 1; h2 <= 10; ++h2) {
                const double d = circle::norm(phases::second_derivative(phi, 5, h1, h2) -
                                               phases::second_derivative(phi, 5, h2, h1));
                if (d > 1e-12) return std::string("asymmetric");
            }
        }
        return std::string();
    });
}

void vaughan_suite(Recorder check, Rng& rng) {
    const auto mu = sieve::sieve_mobius(4'000);
    check("Vaughan decomposition is exact", [&] {
        for (int i = 0; i < 5; ++i) {
            std::vector<cplx> vals(4'001);
            for (auto& v : vals) v = std::polar(uniform(rng), uniform(rng, 0, 2 * std::numbers::pi));
            const vaughan::Sequence f = [&](std::int64_t n) { return vals[static_cast<std::size_t>(n)]; };
            const auto r = vaughan::decompose(f, {2'000, 12, 12}, mu);
            if (r.residual > 1e-9) return "residual " + num(r.residual);
        }
        return std::string();
    });
    check("Type II box matches the quadruple sum", [&] {
        std::vector<cplx> vals(1'000);
        for (auto& v : vals) v = std::polar(1.0, uniform(rng, 0, 2 * std::numbers::pi));
        const vaughan::Sequence f = [&](std::int64_t n) { return vals[static_cast<std::size_t>(n)]; };
        const std::int64_t D = 8, W = 8;
        cplx brute{};
        for (std::int64_t d = D + 1; d <= 2 * D; ++d)
            for (std::int64_t e = D + 1; e <= 2 * D; ++e)
                for (std::int64_t w = W + 1; w <= 2 * W; ++w)
                    for (std::int64_t x = W + 1; x <= 2 * W; ++x)
                        brute += f(d * w) * std::conj(f(e * w)) * std::conj(f(d * x)) * f(e * x);
        brute /= static_cast<double>(D * D * W * W);
        const double fast = vaughan::type_ii_box(f, D, W);
        return fail_if(std::abs(fast - brute.real()) > 1e-12 * std::max(1.0, std::abs(brute)), "mismatch");
    });
}

void correlate_suite(Recorder check, Rng& rng) {
    const auto mu = sieve::sieve_mobius(30'000);
    check("characters are orthogonal for q <= 100", [] {
        for (std::int64_t q = 1; q <= 100; ++q) {
            const correlate::CharacterTable t(q);
            for (std::int64_t a = 0; a < t.count(); ++a) {
                for (std::int64_t b = a; b < t.count(); ++b) {
                    // Exact: compare exponents mod the lcm.
                    std::vector<std::int64_t> hist(static_cast<std::size_t>(t.exponent_lcm()), 0);
                    for (std::int64_t n = 0; n < q; ++n) {
                        const auto ea = t.exponent(a, n), eb = t.exponent(b, n);
                        if (!ea) continue;
                        const std::int64_t L = t.exponent_lcm();
                        ++hist[static_cast<std::size_t>(((*ea - *eb) % L + L) % L)];
                    }
                    cplx s{};
                    for (std::size_t k = 0; k < hist.size(); ++k) {
                        s += static_cast<double>(hist[k]) * circle::e(static_cast<double>(k) / t.exponent_lcm());
                    }
                    const double want = a == b ? static_cast<double>(t.totient()) : 0.0;
                    if (std::abs(s - want) > 1e-9) return "q = " + std::to_string(q);
                }
            }
        }
        return std::string();
    });
    check("linear correlation is 1-periodic and conjugate-symmetric in alpha", [&] {
        for (int i = 0; i < 50; ++i) {
            const double a = uniform(rng, -0.5, 0.5);
            auto at = [&](double x) {
                return correlate::correlate(mu, correlate::LinearPhase{x}, {5'000}).rows[0].value;
            };
            const cplx v = at(a);
            if (std::abs(v - at(a + 1)) > 1e-12 || std::abs(v - std::conj(at(-a))) > 1e-12) return "alpha = " + num(a);
        }
        return std::string();
    });
    check("periodic correlation matches its character expansion", [&] {
        for (std::int64_t q = 1; q <= 30; ++q) {
            std::vector<cplx> f(static_cast<std::size_t>(q));
            for (auto& v : f) v = std::polar(uniform(rng), uniform(rng, 0, 2 * std::numbers::pi));
            const cplx a = correlate::correlate_periodic(mu, f, 10'000);
            const cplx b = correlate::correlate_periodic_via_characters(mu, f, 10'000);
            if (std::abs(a - b) > 1e-10) return "q = " + std::to_string(q);
        }
        return std::string();
    });
    check("parallelogram exact and factored paths agree", [&] {
        for (std::int64_t n : {1, 2, 17, 64}) {
            const double a = correlate::self_correlation_parallelogram(mu, n, correlate::ParallelogramMode::Exact);
            const double b = correlate::self_correlation_parallelogram(mu, n, correlate::ParallelogramMode::Factored);
            if (std::abs(a - b) > 1e-12) return "n = " + std::to_string(n);
        }
        return std::string();
    });
    check("telescoping reconstruction at 1e4", [&] {
        const auto r = correlate::telescoping_check(mu, [](std::int64_t) { return cplx(1.0); }, 10'000);
        return fail_if(r.residual >= 1e-9, "residual " + num(r.residual));
    });
}

using SuiteFn = void (*)(Recorder, Rng&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
    static const std::vector<std::pair<std::string, SuiteFn>> r = {
        {"sieve", sieve_suite},     {"circle", circle_suite},   {"nilflow", nilflow_suite},
        {"phases", phases_suite},   {"vaughan", vaughan_suite}, {"correlate", correlate_suite},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, fn] : registry()) v.push_back(name);
        v.push_back("all");
        return v;
    }();
    return names;
}

bool SuiteSummary::all_passed() const {
    for (const auto& r : results) {
        if (!r.passed) return false;
    }
    return true;
}

std::string SuiteSummary::to_json() const {
    nlohmann::ordered_json j;
    std::size_t passed = 0;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        passed += r.passed;
        j["checks"].push_back({{"suite", r.suite}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    }
    j["passed"] = passed;
    j["failed"] = results.size() - passed;
    j["ok"] = all_passed();
    return j.dump(2) + "\n";
}

SuiteSummary run_suite(const std::string& name, std::uint64_t seed) {
    SuiteSummary out;
    bool found = false;
    for (const auto& [suite, fn] : registry()) {
        if (name != "all" && name != suite) continue;
        found = true;
        Rng rng(seed);
        fn(Recorder{suite, out}, rng);
    }
    if (!found) {
        std::string known;
        for (const auto& s : suite_names()) known += (known.empty() ? "" : ", ") + s;
        throw ValidationError("unknown suite \"" + name + "\" (expected one of " + known + ")");
    }
    return out;
}

}  // namespace mobnil::checks
