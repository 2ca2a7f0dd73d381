#include "mobnil/phases.hpp"

#include <bit>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "mobnil/parallel.hpp"

namespace mobnil::phases {

using circle::frac_mul;
using circle::norm;
using circle::reduce;

double bohr_norm(std::int64_t n, const std::vector<double>& g, std::int64_t N) {
    if (N < 1) throw ParameterError("bohr_norm: N must be at least 1");
    double worst = 0.0;
    for (double gj : g) worst = std::max(worst, std::abs(frac_mul(gj, n)));
    return worst + std::abs(static_cast<double>(n) / static_cast<double>(N));
}

namespace {

std::vector<std::int64_t> scan(const std::vector<double>& g, std::int64_t N, std::int64_t n0, double rho,
                               Interval window) {
    if (window.size() > kMaxBohrWindow) throw CapacityError("bohr_enumerate: window exceeds 1e8 points");
    if (!(rho > 0)) throw ParameterError("bohr_enumerate: rho must be positive");
    constexpr std::int64_t kBlock = std::int64_t{1} << 16;
    const std::int64_t nblocks = (window.size() + kBlock - 1) / kBlock;
    std::vector<std::vector<std::int64_t>> parts(static_cast<std::size_t>(nblocks));
    par::for_blocks(nblocks, [&](std::int64_t b) {
        const std::int64_t lo = window.lo + b * kBlock;
        const std::int64_t hi = std::min(window.hi, lo + kBlock - 1);
        auto& out = parts[static_cast<std::size_t>(b)];
        for (std::int64_t n = lo; n <= hi; ++n) {
            if (bohr_norm(n - n0, g, N) < rho) out.push_back(n);
        }
    });
    std::vector<std::int64_t> all;
    for (auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    return all;
}

}  // namespace

std::vector<std::int64_t> bohr_enumerate(const BohrSetSpec& spec) {
    return scan(spec.g, spec.N, spec.n0, spec.rho, spec.window);
}

BohrPropertyReport bohr_property_report(const BohrSetSpec& spec, std::int64_t divisor) {
    if (divisor < 1) throw ParameterError("bohr_property_report: divisor must be at least 1");
    const auto inner = scan(spec.g, spec.N, 0, spec.rho, spec.window);
    const auto outer = scan(spec.g, spec.N, 0, 2 * spec.rho, spec.window);
    BohrPropertyReport r;
    r.divisor = divisor;
    r.size_rho = static_cast<std::int64_t>(inner.size());
    r.size_2rho = static_cast<std::int64_t>(outer.size());
    for (std::int64_t n : inner) r.divisible_count += (n % divisor == 0) ? 1 : 0;
    const double dim = static_cast<double>(spec.g.size());
    r.doubling_constant = std::pow(4.0, dim + 1);
    r.divisible_constant = r.doubling_constant;
    r.ratio_lower = static_cast<double>(r.size_rho) / (std::pow(spec.rho, dim + 1) * static_cast<double>(spec.N));
    if (r.size_rho > 0) {
        r.ratio_doubling = static_cast<double>(r.size_2rho) / static_cast<double>(r.size_rho);
        r.ratio_divisible = static_cast<double>(r.divisible_count) * static_cast<double>(divisor) /
                            static_cast<double>(r.size_rho);
    }
    r.lower_holds = r.ratio_lower > 0;
    r.doubling_holds = r.size_rho > 0 && r.ratio_doubling <= r.doubling_constant;
    r.divisible_holds = r.size_rho > 0 && r.ratio_divisible >= 1.0 / r.divisible_constant;
    return r;
}

TabulatedPhase::TabulatedPhase(std::vector<std::int64_t> domain, std::vector<double> values) {
    if (domain.size() != values.size()) throw DomainError("TabulatedPhase: domain and values differ in length");
    std::vector<std::size_t> order(domain.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return domain[a] < domain[b]; });
    domain_.reserve(domain.size());
    values_.reserve(domain.size());
    for (std::size_t i : order) {
        if (!domain_.empty() && domain_.back() == domain[i]) {
            throw DomainError("TabulatedPhase: duplicate point " + std::to_string(domain[i]));
        }
        domain_.push_back(domain[i]);
        values_.push_back(reduce(values[i]));
    }
    if (domain_.empty()) return;
    lo_ = domain_.front();
    const std::int64_t span = domain_.back() - lo_ + 1;
    if (span <= 8 * static_cast<std::int64_t>(domain_.size()) + 4096) {
        dense_.assign(static_cast<std::size_t>(span), -1);
        for (std::size_t i = 0; i < domain_.size(); ++i) {
            dense_[static_cast<std::size_t>(domain_[i] - lo_)] = static_cast<std::int32_t>(i);
        }
    }
}

std::int64_t TabulatedPhase::find(std::int64_t n) const {
    if (domain_.empty()) return -1;
    if (!dense_.empty()) {
        const std::int64_t off = n - lo_;
        if (off < 0 || off >= static_cast<std::int64_t>(dense_.size())) return -1;
        return dense_[static_cast<std::size_t>(off)];
    }
    const auto it = std::lower_bound(domain_.begin(), domain_.end(), n);
    if (it == domain_.end() || *it != n) return -1;
    return it - domain_.begin();
}

double TabulatedPhase::at(std::int64_t n) const {
    const std::int64_t i = find(n);
    if (i < 0) throw DomainError("TabulatedPhase: " + std::to_string(n) + " is outside the domain");
    return values_[static_cast<std::size_t>(i)];
}

std::string TabulatedPhase::to_csv() const {
    std::string out = "n,phi\n";
    char buf[64];
    for (std::size_t i = 0; i < domain_.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(domain_[i]), values_[i]);
        out += buf;
    }
    return out;
}

TabulatedPhase TabulatedPhase::from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::int64_t> domain;
    std::vector<double> values;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line.rfind("n,", 0) == 0) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw FormatError("phase csv: line " + std::to_string(lineno) + " lacks a comma");
        try {
            std::size_t used = 0;
            const long long n = std::stoll(line.substr(0, comma), &used);
            const double v = std::stod(line.substr(comma + 1));
            if (!(v > -0.5 - 1e-12 && v <= 0.5 + 1e-12)) {
                throw FormatError("phase csv: value outside (-1/2, 1/2] on line " + std::to_string(lineno));
            }
            domain.push_back(n);
            values.push_back(v);
        } catch (const std::logic_error&) {
            throw FormatError("phase csv: cannot parse line " + std::to_string(lineno));
        }
    }
    return TabulatedPhase(std::move(domain), std::move(values));
}

namespace {

struct Worst {
    double residual = -1.0;
    std::vector<std::int64_t> witness;

    void offer(double r, const std::vector<std::int64_t>& w) {
        if (r > residual || (r == residual && w < witness)) {
            residual = r;
            witness = w;
        }
    }
};

// Cube points for the directions chosen so far: point[mask] = n + sum of h_j over mask bits.
struct Cube {
    std::vector<std::int64_t> point;
    std::vector<double> value;
};

double alternating(const Cube& c, int k) {
    double s = 0.0;
    const std::size_t corners = std::size_t{1} << k;
    for (std::size_t mask = 0; mask < corners; ++mask) {
        s += (std::popcount(mask) % 2 == 0) ? c.value[mask] : -c.value[mask];
    }
    return norm(s);
}

// Extends the cube by direction h; false when a new corner leaves the domain.
bool extend(const TabulatedPhase& phi, Cube& c, int j, std::int64_t h) {
    const std::size_t base = std::size_t{1} << j;
    for (std::size_t mask = 0; mask < base; ++mask) {
        const std::int64_t p = c.point[mask] + h;
        const auto v = phi.get(p);
        if (!v) return false;
        c.point[base + mask] = p;
        c.value[base + mask] = *v;
    }
    return true;
}

void exhaustive_from(const TabulatedPhase& phi, int k, int j, Cube& c, std::vector<std::int64_t>& witness,
                     Worst& worst, std::int64_t& count) {
    if (j == k) {
        ++count;
        worst.offer(alternating(c, k), witness);
        return;
    }
    const std::int64_t n = c.point[0];
    for (std::int64_t s : phi.domain()) {
        if (!extend(phi, c, j, s - n)) continue;
        witness[1 + j] = s - n;
        exhaustive_from(phi, k, j + 1, c, witness, worst, count);
    }
}

}  // namespace

LocalPolyReport is_locally_polynomial(const TabulatedPhase& phi, int degree, double tol,
                                      const LocalPolyOptions& options) {
    if (degree < 0 || degree > 3) throw ParameterError("is_locally_polynomial: degree must lie in 0..3");
    const int k = degree + 1;
    const std::size_t corners = std::size_t{1} << k;
    LocalPolyReport report;
    Worst worst;
    if (phi.size() <= options.exhaustive_limit) {
        report.exhaustive = true;
        const auto nblocks = static_cast<std::int64_t>(phi.size());
        std::vector<Worst> per(phi.size());
        std::vector<std::int64_t> counts(phi.size(), 0);
        par::for_blocks(nblocks, [&](std::int64_t b) {
            Cube c{std::vector<std::int64_t>(corners), std::vector<double>(corners)};
            c.point[0] = phi.domain()[static_cast<std::size_t>(b)];
            c.value[0] = phi.values()[static_cast<std::size_t>(b)];
            std::vector<std::int64_t> witness(static_cast<std::size_t>(k) + 1, 0);
            witness[0] = c.point[0];
            exhaustive_from(phi, k, 0, c, witness, per[static_cast<std::size_t>(b)], counts[static_cast<std::size_t>(b)]);
        });
        for (std::size_t b = 0; b < per.size(); ++b) {
            report.checked_count += counts[b];
            if (!per[b].witness.empty()) worst.offer(per[b].residual, per[b].witness);
        }
        report.attempts = report.checked_count;
    } else {
        report.exhaustive = false;
        std::mt19937_64 rng(options.seed);
        std::uniform_int_distribution<std::size_t> pick(0, phi.size() - 1);
        const std::int64_t max_attempts = options.sample_budget * options.attempts_per_sample;
        Cube c{std::vector<std::int64_t>(corners), std::vector<double>(corners)};
        std::vector<std::int64_t> witness(static_cast<std::size_t>(k) + 1, 0);
        while (report.checked_count < options.sample_budget && report.attempts < max_attempts) {
            ++report.attempts;
            const std::size_t i0 = pick(rng);
            c.point[0] = phi.domain()[i0];
            c.value[0] = phi.values()[i0];
            witness[0] = c.point[0];
            bool ok = true;
            for (int j = 0; j < k && ok; ++j) {
                const std::int64_t h = phi.domain()[pick(rng)] - c.point[0];
                witness[1 + j] = h;
                ok = extend(phi, c, j, h);
            }
            if (!ok) continue;
            ++report.checked_count;
            worst.offer(alternating(c, k), witness);
        }
    }
    report.worst_residual = std::max(0.0, worst.residual);
    report.worst_witness = worst.witness;
    report.holds = report.worst_residual <= tol;
    return report;
}

double second_derivative(const TabulatedPhase& phi, std::int64_t n0, std::int64_t h1, std::int64_t h2) {
    const std::int64_t pts[4] = {n0, n0 + h1, n0 + h2, n0 + h1 + h2};
    std::string missing;
    double v[4];
    for (int i = 0; i < 4; ++i) {
        const auto x = phi.get(pts[i]);
        if (!x) {
            missing += (missing.empty() ? "" : ", ") + std::to_string(pts[i]);
        } else {
            v[i] = *x;
        }
    }
    if (!missing.empty()) throw DomainError("second_derivative: points outside the domain: " + missing);
    return reduce(v[3] - v[1] - v[2] + v[0]);
}

QuadGrowthReport quad_growth_check(const TabulatedPhase& phi, std::int64_t n, std::int64_t h, std::int64_t L) {
    if (L < 1) throw ParameterError("quad_growth_check: L must be at least 1");
    QuadGrowthReport r;
    r.phi2 = L >= 3 ? second_derivative(phi, n + h, h, h) : second_derivative(phi, n, h, h);
    std::vector<double> rest(static_cast<std::size_t>(L) + 1);
    for (std::int64_t l = 1; l <= L; ++l) {
        rest[l] = reduce(phi.at(n + h * l) - frac_mul(r.phi2, l * (l - 1) / 2));
    }
    if (L >= 2) {
        r.alpha = reduce(rest[2] - rest[1]);
        r.beta = reduce(rest[1] - r.alpha);
    } else {
        r.beta = rest[1];
    }
    for (std::int64_t l = 1; l <= L; ++l) {
        r.max_residual = std::max(r.max_residual, norm(rest[l] - frac_mul(r.alpha, l) - r.beta));
    }
    return r;
}

namespace {

std::int64_t quartic_point(const QuarticParams& p, std::int64_t l, std::int64_t m) {
    const __int128 v = (static_cast<__int128>(p.d) + static_cast<__int128>(p.s) * l) *
                       (static_cast<__int128>(p.w) + static_cast<__int128>(p.t) * m);
    if (v > INT64_MAX || v < INT64_MIN) throw RangeError("quartic_growth_check: P(l, m) overflows");
    return static_cast<std::int64_t>(v);
}

}  // namespace

QuarticReport quartic_growth_check(const TabulatedPhase& phi, const QuarticParams& params,
                                   const std::vector<QuarticTuple>& tuples,
                                   const std::optional<QuarticBohrGuard>& guard) {
    const std::int64_t st = params.s * params.t;
    if (guard) {
        const double lhs = static_cast<double>(params.L) * static_cast<double>(params.M) * bohr_norm(st, guard->g, guard->N);
        if (lhs > guard->rho0) {
            throw ConstraintError("quartic_growth_check: L M ||st||_g = " + std::to_string(lhs) + " exceeds rho0");
        }
    }
    QuarticReport r;
    std::vector<std::int64_t> candidates;
    for (const QuarticTuple& tu : tuples) {
        for (std::int64_t v : {tu.l0, tu.l1, tu.l2}) {
            if (std::abs(v) > params.L) throw ConstraintError("quartic_growth_check: |l_i| exceeds L");
        }
        for (std::int64_t v : {tu.m0, tu.m1, tu.m2}) {
            if (std::abs(v) > params.M) throw ConstraintError("quartic_growth_check: |m_i| exceeds M");
        }
        std::string missing;
        for (int mask = 0; mask < 16; ++mask) {
            const std::int64_t l = tu.l0 + ((mask & 1) ? tu.l1 : 0) + ((mask & 2) ? tu.l2 : 0);
            const std::int64_t m = tu.m0 + ((mask & 4) ? tu.m1 : 0) + ((mask & 8) ? tu.m2 : 0);
            const std::int64_t p = quartic_point(params, l, m);
            const bool in_domain = phi.contains(p);
            const bool in_bohr = !guard || bohr_norm(p - guard->n0, guard->g, guard->N) < guard->rho0;
            if (!in_domain || !in_bohr) {
                missing += (missing.empty() ? "" : ", ") + std::string("P(") + std::to_string(l) + "," +
                           std::to_string(m) + ")=" + std::to_string(p) + (in_domain ? " outside the Bohr set" : "");
            }
            candidates.push_back(p);
        }
        if (!missing.empty()) throw ConstraintError("quartic_growth_check: points not available: " + missing);
    }
    bool found = false;
    auto try_base = [&](std::int64_t b) {
        if (phi.contains(b) && phi.contains(b + st) && phi.contains(b + 2 * st)) {
            r.phi2_base = b;
            found = true;
        }
        return found;
    };
    for (std::int64_t b : candidates) {
        if (try_base(b)) break;
    }
    if (!found) {
        for (std::int64_t b : phi.domain()) {
            if (try_base(b)) break;
        }
    }
    if (!found) throw DomainError("quartic_growth_check: no base point carries phi''(st, st)");
    r.phi2 = second_derivative(phi, r.phi2_base, st, st);
    for (const QuarticTuple& tu : tuples) {
        double s = 0.0;
        for (int mask = 0; mask < 16; ++mask) {
            const std::int64_t l = tu.l0 + ((mask & 1) ? tu.l1 : 0) + ((mask & 2) ? tu.l2 : 0);
            const std::int64_t m = tu.m0 + ((mask & 4) ? tu.m1 : 0) + ((mask & 8) ? tu.m2 : 0);
            const double v = phi.at(quartic_point(params, l, m));
            s += (std::popcount(static_cast<unsigned>(mask)) % 2 == 0) ? v : -v;
        }
        const double lhs = reduce(s);
        const double rhs = frac_mul(r.phi2, 2 * tu.l1 * tu.l2 * tu.m1 * tu.m2);
        r.lhs.push_back(lhs);
        r.rhs.push_back(rhs);
        r.residuals.push_back(norm(lhs - rhs));
        r.max_residual = std::max(r.max_residual, r.residuals.back());
    }
    return r;
}

std::vector<double> soft_threshold(const std::vector<double>& F, double lip_norm, double delta) {
    if (delta < 0 || lip_norm < 0) throw ParameterError("soft_threshold: delta and lip_norm must be nonnegative");
    const double lambda = delta * lip_norm;
    std::vector<double> out(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double mag = std::max(std::abs(F[i]) - lambda, 0.0);
        out[i] = F[i] > 0 ? mag : (F[i] < 0 ? -mag : 0.0);
    }
    return out;
}

std::vector<cplx> soft_threshold(const std::vector<cplx>& F, double lip_norm, double delta) {
    if (delta < 0 || lip_norm < 0) throw ParameterError("soft_threshold: delta and lip_norm must be nonnegative");
    const double lambda = delta * lip_norm;
    std::vector<cplx> out(F.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double a = std::abs(F[i]);
        out[i] = a > lambda ? F[i] * ((a - lambda) / a) : cplx{};
    }
    return out;
}

}  // namespace mobnil::phases
