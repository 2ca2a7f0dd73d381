#include "mobnil/nilflow.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace mobnil::nilflow {

using circle::frac_mul;
using circle::frac_mul2;
using circle::nearest;
using circle::reduce;

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b, const char* what) {
    const __int128 p = static_cast<__int128>(a) * b;
    if (p > INT64_MAX || p < INT64_MIN) throw RangeError(std::string(what) + ": orbit index too large");
    return static_cast<std::int64_t>(p);
}

std::int64_t triangular(std::int64_t n) {
    const __int128 t = static_cast<__int128>(n) * (n - 1) / 2;
    if (t > INT64_MAX || t < INT64_MIN) throw RangeError("heis_orbit: orbit index too large");
    return static_cast<std::int64_t>(t);
}

double base_third(const HeisII<double>& g, std::int64_t n, const HeisII<double>& x) {
    return reduce(reduce(frac_mul(g.t3, n) - frac_mul2(g.t1, g.t2, triangular(n))) +
                  reduce(x.t3 - frac_mul2(g.t2, x.t1, n)));
}

void require_same(const GroupElementI& a, const GroupElementI& b) {
    if (!a.spec || !b.spec) throw SpecError("mul_i: element without a group spec");
    if (a.spec != b.spec && !(*a.spec == *b.spec)) throw SpecError("mul_i: elements belong to different groups");
}

void require_rational(const TwoStepGroupSpec& s, const char* what) {
    if (!s.is_rational) throw SpecError(std::string(what) + ": structure constants are not rational");
}

}  // namespace

HeisII<double> heis_orbit(const HeisII<double>& g, std::int64_t n, const HeisII<double>& x) {
    const circle::Split s1 = circle::split_mul(g.t1, n);
    const double u1 = s1.f + x.t1;
    const double c1 = nearest(u1);
    const std::int64_t k1 = s1.k + static_cast<std::int64_t>(c1);
    HeisII<double> out;
    out.t1 = u1 - c1;
    out.t2 = reduce(frac_mul(g.t2, n) + x.t2);
    const double bracket = reduce(frac_mul(g.t2, checked_mul(k1, n, "heis_orbit")) + frac_mul(x.t2, k1));
    out.t3 = reduce(base_third(g, n, x) + bracket);
    return out;
}

HeisOrbit::HeisOrbit(const HeisII<double>& g, const HeisII<double>& x, std::int64_t start)
    : g_(g), x_(x), n_(start) {
    prod_hi_ = g.t1 * g.t2;
    prod_lo_ = std::fma(g.t1, g.t2, -prod_hi_);
    prod_hi_ = reduce(prod_hi_);
    cross_ = frac_mul2(g.t2, x.t1, 1);
    const circle::Split s1 = circle::split_mul(g.t1, start);
    const double u1 = s1.f + x.t1;
    const double c1 = nearest(u1);
    k1_ = s1.k + static_cast<std::int64_t>(c1);
    f1_ = u1 - c1;
    f2_ = reduce(frac_mul(g.t2, start) + x.t2);
    base3_ = base_third(g, start, x);
    tri_ = frac_mul2(g.t1, g.t2, start);
}

HeisII<double> HeisOrbit::point() const {
    const double bracket = reduce(frac_mul(g_.t2, checked_mul(k1_, n_, "HeisOrbit")) + frac_mul(x_.t2, k1_));
    return {f1_, f2_, reduce(base3_ + bracket)};
}

void HeisOrbit::advance() {
    base3_ = reduce(base3_ + reduce(g_.t3) - tri_ - cross_);
    tri_ = reduce(reduce(tri_ + prod_hi_) + prod_lo_);
    const double step = nearest(g_.t1);
    const double u = f1_ + (g_.t1 - step);
    const double c = nearest(u);
    f1_ = u - c;
    k1_ += static_cast<std::int64_t>(step) + static_cast<std::int64_t>(c);
    f2_ = reduce(f2_ + g_.t2);
    ++n_;
}

double TwoStepGroupSpec::phi(int k, const double* x, const double* y) const {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) s += coeff(i, j, k) * x[i] * y[j];
    }
    return 0.5 * s;
}

double TwoStepGroupSpec::q(int k, const double* r) const {
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) s += coeff(i, j, k) * r[i] * r[j];
    }
    return 0.5 * s;
}

TwoStepGroupSpec TwoStepGroupSpec::parse(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    TwoStepGroupSpec s;
    bool have_dims = false;
    std::vector<bool> set;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        if (!have_dims) {
            if (!(ls >> s.m)) continue;
            if (!(ls >> s.n)) throw SpecError("group spec: first line must be \"m n\"");
            if (s.m < 1 || s.n <= s.m) throw SpecError("group spec: need 1 <= m < n");
            const std::size_t size = static_cast<std::size_t>(s.m) * s.m * (s.n - s.m);
            s.a.assign(size, 0.0);
            s.num.assign(size, 0);
            s.den.assign(size, 1);
            set.assign(size, false);
            have_dims = true;
            continue;
        }
        int i = 0, j = 0, k = 0;
        std::string value;
        if (!(ls >> i)) continue;
        if (!(ls >> j >> k >> value)) throw SpecError("group spec: line " + std::to_string(lineno) + " malformed");
        if (i < 1 || i > s.m || j < 1 || j > s.m) {
            throw SpecError("group spec: bracket indices must lie in 1..m (only 2-step groups)");
        }
        if (k <= s.m || k > s.n) throw SpecError("group spec: target index must lie in m+1..n (only 2-step groups)");
        std::int64_t p = 0, q = 1;
        double v = 0.0;
        bool rational = true;
        const auto slash = value.find('/');
        try {
            if (slash != std::string::npos) {
                std::size_t used = 0;
                p = std::stoll(value.substr(0, slash), &used);
                q = std::stoll(value.substr(slash + 1));
                if (q == 0) throw SpecError("group spec: zero denominator");
            } else if (value.find_first_of(".eE") == std::string::npos) {
                p = std::stoll(value);
            } else {
                v = std::stod(value);
                rational = false;
            }
        } catch (const std::logic_error&) {
            throw SpecError("group spec: bad coefficient \"" + value + "\"");
        }
        if (rational) {
            if (q < 0) {
                p = -p;
                q = -q;
            }
            const std::int64_t g = std::gcd(p, q);
            if (g > 1) {
                p /= g;
                q /= g;
            }
            v = static_cast<double>(p) / static_cast<double>(q);
        } else {
            s.is_rational = false;
        }
        --i;
        --j;
        --k;
        if (i == j && v != 0.0) throw SpecError("group spec: a_iik must vanish");
        const std::size_t ij = s.index(i, j, k), ji = s.index(j, i, k);
        if ((set[ij] && s.a[ij] != v) || (set[ji] && s.a[ji] != -v)) {
            throw SpecError("group spec: conflicting entries for (" + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + "," + std::to_string(k + 1) + ")");
        }
        s.a[ij] = v;
        s.a[ji] = -v;
        s.num[ij] = p;
        s.num[ji] = -p;
        s.den[ij] = s.den[ji] = q;
        set[ij] = set[ji] = true;
    }
    if (!have_dims) throw SpecError("group spec: empty input");
    for (int k = s.m; k < s.n; ++k) {
        for (int i = 0; i < s.m; ++i) {
            for (int j = 0; j < s.m; ++j) {
                if (s.coeff(i, j, k) != -s.coeff(j, i, k)) throw SpecError("group spec: not antisymmetric");
            }
        }
    }
    return s;
}

TwoStepGroupSpec TwoStepGroupSpec::heisenberg() { return parse("2 3\n1 2 3 1\n"); }

std::shared_ptr<const TwoStepGroupSpec> heisenberg_spec() {
    static const auto spec = std::make_shared<const TwoStepGroupSpec>(TwoStepGroupSpec::heisenberg());
    return spec;
}

GroupElementI identity_i(std::shared_ptr<const TwoStepGroupSpec> spec) {
    GroupElementI e;
    e.xi.assign(static_cast<std::size_t>(spec->n), 0.0);
    e.spec = std::move(spec);
    return e;
}

GroupElementI mul_i(const GroupElementI& a, const GroupElementI& b) {
    require_same(a, b);
    const TwoStepGroupSpec& s = *a.spec;
    GroupElementI out{a.spec, std::vector<double>(static_cast<std::size_t>(s.n))};
    for (int i = 0; i < s.n; ++i) out.xi[i] = a.xi[i] + b.xi[i];
    for (int k = s.m; k < s.n; ++k) out.xi[k] += s.phi(k, a.xi.data(), b.xi.data());
    return out;
}

GroupElementI inv_i(const GroupElementI& a) {
    GroupElementI out = a;
    for (double& v : out.xi) v = -v;
    return out;
}

GroupElementI pow_i(const GroupElementI& g, std::int64_t n) {
    GroupElementI out = g;
    for (double& v : out.xi) v *= static_cast<double>(n);
    return out;
}

GroupElementI lattice_ii_to_i(std::shared_ptr<const TwoStepGroupSpec> spec, const std::vector<std::int64_t>& r) {
    require_rational(*spec, "lattice_ii_to_i");
    if (static_cast<int>(r.size()) != spec->n) throw SpecError("lattice_ii_to_i: wrong coordinate count");
    GroupElementI out{spec, std::vector<double>(r.begin(), r.end())};
    for (int k = spec->m; k < spec->n; ++k) out.xi[k] += spec->q(k, out.xi.data());
    return out;
}

std::optional<std::vector<std::int64_t>> lattice_i_to_ii(const GroupElementI& x, double tol) {
    const TwoStepGroupSpec& s = *x.spec;
    require_rational(s, "lattice_i_to_ii");
    std::vector<double> head(x.xi.begin(), x.xi.end());
    std::vector<std::int64_t> r(static_cast<std::size_t>(s.n));
    for (int i = 0; i < s.m; ++i) {
        const double v = std::nearbyint(x.xi[i]);
        if (std::abs(v - x.xi[i]) > tol) return std::nullopt;
        head[i] = v;
        r[i] = static_cast<std::int64_t>(v);
    }
    for (int k = s.m; k < s.n; ++k) {
        const double t = x.xi[k] - s.q(k, head.data());
        const double v = std::nearbyint(t);
        if (std::abs(v - t) > tol) return std::nullopt;
        r[k] = static_cast<std::int64_t>(v);
    }
    return r;
}

FundamentalPoint reduce_i(const GroupElementI& x) {
    const TwoStepGroupSpec& s = *x.spec;
    require_rational(s, "reduce_i");
    FundamentalPoint fp;
    fp.coords.resize(static_cast<std::size_t>(s.n));
    fp.gamma.resize(static_cast<std::size_t>(s.n));
    std::vector<double> v(static_cast<std::size_t>(s.m));
    for (int i = 0; i < s.m; ++i) {
        v[i] = nearest(x.xi[i]);
        fp.coords[i] = x.xi[i] - v[i];
        fp.gamma[i] = -static_cast<std::int64_t>(v[i]);
    }
    for (int k = s.m; k < s.n; ++k) {
        const double t = x.xi[k] + s.q(k, v.data()) - s.phi(k, x.xi.data(), v.data());
        const double c = nearest(t);
        fp.coords[k] = t - c;
        fp.gamma[k] = -static_cast<std::int64_t>(c);
    }
    return fp;
}

GroupElementI coords_ii_to_i(const HeisII<double>& t) {
    return {heisenberg_spec(), {t.t1, t.t2, t.t3 + 0.5 * t.t1 * t.t2}};
}

HeisII<double> coords_i_to_ii(const GroupElementI& x) {
    if (x.spec->m != 2 || x.spec->n != 3) throw SpecError("coords_i_to_ii: not a Heisenberg element");
    return {x.xi[0], x.xi[1], x.xi[2] - 0.5 * x.xi[0] * x.xi[1]};
}

}  // namespace mobnil::nilflow
