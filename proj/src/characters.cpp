#include "mobnil/characters.hpp"

#include <numeric>

#include "mobnil/circle.hpp"
#include "mobnil/fourier.hpp"

namespace mobnil::correlate {

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
    return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::int64_t powmod(std::int64_t a, std::int64_t e, std::int64_t m) {
    std::int64_t r = 1 % m;
    a %= m;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
    std::vector<std::int64_t> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        out.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) out.push_back(n);
    return out;
}

std::int64_t primitive_root_mod_p(std::int64_t p) {
    const auto fs = prime_divisors(p - 1);
    for (std::int64_t g = 2; g < p; ++g) {
        bool ok = true;
        for (std::int64_t f : fs) ok = ok && powmod(g, (p - 1) / f, p) != 1;
        if (ok) return g;
    }
    return 1;
}

// Discrete logs base g of every unit mod m, -1 elsewhere.
std::vector<std::int64_t> log_table(std::int64_t g, std::int64_t order, std::int64_t m) {
    std::vector<std::int64_t> logs(static_cast<std::size_t>(m), -1);
    std::int64_t x = 1 % m;
    for (std::int64_t k = 0; k < order; ++k) {
        logs[static_cast<std::size_t>(x)] = k;
        x = mulmod(x, g, m);
    }
    return logs;
}

}  // namespace

CharacterTable::CharacterTable(std::int64_t q) : q_(q) {
    if (q < 1 || q > kMaxModulus) throw ModulusError("CharacterTable: modulus must lie in 1..1e6");
    // Per factor: the prime power it reads residues modulo, and a log function.
    struct Part {
        Factor f;
        std::vector<std::int64_t> logs;  // indexed by residue mod prime_power
    };
    std::vector<Part> parts;
    std::int64_t rest = q;
    for (std::int64_t p : prime_divisors(q)) {
        std::int64_t pk = 1;
        int k = 0;
        while (rest % p == 0) {
            rest /= p;
            pk *= p;
            ++k;
        }
        if (p != 2) {
            std::int64_t g = primitive_root_mod_p(p);
            if (k >= 2 && powmod(g, p - 1, p * p) == 1) g += p;
            const std::int64_t order = pk / p * (p - 1);
            parts.push_back({{pk, order, g}, log_table(g, order, pk)});
        } else if (k == 2) {
            std::vector<std::int64_t> logs(4, -1);
            logs[1] = 0;
            logs[3] = 1;
            parts.push_back({{4, 2, 3}, logs});
        } else if (k >= 3) {
            std::vector<std::int64_t> sign(static_cast<std::size_t>(pk), -1);
            for (std::int64_t r = 1; r < pk; r += 2) sign[r] = (r % 4 == 1) ? 0 : 1;
            parts.push_back({{pk, 2, -1}, sign});
            const std::int64_t order = pk / 4;
            const auto five = log_table(5, order, pk);
            std::vector<std::int64_t> logs(static_cast<std::size_t>(pk), -1);
            for (std::int64_t r = 1; r < pk; r += 2) {
                const std::int64_t s = (r % 4 == 1) ? r : pk - r;
                logs[r] = five[static_cast<std::size_t>(s)];
            }
            parts.push_back({{pk, order, 5}, logs});
        }
    }
    phi_ = 1;
    lcm_ = 1;
    for (const Part& part : parts) {
        factors_.push_back(part.f);
        phi_ *= part.f.order;
        lcm_ = std::lcm(lcm_, part.f.order);
    }
    log_base_.assign(static_cast<std::size_t>(q), -1);
    for (std::int64_t r = 0; r < q; ++r) {
        if (std::gcd(r, q) != 1) continue;
        std::int64_t idx = 0;
        for (const Part& part : parts) {
            idx = idx * part.f.order + part.logs[static_cast<std::size_t>(r % part.f.prime_power)];
        }
        log_base_[static_cast<std::size_t>(r)] = idx;
    }
}

std::vector<std::int64_t> CharacterTable::index_digits(std::int64_t chi) const {
    if (chi < 0 || chi >= phi_) throw ModulusError("CharacterTable: character index out of range");
    std::vector<std::int64_t> digits(factors_.size());
    for (std::size_t i = factors_.size(); i-- > 0;) {
        digits[i] = chi % factors_[i].order;
        chi /= factors_[i].order;
    }
    return digits;
}

std::int64_t CharacterTable::index_of(const std::vector<std::int64_t>& digits) const {
    if (digits.size() != factors_.size()) throw ModulusError("CharacterTable: wrong number of exponent digits");
    std::int64_t idx = 0;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (digits[i] < 0 || digits[i] >= factors_[i].order) throw ModulusError("CharacterTable: digit out of range");
        idx = idx * factors_[i].order + digits[i];
    }
    return idx;
}

std::optional<std::int64_t> CharacterTable::exponent(std::int64_t chi, std::int64_t n) const {
    std::int64_t lg = log_index(n);
    if (lg < 0) return std::nullopt;
    const auto digits = index_digits(chi);
    std::int64_t t = 0;
    for (std::size_t i = factors_.size(); i-- > 0;) {
        const std::int64_t ord = factors_[i].order;
        const std::int64_t li = lg % ord;
        lg /= ord;
        t = (t + mulmod(digits[i] * li % ord, lcm_ / ord, lcm_)) % lcm_;
    }
    return t;
}

cplx CharacterTable::value(std::int64_t chi, std::int64_t n) const {
    const auto t = exponent(chi, n);
    if (!t) return {};
    return circle::e(static_cast<double>(*t) / static_cast<double>(lcm_));
}

std::vector<cplx> correlate_character(const sieve::MobiusTable& mu, std::int64_t q, std::int64_t n) {
    return correlate_character(mu, CharacterTable(q), n);
}

std::vector<cplx> correlate_character(const sieve::MobiusTable& mu, const CharacterTable& table, std::int64_t n) {
    if (n < 1 || n > mu.n_max) throw RangeError("correlate_character: n out of table range");
    const std::int64_t q = table.modulus();
    const std::int64_t count = table.count();
    // Exact per-class totals of mu, indexed by discrete-log position.
    std::vector<std::int64_t> totals(static_cast<std::size_t>(count), 0);
    for (std::int64_t m = 1; m <= n; ++m) {
        const int v = mu(m);
        if (v == 0) continue;
        const std::int64_t lg = table.log_index(m % q);
        if (lg >= 0) totals[static_cast<std::size_t>(lg)] += v;
    }
    const double inv = 1.0 / static_cast<double>(n);
    std::vector<cplx> out(static_cast<std::size_t>(count));
    if (count <= kDirectCharacterLimit) {
        // Character index and log position share one mixed radix, so chi(lg) = e(sum_i c_i l_i / ord_i).
        const auto& fs = table.factors();
        const std::int64_t L = table.exponent_lcm();
        std::vector<std::int64_t> digits(static_cast<std::size_t>(count) * fs.size());
        for (std::int64_t i = 0; i < count; ++i) {
            std::int64_t rest = i;
            for (std::size_t k = fs.size(); k-- > 0;) {
                digits[static_cast<std::size_t>(i) * fs.size() + k] = rest % fs[k].order;
                rest /= fs[k].order;
            }
        }
        std::vector<cplx> roots(static_cast<std::size_t>(L));
        for (std::int64_t t = 0; t < L; ++t) roots[t] = circle::e(-static_cast<double>(t) / static_cast<double>(L));
        for (std::int64_t chi = 0; chi < count; ++chi) {
            const std::int64_t* cd = &digits[static_cast<std::size_t>(chi) * fs.size()];
            cplx s{};
            for (std::int64_t lg = 0; lg < count; ++lg) {
                if (totals[lg] == 0) continue;
                const std::int64_t* ld = &digits[static_cast<std::size_t>(lg) * fs.size()];
                std::int64_t t = 0;
                for (std::size_t k = 0; k < fs.size(); ++k) t += cd[k] * ld[k] % fs[k].order * (L / fs[k].order);
                s += static_cast<double>(totals[lg]) * roots[static_cast<std::size_t>(t % L)];
            }
            out[static_cast<std::size_t>(chi)] = s * inv;
        }
        return out;
    }
    std::vector<int> dims;
    for (const auto& f : table.factors()) dims.push_back(static_cast<int>(f.order));
    std::vector<cplx> in(totals.size());
    for (std::size_t i = 0; i < totals.size(); ++i) in[i] = static_cast<double>(totals[i]);
    const auto hat = fourier::dft_forward(in, dims);
    for (std::size_t i = 0; i < hat.size(); ++i) out[i] = hat[i] * inv;
    return out;
}

}  // namespace mobnil::correlate
