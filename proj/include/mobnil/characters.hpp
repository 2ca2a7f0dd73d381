#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "mobnil/error.hpp"
#include "mobnil/sieve.hpp"

namespace mobnil::correlate {

using cplx = std::complex<double>;

inline constexpr std::int64_t kMaxModulus = 1'000'000;

// (Z/qZ)^x as a product of cyclic factors. Characters are indexed by exponent
// tuples (k_1, ..., k_r), mixed radix with the first factor most significant,
// and chi(n) = e(sum_i k_i log_i(n) / order_i).
class CharacterTable {
public:
    struct Factor {
        std::int64_t prime_power = 1;  // p^k the factor lives in
        std::int64_t order = 1;
        std::int64_t generator = 1;    // residue mod prime_power; -1 for the sign factor of 2^k
    };

    explicit CharacterTable(std::int64_t q);

    std::int64_t modulus() const { return q_; }
    std::int64_t totient() const { return phi_; }
    std::int64_t count() const { return phi_; }
    const std::vector<Factor>& factors() const { return factors_; }
    // lcm of the factor orders; every value is e(t / lcm).
    std::int64_t exponent_lcm() const { return lcm_; }

    std::vector<std::int64_t> index_digits(std::int64_t chi) const;
    std::int64_t index_of(const std::vector<std::int64_t>& digits) const;
    bool is_principal(std::int64_t chi) const { return chi == 0; }

    bool coprime(std::int64_t n) const { return log_base_[residue(n)] >= 0; }
    // Mixed-radix position of the discrete-log vector of n, or -1 when gcd(n, q) > 1.
    std::int64_t log_index(std::int64_t n) const { return log_base_[residue(n)]; }
    // t with chi(n) = e(t / exponent_lcm()), or nullopt when gcd(n, q) > 1.
    std::optional<std::int64_t> exponent(std::int64_t chi, std::int64_t n) const;
    cplx value(std::int64_t chi, std::int64_t n) const;

private:
    std::size_t residue(std::int64_t n) const {
        const std::int64_t r = n % q_;
        return static_cast<std::size_t>(r < 0 ? r + q_ : r);
    }

    std::int64_t q_ = 1;
    std::int64_t phi_ = 1;
    std::int64_t lcm_ = 1;
    std::vector<Factor> factors_;
    std::vector<std::int64_t> log_base_;  // per residue: mixed-radix log index or -1
};

// E_{m<=n} mu(m) conj(chi(m)) for every character, ordered by character index.
std::vector<cplx> correlate_character(const sieve::MobiusTable& mu, std::int64_t q, std::int64_t n);
std::vector<cplx> correlate_character(const sieve::MobiusTable& mu, const CharacterTable& table, std::int64_t n);

// Threshold on phi(q) above which the character sums go through a DFT.
inline constexpr std::int64_t kDirectCharacterLimit = 2048;

}  // namespace mobnil::correlate
