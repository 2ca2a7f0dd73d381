#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mobnil/characters.hpp"
#include "mobnil/nilflow.hpp"
#include "mobnil/phases.hpp"
#include "mobnil/sieve.hpp"

namespace mobnil::correlate {

// f(n) = e(alpha n)
struct LinearPhase {
    double alpha = 0.0;
};
// f(n) = e(alpha n^2 + beta n + gamma)
struct QuadraticPhase {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};
// f(n) = e([n alpha] n beta), so the correlation carries e(-[n alpha] n beta).
struct BracketPhase {
    double alpha = 0.0;
    double beta = 0.0;
};
// f(n) = values[n mod q]
struct PeriodicPhase {
    std::vector<cplx> values;
};
struct CharacterPhase {
    std::int64_t q = 1;
    std::int64_t index = 0;
};
// f(n) = F(g^n x) with F one of the built-in nil functions.
struct NilseqPhase {
    nilflow::HeisII<double> g;
    nilflow::HeisII<double> x;
    std::string function = "bump3";
};
// f(n) = psi(n) e(phi(n)); psi is read at n = offset + i and is 0 elsewhere.
struct TabulatedSpec {
    std::int64_t offset = 1;
    std::vector<double> weight;
    phases::TabulatedPhase phase;
};

using PhaseSpec = std::variant<LinearPhase, QuadraticPhase, BracketPhase, PeriodicPhase, CharacterPhase, NilseqPhase,
                               TabulatedSpec>;

std::string kind_name(const PhaseSpec& spec);
// Throws ParameterError, ModulusError or DomainError for an invalid spec.
void validate(const PhaseSpec& spec);

using SequenceFn = std::function<cplx(std::int64_t)>;
SequenceFn make_sequence(const PhaseSpec& spec);

struct CorrelationRow {
    std::int64_t N = 0;
    cplx value;
    double abs = 0.0;
    double seconds = 0.0;
    std::string error;  // empty when the row evaluated
};

struct DecayFit {
    double a = 0.0;  // log|S| ~ -a log log N + c
    double c = 0.0;
};

struct CorrelationReport {
    std::string kind;
    std::vector<CorrelationRow> rows;
    std::optional<DecayFit> fit;
};

// Rows (1/N) sum_{n<=N} mu(n) conj(f(n)), sorted by N.
CorrelationReport correlate(const sieve::MobiusTable& mu, const PhaseSpec& spec, std::vector<std::int64_t> n_list);

// Fit over rows with N >= 3 and a nonzero value; needs at least four.
std::optional<DecayFit> fit_decay(const std::vector<CorrelationRow>& rows);

// Seconds are written as 0 unless with_timing is set, so outputs stay byte-stable.
std::string to_csv(const CorrelationReport& report, bool with_timing = false);
std::string to_json(const CorrelationReport& report, bool with_timing = false);

// (1/n) sum_{m<=n} mu(m) conj(f(m mod q)).
cplx correlate_periodic(const sieve::MobiusTable& mu, const std::vector<cplx>& f, std::int64_t n);
// Same value through squarefree d | q and a character expansion of m -> f(d m) on units.
cplx correlate_periodic_via_characters(const sieve::MobiusTable& mu, const std::vector<cplx>& f, std::int64_t n);

inline constexpr std::int64_t kSelfCorrelationCap = 20'000;
inline constexpr std::int64_t kParallelogramExactCap = 512;

// E_{x,d<=n} mu(x) mu(x+d) mu(x+2d). Shifted arguments reach 3n unless truncate
// drops every term with an argument above n.
double self_correlation_3term(const sieve::MobiusTable& mu, std::int64_t n, bool truncate = false);

enum class ParallelogramMode { Auto, Exact, Factored };
// E_{x,h1,h2<=n} mu(x) mu(x+h1) mu(x+h2) mu(x+h1+h2).
double self_correlation_parallelogram(const sieve::MobiusTable& mu, std::int64_t n,
                                      ParallelogramMode mode = ParallelogramMode::Auto, bool truncate = false);

// psi on (N, 2N]: values[i] sits at n = N + 1 + i.
struct WindowWeight {
    std::int64_t N = 0;
    std::vector<double> values;
};

// E_{N<n<=2N} mu(n) psi(n) e(-phi(n)).
cplx correlate_weighted_local(const sieve::MobiusTable& mu, const WindowWeight& psi, const phases::TabulatedPhase& phi);

// Piecewise-linear bump on [7/6, 11/6] with peak 2 at 3/2.
double window_tent(double t);

// E_{N<n<=2N} tent(n/N) f(n) e(alpha n) mu(n).
cplx windowed_correlation(const sieve::MobiusTable& mu, const SequenceFn& f, double alpha, std::int64_t N);

struct TelescopingReport {
    cplx direct;
    cplx reconstructed;
    double residual = 0.0;
    int pieces = 0;
    std::int64_t remainder_end = 0;  // n <= remainder_end summed directly
};

// E_{n<=N} mu f rebuilt from windowed sums at scales M_k = 0.6 N 0.8^k; window k
// covers (5 M_{k+1}/3, 5 M_k/3] with the tent divided out.
TelescopingReport telescoping_check(const sieve::MobiusTable& mu, const SequenceFn& f, std::int64_t N);

}  // namespace mobnil::correlate
