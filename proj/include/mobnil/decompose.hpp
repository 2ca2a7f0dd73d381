#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mobnil/fourier.hpp"
#include "mobnil/nilflow.hpp"
#include "mobnil/phases.hpp"

namespace mobnil::phases {

// A function on the Heisenberg nilmanifold, read in fundamental-domain
// coordinates, with its Lipschitz constant for the sup metric.
struct NilFunction {
    std::string name;
    double lipschitz = 1.0;
    std::function<double(const nilflow::HeisII<double>&)> eval;
};

// bump3: (1/7) prod_{i<=3} (1 - 2|u_i|)+, bump12: (1/5) prod_{i<=2}, bump_x3: (1/3)(1 - 2|u_3|)+.
NilFunction builtin_nil_function(const std::string& name);
std::vector<std::string> builtin_nil_function_names();

// Tent partition of unity on R/Z: psi_j(v) = max(0, 1 - 20 |v - j/20|) for j = -9..10.
inline constexpr int kTentCount = 20;
inline constexpr double kTentHalfWidth = 1.0 / 20.0;
double tent_center(int j);
double tent_weight(int j, double v);

struct DecomposeOptions {
    std::vector<int> orders = {2, 4, 8, 16};
    std::int64_t phase_sample_budget = 200;
    double phase_tol = 1e-6;
    std::uint64_t seed = 0x5eedULL;
    double zero_cutoff = 1e-12;
};

struct NilPiece {
    int box = 0;     // index into NilDecomposition::boxes
    int m3 = 0;      // frequency in the central coordinate
    double scale = 0.0;   // sup |psi_l P_{l,m3}| on the box support
    double weight = 0.0;  // |I| * scale
    double phase_residual_bound = 0.0;
    bool phase_ok = true;
};

struct NilBox {
    int j1 = 0;
    int j2 = 0;
    TabulatedPhase pi3;       // local third coordinate on the support set
    LocalPolyReport check;    // degree-2 check of pi3
    fourier::TrigPolynomial poly;  // Fejer approximant of F in the box chart
    std::vector<int> pieces;
};

struct NilDecomposition {
    nilflow::HeisII<double> g;
    std::int64_t N = 0;
    double epsilon = 0.0;
    int order = 0;
    std::vector<NilBox> boxes;
    std::vector<NilPiece> pieces;
    double sup_error = 0.0;
    double weight_mean = 0.0;
    double weight_exponent = 0.0;  // log(mean |w|) / log(1/epsilon)
    bool phases_ok = true;

    // F_i at torus point (v1, v2): psi_l(v) P_{l,m3}(v) / scale_i.
    cplx piece_factor(std::size_t i, double v1, double v2) const;
    // phi_i(n) = -m3 pi3_l(n) on the support of box l.
    double phase(std::size_t i, std::int64_t n) const;
    TabulatedPhase phase_table(std::size_t i) const;
    // mean_i w_i F_i(T^n 0) e(-phi_i(n)).
    cplx reconstruct(std::int64_t n) const;
};

// Third coordinate of g^n in the chart centred at c1: the bracket uses the
// integer part of n alpha1 relative to c1.
double local_pi3(const nilflow::HeisII<double>& g, std::int64_t n, double c1);

NilDecomposition heis_decompose(const NilFunction& F, const nilflow::HeisII<double>& g, std::int64_t N,
                                double epsilon, const DecomposeOptions& options = {});

}  // namespace mobnil::phases
