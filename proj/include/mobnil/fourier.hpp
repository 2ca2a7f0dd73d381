#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "mobnil/error.hpp"

namespace mobnil::fourier {

using cplx = std::complex<double>;

// Unnormalized forward DFT, out[m] = sum_j in[j] exp(-2 pi i j.m / dims),
// over a row-major array with the given extents.
std::vector<cplx> dft_forward(const std::vector<cplx>& in, const std::vector<int>& dims);

// Trigonometric polynomial on (R/Z)^dim with frequencies |m_i| < order,
// stored densely in row-major order over (2 order - 1)^dim slots.
struct TrigPolynomial {
    struct Term {
        std::array<int, 3> m{};
        cplx c;
    };

    int dim = 1;
    int order = 1;
    std::vector<cplx> dense;

    int side() const { return 2 * order - 1; }
    cplx coeff(const std::array<int, 3>& m) const;
    std::vector<Term> terms() const;  // nonzero coefficients only
    std::size_t term_count() const { return terms().size(); }

    cplx operator()(const double* x) const;
    // Values on the tensor grid axis^dim, row-major.
    std::vector<cplx> eval_grid(const std::vector<double>& axis) const;
};

using TorusFunction = std::function<cplx(const double* x)>;

struct FejerResult {
    TrigPolynomial poly;
    double sup_error = 0.0;
    int test_side = 0;
};

// Frequencies |m_i| < order with weights prod (1 - |m_i|/order); coefficients by
// quadrature on a grid of side 4 order. The error is measured on an offset grid.
FejerResult fejer_approx(const TorusFunction& F, int order, int dim);

}  // namespace mobnil::fourier
