#include "mobnil/fourier.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "mobnil/circle.hpp"

namespace mobnil::fourier {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::size_t product(const std::vector<int>& dims) {
    std::size_t n = 1;
    for (int d : dims) n *= static_cast<std::size_t>(d);
    return n;
}

}  // namespace

std::vector<cplx> dft_forward(const std::vector<cplx>& in, const std::vector<int>& dims) {
    const std::size_t n = product(dims);
    if (in.size() != n) throw ParameterError("dft_forward: input size does not match dims");
    std::vector<cplx> out(n);
    if (n == 0) return out;
    auto* src = reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data()));
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(), src, dst, FFTW_FORWARD,
                             FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
    }
    if (plan == nullptr) throw CapacityError("dft_forward: FFTW could not plan the transform");
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

cplx TrigPolynomial::coeff(const std::array<int, 3>& m) const {
    std::size_t idx = 0;
    for (int i = 0; i < dim; ++i) {
        if (std::abs(m[i]) >= order) return {};
        idx = idx * static_cast<std::size_t>(side()) + static_cast<std::size_t>(m[i] + order - 1);
    }
    return dense[idx];
}

std::vector<TrigPolynomial::Term> TrigPolynomial::terms() const {
    std::vector<Term> out;
    const int s = side();
    for (std::size_t idx = 0; idx < dense.size(); ++idx) {
        if (dense[idx] == cplx{}) continue;
        Term t;
        std::size_t rest = idx;
        for (int i = dim - 1; i >= 0; --i) {
            t.m[i] = static_cast<int>(rest % static_cast<std::size_t>(s)) - (order - 1);
            rest /= static_cast<std::size_t>(s);
        }
        t.c = dense[idx];
        out.push_back(t);
    }
    return out;
}

cplx TrigPolynomial::operator()(const double* x) const {
    const std::size_t s = static_cast<std::size_t>(side());
    std::vector<cplx> cur = dense;
    for (int i = dim - 1; i >= 0; --i) {
        std::vector<cplx> powers(s);
        for (std::size_t k = 0; k < s; ++k) {
            powers[k] = circle::e(x[i] * static_cast<double>(static_cast<int>(k) - (order - 1)));
        }
        std::vector<cplx> next(cur.size() / s);
        for (std::size_t a = 0; a < next.size(); ++a) {
            cplx sum{};
            for (std::size_t k = 0; k < s; ++k) sum += cur[a * s + k] * powers[k];
            next[a] = sum;
        }
        cur.swap(next);
    }
    return cur[0];
}

std::vector<cplx> TrigPolynomial::eval_grid(const std::vector<double>& axis) const {
    const std::size_t s = static_cast<std::size_t>(side());
    const std::size_t g = axis.size();
    std::vector<cplx> basis(g * s);
    for (std::size_t p = 0; p < g; ++p) {
        for (std::size_t k = 0; k < s; ++k) {
            basis[p * s + k] = circle::e(axis[p] * static_cast<double>(static_cast<int>(k) - (order - 1)));
        }
    }
    // Contract the last axis and prepend the grid axis: (f1, f2, f3) -> (g3, f1, f2) -> ... -> (g1, g2, g3).
    std::vector<cplx> cur = dense;
    for (int step = 0; step < dim; ++step) {
        const std::size_t rest = cur.size() / s;
        std::vector<cplx> next(g * rest);
        for (std::size_t p = 0; p < g; ++p) {
            const cplx* b = &basis[p * s];
            for (std::size_t a = 0; a < rest; ++a) {
                const cplx* src = &cur[a * s];
                cplx sum{};
                for (std::size_t k = 0; k < s; ++k) sum += src[k] * b[k];
                next[p * rest + a] = sum;
            }
        }
        cur.swap(next);
    }
    return cur;
}

FejerResult fejer_approx(const TorusFunction& F, int order, int dim) {
    if (dim < 1 || dim > 3) throw ParameterError("fejer_approx: dimension must lie in 1..3");
    if (order < 1) throw ParameterError("fejer_approx: order must be positive");
    const int K = 4 * order;
    std::vector<int> dims(static_cast<std::size_t>(dim), K);
    std::size_t total = 1;
    for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(K);
    std::vector<cplx> grid(total);
    std::array<double, 3> x{};
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int i = dim - 1; i >= 0; --i) {
            x[i] = static_cast<double>(rest % static_cast<std::size_t>(K)) / K;
            rest /= static_cast<std::size_t>(K);
        }
        grid[idx] = F(x.data());
    }
    const std::vector<cplx> hat = dft_forward(grid, dims);
    FejerResult res;
    TrigPolynomial& P = res.poly;
    P.dim = dim;
    P.order = order;
    const int s = P.side();
    std::size_t slots = 1;
    for (int i = 0; i < dim; ++i) slots *= static_cast<std::size_t>(s);
    P.dense.assign(slots, {});
    const double norm = 1.0 / static_cast<double>(total);
    for (std::size_t idx = 0; idx < slots; ++idx) {
        std::size_t rest = idx;
        std::size_t src = 0;
        std::size_t stride = 1;
        double weight = 1.0;
        for (int i = dim - 1; i >= 0; --i) {
            const int m = static_cast<int>(rest % static_cast<std::size_t>(s)) - (order - 1);
            rest /= static_cast<std::size_t>(s);
            weight *= 1.0 - static_cast<double>(std::abs(m)) / order;
            src += static_cast<std::size_t>((m + K) % K) * stride;
            stride *= static_cast<std::size_t>(K);
        }
        P.dense[idx] = hat[src] * (norm * weight);
    }
    res.test_side = dim == 1 ? 2 * K : (dim == 2 ? K : std::min(K, 32));
    std::vector<double> axis(static_cast<std::size_t>(res.test_side));
    for (int i = 0; i < res.test_side; ++i) axis[i] = (i + 0.5) / res.test_side;
    const std::vector<cplx> approx = P.eval_grid(axis);
    const std::size_t g = axis.size();
    for (std::size_t idx = 0; idx < approx.size(); ++idx) {
        std::size_t rest = idx;
        for (int i = dim - 1; i >= 0; --i) {
            x[i] = axis[rest % g];
            rest /= g;
        }
        res.sup_error = std::max(res.sup_error, std::abs(F(x.data()) - approx[idx]));
    }
    return res;
}

}  // namespace mobnil::fourier
