#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mobnil/circle.hpp"
#include "mobnil/error.hpp"

namespace mobnil::nilflow {

// Heisenberg group in second-kind coordinates.
template <class Real = double>
struct HeisII {
    Real t1{};
    Real t2{};
    Real t3{};
};

template <class Real>
HeisII<Real> heis_mul_ii(const HeisII<Real>& t, const HeisII<Real>& u) {
    return {t.t1 + u.t1, t.t2 + u.t2, t.t3 + u.t3 - t.t2 * u.t1};
}

template <class Real>
HeisII<Real> heis_inv(const HeisII<Real>& a) {
    return {-a.t1, -a.t2, -a.t3 - a.t1 * a.t2};
}

// Valid for every integer n, negative included.
template <class Real>
HeisII<Real> heis_pow(const HeisII<Real>& g, std::int64_t n) {
    const Real nr = static_cast<Real>(n);
    const Real tri = static_cast<Real>(n) * static_cast<Real>(n - 1) / Real(2);
    return {nr * g.t1, nr * g.t2, nr * g.t3 - tri * g.t1 * g.t2};
}

// Upper unitriangular model [[1, x, y], [0, 1, z], [0, 0, 1]].
template <class Real>
struct HeisMatrix {
    Real x{};
    Real y{};
    Real z{};
};

template <class Real>
HeisMatrix<Real> to_matrix(const HeisII<Real>& t) {
    return {t.t1, t.t3 + t.t1 * t.t2, t.t2};
}

template <class Real>
HeisII<Real> from_matrix(const HeisMatrix<Real>& m) {
    return {m.x, m.z, m.y - m.x * m.z};
}

template <class Real>
HeisMatrix<Real> matrix_mul(const HeisMatrix<Real>& a, const HeisMatrix<Real>& b) {
    return {a.x + b.x, a.y + b.y + a.x * b.z, a.z + b.z};
}

template <class Real>
struct HeisReduced {
    HeisII<Real> tau;
    std::array<std::int64_t, 3> gamma{};  // lattice element in second-kind coordinates
};

// tau = x * gamma with every coordinate of tau in (-1/2, 1/2].
template <class Real>
HeisReduced<Real> heis_reduce(const HeisII<Real>& x) {
    using circle::nearest;
    const Real k1 = nearest(x.t1);
    const Real k2 = nearest(x.t2);
    const Real s = x.t3 + k1 * x.t2;
    const Real k3 = nearest(s);
    HeisReduced<Real> r;
    r.tau = {x.t1 - k1, x.t2 - k2, s - k3};
    r.gamma = {-static_cast<std::int64_t>(k1), -static_cast<std::int64_t>(k2), -static_cast<std::int64_t>(k3)};
    return r;
}

// Fundamental-domain coordinates of g^n x, evaluated term by term mod 1.
HeisII<double> heis_orbit(const HeisII<double>& g, std::int64_t n, const HeisII<double>& x = {});
inline double heis_orbit_pi3(const HeisII<double>& g, std::int64_t n) { return heis_orbit(g, n).t3; }

// Walks g^n x for n = start, start+1, ... with constant work per step.
class HeisOrbit {
public:
    explicit HeisOrbit(const HeisII<double>& g, const HeisII<double>& x = {}, std::int64_t start = 0);
    std::int64_t index() const { return n_; }
    HeisII<double> point() const;
    void advance();

private:
    HeisII<double> g_;
    HeisII<double> x_;
    double prod_hi_ = 0.0;  // alpha1*alpha2 split into a rounded value and its error
    double prod_lo_ = 0.0;
    double cross_ = 0.0;    // {alpha2 * x1}
    std::int64_t n_ = 0;
    std::int64_t k1_ = 0;   // nearest(n alpha1 + x1)
    double f1_ = 0.0;
    double f2_ = 0.0;
    double base3_ = 0.0;    // {n alpha3 - T alpha1 alpha2 + x3 - n alpha2 x1}
    double tri_ = 0.0;      // {n alpha1 alpha2}
};

// 2-step group given by structure constants a_ijk, i, j <= m < k <= n.
struct TwoStepGroupSpec {
    int m = 0;
    int n = 0;
    std::vector<double> a;
    std::vector<std::int64_t> num;
    std::vector<std::int64_t> den;
    bool is_rational = true;

    int layer() const { return n - m; }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * m + j) * layer() + (k - m);
    }
    // 0-based indices.
    double coeff(int i, int j, int k) const { return a[index(i, j, k)]; }
    bool operator==(const TwoStepGroupSpec& o) const { return m == o.m && n == o.n && a == o.a; }

    // phi_k(x, y) = 1/2 sum a_ijk x_i y_j.
    double phi(int k, const double* x, const double* y) const;
    // q_k(r) = 1/2 sum_{i<j} a_ijk r_i r_j.
    double q(int k, const double* r) const;

    // First line "m n", then lines "i j k p/q" with 1-based indices.
    static TwoStepGroupSpec parse(const std::string& text);
    static TwoStepGroupSpec heisenberg();
};

struct GroupElementI {
    std::shared_ptr<const TwoStepGroupSpec> spec;
    std::vector<double> xi;
};

GroupElementI identity_i(std::shared_ptr<const TwoStepGroupSpec> spec);
GroupElementI mul_i(const GroupElementI& a, const GroupElementI& b);
GroupElementI inv_i(const GroupElementI& a);
GroupElementI pow_i(const GroupElementI& g, std::int64_t n);

GroupElementI lattice_ii_to_i(std::shared_ptr<const TwoStepGroupSpec> spec, const std::vector<std::int64_t>& r);
// Integer second-kind coordinates when x is a lattice point within tol.
std::optional<std::vector<std::int64_t>> lattice_i_to_ii(const GroupElementI& x, double tol = 1e-9);

struct FundamentalPoint {
    std::vector<double> coords;
    std::vector<std::int64_t> gamma;  // second-kind lattice coordinates with tau = x * gamma
};

FundamentalPoint reduce_i(const GroupElementI& x);

std::shared_ptr<const TwoStepGroupSpec> heisenberg_spec();
GroupElementI coords_ii_to_i(const HeisII<double>& t);
HeisII<double> coords_i_to_ii(const GroupElementI& x);

}  // namespace mobnil::nilflow
