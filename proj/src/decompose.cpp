#include "mobnil/decompose.hpp"

#include <cmath>
#include <map>

#include "mobnil/parallel.hpp"

namespace mobnil::phases {

using circle::reduce;
using nilflow::HeisII;

NilFunction builtin_nil_function(const std::string& name) {
    auto hat = [](double u) { return std::max(0.0, 1.0 - 2.0 * std::abs(u)); };
    if (name == "bump3") {
        return {name, 1.0, [hat](const HeisII<double>& u) { return hat(u.t1) * hat(u.t2) * hat(u.t3) / 7.0; }};
    }
    if (name == "bump12") {
        return {name, 1.0, [hat](const HeisII<double>& u) { return hat(u.t1) * hat(u.t2) / 5.0; }};
    }
    if (name == "bump_x3") {
        return {name, 1.0, [hat](const HeisII<double>& u) { return hat(u.t3) / 3.0; }};
    }
    throw ParameterError("unknown nil function \"" + name + "\" (expected bump3, bump12 or bump_x3)");
}

std::vector<std::string> builtin_nil_function_names() { return {"bump3", "bump12", "bump_x3"}; }

double tent_center(int j) { return static_cast<double>(j - 9) / kTentCount; }

double tent_weight(int j, double v) {
    return std::max(0.0, 1.0 - std::abs(reduce(v - tent_center(j))) / kTentHalfWidth);
}

double local_pi3(const HeisII<double>& g, std::int64_t n, double c1) {
    const HeisII<double> p = nilflow::heis_orbit(g, n);
    const double v1 = c1 + reduce(p.t1 - c1);
    return reduce(p.t3 + (p.t1 - v1) * p.t2);
}

namespace {

// Identity within the tent support, then folded back so the chart is periodic.
double fold(double d) {
    const double a = std::abs(d);
    if (a <= kTentHalfWidth) return d;
    const double out = kTentHalfWidth * (0.5 - a) / (0.5 - kTentHalfWidth);
    return d < 0 ? -out : out;
}

// Tents that are nonzero at v; at most two.
std::vector<int> active_tents(double v) {
    std::vector<int> out;
    for (int j = 0; j < kTentCount; ++j) {
        if (tent_weight(j, v) > 0) out.push_back(j);
    }
    return out;
}

// Value of the (m1, m2) slice at frequency m3.
cplx slice_value(const fourier::TrigPolynomial& P, int m3, double v1, double v2) {
    const int s = P.side();
    const int o = P.order - 1;
    cplx acc{};
    for (int a = 0; a < s; ++a) {
        const cplx ea = circle::e(static_cast<double>(a - o) * v1);
        cplx row{};
        for (int b = 0; b < s; ++b) {
            const cplx c = P.dense[(static_cast<std::size_t>(a) * s + b) * s + (m3 + o)];
            if (c != cplx{}) row += c * circle::e(static_cast<double>(b - o) * v2);
        }
        acc += ea * row;
    }
    return acc;
}

struct OrbitPoint {
    double f1, f2, p3, value;
};

}  // namespace

cplx NilDecomposition::piece_factor(std::size_t i, double v1, double v2) const {
    const NilPiece& p = pieces.at(i);
    const NilBox& b = boxes[p.box];
    const double w = tent_weight(b.j1, v1) * tent_weight(b.j2, v2);
    if (w == 0) return {};
    return w * slice_value(b.poly, p.m3, v1, v2) / p.scale;
}

double NilDecomposition::phase(std::size_t i, std::int64_t n) const {
    const NilPiece& p = pieces.at(i);
    const double v = boxes[p.box].pi3.at(n);
    return circle::frac_mul(v, -static_cast<std::int64_t>(p.m3)) ;
}

TabulatedPhase NilDecomposition::phase_table(std::size_t i) const {
    const NilPiece& p = pieces.at(i);
    const TabulatedPhase& t = boxes[p.box].pi3;
    std::vector<double> values(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) values[k] = reduce(-static_cast<double>(p.m3) * t.values()[k]);
    return TabulatedPhase(t.domain(), std::move(values));
}

cplx NilDecomposition::reconstruct(std::int64_t n) const {
    const HeisII<double> pt = nilflow::heis_orbit(g, n);
    const double count = static_cast<double>(pieces.size());
    cplx acc{};
    for (const NilBox& b : boxes) {
        if (tent_weight(b.j1, pt.t1) == 0 || tent_weight(b.j2, pt.t2) == 0) continue;
        const double c1 = tent_center(b.j1), c2 = tent_center(b.j2);
        const double v1 = c1 + reduce(pt.t1 - c1);
        const double v2 = c2 + reduce(pt.t2 - c2);
        for (int i : b.pieces) {
            const NilPiece& p = pieces[i];
            acc += (p.weight / count) * piece_factor(static_cast<std::size_t>(i), v1, v2) *
                   circle::e(-phase(static_cast<std::size_t>(i), n));
        }
    }
    return acc;
}

NilDecomposition heis_decompose(const NilFunction& F, const HeisII<double>& g, std::int64_t N, double epsilon,
                                const DecomposeOptions& options) {
    if (!(F.lipschitz <= 1.0)) throw PreconditionError("heis_decompose: F must have Lipschitz norm at most 1");
    if (!(epsilon > 0 && epsilon < 0.5)) throw ParameterError("heis_decompose: epsilon must lie in (0, 1/2)");
    if (N < 1) throw ParameterError("heis_decompose: N must be positive");
    if (options.orders.empty()) throw ParameterError("heis_decompose: no Fejer orders to try");

    NilDecomposition dec;
    dec.g = g;
    dec.N = N;
    dec.epsilon = epsilon;

    std::vector<OrbitPoint> orbit(static_cast<std::size_t>(N) + 1);
    nilflow::HeisOrbit walk(g, {}, 1);
    for (std::int64_t n = 1; n <= N; ++n, walk.advance()) {
        const HeisII<double> p = walk.point();
        orbit[n] = {p.t1, p.t2, p.t3, F.eval(p)};
    }

    // Support sets of the boxes that the orbit visits, in box order.
    std::map<int, std::vector<std::int64_t>> support;
    for (std::int64_t n = 1; n <= N; ++n) {
        for (int j1 : active_tents(orbit[n].f1)) {
            for (int j2 : active_tents(orbit[n].f2)) support[j1 * kTentCount + j2].push_back(n);
        }
    }
    for (auto& [key, members] : support) {
        NilBox b;
        b.j1 = key / kTentCount;
        b.j2 = key % kTentCount;
        const double c1 = tent_center(b.j1);
        std::vector<double> values;
        values.reserve(members.size());
        for (std::int64_t n : members) {
            const OrbitPoint& p = orbit[n];
            const double v1 = c1 + reduce(p.f1 - c1);
            values.push_back(reduce(p.p3 + (p.f1 - v1) * p.f2));
        }
        b.pi3 = TabulatedPhase(members, std::move(values));
        LocalPolyOptions lp;
        lp.sample_budget = options.phase_sample_budget;
        lp.seed = options.seed + static_cast<std::uint64_t>(key);
        b.check = is_locally_polynomial(b.pi3, 2, options.phase_tol, lp);
        dec.boxes.push_back(std::move(b));
    }

    auto chart = [&F](int j1, int j2) {
        const double c1 = tent_center(j1), c2 = tent_center(j2);
        return [&F, c1, c2](const double* x) -> cplx {
            const HeisII<double> u{c1 + fold(reduce(x[0] - c1)), c2 + fold(reduce(x[1] - c2)), x[2]};
            return F.eval(nilflow::heis_reduce(u).tau);
        };
    };

    auto sup_error = [&](auto&& approx_at) {
        constexpr std::int64_t kBlock = 1024;
        const std::int64_t nblocks = (N + kBlock - 1) / kBlock;
        std::vector<double> worst(static_cast<std::size_t>(nblocks), 0.0);
        par::for_blocks(nblocks, [&](std::int64_t blk) {
            const std::int64_t lo = 1 + blk * kBlock, hi = std::min(N, lo + kBlock - 1);
            for (std::int64_t n = lo; n <= hi; ++n) {
                worst[blk] = std::max(worst[blk], std::abs(orbit[n].value - approx_at(n)));
            }
        });
        return worst.empty() ? 0.0 : *std::max_element(worst.begin(), worst.end());
    };

    std::vector<int> box_at(kTentCount * kTentCount, -1);
    for (std::size_t i = 0; i < dec.boxes.size(); ++i) box_at[dec.boxes[i].j1 * kTentCount + dec.boxes[i].j2] = static_cast<int>(i);

    double achieved = INFINITY;
    for (int order : options.orders) {
        par::for_blocks(static_cast<std::int64_t>(dec.boxes.size()), [&](std::int64_t i) {
            NilBox& b = dec.boxes[static_cast<std::size_t>(i)];
            b.poly = fourier::fejer_approx(chart(b.j1, b.j2), order, 3).poly;
        });
        achieved = sup_error([&](std::int64_t n) {
            const OrbitPoint& p = orbit[n];
            cplx acc{};
            for (int j1 : active_tents(p.f1)) {
                for (int j2 : active_tents(p.f2)) {
                    const NilBox& b = dec.boxes[static_cast<std::size_t>(box_at[j1 * kTentCount + j2])];
                    const double c1 = tent_center(j1), c2 = tent_center(j2);
                    const double x[3] = {c1 + reduce(p.f1 - c1), c2 + reduce(p.f2 - c2), b.pi3.at(n)};
                    acc += tent_weight(j1, p.f1) * tent_weight(j2, p.f2) * b.poly(x);
                }
            }
            return acc;
        });
        dec.order = order;
        if (achieved <= epsilon) break;
    }
    if (achieved > epsilon) {
        throw AccuracyError("heis_decompose: achieved sup error " + std::to_string(achieved) + " exceeds epsilon " +
                            std::to_string(epsilon));
    }

    // Split each box approximant by central frequency.
    constexpr int kScaleGrid = 21;
    for (std::size_t bi = 0; bi < dec.boxes.size(); ++bi) {
        NilBox& b = dec.boxes[bi];
        const double c1 = tent_center(b.j1), c2 = tent_center(b.j2);
        for (int m3 = -(dec.order - 1); m3 <= dec.order - 1; ++m3) {
            double scale = 0.0;
            for (int a = 0; a < kScaleGrid; ++a) {
                const double v1 = c1 + kTentHalfWidth * (2.0 * a / (kScaleGrid - 1) - 1.0);
                const double w1 = tent_weight(b.j1, v1);
                if (w1 == 0) continue;
                for (int c = 0; c < kScaleGrid; ++c) {
                    const double v2 = c2 + kTentHalfWidth * (2.0 * c / (kScaleGrid - 1) - 1.0);
                    const double w = w1 * tent_weight(b.j2, v2);
                    if (w == 0) continue;
                    scale = std::max(scale, w * std::abs(slice_value(b.poly, m3, v1, v2)));
                }
            }
            if (scale <= options.zero_cutoff) continue;
            NilPiece p;
            p.box = static_cast<int>(bi);
            p.m3 = m3;
            p.scale = scale;
            p.phase_residual_bound = std::abs(m3) * b.check.worst_residual;
            p.phase_ok = b.check.holds && p.phase_residual_bound <= options.phase_tol;
            b.pieces.push_back(static_cast<int>(dec.pieces.size()));
            dec.pieces.push_back(p);
        }
    }
    const double count = static_cast<double>(dec.pieces.size());
    for (NilPiece& p : dec.pieces) {
        p.weight = count * p.scale;
        dec.weight_mean += p.scale;
        dec.phases_ok = dec.phases_ok && p.phase_ok;
    }
    dec.weight_exponent = dec.weight_mean > 0 ? std::log(dec.weight_mean) / std::log(1.0 / epsilon) : 0.0;
    dec.sup_error = sup_error([&](std::int64_t n) { return dec.reconstruct(n); });
    if (dec.sup_error > epsilon) {
        throw AccuracyError("heis_decompose: reconstruction error " + std::to_string(dec.sup_error) +
                            " exceeds epsilon " + std::to_string(epsilon));
    }
    return dec;
}

}  // namespace mobnil::phases
