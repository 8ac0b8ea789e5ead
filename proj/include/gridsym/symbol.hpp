#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gridsym/core.hpp"
#include "gridsym/dense.hpp"

namespace gridsym {

using Complex = std::complex<double>;

/// Small dense nu x nu complex block, column-major.
struct SymbolBlock {
    std::int64_t nu = 1;
    std::vector<Complex> a;

    SymbolBlock() = default;
    explicit SymbolBlock(std::int64_t block) : nu(block), a(static_cast<std::size_t>(block * block), Complex{0.0, 0.0}) {}

    Complex& operator()(std::int64_t r, std::int64_t c) { return a[static_cast<std::size_t>(c * nu + r)]; }
    Complex operator()(std::int64_t r, std::int64_t c) const { return a[static_cast<std::size_t>(c * nu + r)]; }

    SymbolBlock adjoint() const {
        SymbolBlock out(nu);
        for (std::int64_t r = 0; r < nu; ++r)
            for (std::int64_t c = 0; c < nu; ++c) out(c, r) = std::conj((*this)(r, c));
        return out;
    }

    static SymbolBlock scalar(Complex v) {
        SymbolBlock b(1);
        b(0, 0) = v;
        return b;
    }

    static SymbolBlock from_real(const std::vector<std::vector<double>>& rows) {
        SymbolBlock b(static_cast<std::int64_t>(rows.size()));
        for (std::int64_t r = 0; r < b.nu; ++r)
            for (std::int64_t c = 0; c < b.nu; ++c) b(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
        return b;
    }
};

/// Matrix-valued trigonometric polynomial f(theta) = sum_k fhat_k e^{i k.theta}
/// with finitely many coefficients, optionally multiplied by a scalar space
/// coefficient a(x). Coefficients are stored for all k with fhat_{-k} = fhat_k^H
/// enforced at insertion.
class MatrixSymbol {
public:
    MatrixSymbol(std::size_t dim, std::int64_t block) : d_(dim), nu_(block) {
        if (dim < 1) throw std::invalid_argument("MatrixSymbol: dimension must be >= 1");
    }

    std::size_t dim() const { return d_; }
    std::int64_t block_size() const { return nu_; }
    const std::map<MultiIndex, SymbolBlock>& coefficients() const { return coeff_; }

    /// Insert fhat_k (and its mirror fhat_{-k} = fhat_k^H).
    void set_coefficient(const MultiIndex& k, const SymbolBlock& block) {
        if (k.size() != d_) throw std::invalid_argument("set_coefficient: offset dimension mismatch");
        if (block.nu != nu_) throw std::invalid_argument("set_coefficient: block size mismatch");
        coeff_[k] = block;
        MultiIndex neg(k.size());
        for (std::size_t r = 0; r < k.size(); ++r) neg[r] = -k[r];
        if (neg != k) coeff_[neg] = block.adjoint();
    }

    void set_scalar_coefficient(const MultiIndex& k, double v) { set_coefficient(k, SymbolBlock::scalar(v)); }

    /// Attach a scalar space coefficient a(x); eval multiplies by a(x) when a
    /// point is supplied.
    void set_space_coefficient(std::function<double(const std::vector<double>&)> a) { space_coeff_ = std::move(a); }
    bool has_space_coefficient() const { return static_cast<bool>(space_coeff_); }
    double space_coefficient(const std::vector<double>& x) const { return space_coeff_(x); }

    /// f(theta), Hermitian by construction; angles are interpreted 2pi-periodically.
    SymbolBlock eval(const std::vector<double>& theta, const std::vector<double>* x = nullptr) const {
        if (theta.size() != d_) throw std::invalid_argument("eval: angle dimension mismatch");
        for (double t : theta)
            if (!std::isfinite(t)) throw std::invalid_argument("eval: angle out of range (not finite)");
        SymbolBlock out(nu_);
        for (const auto& [k, blk] : coeff_) {
            double phase = 0.0;
            for (std::size_t r = 0; r < d_; ++r) phase += static_cast<double>(k[r]) * theta[r];
            const Complex e = std::polar(1.0, phase);
            for (std::size_t p = 0; p < out.a.size(); ++p) out.a[p] += e * blk.a[p];
        }
        if (x != nullptr && space_coeff_) {
            const double a = space_coeff_(*x);
            for (auto& v : out.a) v *= a;
        }
        return out;
    }

    double eval_scalar(double theta) const {
        if (nu_ != 1 || d_ != 1) throw std::invalid_argument("eval_scalar: symbol is not scalar univariate");
        return eval({theta})(0, 0).real();
    }

    /// Sorted eigenvalues of f(theta).
    std::vector<double> eigenvalues(const std::vector<double>& theta, const std::vector<double>* x = nullptr) const {
        SymbolBlock b = eval(theta, x);
        if (nu_ == 1) return {b(0, 0).real()};
        return hermitian_eigenvalues(b.a, nu_);
    }

    /// det f(theta) by complex Gaussian elimination (nu is small).
    Complex determinant(const std::vector<double>& theta) const {
        SymbolBlock b = eval(theta);
        const auto n = static_cast<std::size_t>(nu_);
        Complex det{1.0, 0.0};
        auto& m = b.a;
        auto at = [&](std::size_t r, std::size_t c) -> Complex& { return m[c * n + r]; };
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < n; ++r)
                if (std::abs(at(r, col)) > std::abs(at(piv, col))) piv = r;
            if (std::abs(at(piv, col)) == 0.0) return {0.0, 0.0};
            if (piv != col) {
                for (std::size_t c = 0; c < n; ++c) std::swap(at(piv, c), at(col, c));
                det = -det;
            }
            det *= at(col, col);
            for (std::size_t r = col + 1; r < n; ++r) {
                const Complex f = at(r, col) / at(col, col);
                for (std::size_t c = col; c < n; ++c) at(r, c) -= f * at(col, c);
            }
        }
        return det;
    }

private:
    std::size_t d_;
    std::int64_t nu_;
    std::map<MultiIndex, SymbolBlock> coeff_;
    std::function<double(const std::vector<double>&)> space_coeff_;
};

/// Per-grid-point sorted eigenvalue samples of a symbol over [0,pi]^d
/// (midpoint rule), flattened and sorted.
struct SymbolSample {
    std::vector<std::vector<double>> curves;  // curves[j] = j-th eigenvalue curve over the grid
    std::vector<double> sorted_all;           // all samples, ascending
    std::vector<double> curve_min;            // min of each curve over the grid
};

inline SymbolSample symbol_eigencurves(const MatrixSymbol& f, std::int64_t resolution) {
    if (resolution < 2) throw std::invalid_argument("symbol_eigencurves: resolution must be >= 2");
    const std::size_t d = f.dim();
    const auto nu = static_cast<std::size_t>(f.block_size());
    SymbolSample out;
    out.curves.assign(nu, {});
    IndexRange grid(MultiIndex(d, resolution));
    grid.for_each([&](const MultiIndex& k) {
        std::vector<double> theta(d);
        for (std::size_t r = 0; r < d; ++r)
            theta[r] = (static_cast<double>(k[r]) - 0.5) * std::numbers::pi / static_cast<double>(resolution);
        auto ev = f.eigenvalues(theta);
        for (std::size_t j = 0; j < nu; ++j) out.curves[j].push_back(ev[j]);
    });
    out.curve_min.resize(nu);
    for (std::size_t j = 0; j < nu; ++j) {
        out.curve_min[j] = *std::min_element(out.curves[j].begin(), out.curves[j].end());
        out.sorted_all.insert(out.sorted_all.end(), out.curves[j].begin(), out.curves[j].end());
    }
    std::sort(out.sorted_all.begin(), out.sorted_all.end());
    return out;
}

/// Corner points Omega_g(theta) and mirror points M_g(theta) = Omega \ {theta},
/// componentwise translates by 2 pi k / g mod 2 pi.
struct CornerMirror {
    std::vector<std::vector<double>> corner;
    std::vector<std::vector<double>> mirror;
};

inline CornerMirror corner_mirror_points(const std::vector<double>& theta, std::int64_t g, std::size_t d) {
    if (g < 2) throw std::invalid_argument("corner_mirror_points: coarsening factor must be >= 2");
    if (theta.size() != d) throw std::invalid_argument("corner_mirror_points: dimension mismatch");
    const double two_pi = 2.0 * std::numbers::pi;
    CornerMirror out;
    IndexRange shifts(MultiIndex(d, g));
    shifts.for_each([&](const MultiIndex& k) {
        std::vector<double> eta(d);
        bool is_theta = true;
        for (std::size_t r = 0; r < d; ++r) {
            eta[r] = std::fmod(theta[r] + two_pi * static_cast<double>(k[r] - 1) / static_cast<double>(g), two_pi);
            if (eta[r] < 0.0) eta[r] += two_pi;
            if (k[r] != 1) is_theta = false;
        }
        out.corner.push_back(eta);
        if (!is_theta) out.mirror.push_back(eta);
    });
    return out;
}

/// Numeric check of the two projector conditions on shrinking rings around
/// the symbol zero theta0: (i) max over mirror points of p(eta)^2 / f(theta)
/// stays bounded, (ii) sum over corner points of p(eta)^2 stays positive.
struct ProjectorConditionReport {
    bool bounded_ratio = false;
    bool positive_sum = false;
    double final_ring_sup = 0.0;
    double min_corner_sum = 0.0;
    std::vector<double> ring_sups;
    bool pass() const { return bounded_ratio && positive_sum; }
};

inline ProjectorConditionReport check_projector_conditions(const MatrixSymbol& f, const MatrixSymbol& p,
                                                           const std::vector<double>& theta0, std::int64_t g,
                                                           std::int64_t rings = 12, std::int64_t ring_samples = 64) {
    if (f.dim() != p.dim() || f.block_size() != 1 || p.block_size() != 1)
        throw std::invalid_argument("check_projector_conditions: scalar symbols of equal dimension required");
    const std::size_t d = f.dim();
    ProjectorConditionReport rep;

    // negative-f guard on a coarse grid
    {
        IndexRange grid(MultiIndex(d, 64));
        bool neg = false;
        grid.for_each([&](const MultiIndex& k) {
            std::vector<double> th(d);
            for (std::size_t r = 0; r < d; ++r)
                th[r] = (static_cast<double>(k[r]) - 0.5) * std::numbers::pi / 64.0;
            if (f.eval(th)(0, 0).real() < -1e-12) neg = true;
        });
        if (neg) throw std::invalid_argument("check_projector_conditions: f negative on the grid");
    }

    double r0 = 0.5;
    for (std::int64_t m = 0; m < rings; ++m) {
        const double radius = r0 / static_cast<double>(1ll << m);
        double sup = 0.0;
        for (std::int64_t s = 0; s < ring_samples; ++s) {
            std::vector<double> th(d);
            if (d == 1) {
                th[0] = theta0[0] + (s % 2 == 0 ? radius : -radius);
            } else {
                const double ang = 2.0 * std::numbers::pi * static_cast<double>(s) / static_cast<double>(ring_samples);
                th[0] = theta0[0] + radius * std::cos(ang);
                th[1] = theta0[1] + radius * std::sin(ang);
                for (std::size_t r = 2; r < d; ++r) th[r] = theta0[r];
            }
            const double fv = f.eval(th)(0, 0).real();
            if (fv <= 0.0) continue;
            auto cm = corner_mirror_points(th, g, d);
            for (const auto& eta : cm.mirror) {
                const double pv = p.eval(eta)(0, 0).real();
                sup = std::max(sup, pv * pv / fv);
            }
        }
        rep.ring_sups.push_back(sup);
    }
    rep.final_ring_sup = rep.ring_sups.back();
    double early = 0.0;
    for (std::size_t m = 0; m < rep.ring_sups.size() / 2; ++m) early = std::max(early, rep.ring_sups[m]);
    rep.bounded_ratio = rep.final_ring_sup <= 1.05 * early + 1e-9;

    // condition (ii): min over a grid of sum over corner points of p^2
    rep.min_corner_sum = std::numeric_limits<double>::infinity();
    IndexRange grid(MultiIndex(d, 32));
    grid.for_each([&](const MultiIndex& k) {
        std::vector<double> th(d);
        for (std::size_t r = 0; r < d; ++r)
            th[r] = (static_cast<double>(k[r]) - 0.5) * std::numbers::pi / 32.0;
        auto cm = corner_mirror_points(th, g, d);
        double s = 0.0;
        for (const auto& eta : cm.corner) {
            const double pv = p.eval(eta)(0, 0).real();
            s += pv * pv;
        }
        rep.min_corner_sum = std::min(rep.min_corner_sum, s);
    });
    rep.positive_sum = rep.min_corner_sum > 1e-12;
    return rep;
}

/// Weyl-distribution distance between the spectrum of A and samples of f:
/// max over the test family {x, x^2, min(x, c_i)} of the difference of means.
/// Eigenvalues come from the dense symmetric path; the symbol is sampled on a
/// uniform midpoint grid of at least the matrix dimension. When f carries a
/// space coefficient, the eigenvalue samples are multiplied by a(x) on a
/// space grid, optionally restricted to points inside_space.
inline double weyl_distance(const StructuredMatrix& a, const MatrixSymbol& f, std::int64_t min_samples = 0,
                            std::int64_t cap = 5000,
                            const std::function<bool(const std::vector<double>&)>* inside_space = nullptr) {
    auto eig = sym_eigenvalues(a, cap);

    const std::size_t d = f.dim();
    const auto nu = static_cast<std::size_t>(f.block_size());
    std::int64_t per_axis = 64;
    const std::int64_t want = std::max<std::int64_t>(min_samples, static_cast<std::int64_t>(eig.size()));
    while (true) {
        std::int64_t tot = 1;
        for (std::size_t r = 0; r < d; ++r) tot *= per_axis;
        if (tot * static_cast<std::int64_t>(nu) >= want) break;
        per_axis *= 2;
    }
    // space factors a(x) on a midpoint grid over (0,1)^d, domain-restricted
    std::vector<double> space_factors{1.0};
    if (f.has_space_coefficient()) {
        space_factors.clear();
        const std::int64_t sg = 16;
        IndexRange sgrid(MultiIndex(d, sg));
        sgrid.for_each([&](const MultiIndex& k) {
            std::vector<double> x(d);
            for (std::size_t r = 0; r < d; ++r) x[r] = (static_cast<double>(k[r]) - 0.5) / static_cast<double>(sg);
            if (inside_space != nullptr && !(*inside_space)(x)) return;
            space_factors.push_back(f.space_coefficient(x));
        });
        if (space_factors.empty()) throw std::invalid_argument("weyl_distance: empty space grid");
    }
    std::vector<double> samples;
    IndexRange grid(MultiIndex(d, per_axis));
    grid.for_each([&](const MultiIndex& k) {
        std::vector<double> th(d);
        for (std::size_t r = 0; r < d; ++r)
            th[r] = (static_cast<double>(k[r]) - 0.5) * std::numbers::pi / static_cast<double>(per_axis);
        auto ev = f.eigenvalues(th);
        for (double s : space_factors)
            for (double v : ev) samples.push_back(s * v);
    });

    const double lo = std::min(*std::min_element(samples.begin(), samples.end()), eig.front());
    const double hi = std::max(*std::max_element(samples.begin(), samples.end()), eig.back());

    std::vector<std::function<double(double)>> tests;
    tests.emplace_back([](double x) { return x; });
    tests.emplace_back([](double x) { return x * x; });
    for (int i = 1; i <= 5; ++i) {
        const double c = lo + (hi - lo) * static_cast<double>(i) / 6.0;
        tests.emplace_back([c](double x) { return std::min(x, c); });
    }

    double dist = 0.0;
    for (const auto& F : tests) {
        double ma = 0.0, mf = 0.0;
        for (double x : eig) ma += F(x);
        ma /= static_cast<double>(eig.size());
        for (double x : samples) mf += F(x);
        mf /= static_cast<double>(samples.size());
        dist = std::max(dist, std::abs(ma - mf));
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Symbols used by the experiments.
// ---------------------------------------------------------------------------

/// Scalar cosine polynomial c0 + sum_k ck cos(k theta) as a symbol.
inline MatrixSymbol cosine_polynomial(const std::vector<double>& c) {
    MatrixSymbol p(1, 1);
    p.set_scalar_coefficient({0}, c[0]);
    for (std::size_t k = 1; k < c.size(); ++k) p.set_scalar_coefficient({static_cast<std::int64_t>(k)}, c[k] / 2.0);
    return p;
}

/// 2-D Fourier symbol of theta1^2 + theta2^2 truncated at offset K: axis
/// coefficients (-1)^k 2/k^2, exact constant term 2 pi^2 / 3. The value at the
/// origin is the series tail, bounded by 8/K.
inline MatrixSymbol triangle_symbol(std::int64_t truncation) {
    MatrixSymbol f(2, 1);
    for (std::int64_t k = 1; k <= truncation; ++k) {
        const double w = (k % 2 == 0 ? -2.0 : 2.0) / static_cast<double>(k * k);  // (-1)^{k+1} 2/k^2
        f.set_scalar_coefficient({k, 0}, -w);
        f.set_scalar_coefficient({0, k}, -w);
    }
    f.set_scalar_coefficient({0, 0}, 2.0 * std::numbers::pi * std::numbers::pi / 3.0);
    return f;
}

/// 5-point stencil symbol 4 - 2cos(t1) - 2cos(t2).
inline MatrixSymbol five_point_symbol() {
    MatrixSymbol f(2, 1);
    f.set_scalar_coefficient({0, 0}, 4.0);
    f.set_scalar_coefficient({1, 0}, -1.0);
    f.set_scalar_coefficient({0, 1}, -1.0);
    return f;
}

/// Disk example symbol p(x,y) (4 - 2cos t1 - 2cos t2).
inline MatrixSymbol disk_symbol() {
    MatrixSymbol f = five_point_symbol();
    f.set_space_coefficient([](const std::vector<double>& x) {
        return 1.0 + (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5);
    });
    return f;
}

/// Block symbol of the chain of diamonds: f(theta) = D - [W + (L+L^T) cos + (L-L^T) i sin].
inline MatrixSymbol diamond_symbol() {
    MatrixSymbol f(1, 4);
    SymbolBlock d0(4);
    const double D[4] = {26.0, 2.0, 2.0, 4.0};
    const double W[4][4] = {{0, 1, 2, 3}, {1, 0, 0, 0}, {2, 0, 0, 0}, {3, 0, 0, 0}};
    for (int r = 0; r < 4; ++r) {
        d0(r, r) = D[r];
        for (int c = 0; c < 4; ++c) d0(r, c) -= W[r][c];
    }
    f.set_coefficient({0}, d0);
    SymbolBlock l(4);
    l(0, 0) = -10.0;
    l(3, 1) = -1.0;
    f.set_coefficient({1}, l);
    return f;
}

/// 2x2 symbol of the quadratic spline system (already carries the 1/3 factor).
inline MatrixSymbol quadratic_spline_block_symbol() {
    MatrixSymbol f(1, 2);
    SymbolBlock d0(2);
    d0(0, 0) = 4.0 / 3.0;
    d0(0, 1) = -2.0 / 3.0;
    d0(1, 0) = -2.0 / 3.0;
    d0(1, 1) = 8.0 / 3.0;
    f.set_coefficient({0}, d0);
    SymbolBlock l(2);
    l(1, 0) = -2.0 / 3.0;
    l(1, 1) = -2.0 / 3.0;
    f.set_coefficient({1}, l);
    return f;
}

/// Scalar symbol of the smooth-spline stiffness:
/// 160/240 - 60/240 cos - 96/240 cos2 - 4/240 cos3.
inline MatrixSymbol smooth_spline_symbol() {
    return cosine_polynomial({160.0 / 240.0, -60.0 / 240.0, -96.0 / 240.0, -4.0 / 240.0});
}

inline MatrixSymbol one_d_laplacian_symbol() { return cosine_polynomial({2.0, -2.0}); }

}  // namespace gridsym
