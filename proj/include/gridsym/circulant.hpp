#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "gridsym/dense.hpp"
#include "gridsym/operators.hpp"

namespace gridsym {

/// Block circulant with nu x nu blocks on a length-n cycle, diagonalized by
/// the discrete Fourier basis: eigenblock(m) = sum_l c_l e^{-2 pi i l m / n}.
/// Solves and matvecs run through FFTW; an optional rank-1 term alpha e e^T
/// folds into the zero-frequency block.
class BlockCirculant {
public:
    BlockCirculant(std::int64_t n, std::int64_t nu, const std::map<MultiIndex, std::vector<double>>& residue_blocks,
                   double rank_one_alpha = 0.0)
        : n_(n), nu_(nu) {
        coeff_.assign(static_cast<std::size_t>(n * nu * nu), 0.0);
        for (const auto& [l, blk] : residue_blocks) {
            if (l.size() != 1 || l[0] < 0 || l[0] >= n) throw std::invalid_argument("BlockCirculant: bad residue");
            for (std::int64_t r = 0; r < nu; ++r)
                for (std::int64_t c = 0; c < nu; ++c)
                    coeff_[idx(l[0], r, c)] = blk[static_cast<std::size_t>(r * nu + c)];
        }
        // eigenblocks via FFT of the coefficient sequence, per (r,c)
        eig_.assign(static_cast<std::size_t>(n * nu * nu), {0.0, 0.0});
        std::vector<std::complex<double>> buf(static_cast<std::size_t>(n));
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(buf.data()),
                                          reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD, FFTW_ESTIMATE);
        for (std::int64_t r = 0; r < nu; ++r)
            for (std::int64_t c = 0; c < nu; ++c) {
                for (std::int64_t l = 0; l < n; ++l) buf[static_cast<std::size_t>(l)] = coeff_[idx(l, r, c)];
                fftw_execute(plan);
                for (std::int64_t m = 0; m < n; ++m) eig_[idx(m, r, c)] = buf[static_cast<std::size_t>(m)];
            }
        fftw_destroy_plan(plan);
        // rank-1 alpha * ones * ones^T lands on frequency zero: + alpha * n * J_nu
        if (rank_one_alpha != 0.0)
            for (std::int64_t r = 0; r < nu; ++r)
                for (std::int64_t c = 0; c < nu; ++c)
                    eig_[idx(0, r, c)] += rank_one_alpha * static_cast<double>(n);

        fwd_ = fftw_plan_dft_1d(static_cast<int>(n), nullptr, nullptr, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_1d(static_cast<int>(n), nullptr, nullptr, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);

        // factor each eigenblock (complex LU with partial pivoting, nu is tiny)
        factors_ = eig_;
        pivots_.assign(static_cast<std::size_t>(n * nu), 0);
        singular_ = false;
        for (std::int64_t m = 0; m < n; ++m) {
            if (!lu_factor(m)) singular_ = true;
        }
    }

    BlockCirculant(const BlockCirculant&) = delete;
    BlockCirculant& operator=(const BlockCirculant&) = delete;
    ~BlockCirculant() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }

    std::int64_t size() const { return n_ * nu_; }
    std::int64_t block_size() const { return nu_; }
    bool singular() const { return singular_; }

    /// First column of the scalar circulant (tests).
    std::vector<double> first_column() const {
        if (nu_ != 1) throw std::invalid_argument("first_column: scalar circulants only");
        std::vector<double> c(static_cast<std::size_t>(n_));
        for (std::int64_t l = 0; l < n_; ++l) c[static_cast<std::size_t>(l)] = coeff_[idx(l, 0, 0)];
        return c;
    }

    std::vector<double> solve(std::span<const double> b) const {
        if (singular_) throw std::runtime_error("BlockCirculant::solve: singular eigenblock");
        return transform(b, true);
    }

    std::vector<double> multiply(std::span<const double> x) const { return transform(x, false); }

private:
    std::size_t idx(std::int64_t m, std::int64_t r, std::int64_t c) const {
        return static_cast<std::size_t>((m * nu_ + r) * nu_ + c);
    }

    bool lu_factor(std::int64_t m) {
        auto* a = &factors_[idx(m, 0, 0)];
        auto* piv = &pivots_[static_cast<std::size_t>(m * nu_)];
        const auto nu = static_cast<std::size_t>(nu_);
        for (std::size_t col = 0; col < nu; ++col) {
            std::size_t p = col;
            for (std::size_t r = col + 1; r < nu; ++r)
                if (std::abs(a[r * nu + col]) > std::abs(a[p * nu + col])) p = r;
            piv[col] = static_cast<int>(p);
            if (std::abs(a[p * nu + col]) < 1e-300) return false;
            if (p != col)
                for (std::size_t c = 0; c < nu; ++c) std::swap(a[p * nu + c], a[col * nu + c]);
            for (std::size_t r = col + 1; r < nu; ++r) {
                a[r * nu + col] /= a[col * nu + col];
                for (std::size_t c = col + 1; c < nu; ++c) a[r * nu + c] -= a[r * nu + col] * a[col * nu + c];
            }
        }
        return true;
    }

    void lu_solve(std::int64_t m, std::complex<double>* x) const {
        const auto* a = &factors_[idx(m, 0, 0)];
        const auto* piv = &pivots_[static_cast<std::size_t>(m * nu_)];
        const auto nu = static_cast<std::size_t>(nu_);
        for (std::size_t col = 0; col < nu; ++col)
            if (static_cast<std::size_t>(piv[col]) != col) std::swap(x[piv[col]], x[col]);
        for (std::size_t r = 1; r < nu; ++r)
            for (std::size_t c = 0; c < r; ++c) x[r] -= a[r * nu + c] * x[c];
        for (std::size_t r = nu; r-- > 0;) {
            for (std::size_t c = r + 1; c < nu; ++c) x[r] -= a[r * nu + c] * x[c];
            x[r] /= a[r * nu + r];
        }
    }

    std::vector<double> transform(std::span<const double> v, bool invert) const {
        if (static_cast<std::int64_t>(v.size()) != size()) throw std::invalid_argument("BlockCirculant: size mismatch");
        const auto n = static_cast<std::size_t>(n_);
        const auto nu = static_cast<std::size_t>(nu_);
        std::vector<std::vector<std::complex<double>>> slot(nu, std::vector<std::complex<double>>(n));
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t r = 0; r < nu; ++r) slot[r][k] = v[k * nu + r];
        for (std::size_t r = 0; r < nu; ++r)
            fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(slot[r].data()),
                             reinterpret_cast<fftw_complex*>(slot[r].data()));
        std::vector<std::complex<double>> blockv(nu);
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t r = 0; r < nu; ++r) blockv[r] = slot[r][m];
            if (invert) {
                lu_solve(static_cast<std::int64_t>(m), blockv.data());
            } else {
                std::vector<std::complex<double>> y(nu, {0.0, 0.0});
                for (std::size_t r = 0; r < nu; ++r)
                    for (std::size_t c = 0; c < nu; ++c) y[r] += eig_[idx(static_cast<std::int64_t>(m), static_cast<std::int64_t>(r), static_cast<std::int64_t>(c))] * blockv[c];
                blockv = y;
            }
            for (std::size_t r = 0; r < nu; ++r) slot[r][m] = blockv[r];
        }
        for (std::size_t r = 0; r < nu; ++r)
            fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(slot[r].data()),
                             reinterpret_cast<fftw_complex*>(slot[r].data()));
        std::vector<double> out(v.size());
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t r = 0; r < nu; ++r) out[k * nu + r] = slot[r][k].real() / static_cast<double>(n);
        return out;
    }

    std::int64_t n_;
    std::int64_t nu_;
    std::vector<double> coeff_;
    std::vector<std::complex<double>> eig_;
    std::vector<std::complex<double>> factors_;
    std::vector<int> pivots_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
    bool singular_ = false;
};

/// Strang circulant of a 1-level (block) Toeplitz operator.
inline std::unique_ptr<BlockCirculant> strang_circulant(const ToeplitzCoefficients& t, double rank_one_alpha = 0.0,
                                                        bool allow_full_band = false) {
    if (t.n.size() != 1) throw std::invalid_argument("strang_circulant: 1-level only (use the masked dense path in 2-D)");
    auto wrapped = strang_wrap(t, allow_full_band);
    return std::make_unique<BlockCirculant>(t.n[0], t.nu, wrapped, rank_one_alpha);
}

/// Dense restriction of a d-level scalar circulant to a kept node set; the
/// masked circulant is no longer Fourier-diagonalizable, so it is factored
/// once and reused (the circulant preconditioner on an immersed domain).
inline DenseMatrix masked_circulant_dense(const ToeplitzCoefficients& t,
                                          const std::vector<MultiIndex>& kept_nodes, double rank_one_alpha,
                                          bool allow_full_band = true) {
    if (t.nu != 1) throw std::invalid_argument("masked_circulant_dense: scalar blocks only");
    auto wrapped = strang_wrap(t, allow_full_band);
    // dense residue table for O(1) lookups
    IndexRange box(t.n);
    std::vector<double> table(static_cast<std::size_t>(box.size()), 0.0);
    for (const auto& [l, blk] : wrapped) {
        MultiIndex shifted(l.size());
        for (std::size_t r = 0; r < l.size(); ++r) shifted[r] = l[r] + 1;
        table[static_cast<std::size_t>(box.flatten(shifted))] = blk[0];
    }
    const auto m = static_cast<std::int64_t>(kept_nodes.size());
    DenseMatrix out(m, m);
    for (std::int64_t a = 0; a < m; ++a)
        for (std::int64_t b = 0; b < m; ++b) {
            MultiIndex l(t.n.size());
            for (std::size_t r = 0; r < t.n.size(); ++r) {
                l[r] = (kept_nodes[static_cast<std::size_t>(a)][r] - kept_nodes[static_cast<std::size_t>(b)][r]) % t.n[r];
                if (l[r] < 0) l[r] += t.n[r];
                l[r] += 1;
            }
            out(a, b) = table[static_cast<std::size_t>(box.flatten(l))] + rank_one_alpha;
        }
    return out;
}

}  // namespace gridsym
