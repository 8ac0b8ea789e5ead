#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <lapacke.h>

#include "gridsym/sparse.hpp"

namespace gridsym {

/// Column-major dense matrix backed by LAPACK.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::int64_t rows, std::int64_t cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {}

    static DenseMatrix from_sparse(const StructuredMatrix& m) {
        DenseMatrix out(m.rows(), m.cols());
        const auto& s = m.sparse;
        for (std::int64_t i = 0; i < s.rows(); ++i)
            for (auto p = s.indptr()[static_cast<std::size_t>(i)]; p < s.indptr()[static_cast<std::size_t>(i) + 1]; ++p)
                out(i, s.indices()[static_cast<std::size_t>(p)]) += s.values()[static_cast<std::size_t>(p)];
        for (const auto& t : m.low_rank)
            for (std::int64_t j = 0; j < out.cols(); ++j)
                for (std::int64_t i = 0; i < out.rows(); ++i)
                    out(i, j) += t.alpha * t.u[static_cast<std::size_t>(i)] * t.v[static_cast<std::size_t>(j)];
        return out;
    }

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    double& operator()(std::int64_t i, std::int64_t j) { return data_[static_cast<std::size_t>(j * rows_ + i)]; }
    double operator()(std::int64_t i, std::int64_t j) const { return data_[static_cast<std::size_t>(j * rows_ + i)]; }
    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<double> data_;
};

namespace detail {
inline void lapack_check(int info, const char* what) {
    if (info != 0) throw std::runtime_error(std::string(what) + " failed, info=" + std::to_string(info));
}
}  // namespace detail

/// All eigenvalues of a symmetric matrix, ascending. `cap` guards against
/// accidentally feeding huge systems to the O(n^3) path.
inline std::vector<double> sym_eigenvalues(const DenseMatrix& a, std::int64_t cap = 5000) {
    if (a.rows() != a.cols()) throw std::invalid_argument("sym_eigenvalues: matrix not square");
    const auto n = a.rows();
    if (n > cap) throw std::invalid_argument("sym_eigenvalues: dimension exceeds cap");
    DenseMatrix work = a;
    std::vector<double> w(static_cast<std::size_t>(n));
    detail::lapack_check(
        LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<int>(n), work.data(), static_cast<int>(n), w.data()),
        "dsyevd");
    return w;
}

inline std::vector<double> sym_eigenvalues(const StructuredMatrix& m, std::int64_t cap = 5000) {
    DenseMatrix a = DenseMatrix::from_sparse(m);
    double asym = 0.0;
    for (std::int64_t i = 0; i < a.rows(); ++i)
        for (std::int64_t j = 0; j < i; ++j) asym = std::max(asym, std::abs(a(i, j) - a(j, i)));
    if (asym > 1e-10) throw std::invalid_argument("sym_eigenvalues: input not symmetric");
    return sym_eigenvalues(a, cap);
}

/// Eigenvalues of the symmetric-definite pencil (A, B), ascending.
inline std::vector<double> generalized_sym_eigenvalues(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument("generalized_sym_eigenvalues: shape mismatch");
    const auto n = a.rows();
    DenseMatrix wa = a, wb = b;
    std::vector<double> w(static_cast<std::size_t>(n));
    detail::lapack_check(LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'N', 'L', static_cast<int>(n), wa.data(),
                                        static_cast<int>(n), wb.data(), static_cast<int>(n), w.data()),
                         "dsygvd");
    return w;
}

/// Largest |lambda| of a general (possibly nonsymmetric) matrix.
inline double spectral_radius(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("spectral_radius: matrix not square");
    const auto n = a.rows();
    DenseMatrix work = a;
    std::vector<double> wr(static_cast<std::size_t>(n)), wi(static_cast<std::size_t>(n));
    detail::lapack_check(LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', static_cast<int>(n), work.data(),
                                       static_cast<int>(n), wr.data(), wi.data(), nullptr, 1, nullptr, 1),
                         "dgeev");
    double rho = 0.0;
    for (std::size_t i = 0; i < wr.size(); ++i) rho = std::max(rho, std::hypot(wr[i], wi[i]));
    return rho;
}

/// Cholesky factorization of an SPD matrix with a reusable solve.
class CholeskySolver {
public:
    explicit CholeskySolver(DenseMatrix a) : n_(a.rows()), f_(std::move(a)) {
        if (f_.rows() != f_.cols()) throw std::invalid_argument("CholeskySolver: matrix not square");
        detail::lapack_check(LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', static_cast<int>(n_), f_.data(), static_cast<int>(n_)),
                             "dpotrf");
    }
    explicit CholeskySolver(const StructuredMatrix& m) : CholeskySolver(DenseMatrix::from_sparse(m)) {}

    std::int64_t size() const { return n_; }

    void solve_inplace(std::span<double> x) const {
        if (static_cast<std::int64_t>(x.size()) != n_) throw std::invalid_argument("CholeskySolver::solve: size mismatch");
        detail::lapack_check(LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', static_cast<int>(n_), 1, f_.data(),
                                            static_cast<int>(n_), x.data(), static_cast<int>(n_)),
                             "dpotrs");
    }

    std::vector<double> solve(std::span<const double> b) const {
        std::vector<double> x(b.begin(), b.end());
        solve_inplace(x);
        return x;
    }

private:
    std::int64_t n_ = 0;
    DenseMatrix f_;
};

/// Banded Cholesky (LAPACK dpbtrf/dpbtrs) for SPD matrices with small
/// bandwidth; backs the chain-structured direct solves.
class BandedCholeskySolver {
public:
    explicit BandedCholeskySolver(const CsrMatrix& a) : n_(a.rows()) {
        if (a.rows() != a.cols()) throw std::invalid_argument("BandedCholeskySolver: matrix not square");
        kd_ = 0;
        for (std::int64_t i = 0; i < n_; ++i)
            for (auto p = a.indptr()[static_cast<std::size_t>(i)]; p < a.indptr()[static_cast<std::size_t>(i) + 1]; ++p)
                kd_ = std::max<std::int64_t>(kd_, std::abs(static_cast<std::int64_t>(a.indices()[static_cast<std::size_t>(p)]) - i));
        band_.assign(static_cast<std::size_t>((kd_ + 1) * n_), 0.0);
        // lower 'L' banded storage, column-major: entry (i,j), j<=i<=j+kd at band[(i-j) + j*(kd+1)]
        for (std::int64_t i = 0; i < n_; ++i)
            for (auto p = a.indptr()[static_cast<std::size_t>(i)]; p < a.indptr()[static_cast<std::size_t>(i) + 1]; ++p) {
                const std::int64_t j = a.indices()[static_cast<std::size_t>(p)];
                if (j <= i) band_[static_cast<std::size_t>((i - j) + j * (kd_ + 1))] = a.values()[static_cast<std::size_t>(p)];
            }
        detail::lapack_check(LAPACKE_dpbtrf(LAPACK_COL_MAJOR, 'L', static_cast<int>(n_), static_cast<int>(kd_),
                                            band_.data(), static_cast<int>(kd_ + 1)),
                             "dpbtrf");
    }

    std::int64_t bandwidth() const { return kd_; }

    std::vector<double> solve(std::span<const double> b) const {
        std::vector<double> x(b.begin(), b.end());
        detail::lapack_check(LAPACKE_dpbtrs(LAPACK_COL_MAJOR, 'L', static_cast<int>(n_), static_cast<int>(kd_), 1,
                                            band_.data(), static_cast<int>(kd_ + 1), x.data(), static_cast<int>(n_)),
                             "dpbtrs");
        return x;
    }

private:
    std::int64_t n_ = 0;
    std::int64_t kd_ = 0;
    std::vector<double> band_;
};

/// Eigenvalues of a small complex Hermitian matrix, ascending.
inline std::vector<double> hermitian_eigenvalues(std::vector<std::complex<double>> a, std::int64_t n) {
    std::vector<double> w(static_cast<std::size_t>(n));
    detail::lapack_check(
        LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', static_cast<int>(n),
                       reinterpret_cast<lapack_complex_double*>(a.data()), static_cast<int>(n), w.data()),
        "zheevd");
    return w;
}

}  // namespace gridsym
