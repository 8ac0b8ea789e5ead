#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

namespace gridsym {

struct Triplet {
    std::int64_t row;
    std::int64_t col;
    double value;
};

/// Compressed sparse row matrix. Column indices are sorted within each row
/// and duplicates are summed at construction.
class CsrMatrix {
public:
    CsrMatrix() = default;

    CsrMatrix(std::int64_t rows, std::int64_t cols, std::vector<Triplet> trips)
        : rows_(rows), cols_(cols) {
        std::sort(trips.begin(), trips.end(), [](const Triplet& a, const Triplet& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        indptr_.assign(static_cast<std::size_t>(rows) + 1, 0);
        indices_.reserve(trips.size());
        values_.reserve(trips.size());
        for (std::size_t p = 0; p < trips.size();) {
            const auto r = trips[p].row;
            const auto c = trips[p].col;
            if (r < 0 || r >= rows || c < 0 || c >= cols)
                throw std::out_of_range("CsrMatrix: triplet outside matrix");
            double v = 0.0;
            while (p < trips.size() && trips[p].row == r && trips[p].col == c) v += trips[p++].value;
            if (v != 0.0) {
                indices_.push_back(static_cast<std::int32_t>(c));
                values_.push_back(v);
                ++indptr_[static_cast<std::size_t>(r) + 1];
            }
        }
        for (std::size_t r = 1; r < indptr_.size(); ++r) indptr_[r] += indptr_[r - 1];
    }

    static CsrMatrix identity(std::int64_t n) {
        std::vector<Triplet> t;
        t.reserve(static_cast<std::size_t>(n));
        for (std::int64_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
        return CsrMatrix(n, n, std::move(t));
    }

    std::int64_t rows() const { return rows_; }
    std::int64_t cols() const { return cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    std::span<const std::int64_t> indptr() const { return indptr_; }
    std::span<const std::int32_t> indices() const { return indices_; }
    std::span<const double> values() const { return values_; }

    void multiply(std::span<const double> x, std::span<double> y) const {
        if (static_cast<std::int64_t>(x.size()) != cols_ || static_cast<std::int64_t>(y.size()) != rows_)
            throw std::invalid_argument("CsrMatrix::multiply: dimension mismatch");
        for (std::int64_t i = 0; i < rows_; ++i) {
            double s = 0.0;
            for (auto p = indptr_[static_cast<std::size_t>(i)]; p < indptr_[static_cast<std::size_t>(i) + 1]; ++p)
                s += values_[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(indices_[static_cast<std::size_t>(p)])];
            y[static_cast<std::size_t>(i)] = s;
        }
    }

    /// y = A^T x
    void multiply_transpose(std::span<const double> x, std::span<double> y) const {
        if (static_cast<std::int64_t>(x.size()) != rows_ || static_cast<std::int64_t>(y.size()) != cols_)
            throw std::invalid_argument("CsrMatrix::multiply_transpose: dimension mismatch");
        std::fill(y.begin(), y.end(), 0.0);
        for (std::int64_t i = 0; i < rows_; ++i) {
            const double xi = x[static_cast<std::size_t>(i)];
            if (xi == 0.0) continue;
            for (auto p = indptr_[static_cast<std::size_t>(i)]; p < indptr_[static_cast<std::size_t>(i) + 1]; ++p)
                y[static_cast<std::size_t>(indices_[static_cast<std::size_t>(p)])] += values_[static_cast<std::size_t>(p)] * xi;
        }
    }

    double entry(std::int64_t i, std::int64_t j) const {
        for (auto p = indptr_[static_cast<std::size_t>(i)]; p < indptr_[static_cast<std::size_t>(i) + 1]; ++p)
            if (indices_[static_cast<std::size_t>(p)] == j) return values_[static_cast<std::size_t>(p)];
        return 0.0;
    }

    std::vector<double> diagonal() const {
        std::vector<double> d(static_cast<std::size_t>(std::min(rows_, cols_)), 0.0);
        for (std::int64_t i = 0; i < static_cast<std::int64_t>(d.size()); ++i) d[static_cast<std::size_t>(i)] = entry(i, i);
        return d;
    }

    CsrMatrix transpose() const {
        std::vector<Triplet> t;
        t.reserve(values_.size());
        for (std::int64_t i = 0; i < rows_; ++i)
            for (auto p = indptr_[static_cast<std::size_t>(i)]; p < indptr_[static_cast<std::size_t>(i) + 1]; ++p)
                t.push_back({indices_[static_cast<std::size_t>(p)], i, values_[static_cast<std::size_t>(p)]});
        return CsrMatrix(cols_, rows_, std::move(t));
    }

    bool is_symmetric(double tol = 0.0) const {
        if (rows_ != cols_) return false;
        CsrMatrix at = transpose();
        if (at.indices_ != indices_ || at.indptr_ != indptr_) return false;
        for (std::size_t p = 0; p < values_.size(); ++p)
            if (std::abs(at.values_[p] - values_[p]) > tol) return false;
        return true;
    }

    double max_abs_diff(const CsrMatrix& other) const {
        if (rows_ != other.rows_ || cols_ != other.cols_)
            throw std::invalid_argument("max_abs_diff: shape mismatch");
        double m = 0.0;
        for (std::int64_t i = 0; i < rows_; ++i) {
            for (auto p = indptr_[static_cast<std::size_t>(i)]; p < indptr_[static_cast<std::size_t>(i) + 1]; ++p)
                m = std::max(m, std::abs(values_[static_cast<std::size_t>(p)] - other.entry(i, indices_[static_cast<std::size_t>(p)])));
            for (auto p = other.indptr_[static_cast<std::size_t>(i)]; p < other.indptr_[static_cast<std::size_t>(i) + 1]; ++p)
                m = std::max(m, std::abs(other.values_[static_cast<std::size_t>(p)] - entry(i, other.indices_[static_cast<std::size_t>(p)])));
        }
        return m;
    }

private:
    std::int64_t rows_ = 0;
    std::int64_t cols_ = 0;
    std::vector<std::int64_t> indptr_;
    std::vector<std::int32_t> indices_;
    std::vector<double> values_;
};

/// C = A * B via Gustavson's row-merge with a dense accumulator.
inline CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
    const auto ap = a.indptr();
    const auto ai = a.indices();
    const auto av = a.values();
    const auto bp = b.indptr();
    const auto bi = b.indices();
    const auto bv = b.values();

    std::vector<double> acc(static_cast<std::size_t>(b.cols()), 0.0);
    std::vector<std::int32_t> marked;
    std::vector<Triplet> out;
    for (std::int64_t i = 0; i < a.rows(); ++i) {
        marked.clear();
        for (auto p = ap[static_cast<std::size_t>(i)]; p < ap[static_cast<std::size_t>(i) + 1]; ++p) {
            const auto k = static_cast<std::size_t>(ai[static_cast<std::size_t>(p)]);
            const double va = av[static_cast<std::size_t>(p)];
            for (auto q = bp[k]; q < bp[k + 1]; ++q) {
                const auto j = bi[static_cast<std::size_t>(q)];
                if (acc[static_cast<std::size_t>(j)] == 0.0) marked.push_back(j);
                acc[static_cast<std::size_t>(j)] += va * bv[static_cast<std::size_t>(q)];
            }
        }
        for (auto j : marked) {
            if (acc[static_cast<std::size_t>(j)] != 0.0)
                out.push_back({i, j, acc[static_cast<std::size_t>(j)]});
            acc[static_cast<std::size_t>(j)] = 0.0;
        }
    }
    return CsrMatrix(a.rows(), b.cols(), std::move(out));
}

/// Galerkin triple product P^T A P.
inline CsrMatrix galerkin(const CsrMatrix& p, const CsrMatrix& a) {
    CsrMatrix ap = multiply(a, p);
    return multiply(p.transpose(), ap);
}

struct LowRankTerm {
    double alpha = 0.0;
    std::vector<double> u;  // contributes alpha * u (v^T x)
    std::vector<double> v;
};

/// Sparse core plus symbolically-held low rank terms; the terms are applied
/// in matvec form and never densified.
struct StructuredMatrix {
    CsrMatrix sparse;
    std::vector<LowRankTerm> low_rank;

    StructuredMatrix() = default;
    explicit StructuredMatrix(CsrMatrix m) : sparse(std::move(m)) {}

    std::int64_t rows() const { return sparse.rows(); }
    std::int64_t cols() const { return sparse.cols(); }

    void multiply(std::span<const double> x, std::span<double> y) const {
        sparse.multiply(x, y);
        for (const auto& t : low_rank) {
            double dot = 0.0;
            for (std::size_t i = 0; i < t.v.size(); ++i) dot += t.v[i] * x[i];
            const double c = t.alpha * dot;
            for (std::size_t i = 0; i < t.u.size(); ++i) y[i] += c * t.u[i];
        }
    }

    std::vector<double> apply(std::span<const double> x) const {
        std::vector<double> y(static_cast<std::size_t>(rows()));
        multiply(x, y);
        return y;
    }

    std::vector<double> diagonal() const {
        auto d = sparse.diagonal();
        for (const auto& t : low_rank)
            for (std::size_t i = 0; i < d.size(); ++i) d[i] += t.alpha * t.u[i] * t.v[i];
        return d;
    }
};

inline StructuredMatrix add_low_rank(StructuredMatrix a, std::vector<double> u, std::vector<double> v, double alpha) {
    if (static_cast<std::int64_t>(u.size()) != a.rows() || static_cast<std::int64_t>(v.size()) != a.cols())
        throw std::invalid_argument("add_low_rank: dimension mismatch");
    a.low_rank.push_back({alpha, std::move(u), std::move(v)});
    return a;
}

// small vector helpers shared by solvers and tests
inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace gridsym
