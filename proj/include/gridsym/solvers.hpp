#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gridsym/circulant.hpp"
#include "gridsym/dense.hpp"
#include "gridsym/operators.hpp"
#include "gridsym/sparse.hpp"

namespace gridsym {

struct StoppingRule {
    double tolerance = 1e-6;
    std::int64_t max_iterations = 100;
    const std::vector<double>* reference = nullptr;  // when set: relative error against this vector
    bool absolute = false;                           // ||r|| <= tol instead of ||r||/||b|| <= tol
};

struct SolveReport {
    std::int64_t iterations = 0;
    std::vector<double> residual_history;  // iterations + 1 entries
    bool converged = false;
    bool breakdown = false;
    double seconds = 0.0;
    std::int64_t preconditioner_applications = 0;
    std::vector<double> x;
};

class Preconditioner {
public:
    virtual ~Preconditioner() = default;
    virtual std::vector<double> apply(std::span<const double> r) const = 0;
};

struct IdentityPreconditioner final : Preconditioner {
    std::vector<double> apply(std::span<const double> r) const override { return {r.begin(), r.end()}; }
};

/// Dense Cholesky-backed preconditioner (masked circulants, small systems).
struct CholeskyPreconditioner final : Preconditioner {
    CholeskySolver solver;
    explicit CholeskyPreconditioner(DenseMatrix m) : solver(std::move(m)) {}
    std::vector<double> apply(std::span<const double> r) const override { return solver.solve(r); }
};

/// Banded SPD Toeplitz preconditioner, e.g. T_n(2 - 2cos).
struct BandedToeplitzPreconditioner final : Preconditioner {
    BandedCholeskySolver solver;
    explicit BandedToeplitzPreconditioner(const CsrMatrix& m) : solver(m) {}
    std::vector<double> apply(std::span<const double> r) const override { return solver.solve(r); }
};

/// Circulant (plus rank-1) preconditioner solving through the FFT.
struct CirculantPreconditioner final : Preconditioner {
    std::unique_ptr<BlockCirculant> circulant;
    explicit CirculantPreconditioner(std::unique_ptr<BlockCirculant> c) : circulant(std::move(c)) {}
    std::vector<double> apply(std::span<const double> r) const override { return circulant->solve(r); }
};

namespace detail {
inline double stop_metric(const StructuredMatrix& a, std::span<const double> x, std::span<const double> b,
                          std::span<double> scratch, double norm_b, const StoppingRule& stop) {
    if (stop.reference != nullptr) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double dlt = x[i] - (*stop.reference)[i];
            num += dlt * dlt;
            den += (*stop.reference)[i] * (*stop.reference)[i];
        }
        return std::sqrt(num / den);
    }
    a.multiply(x, scratch);
    double rr = 0.0;
    for (std::size_t i = 0; i < scratch.size(); ++i) {
        const double r = b[i] - scratch[i];
        rr += r * r;
    }
    return stop.absolute ? std::sqrt(rr) : std::sqrt(rr) / norm_b;
}
}  // namespace detail

/// Conjugate gradients for SPD (or consistent semidefinite) systems, zero
/// initial guess, relative-residual stopping. `flexible` switches the beta
/// update to Polak-Ribiere form, which tolerates inexact preconditioners.
inline SolveReport cg(const StructuredMatrix& a, std::span<const double> b, const StoppingRule& stop = {},
                      const Preconditioner* m = nullptr, bool flexible = false) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto n = static_cast<std::size_t>(a.rows());
    SolveReport rep;
    std::vector<double> x(n, 0.0), r(b.begin(), b.end()), ap(n);
    const double nb = norm2(b);
    if (nb == 0.0) {
        rep.converged = true;
        rep.x = x;
        rep.residual_history = {0.0};
        return rep;
    }
    std::vector<double> z = m != nullptr ? m->apply(r) : r;
    if (m != nullptr) ++rep.preconditioner_applications;
    std::vector<double> p = z;
    double rz = dot(r, z);
    rep.residual_history.push_back(1.0);
    for (std::int64_t it = 1; it <= stop.max_iterations; ++it) {
        a.multiply(p, ap);
        const double pap = dot(p, ap);
        if (pap <= 0.0) {
            rep.breakdown = true;
            break;
        }
        const double alpha = rz / pap;
        axpy(alpha, p, x);
        axpy(-alpha, ap, r);
        rep.iterations = it;
        const double rel = norm2(r) / nb;
        rep.residual_history.push_back(rel);
        bool done = false;
        if (stop.reference != nullptr) {
            double num = 0.0, den = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dlt = x[i] - (*stop.reference)[i];
                num += dlt * dlt;
                den += (*stop.reference)[i] * (*stop.reference)[i];
            }
            done = std::sqrt(num / den) <= stop.tolerance;
        } else {
            done = rel <= stop.tolerance;
        }
        if (done) {
            rep.converged = true;
            break;
        }
        std::vector<double> z2 = m != nullptr ? m->apply(r) : r;
        if (m != nullptr) ++rep.preconditioner_applications;
        const double rz2 = dot(r, z2);
        double beta = rz2 / rz;
        if (flexible) {
            // Polak-Ribiere: beta = z_{k+1}^T (r_{k+1} - r_k) / (z_k^T r_k)
            // with r_{k+1} - r_k = -alpha A p
            double zap = 0.0;
            for (std::size_t i = 0; i < n; ++i) zap += z2[i] * ap[i];
            beta = -alpha * zap / rz;
        }
        for (std::size_t i = 0; i < n; ++i) p[i] = z2[i] + beta * p[i];
        z = std::move(z2);
        rz = rz2;
    }
    rep.x = std::move(x);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline SolveReport pcg(const StructuredMatrix& a, std::span<const double> b, const Preconditioner& m,
                       const StoppingRule& stop = {}) {
    return cg(a, b, stop, &m);
}

// ---------------------------------------------------------------------------
// smoothers
// ---------------------------------------------------------------------------

struct SmootherSpec {
    enum class Kind { GaussSeidel, Richardson } kind = Kind::GaussSeidel;
    double omega_pre = 1.0;   // Richardson relaxation for pre-sweeps
    double omega_post = 1.0;  // Richardson relaxation for post-sweeps
    std::int64_t nu_pre = 1;
    std::int64_t nu_post = 1;
    bool symmetric = false;  // backward post-sweeps; keeps the cycle symmetric for PCG

    static SmootherSpec gauss_seidel(std::int64_t pre = 1, std::int64_t post = 1) {
        SmootherSpec s;
        s.kind = Kind::GaussSeidel;
        s.nu_pre = pre;
        s.nu_post = post;
        return s;
    }

    static SmootherSpec symmetric_gauss_seidel() {
        SmootherSpec s = gauss_seidel();
        s.symmetric = true;
        return s;
    }
    static SmootherSpec richardson(double omega_pre, double omega_post, std::int64_t pre = 1, std::int64_t post = 1) {
        SmootherSpec s;
        s.kind = Kind::Richardson;
        s.omega_pre = omega_pre;
        s.omega_post = omega_post;
        s.nu_pre = pre;
        s.nu_post = post;
        return s;
    }
};

/// One Gauss-Seidel sweep on sparse + rank-1 terms; the rank-1 dot products
/// are maintained incrementally so the sweep stays O(nnz).
inline void gauss_seidel_sweep(const StructuredMatrix& a, std::span<const double> b, std::span<double> x,
                               bool backward = false) {
    const auto& s = a.sparse;
    const auto n = s.rows();
    std::vector<double> lr_dot(a.low_rank.size(), 0.0);
    for (std::size_t t = 0; t < a.low_rank.size(); ++t)
        for (std::size_t i = 0; i < x.size(); ++i) lr_dot[t] += a.low_rank[t].v[i] * x[i];
    for (std::int64_t step = 0; step < n; ++step) {
        const std::int64_t i = backward ? n - 1 - step : step;
        double acc = 0.0, dia = 0.0;
        for (auto p = s.indptr()[static_cast<std::size_t>(i)]; p < s.indptr()[static_cast<std::size_t>(i) + 1]; ++p) {
            const auto j = s.indices()[static_cast<std::size_t>(p)];
            if (j == i)
                dia = s.values()[static_cast<std::size_t>(p)];
            else
                acc += s.values()[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(j)];
        }
        for (std::size_t t = 0; t < a.low_rank.size(); ++t) {
            const auto& lt = a.low_rank[t];
            dia += lt.alpha * lt.u[static_cast<std::size_t>(i)] * lt.v[static_cast<std::size_t>(i)];
            acc += lt.alpha * lt.u[static_cast<std::size_t>(i)] *
                   (lr_dot[t] - lt.v[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)]);
        }
        if (dia == 0.0) throw std::runtime_error("gauss_seidel_sweep: zero diagonal");
        const double xi = (b[static_cast<std::size_t>(i)] - acc) / dia;
        for (std::size_t t = 0; t < a.low_rank.size(); ++t)
            lr_dot[t] += a.low_rank[t].v[static_cast<std::size_t>(i)] * (xi - x[static_cast<std::size_t>(i)]);
        x[static_cast<std::size_t>(i)] = xi;
    }
}

inline void richardson_sweep(const StructuredMatrix& a, std::span<const double> b, std::span<double> x, double omega) {
    std::vector<double> ax(x.size());
    a.multiply(x, ax);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += omega * (b[i] - ax[i]);
}

inline void smoother_apply(const SmootherSpec& spec, const StructuredMatrix& a, std::span<const double> b,
                           std::span<double> x, bool post) {
    const auto sweeps = post ? spec.nu_post : spec.nu_pre;
    for (std::int64_t s = 0; s < sweeps; ++s) {
        if (spec.kind == SmootherSpec::Kind::GaussSeidel)
            gauss_seidel_sweep(a, b, x, post && spec.symmetric);
        else
            richardson_sweep(a, b, x, post ? spec.omega_post : spec.omega_pre);
    }
}

// ---------------------------------------------------------------------------
// multigrid
// ---------------------------------------------------------------------------

/// Galerkin hierarchy: level 0 is the fine system; P[l] transfers level l+1
/// corrections up to level l. The coarsest level owns a direct factorization
/// (banded when the profile is narrow, dense otherwise).
class MgHierarchy {
public:
    std::vector<StructuredMatrix> a;
    std::vector<CsrMatrix> p;

    void push_level(const CsrMatrix& transfer) {
        const auto& fine = a.back();
        StructuredMatrix coarse(galerkin(transfer, fine.sparse));
        for (const auto& t : fine.low_rank) {
            std::vector<double> u(static_cast<std::size_t>(transfer.cols()));
            std::vector<double> v(static_cast<std::size_t>(transfer.cols()));
            transfer.multiply_transpose(t.u, u);
            transfer.multiply_transpose(t.v, v);
            coarse.low_rank.push_back({t.alpha, std::move(u), std::move(v)});
        }
        p.push_back(transfer);
        a.push_back(std::move(coarse));
    }

    void finalize() {
        const auto& c = a.back();
        std::int64_t kd = 0;
        for (std::int64_t i = 0; i < c.sparse.rows(); ++i)
            for (auto q = c.sparse.indptr()[static_cast<std::size_t>(i)]; q < c.sparse.indptr()[static_cast<std::size_t>(i) + 1]; ++q)
                kd = std::max<std::int64_t>(kd, std::abs(static_cast<std::int64_t>(c.sparse.indices()[static_cast<std::size_t>(q)]) - i));
        if (c.low_rank.empty() && kd * 3 <= c.sparse.rows()) {
            banded_ = std::make_unique<BandedCholeskySolver>(c.sparse);
        } else {
            dense_ = std::make_unique<CholeskySolver>(DenseMatrix::from_sparse(c));
        }
    }

    std::size_t levels() const { return a.size(); }

    std::vector<double> coarse_solve(std::span<const double> b) const {
        if (banded_) return banded_->solve(b);
        return dense_->solve(b);
    }

private:
    std::unique_ptr<BandedCholeskySolver> banded_;
    std::unique_ptr<CholeskySolver> dense_;
};

namespace detail {
inline void mg_cycle(const MgHierarchy& h, const SmootherSpec& smoother, std::size_t level, std::span<const double> b,
                     std::span<double> x) {
    if (level == h.levels() - 1) {
        auto y = h.coarse_solve(b);
        std::copy(y.begin(), y.end(), x.begin());
        return;
    }
    const auto& a = h.a[level];
    smoother_apply(smoother, a, b, x, false);
    std::vector<double> r(x.size());
    a.multiply(x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    std::vector<double> rc(static_cast<std::size_t>(h.p[level].cols()));
    h.p[level].multiply_transpose(r, rc);
    std::vector<double> ec(rc.size(), 0.0);
    mg_cycle(h, smoother, level + 1, rc, ec);
    std::vector<double> up(x.size());
    h.p[level].multiply(ec, up);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += up[i];
    smoother_apply(smoother, a, b, x, true);
}
}  // namespace detail

/// Iterate V-cycles (two-grid when the hierarchy has two levels) until the
/// stopping rule is met.
inline SolveReport mg_solve(const MgHierarchy& h, std::span<const double> b, const SmootherSpec& smoother,
                            const StoppingRule& stop = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    SolveReport rep;
    const auto n = static_cast<std::size_t>(h.a.front().rows());
    std::vector<double> x(n, 0.0), scratch(n);
    const double nb = norm2(b);
    rep.residual_history.push_back(1.0);
    for (std::int64_t it = 1; it <= stop.max_iterations; ++it) {
        detail::mg_cycle(h, smoother, 0, b, x);
        rep.iterations = it;
        const double metric = detail::stop_metric(h.a.front(), x, b, scratch, nb, stop);
        rep.residual_history.push_back(metric);
        if (metric <= stop.tolerance) {
            rep.converged = true;
            break;
        }
    }
    rep.x = std::move(x);
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// Multigrid as a PCG preconditioner: V-cycles from a zero guess until the
/// inner relative residual passes the fixed inner tolerance.
struct VCyclePreconditioner final : Preconditioner {
    const MgHierarchy* hierarchy;
    SmootherSpec smoother;
    double inner_tolerance = 1e-1;
    std::int64_t inner_cap = 30;

    VCyclePreconditioner(const MgHierarchy& h, SmootherSpec s, double tol = 1e-1)
        : hierarchy(&h), smoother(s), inner_tolerance(tol) {}

    std::vector<double> apply(std::span<const double> r) const override {
        const auto n = r.size();
        std::vector<double> z(n, 0.0), az(n);
        const double nr = norm2(r);
        if (nr == 0.0) return z;
        for (std::int64_t it = 0; it < inner_cap; ++it) {
            detail::mg_cycle(*hierarchy, smoother, 0, r, z);
            hierarchy->a.front().multiply(z, az);
            double rr = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = r[i] - az[i];
                rr += d * d;
            }
            if (std::sqrt(rr) / nr <= inner_tolerance) break;
        }
        return z;
    }
};

/// Solve the singular Neumann system through the rank-one shifted SPD matrix
/// A = Delta + (1/d) e e^T; requires a compatible (mean-free) right-hand side.
inline SolveReport neumann_rank_one_solve(const StructuredMatrix& laplacian, std::span<const double> b,
                                          const StoppingRule& stop = {}, const Preconditioner* m = nullptr) {
    const auto d = laplacian.rows();
    double mean = 0.0;
    for (double v : b) mean += v;
    const double nb = norm2(b);
    if (std::abs(mean) > 1e-10 * nb * std::sqrt(static_cast<double>(d)))
        throw std::invalid_argument("neumann_rank_one_solve: right-hand side has nonzero mean (not in range)");
    StructuredMatrix shifted = laplacian;
    shifted.low_rank.push_back({1.0 / static_cast<double>(d), std::vector<double>(static_cast<std::size_t>(d), 1.0),
                                std::vector<double>(static_cast<std::size_t>(d), 1.0)});
    return cg(shifted, b, stop, m);
}

}  // namespace gridsym
