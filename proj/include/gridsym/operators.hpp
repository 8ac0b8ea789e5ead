#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gridsym/core.hpp"
#include "gridsym/graph.hpp"
#include "gridsym/sparse.hpp"
#include "gridsym/symbol.hpp"

namespace gridsym {

/// Graph Laplacian D + K - W as a sparse matrix; node ids follow the graph's
/// node order, diamond slots fastest.
inline StructuredMatrix assemble_laplacian(const GridGraph& g) {
    const auto d = g.num_nodes();
    std::vector<Triplet> trips;
    trips.reserve(g.edges.size() * 2 + static_cast<std::size_t>(d));
    std::vector<double> diag(static_cast<std::size_t>(d), 0.0);
    for (const auto& e : g.edges) {
        if (e.a == e.b) throw std::invalid_argument("assemble_laplacian: self-loop");
        trips.push_back({e.a, e.b, -e.w});
        trips.push_back({e.b, e.a, -e.w});
        diag[static_cast<std::size_t>(e.a)] += e.w;
        diag[static_cast<std::size_t>(e.b)] += e.w;
    }
    for (std::int64_t i = 0; i < d; ++i)
        trips.push_back({i, i, diag[static_cast<std::size_t>(i)] + g.kappa[static_cast<std::size_t>(i)]});
    return StructuredMatrix(CsrMatrix(d, d, std::move(trips)));
}

/// d-level block Toeplitz matrix with blocks fhat_{i-j}; coefficients must be
/// real (the matrix families here are real symmetric).
inline StructuredMatrix toeplitz_from_symbol(const MultiIndex& n, const MatrixSymbol& f) {
    if (n.size() != f.dim()) throw std::invalid_argument("toeplitz_from_symbol: dimension mismatch");
    IndexRange box(n);
    const auto nu = f.block_size();
    const auto dim = box.size() * nu;
    std::vector<Triplet> trips;
    for (const auto& [k, blk] : f.coefficients()) {
        for (std::size_t r = 0; r < n.size(); ++r)
            if (std::abs(k[r]) >= n[r])
                throw std::invalid_argument("toeplitz_from_symbol: coefficient offset exceeds matrix size");
        for (const auto& v : blk.a)
            if (std::abs(v.imag()) > 1e-14)
                throw std::invalid_argument("toeplitz_from_symbol: complex coefficients cannot form a real matrix");
    }
    box.for_each([&](const MultiIndex& i) {
        const auto row_base = box.flatten(i) * nu;
        for (const auto& [k, blk] : f.coefficients()) {
            const auto j = i - k;
            if (!box.contains(j)) continue;
            const auto col_base = box.flatten(j) * nu;
            for (std::int64_t r = 0; r < nu; ++r)
                for (std::int64_t c = 0; c < nu; ++c) {
                    const double v = blk(r, c).real();
                    if (v != 0.0) trips.push_back({row_base + r, col_base + c, v});
                }
        }
    });
    return StructuredMatrix(CsrMatrix(dim, dim, std::move(trips)));
}

/// Cutting matrix selecting every g-th index. For g | n this is the selector
/// delta_{i-gj} (i = 0..n-1, j = 0..k-1). Otherwise k = floor(n/g) and the
/// selection shifts to i = gj + g - 1, which keeps the coarse points interior
/// (the standard full-weighting alignment for n = 2^t - 1).
inline CsrMatrix cutting_matrix(std::int64_t n, std::int64_t g, std::optional<std::int64_t> offset = std::nullopt) {
    if (g < 2) throw std::invalid_argument("cutting_matrix: coarsening factor must be >= 2");
    const std::int64_t off = offset.value_or(n % g == 0 ? 0 : g - 1);
    if (off < 0 || off >= g) throw std::invalid_argument("cutting_matrix: offset outside [0, g)");
    const std::int64_t k = (n - off - 1) / g + 1;
    if (k < 1) throw std::invalid_argument("cutting_matrix: no coarse points");
    std::vector<Triplet> trips;
    for (std::int64_t j = 0; j < k; ++j) trips.push_back({g * j + off, j, 1.0});
    return CsrMatrix(n, k, std::move(trips));
}

/// Kronecker product of per-axis cutting matrices.
inline CsrMatrix cutting_matrix_tensor(const MultiIndex& n, std::int64_t g,
                                       std::optional<std::int64_t> offset = std::nullopt) {
    CsrMatrix out;
    bool first = true;
    for (auto nr : n) {
        CsrMatrix kr = cutting_matrix(nr, g, offset);
        if (first) {
            out = kr;
            first = false;
        } else {
            // kron(out, kr)
            std::vector<Triplet> trips;
            for (std::int64_t i = 0; i < out.rows(); ++i)
                for (auto p = out.indptr()[static_cast<std::size_t>(i)]; p < out.indptr()[static_cast<std::size_t>(i) + 1]; ++p) {
                    const auto j = out.indices()[static_cast<std::size_t>(p)];
                    const auto v = out.values()[static_cast<std::size_t>(p)];
                    for (std::int64_t i2 = 0; i2 < kr.rows(); ++i2)
                        for (auto q = kr.indptr()[static_cast<std::size_t>(i2)]; q < kr.indptr()[static_cast<std::size_t>(i2) + 1]; ++q)
                            trips.push_back({i * kr.rows() + i2, static_cast<std::int64_t>(j) * kr.cols() + kr.indices()[static_cast<std::size_t>(q)],
                                             v * kr.values()[static_cast<std::size_t>(q)]});
                }
            out = CsrMatrix(out.rows() * kr.rows(), out.cols() * kr.cols(), std::move(trips));
        }
    }
    return out;
}

/// T_n(p) K_n for a scalar cosine polynomial p (coefficients c0, c1, ...).
inline CsrMatrix projector_axis(std::int64_t n, std::int64_t g, const std::vector<double>& p,
                                std::optional<std::int64_t> offset = std::nullopt) {
    const std::int64_t off = offset.value_or(g - 1);
    const std::int64_t k = (n - off - 1) / g + 1;
    if (k < 1) throw std::invalid_argument("projector_axis: empty coarse grid");
    std::vector<Triplet> trips;
    for (std::int64_t j = 0; j < k; ++j) {
        const std::int64_t center = g * j + off;
        for (std::int64_t m = -(static_cast<std::int64_t>(p.size()) - 1); m < static_cast<std::int64_t>(p.size()); ++m) {
            const std::int64_t i = center + m;
            if (i < 0 || i >= n) continue;
            const double v = m == 0 ? p[0] : p[static_cast<std::size_t>(std::abs(m))] / 2.0;
            if (v != 0.0) trips.push_back({i, j, v});
        }
    }
    return CsrMatrix(n, k, std::move(trips));
}

struct Projector {
    CsrMatrix p;
    MultiIndex coarse_n;
    std::vector<std::int64_t> kept_coarse;  // coarse node id -> coarse box linear index
};

/// Grid transfer T_n(p1(t1) ... pd(td)) K_n (tensor over axes, times an
/// optional nu x nu block factor) with rows restricted to kept fine nodes and
/// columns to kept coarse nodes. Masks are linear-index lists into the
/// respective boxes (slot-fastest when nu > 1).
inline Projector build_projector(const MultiIndex& n, std::int64_t g,
                                 const std::vector<std::vector<double>>& axis_polys,
                                 const std::vector<std::int64_t>& fine_box_to_node,
                                 const std::vector<std::int64_t>& coarse_keep,
                                 const std::vector<std::vector<double>>* block = nullptr,
                                 std::optional<std::int64_t> offset = std::nullopt) {
    const std::size_t d = n.size();
    if (axis_polys.size() != d) throw std::invalid_argument("build_projector: one polynomial per axis required");
    if (coarse_keep.empty()) throw std::invalid_argument("build_projector: empty coarse mask");
    const std::int64_t off0 = offset.value_or(g - 1);
    MultiIndex kvec(d);
    for (std::size_t r = 0; r < d; ++r) {
        kvec[r] = (n[r] - off0 - 1) / g + 1;
        if (kvec[r] < 1) throw std::invalid_argument("build_projector: empty coarse grid");
    }
    IndexRange fine_box(n), coarse_box(kvec);
    const std::int64_t nu = block != nullptr ? static_cast<std::int64_t>(block->size()) : 1;

    std::int64_t fine_rows = 0;
    for (auto v : fine_box_to_node) fine_rows = std::max(fine_rows, v + 1);

    std::vector<Triplet> trips;
    for (std::size_t jc = 0; jc < coarse_keep.size(); ++jc) {
        const auto coarse_lin = coarse_keep[jc] / nu;
        const auto coarse_slot = coarse_keep[jc] % nu;
        const auto j = coarse_box.unflatten(coarse_lin);
        // tensor support of column j: per axis, the polynomial band around g*(j-1)+off
        std::vector<std::vector<std::pair<std::int64_t, double>>> sup(d);
        for (std::size_t r = 0; r < d; ++r) {
            const std::int64_t center = g * (j[r] - 1) + off0;
            const auto& poly = axis_polys[r];
            for (std::int64_t m = -(static_cast<std::int64_t>(poly.size()) - 1); m < static_cast<std::int64_t>(poly.size()); ++m) {
                const std::int64_t i = center + m;
                if (i < 0 || i >= n[r]) continue;
                const double v = m == 0 ? poly[0] : poly[static_cast<std::size_t>(std::abs(m))] / 2.0;
                if (v != 0.0) sup[r].push_back({i, v});
            }
        }
        // cartesian product over axes
        std::vector<std::size_t> cursor(d, 0);
        while (true) {
            MultiIndex i(d);
            double v = 1.0;
            for (std::size_t r = 0; r < d; ++r) {
                i[r] = sup[r][cursor[r]].first + 1;
                v *= sup[r][cursor[r]].second;
            }
            const auto fine_lin = fine_box.flatten(i);
            for (std::int64_t rs = 0; rs < nu; ++rs) {
                const auto node = fine_box_to_node[static_cast<std::size_t>(fine_lin * nu + rs)];
                if (node < 0) continue;
                const double bv = block != nullptr ? (*block)[static_cast<std::size_t>(rs)][static_cast<std::size_t>(coarse_slot)] : 1.0;
                if (v * bv != 0.0) trips.push_back({node, static_cast<std::int64_t>(jc), v * bv});
            }
            std::size_t r = d;
            bool done = true;
            while (r-- > 0) {
                if (++cursor[r] < sup[r].size()) {
                    for (std::size_t q = r + 1; q < d; ++q) cursor[q] = 0;
                    done = false;
                    break;
                }
            }
            if (done) break;
        }
    }
    Projector out;
    out.p = CsrMatrix(fine_rows, static_cast<std::int64_t>(coarse_keep.size()), std::move(trips));
    out.coarse_n = kvec;
    out.kept_coarse = coarse_keep;
    return out;
}

// ---------------------------------------------------------------------------
// Strang circulant
// ---------------------------------------------------------------------------

/// d-level block coefficient map (offset -> real block) of a banded Toeplitz
/// operator, the input to circulant construction.
struct ToeplitzCoefficients {
    MultiIndex n;
    std::int64_t nu = 1;
    std::map<MultiIndex, std::vector<double>> blocks;  // row-major nu*nu values

    static ToeplitzCoefficients from_symbol(const MultiIndex& n, const MatrixSymbol& f) {
        ToeplitzCoefficients out;
        out.n = n;
        out.nu = f.block_size();
        for (const auto& [k, blk] : f.coefficients()) {
            std::vector<double> v(static_cast<std::size_t>(out.nu * out.nu));
            for (std::int64_t r = 0; r < out.nu; ++r)
                for (std::int64_t c = 0; c < out.nu; ++c) {
                    if (std::abs(blk(r, c).imag()) > 1e-14)
                        throw std::invalid_argument("ToeplitzCoefficients: complex coefficient");
                    v[static_cast<std::size_t>(r * out.nu + c)] = blk(r, c).real();
                }
            out.blocks[k] = std::move(v);
        }
        return out;
    }
};

/// Strang wrap: the circulant residue l keeps the Toeplitz coefficient at
/// l (l <= n/2) or l - n (l > n/2), per axis.
inline std::map<MultiIndex, std::vector<double>> strang_wrap(const ToeplitzCoefficients& t, bool allow_full_band = false) {
    if (!allow_full_band) {
        for (const auto& [k, blk] : t.blocks) {
            (void)blk;
            for (std::size_t r = 0; r < t.n.size(); ++r)
                if (std::abs(k[r]) > t.n[r] / 2)
                    throw std::invalid_argument("strang_wrap: bandwidth exceeds n/2");
        }
    }
    std::map<MultiIndex, std::vector<double>> wrapped;
    for (const auto& [k, blk] : t.blocks) {
        bool keep = true;
        MultiIndex l(k.size());
        for (std::size_t r = 0; r < k.size(); ++r) {
            if (2 * std::abs(k[r]) > t.n[r]) {
                keep = false;  // beyond the Strang window; dropped
                break;
            }
            l[r] = (k[r] % t.n[r] + t.n[r]) % t.n[r];
        }
        if (keep) wrapped[l] = blk;
    }
    return wrapped;
}

}  // namespace gridsym
