#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gridsym/core.hpp"

namespace gridsym {

/// One stencil term: an offset class with one weight per direction class
/// (ordering matches directions_of(offset)).
struct StencilTerm {
    MultiIndex offset;
    std::vector<double> weights;
};

struct Stencil {
    std::vector<StencilTerm> terms;

    /// Validates the definition constraints: offsets strictly lex-increasing,
    /// nonzero weights, weight count = direction-class count.
    void validate(const MultiIndex& n) const {
        MultiIndex prev;
        for (const auto& t : terms) {
            if (is_zero(t.offset)) throw std::invalid_argument("Stencil: zero offset");
            const auto classes = directions_of(t.offset);
            if (classes.size() != t.weights.size())
                throw std::invalid_argument("Stencil: weight count " + std::to_string(t.weights.size()) +
                                            " != direction class count " + std::to_string(classes.size()));
            for (double w : t.weights)
                if (w == 0.0) throw std::invalid_argument("Stencil: zero weight");
            if (!prev.empty() && lex_compare(prev, t.offset) != Ordering::Less)
                throw std::invalid_argument("Stencil: offsets must be strictly lex-increasing");
            prev = t.offset;
            // offsets equal to n never materialize as edges inside the box
            // but still count toward the Dirichlet deficiency
            for (std::size_t r = 0; r < n.size(); ++r)
                if (t.offset[r] > n[r])
                    throw std::invalid_argument("Stencil: offset exceeds n");
        }
    }

    /// Axis-aligned scalar term along every coordinate: offsets (k,0,..),(0,k,..).
    static Stencil axis_weights(std::size_t d, const std::vector<double>& w) {
        Stencil s;
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t k = 1; k <= w.size(); ++k) {
                MultiIndex t(d, 0);
                t[r] = static_cast<std::int64_t>(k);
                s.terms.push_back({t, {w[k - 1]}});
            }
        }
        std::sort(s.terms.begin(), s.terms.end(),
                  [](const StencilTerm& a, const StencilTerm& b) { return lex_less(a.offset, b.offset); });
        return s;
    }
};

/// Fixed small graph that replaces each node of a d-level Toeplitz graph.
struct MoldGraph {
    std::int64_t nu = 1;
    std::vector<std::vector<double>> w;  // symmetric, zero diagonal

    void validate() const {
        if (nu < 1 || static_cast<std::int64_t>(w.size()) != nu)
            throw std::invalid_argument("MoldGraph: bad adjacency size");
        for (std::int64_t r = 0; r < nu; ++r) {
            if (static_cast<std::int64_t>(w[static_cast<std::size_t>(r)].size()) != nu)
                throw std::invalid_argument("MoldGraph: bad adjacency size");
            if (w[static_cast<std::size_t>(r)][static_cast<std::size_t>(r)] != 0.0)
                throw std::invalid_argument("MoldGraph: self-loop in mold");
            for (std::int64_t c = 0; c < nu; ++c)
                if (w[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] !=
                    w[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)])
                    throw std::invalid_argument("MoldGraph: adjacency not symmetric");
        }
    }
};

/// nu x nu inter-diamond coupling along one direction class.
struct LinkingOperator {
    std::vector<std::vector<double>> l;

    bool is_zero() const {
        for (const auto& row : l)
            for (double v : row)
                if (v != 0.0) return false;
        return true;
    }
};

/// Membership test over (0,1)^d. Named instances cover the experiments.
struct DomainPredicate {
    std::string name;
    std::function<bool(const std::vector<double>&)> inside;

    bool operator()(const std::vector<double>& x) const { return inside(x); }

    static DomainPredicate unit_square(std::size_t d = 2) {
        return {"unit-square", [d](const std::vector<double>& x) {
                    for (std::size_t r = 0; r < d; ++r)
                        if (x[r] <= 0.0 || x[r] >= 1.0) return false;
                    return true;
                }};
    }

    /// Open equilateral triangle with vertices (0,0), (1,0), (1/2, sqrt(3)/2).
    static DomainPredicate equilateral_triangle() {
        return {"triangle", [](const std::vector<double>& x) {
                    const double s3 = std::numbers::sqrt3;
                    return x[1] > 0.0 && x[1] < s3 * x[0] && x[1] < s3 * (1.0 - x[0]);
                }};
    }

    /// Open disk of radius 1/2 centered at (1/2, 1/2).
    static DomainPredicate half_disk_ball() {
        return {"disk", [](const std::vector<double>& x) {
                    const double dx = x[0] - 0.5, dy = x[1] - 0.5;
                    return 4.0 * (dx * dx + dy * dy) < 1.0;
                }};
    }

    static DomainPredicate named(const std::string& name) {
        if (name == "unit-square" || name == "square") return unit_square();
        if (name == "triangle") return equilateral_triangle();
        if (name == "disk") return half_disk_ball();
        throw std::invalid_argument("unknown domain: " + name);
    }
};

struct GraphEdge {
    std::int64_t a;
    std::int64_t b;
    double w;
};

enum class PotentialKind { Neumann, Dirichlet, Custom };

/// Weighted grid graph covering the plain, d-level and diamond families plus
/// their immersed restrictions. Edges are stored once per unordered pair;
/// assembly materializes the symmetric counterpart.
struct GridGraph {
    MultiIndex n;                         // ambient per-axis sizes
    std::int64_t nu = 1;                  // diamond size, 1 for plain graphs
    std::vector<MultiIndex> node_index;   // kept d-indices, per diamond when nu > 1
    std::vector<std::int64_t> node_slot;  // 1..nu (all 1 for plain graphs)
    std::vector<std::vector<double>> coords;  // immersed coordinates (empty for pure chains)
    std::vector<GraphEdge> edges;
    std::vector<double> kappa;

    // construction recipe, used to enumerate host-graph neighbors
    std::optional<Stencil> stencil;
    std::optional<MoldGraph> mold;
    std::vector<MultiIndex> link_offsets;             // diamond coupling offsets, one per term
    std::vector<std::vector<LinkingOperator>> links;  // per offset, per direction class
    std::vector<std::int64_t> kept_lookup;            // flatten(k)*nu + slot-1 -> node id, -1 if absent

    std::size_t dim() const { return n.size(); }
    std::int64_t num_nodes() const { return static_cast<std::int64_t>(node_index.size()); }

    std::int64_t node_id(const MultiIndex& k, std::int64_t slot = 1) const {
        IndexRange box(n);
        if (!box.contains(k)) return -1;
        const auto key = box.flatten(k) * nu + (slot - 1);
        return kept_lookup[static_cast<std::size_t>(key)];
    }

    std::vector<double> degrees() const {
        std::vector<double> deg(static_cast<std::size_t>(num_nodes()), 0.0);
        for (const auto& e : edges) {
            deg[static_cast<std::size_t>(e.a)] += e.w;
            deg[static_cast<std::size_t>(e.b)] += e.w;
        }
        return deg;
    }
};

namespace detail {

inline std::vector<double> grid_spacing(const MultiIndex& n) {
    std::vector<double> h(n.size());
    for (std::size_t r = 0; r < n.size(); ++r) h[r] = 1.0 / (static_cast<double>(n[r]) + 1.0);
    return h;
}

inline std::vector<double> immersion_point(const MultiIndex& k, const std::vector<double>& h) {
    std::vector<double> x(k.size());
    for (std::size_t r = 0; r < k.size(); ++r) x[r] = static_cast<double>(k[r]) * h[r];
    return x;
}

}  // namespace detail

/// d-level Toeplitz graph on the full box, optionally restricted to a domain
/// with a coefficient modulating every surviving edge by p(midpoint).
inline GridGraph build_dlevel_toeplitz_graph(
    const MultiIndex& n, const Stencil& stencil, const DomainPredicate* domain = nullptr,
    const std::function<double(const std::vector<double>&)>* coefficient = nullptr) {
    stencil.validate(n);
    IndexRange box(n);
    GridGraph g;
    g.n = n;
    g.nu = 1;
    g.stencil = stencil;
    g.kept_lookup.assign(static_cast<std::size_t>(box.size()), -1);

    const auto h = detail::grid_spacing(n);
    box.for_each([&](const MultiIndex& k) {
        auto x = detail::immersion_point(k, h);
        if (domain != nullptr && !(*domain)(x)) return;
        g.kept_lookup[static_cast<std::size_t>(box.flatten(k))] = g.num_nodes();
        g.node_index.push_back(k);
        g.node_slot.push_back(1);
        g.coords.push_back(std::move(x));
    });
    if (g.num_nodes() == 0) throw std::invalid_argument("graph restriction left no nodes");

    for (std::int64_t a = 0; a < g.num_nodes(); ++a) {
        const auto& k = g.node_index[static_cast<std::size_t>(a)];
        for (const auto& term : stencil.terms) {
            const auto classes = directions_of(term.offset);
            for (std::size_t c = 0; c < classes.size(); ++c) {
                const auto j = k + classes[c].positive();
                if (!box.contains(j)) continue;
                const auto b = g.kept_lookup[static_cast<std::size_t>(box.flatten(j))];
                if (b < 0) continue;
                double w = term.weights[c];
                if (coefficient != nullptr) {
                    std::vector<double> mid(k.size());
                    for (std::size_t r = 0; r < k.size(); ++r)
                        mid[r] = 0.5 * (g.coords[static_cast<std::size_t>(a)][r] + g.coords[static_cast<std::size_t>(b)][r]);
                    w *= (*coefficient)(mid);
                }
                g.edges.push_back({a, b, w});
            }
        }
    }
    g.kappa.assign(static_cast<std::size_t>(g.num_nodes()), 0.0);
    return g;
}

/// Toeplitz graph of cardinality n with distance weights (t_k, w_k).
inline GridGraph build_toeplitz_graph(std::int64_t n, const std::vector<std::pair<std::int64_t, double>>& terms) {
    Stencil s;
    for (const auto& [t, w] : terms) {
        if (t >= n) throw std::invalid_argument("build_toeplitz_graph: offset >= n");
        s.terms.push_back({{t}, {w}});
    }
    std::sort(s.terms.begin(), s.terms.end(),
              [](const StencilTerm& a, const StencilTerm& b) { return lex_less(a.offset, b.offset); });
    return build_dlevel_toeplitz_graph({n}, s);
}

/// d-level diamond Toeplitz graph: every box node carries a copy of the mold,
/// consecutive copies are coupled by the linking operators. The weight rule is
/// w(v_(i,r), v_(j,s)) = L_alpha(r,s) when i-j is the positive class element.
inline GridGraph build_diamond_graph(const MultiIndex& n, const MoldGraph& mold,
                                     const std::vector<StencilTerm>& offsets,
                                     const std::vector<std::vector<LinkingOperator>>& links) {
    mold.validate();
    if (offsets.size() != links.size()) throw std::invalid_argument("build_diamond_graph: offsets/links mismatch");
    for (std::size_t t = 0; t < offsets.size(); ++t) {
        const auto classes = directions_of(offsets[t].offset);
        if (links[t].size() != classes.size())
            throw std::invalid_argument("build_diamond_graph: linking operator count != direction class count");
        for (const auto& L : links[t]) {
            if (static_cast<std::int64_t>(L.l.size()) != mold.nu)
                throw std::invalid_argument("build_diamond_graph: linking operator shape != nu x nu");
            for (const auto& row : L.l)
                if (static_cast<std::int64_t>(row.size()) != mold.nu)
                    throw std::invalid_argument("build_diamond_graph: linking operator shape != nu x nu");
            if (L.is_zero()) throw std::invalid_argument("build_diamond_graph: zero linking operator");
        }
    }

    IndexRange box(n);
    GridGraph g;
    g.n = n;
    g.nu = mold.nu;
    g.mold = mold;
    g.links = links;
    for (const auto& t : offsets) g.link_offsets.push_back(t.offset);
    g.kept_lookup.assign(static_cast<std::size_t>(box.size() * mold.nu), -1);
    box.for_each([&](const MultiIndex& k) {
        for (std::int64_t r = 1; r <= mold.nu; ++r) {
            g.kept_lookup[static_cast<std::size_t>(box.flatten(k) * mold.nu + (r - 1))] = g.num_nodes();
            g.node_index.push_back(k);
            g.node_slot.push_back(r);
        }
    });

    box.for_each([&](const MultiIndex& k) {
        // intra-diamond edges
        for (std::int64_t r = 1; r <= mold.nu; ++r)
            for (std::int64_t s = r + 1; s <= mold.nu; ++s) {
                const double w = mold.w[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(s - 1)];
                if (w != 0.0) g.edges.push_back({g.node_id(k, r), g.node_id(k, s), w});
            }
        // inter-diamond edges toward the positive class element
        for (std::size_t t = 0; t < offsets.size(); ++t) {
            const auto classes = directions_of(offsets[t].offset);
            for (std::size_t c = 0; c < classes.size(); ++c) {
                const auto i = k + classes[c].positive();  // higher diamond
                if (!box.contains(i)) continue;
                const auto& L = links[t][c].l;
                for (std::int64_t r = 1; r <= mold.nu; ++r)
                    for (std::int64_t s = 1; s <= mold.nu; ++s) {
                        const double w = L[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(s - 1)];
                        if (w != 0.0) g.edges.push_back({g.node_id(k, s), g.node_id(i, r), w});
                    }
            }
        }
    });
    g.kappa.assign(static_cast<std::size_t>(g.num_nodes()), 0.0);
    return g;
}

/// Restrict a plain grid graph to a domain; surviving edge weights are
/// multiplied by the coefficient at the edge midpoint.
inline GridGraph immerse(const GridGraph& graph, const DomainPredicate& domain,
                         const std::function<double(const std::vector<double>&)>* coefficient = nullptr) {
    if (graph.nu != 1) throw std::invalid_argument("immerse: only plain (nu = 1) grid graphs");
    if (!graph.stencil) throw std::invalid_argument("immerse: graph carries no stencil");
    return build_dlevel_toeplitz_graph(graph.n, *graph.stencil, &domain, coefficient);
}

/// Attach a potential term. Dirichlet sums host-graph weights toward
/// neighbors outside the kept node set (the edge deficiency); the optional
/// host_weight maps (x_node, x_neighbor, stencil weight) to the host edge
/// weight of a cut edge.
inline GridGraph attach_potential(
    GridGraph graph, PotentialKind kind,
    const std::function<double(const std::vector<double>&, const std::vector<double>&, double)>* host_weight = nullptr,
    const std::function<double(std::int64_t)>* custom = nullptr) {
    const auto d = static_cast<std::size_t>(graph.num_nodes());
    if (kind == PotentialKind::Neumann) {
        graph.kappa.assign(d, 0.0);
        return graph;
    }
    if (kind == PotentialKind::Custom) {
        if (custom == nullptr) throw std::invalid_argument("attach_potential: custom kind needs values");
        for (std::int64_t i = 0; i < graph.num_nodes(); ++i)
            graph.kappa[static_cast<std::size_t>(i)] = (*custom)(i);
        return graph;
    }

    // Dirichlet: enumerate host neighbors of every kept node.
    IndexRange box(graph.n);
    const auto h = detail::grid_spacing(graph.n);
    if (graph.stencil) {
        for (std::int64_t a = 0; a < graph.num_nodes(); ++a) {
            const auto& k = graph.node_index[static_cast<std::size_t>(a)];
            double kap = 0.0;
            for (const auto& term : graph.stencil->terms) {
                const auto classes = directions_of(term.offset);
                for (std::size_t c = 0; c < classes.size(); ++c) {
                    for (const auto& dir : {classes[c].positive(), classes[c].negative()}) {
                        const auto j = k + dir;
                        const bool kept = box.contains(j) &&
                                          graph.kept_lookup[static_cast<std::size_t>(box.flatten(j))] >= 0;
                        if (kept) continue;
                        double w = term.weights[c];
                        if (host_weight != nullptr)
                            w = (*host_weight)(detail::immersion_point(k, h), detail::immersion_point(j, h), w);
                        kap += w;
                    }
                }
            }
            graph.kappa[static_cast<std::size_t>(a)] = kap;
        }
        return graph;
    }
    if (graph.mold) {
        // diamond chain: lost inter-diamond couplings at the box boundary
        if (host_weight != nullptr)
            throw std::invalid_argument("attach_potential: host weight extension not supported for diamond graphs");
        for (std::int64_t a = 0; a < graph.num_nodes(); ++a) {
            const auto& k = graph.node_index[static_cast<std::size_t>(a)];
            const auto s = graph.node_slot[static_cast<std::size_t>(a)];
            double kap = 0.0;
            for (std::size_t t = 0; t < graph.links.size(); ++t) {
                const auto classes = directions_of(graph.link_offsets[t]);
                for (std::size_t c = 0; c < graph.links[t].size(); ++c) {
                    const auto& L = graph.links[t][c].l;
                    const auto rep = classes[c].positive();
                    // toward the higher diamond k+rep the node (k,s) couples as L(r,s)
                    if (!box.contains(k + rep)) {
                        for (std::int64_t r = 1; r <= graph.nu; ++r)
                            kap += L[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(s - 1)];
                    }
                    // toward the lower diamond k-rep it couples as L(s,s')
                    if (!box.contains(k + classes[c].negative())) {
                        for (std::int64_t sp = 1; sp <= graph.nu; ++sp)
                            kap += L[static_cast<std::size_t>(s - 1)][static_cast<std::size_t>(sp - 1)];
                    }
                }
            }
            graph.kappa[static_cast<std::size_t>(a)] = kap;
        }
        return graph;
    }
    throw std::invalid_argument("attach_potential: Dirichlet requires a construction recipe");
}

/// Interior/boundary split of a graph plus the reduction of a nonhomogeneous
/// Dirichlet problem to the interior: kappa becomes the edge deficiency toward
/// the boundary, the forcing gains g(v) = sum_boundary w(v,u) h(u).
struct ReducedProblem {
    GridGraph interior;
    std::vector<double> rhs;                   // g + f on interior nodes
    std::vector<std::int64_t> interior_ids;    // interior node id -> original id
    bool interior_connected = true;
};

inline ReducedProblem nhdp_reduce(const GridGraph& g, const std::vector<bool>& is_boundary,
                                  const std::function<double(std::int64_t)>& h,
                                  const std::function<double(std::int64_t)>& f) {
    if (static_cast<std::int64_t>(is_boundary.size()) != g.num_nodes())
        throw std::invalid_argument("nhdp_reduce: boundary mask size mismatch");
    bool any = false;
    for (bool b : is_boundary) any = any || b;
    if (!any) throw std::invalid_argument("nhdp_reduce: empty boundary set");
    for (double k : g.kappa)
        if (k != 0.0) throw std::invalid_argument("nhdp_reduce: graph must carry zero potential");

    ReducedProblem out;
    std::vector<std::int64_t> remap(static_cast<std::size_t>(g.num_nodes()), -1);
    for (std::int64_t i = 0; i < g.num_nodes(); ++i) {
        if (is_boundary[static_cast<std::size_t>(i)]) continue;
        remap[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(out.interior_ids.size());
        out.interior_ids.push_back(i);
    }
    const auto m = static_cast<std::int64_t>(out.interior_ids.size());
    if (m == 0) throw std::invalid_argument("nhdp_reduce: no interior nodes");

    out.interior.n = g.n;
    out.interior.nu = g.nu;
    out.interior.kappa.assign(static_cast<std::size_t>(m), 0.0);
    out.rhs.assign(static_cast<std::size_t>(m), 0.0);
    for (std::int64_t i = 0; i < m; ++i) {
        const auto orig = out.interior_ids[static_cast<std::size_t>(i)];
        out.interior.node_index.push_back(g.node_index[static_cast<std::size_t>(orig)]);
        out.interior.node_slot.push_back(g.node_slot[static_cast<std::size_t>(orig)]);
        if (!g.coords.empty()) out.interior.coords.push_back(g.coords[static_cast<std::size_t>(orig)]);
        out.rhs[static_cast<std::size_t>(i)] = f(orig);
    }
    out.interior.kept_lookup.assign(g.kept_lookup.size(), -1);
    for (std::size_t key = 0; key < g.kept_lookup.size(); ++key) {
        const auto old = g.kept_lookup[key];
        if (old >= 0) out.interior.kept_lookup[key] = remap[static_cast<std::size_t>(old)];
    }

    for (const auto& e : g.edges) {
        const auto ia = remap[static_cast<std::size_t>(e.a)];
        const auto ib = remap[static_cast<std::size_t>(e.b)];
        if (ia >= 0 && ib >= 0) {
            out.interior.edges.push_back({ia, ib, e.w});
        } else if (ia >= 0) {
            out.interior.kappa[static_cast<std::size_t>(ia)] += e.w;
            out.rhs[static_cast<std::size_t>(ia)] += e.w * h(e.b);
        } else if (ib >= 0) {
            out.interior.kappa[static_cast<std::size_t>(ib)] += e.w;
            out.rhs[static_cast<std::size_t>(ib)] += e.w * h(e.a);
        }
    }

    // connectivity warning only: union-find over interior edges
    std::vector<std::int64_t> parent(static_cast<std::size_t>(m));
    for (std::int64_t i = 0; i < m; ++i) parent[static_cast<std::size_t>(i)] = i;
    std::function<std::int64_t(std::int64_t)> find = [&](std::int64_t v) {
        while (parent[static_cast<std::size_t>(v)] != v) {
            parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
            v = parent[static_cast<std::size_t>(v)];
        }
        return v;
    };
    for (const auto& e : out.interior.edges) parent[static_cast<std::size_t>(find(e.a))] = find(e.b);
    for (std::int64_t i = 1; i < m; ++i)
        if (find(i) != find(0)) {
            out.interior_connected = false;
            break;
        }
    return out;
}

}  // namespace gridsym
