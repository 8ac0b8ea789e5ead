#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridsym {

/// d-dimensional integer index. Kept as a plain vector; all componentwise
/// helpers below preserve the length.
using MultiIndex = std::vector<std::int64_t>;

enum class Ordering { Less, Equal, Greater };

inline void check_same_dim(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("multi-index dimension mismatch: " +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

/// Lexicographic comparison: the first differing component decides.
inline Ordering lex_compare(const MultiIndex& a, const MultiIndex& b) {
    check_same_dim(a, b);
    for (std::size_t r = 0; r < a.size(); ++r) {
        if (a[r] < b[r]) return Ordering::Less;
        if (a[r] > b[r]) return Ordering::Greater;
    }
    return Ordering::Equal;
}

inline bool lex_less(const MultiIndex& a, const MultiIndex& b) {
    return lex_compare(a, b) == Ordering::Less;
}

/// Componentwise a_r <= b_r for all r.
inline bool componentwise_leq(const MultiIndex& a, const MultiIndex& b) {
    check_same_dim(a, b);
    for (std::size_t r = 0; r < a.size(); ++r)
        if (a[r] > b[r]) return false;
    return true;
}

inline MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    check_same_dim(a, b);
    MultiIndex out(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) out[r] = a[r] + b[r];
    return out;
}

inline MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) {
    check_same_dim(a, b);
    MultiIndex out(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) out[r] = a[r] - b[r];
    return out;
}

inline MultiIndex abs(const MultiIndex& a) {
    MultiIndex out(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) out[r] = a[r] < 0 ? -a[r] : a[r];
    return out;
}

inline MultiIndex hadamard(const MultiIndex& a, const MultiIndex& b) {
    check_same_dim(a, b);
    MultiIndex out(a.size());
    for (std::size_t r = 0; r < a.size(); ++r) out[r] = a[r] * b[r];
    return out;
}

inline bool is_zero(const MultiIndex& a) {
    return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v == 0; });
}

inline MultiIndex constant_index(std::size_t d, std::int64_t v) {
    return MultiIndex(d, v);
}

/// Rectangular index box {k : 1 <= k <= n componentwise}, enumerated in
/// lexicographic order. Linear indices are 0-based.
struct IndexRange {
    MultiIndex n;

    explicit IndexRange(MultiIndex bounds) : n(std::move(bounds)) {
        if (n.empty()) throw std::invalid_argument("IndexRange: dimension must be >= 1");
        for (auto v : n)
            if (v < 1) throw std::invalid_argument("IndexRange: all bounds must be >= 1");
    }

    std::size_t dim() const { return n.size(); }

    std::int64_t size() const {
        std::int64_t c = 1;
        for (auto v : n) c *= v;
        return c;
    }

    bool contains(const MultiIndex& k) const {
        check_same_dim(k, n);
        for (std::size_t r = 0; r < n.size(); ++r)
            if (k[r] < 1 || k[r] > n[r]) return false;
        return true;
    }

    /// Bijection onto 0..size()-1 respecting lexicographic order.
    std::int64_t flatten(const MultiIndex& k) const {
        if (!contains(k)) throw std::out_of_range("flatten: index outside range");
        std::int64_t lin = 0;
        for (std::size_t r = 0; r < n.size(); ++r) lin = lin * n[r] + (k[r] - 1);
        return lin;
    }

    MultiIndex unflatten(std::int64_t lin) const {
        if (lin < 0 || lin >= size()) throw std::out_of_range("unflatten: linear index outside range");
        MultiIndex k(n.size());
        for (std::size_t r = n.size(); r-- > 0;) {
            k[r] = lin % n[r] + 1;
            lin /= n[r];
        }
        return k;
    }

    /// Visit all indices in lexicographic order.
    void for_each(const std::function<void(const MultiIndex&)>& f) const {
        MultiIndex k(n.size(), 1);
        while (true) {
            f(k);
            std::size_t r = n.size();
            while (r-- > 0) {
                if (k[r] < n[r]) {
                    ++k[r];
                    std::fill(k.begin() + static_cast<std::ptrdiff_t>(r) + 1, k.end(), 1);
                    break;
                }
                if (r == 0) return;
            }
        }
    }
};

/// Sign-pattern class {+rep, -rep} of a nonzero offset; the representative
/// has its first nonzero component positive.
struct DirectionClass {
    MultiIndex representative;

    MultiIndex positive() const { return representative; }
    MultiIndex negative() const {
        MultiIndex out(representative.size());
        for (std::size_t r = 0; r < out.size(); ++r) out[r] = -representative[r];
        return out;
    }

    bool contains(const MultiIndex& v) const {
        return v == positive() || v == negative();
    }
};

/// All sign-pattern classes of t modulo global negation. For z nonzero
/// components there are 2^(z-1) classes.
inline std::vector<DirectionClass> directions_of(const MultiIndex& t) {
    if (is_zero(t)) throw std::invalid_argument("directions_of: zero offset has no directions");
    for (auto v : t)
        if (v < 0) throw std::invalid_argument("directions_of: offset must satisfy 0 <= t componentwise");

    std::vector<std::size_t> nz;
    for (std::size_t r = 0; r < t.size(); ++r)
        if (t[r] != 0) nz.push_back(r);

    // Enumerate sign patterns with the first nonzero component fixed positive;
    // this picks exactly one representative per class.
    std::vector<DirectionClass> classes;
    const std::size_t m = nz.size();
    for (std::uint64_t bits = 0; bits < (1ull << (m - 1)); ++bits) {
        MultiIndex rep = t;
        for (std::size_t b = 0; b + 1 < m; ++b)
            if (bits & (1ull << b)) rep[nz[b + 1]] = -rep[nz[b + 1]];
        classes.push_back(DirectionClass{rep});
    }
    return classes;
}

}  // namespace gridsym
