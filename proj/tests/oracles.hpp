#pragma once
// Brute-force reference implementations. They share no code with the library
// beyond the space container, so agreement is evidence rather than tautology.

#include <mgeom/metric/space.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace oracle {

using mgeom::BasicSpace;
using mgeom::Rational;

/// Minimum number of closed r-balls (centers in the space) covering it, by subset enumeration.
template <class T>
std::size_t cover_by_subsets(const BasicSpace<T>& s, const T& r) {
    const std::size_t n = s.size();
    for (std::size_t k = 1; k <= n; ++k) {
        std::vector<bool> pick(n, false);
        std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(k), true);
        do {
            bool all = true;
            for (std::size_t y = 0; y < n && all; ++y) {
                bool hit = false;
                for (std::size_t c = 0; c < n && !hit; ++c) hit = pick[c] && s(c, y) <= r;
                all = hit;
            }
            if (all) return k;
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return n;
}

/// Classes of "d(x, y) <= r" in an ultrametric via union-find; equals the covering number.
template <class T>
std::size_t ultrametric_classes(const BasicSpace<T>& s, const T& r) {
    const std::size_t n = s.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (s(i, j) <= r) parent[find(i)] = find(j);
    std::size_t roots = 0;
    for (std::size_t i = 0; i < n; ++i) roots += find(i) == i;
    return roots;
}

/// min over all correspondences R of dis(R) / 2, enumerating every relation (|X||Y| <= 16).
inline Rational gh_all_relations(const BasicSpace<Rational>& a, const BasicSpace<Rational>& b) {
    const std::size_t na = a.size(), nb = b.size(), cells = na * nb;
    if (cells > 16) throw std::invalid_argument("too many relation cells for brute force");
    std::optional<Rational> best;
    for (std::uint32_t mask = 1; mask < (1u << cells); ++mask) {
        std::vector<bool> row(na, false), col(nb, false);
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t c = 0; c < cells; ++c) {
            if (mask >> c & 1u) {
                pairs.emplace_back(c / nb, c % nb);
                row[c / nb] = col[c % nb] = true;
            }
        }
        if (std::find(row.begin(), row.end(), false) != row.end()) continue;
        if (std::find(col.begin(), col.end(), false) != col.end()) continue;
        Rational dis = 0;
        bool worse = false;
        for (std::size_t i = 0; i < pairs.size() && !worse; ++i)
            for (std::size_t j = i + 1; j < pairs.size() && !worse; ++j) {
                const auto &p = pairs[i], &q = pairs[j];
                Rational d = a(p.first, q.first) - b(p.second, q.second);
                if (d < 0) d = -d;
                if (d > dis) dis = d;
                worse = best && dis >= *best;
            }
        if (!worse) best = dis;
    }
    return *best / 2;
}

/// Distance-preserving bijection by trying every permutation.
template <class T>
bool isometric_by_permutation(const BasicSpace<T>& a, const BasicSpace<T>& b, double tol = 0) {
    if (a.size() != b.size()) return false;
    const std::size_t n = a.size();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    auto close = [&](const T& x, const T& y) {
        if constexpr (std::is_same_v<T, double>) return std::abs(x - y) <= tol;
        else return x == y;
    };
    do {
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i)
            for (std::size_t j = i + 1; j < n && ok; ++j) ok = close(a(i, j), b(p[i], p[j]));
        if (ok) return true;
    } while (std::next_permutation(p.begin(), p.end()));
    return false;
}

/// Triangle inequality over all ordered triples, in the scalar type.
template <class T>
bool triangle_holds(const BasicSpace<T>& s, bool strong, const T& tol = T(0)) {
    const std::size_t n = s.size();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                T bound = strong ? std::max(s(x, z), s(z, y)) : T(s(x, z) + s(z, y));
                if (s(x, y) > bound + tol) return false;
            }
    return true;
}

/**
 * Points of S(m, alpha) at depth d as digit strings, with distance
 * alpha(first differing position); built independently of the library's
 * mixed-radix enumeration.
 */
inline BasicSpace<Rational> cantor_by_strings(const std::vector<unsigned>& m, const std::vector<Rational>& alpha) {
    std::vector<std::vector<unsigned>> pts{{}};
    for (unsigned mi : m) {
        std::vector<std::vector<unsigned>> next;
        for (const auto& p : pts)
            for (unsigned d = 0; d < mi; ++d) {
                auto q = p;
                q.push_back(d);
                next.push_back(q);
            }
        pts = std::move(next);
    }
    const std::size_t n = pts.size();
    std::vector<Rational> flat(n * n, Rational(0));
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back("s" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            std::size_t v = 0;
            while (pts[i][v] == pts[j][v]) ++v;
            flat[i * n + j] = alpha[v];
        }
    }
    return BasicSpace<Rational>(std::move(labels), std::move(flat), mgeom::Kind::ultrametric);
}

/// h_n = sum_{i<=n} log2 m_i / E(n+1) and p_n = same / E(n), in long double from explicit E values.
struct HP {
    long double h, p;
};

inline HP explicit_hp(const std::vector<long double>& log2_m, const std::vector<long double>& E, std::size_t n) {
    long double sum = 0;
    for (std::size_t i = 0; i <= n; ++i) sum += log2_m[i];
    return {sum / E[n + 1], sum / E[n]};
}

}  // namespace oracle
