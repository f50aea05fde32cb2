#pragma once
#ifndef MGEOM_METRIC_ISOMETRY_HPP
#define MGEOM_METRIC_ISOMETRY_HPP

#include <mgeom/metric/space.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

namespace mgeom {

namespace detail {

template <Scalar T>
bool near(const T& a, const T& b, const T& tol) {
    if constexpr (ScalarTraits<T>::exact) {
        return a == b;
    } else {
        return std::abs(a - b) <= tol;
    }
}

template <Scalar T>
bool same_sorted(const std::vector<T>& a, const std::vector<T>& b, const T& tol) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!near(a[i], b[i], tol)) return false;
    return true;
}

template <Scalar T>
std::vector<T> sorted_row(const BasicSpace<T>& s, std::size_t i) {
    std::vector<T> row(s.data().begin() + i * s.size(), s.data().begin() + (i + 1) * s.size());
    std::sort(row.begin(), row.end());
    return row;
}

}  // namespace detail

/// Sorted multiset of all pairwise distances (i < j).
template <Scalar T>
std::vector<T> distance_multiset(const BasicSpace<T>& s) {
    std::vector<T> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) out.push_back(s(i, j));
    std::sort(out.begin(), out.end());
    return out;
}

/**
 * @brief Distance-preserving bijection a -> b, if any.
 *
 * Backtracking over candidates whose sorted distance rows agree. Result maps
 * index i of a to index result[i] of b.
 */
template <Scalar T>
std::optional<std::vector<std::size_t>> isometry_check(const BasicSpace<T>& a, const BasicSpace<T>& b) {
    const std::size_t n = a.size();
    if (b.size() != n) return std::nullopt;
    T tol = std::max(a.tolerance(), b.tolerance());
    if (!detail::same_sorted(distance_multiset(a), distance_multiset(b), tol)) return std::nullopt;

    std::vector<std::vector<T>> ra(n), rb(n);
    for (std::size_t i = 0; i < n; ++i) {
        ra[i] = detail::sorted_row(a, i);
        rb[i] = detail::sorted_row(b, i);
    }
    std::vector<std::vector<std::size_t>> cand(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            if (detail::same_sorted(ra[i], rb[j], tol)) cand[i].push_back(j);
        if (cand[i].empty()) return std::nullopt;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return cand[x].size() < cand[y].size(); });

    std::vector<std::size_t> map(n, n);
    std::vector<bool> used(n, false);
    auto extend = [&](auto&& self, std::size_t depth) -> bool {
        if (depth == n) return true;
        std::size_t x = order[depth];
        for (std::size_t y : cand[x]) {
            if (used[y]) continue;
            bool ok = true;
            for (std::size_t d = 0; d < depth && ok; ++d) {
                std::size_t x2 = order[d];
                ok = detail::near(a(x, x2), b(y, map[x2]), tol);
            }
            if (!ok) continue;
            map[x] = y;
            used[y] = true;
            if (self(self, depth + 1)) return true;
            used[y] = false;
            map[x] = n;
        }
        return false;
    };
    if (!extend(extend, 0)) return std::nullopt;
    return map;
}

}  // namespace mgeom

#endif  // MGEOM_METRIC_ISOMETRY_HPP
