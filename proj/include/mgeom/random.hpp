#pragma once
#ifndef MGEOM_RANDOM_HPP
#define MGEOM_RANDOM_HPP

#include <mgeom/cantor/cantor.hpp>
#include <mgeom/cantor/dimensional_type.hpp>
#include <mgeom/metric/space.hpp>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace mgeom::random {

using Rng = std::mt19937_64;

/// Uniform integer in [lo, hi]. Plain modulo keeps streams identical across standard libraries.
inline std::uint64_t uniform(Rng& rng, std::uint64_t lo, std::uint64_t hi) { return lo + rng() % (hi - lo + 1); }

/// Uniform double in [0, 1) with 53 random bits.
inline double unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1p-53; }

/// Ultrametric on n points from random agglomeration at heights k/4, k = 1, 2, ...
inline ExactSpace random_ultrametric(Rng& rng, std::size_t n, std::string_view prefix = "x") {
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = 0; i < n; ++i) clusters.push_back({i});
    std::vector<Rational> flat(n * n, Rational(0));
    Rational height = 0;
    while (clusters.size() > 1) {
        height += Rational(BigInt(uniform(rng, 1, 4)), BigInt(4));
        std::size_t a = uniform(rng, 0, clusters.size() - 1);
        std::size_t b = uniform(rng, 0, clusters.size() - 2);
        if (b >= a) ++b;
        for (auto x : clusters[a])
            for (auto y : clusters[b]) flat[x * n + y] = flat[y * n + x] = height;
        clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(b));
    }
    return ExactSpace(index_labels(n, prefix), std::move(flat), Kind::ultrametric);
}

/// Shortest-path metric of a complete graph with weights k/4, k in [1, 12].
inline ExactSpace random_metric(Rng& rng, std::size_t n, std::string_view prefix = "x") {
    std::vector<Rational> d(n * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            d[i * n + j] = d[j * n + i] = Rational(BigInt(uniform(rng, 1, 12)), BigInt(4));
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (d[i * n + k] + d[k * n + j] < d[i * n + j]) d[i * n + j] = d[i * n + k] + d[k * n + j];
    return ExactSpace(index_labels(n, prefix), std::move(d), Kind::metric);
}

/**
 * Cantor spec with periodic branching in {2, 3, 4}, an assorted shrinking
 * sequence and at most `max_points` points. With `integer_exponents` every
 * E(n) is an integer, so alpha(n) and all h_n, p_n have exact forms.
 */
inline CantorSpec random_cantor_spec(Rng& rng, std::uint64_t max_depth = 8, std::uint64_t max_points = 512,
                                     bool integer_exponents = false) {
    std::vector<BigInt> ms;
    std::size_t period = uniform(rng, 1, 3);
    for (std::size_t i = 0; i < period; ++i) ms.push_back(BigInt(uniform(rng, 2, 4)));
    auto m = BranchingSequence::periodic(ms);
    ShrinkingSequence alpha = sequences::geometric(1);
    switch (uniform(rng, 0, 3)) {
        case 0:
            alpha = integer_exponents ? sequences::geometric(uniform(rng, 1, 3))
                                      : sequences::geometric(Rational(BigInt(uniform(rng, 1, 8)), BigInt(uniform(rng, 1, 4))));
            break;
        case 1: alpha = integer_exponents ? sequences::geometric(1) : sequences::harmonic(); break;
        case 2: alpha = sequences::square_exponent(); break;
        default: alpha = sequences::cubic_with_dyadic_inserts(); break;
    }
    CantorSpec spec(m, alpha, 1);
    std::uint64_t depth = uniform(rng, 1, max_depth);
    while (depth > 1) {
        auto c = spec.with_depth(depth).point_count();
        if (c && *c <= max_points) break;
        --depth;
    }
    return spec.with_depth(depth);
}

/// Finite target in L: a1 <= a2 <= a3 <= a4 with a2 = a3 when `equal_middle`, entries k/20 up to 2.5.
inline DimensionalType random_target(Rng& rng, bool equal_middle) {
    std::vector<std::uint64_t> v(4);
    for (auto& x : v) x = uniform(rng, 0, 50);
    std::sort(v.begin(), v.end());
    if (equal_middle) v[2] = v[1];
    DimensionalType t;
    for (int i = 0; i < 4; ++i) t.a[i] = Dim(Rational(BigInt(v[i]), BigInt(20)));
    t.check();
    return t;
}

/// Random permutation of 0..n-1.
inline std::vector<std::size_t> permutation(Rng& rng, std::size_t n) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[uniform(rng, 0, i - 1)]);
    return p;
}

/// Relabels and reorders points by `perm`: new point i is old point perm[i].
template <Scalar T>
BasicSpace<T> permuted(const BasicSpace<T>& s, const std::vector<std::size_t>& perm) {
    const std::size_t n = s.size();
    std::vector<T> flat(n * n);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(s.label(perm[i]));
        for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = s(perm[i], perm[j]);
    }
    return BasicSpace<T>(std::move(labels), std::move(flat), s.kind());
}

}  // namespace mgeom::random

#endif  // MGEOM_RANDOM_HPP
