#pragma once
#ifndef MGEOM_METRIC_OPERATIONS_HPP
#define MGEOM_METRIC_OPERATIONS_HPP

#include <mgeom/metric/space.hpp>
#include <mgeom/metric/validate.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace mgeom {

/// Exponent p of the combiner a (+)_p b = (a^p + b^p)^(1/p); p = infinity is max.
struct GlueExponent {
    double p = 1.0;

    static GlueExponent additive() { return {1.0}; }
    static GlueExponent maximum() { return {std::numeric_limits<double>::infinity()}; }

    bool is_additive() const { return p == 1.0; }
    bool is_maximum() const { return std::isinf(p); }

    void check() const {
        if (!(p >= 1.0)) throw DomainError("glue exponent must be >= 1");
    }
};

template <Scalar T>
struct BasepointedFamily {
    std::vector<BasicSpace<T>> spaces;
    std::vector<std::size_t> basepoints;
    BasicSpace<T> glue;
};

namespace detail {

template <Scalar T>
T combine3(const T& a, const T& b, const T& c, const GlueExponent& g) {
    if (g.is_maximum()) return std::max({a, b, c});
    if (g.is_additive()) return a + b + c;
    if constexpr (ScalarTraits<T>::exact) {
        throw DomainError("exact (+)_p is only defined for p in {1, inf}; convert with to_float()");
    } else {
        return std::pow(std::pow(a, g.p) + std::pow(b, g.p) + std::pow(c, g.p), 1.0 / g.p);
    }
}

}  // namespace detail

/**
 * @brief Amalgam of basepointed spaces glued through the index metric r.
 *
 * Cross distance between x in X_i and y in X_j is
 * d_i(x,p_i) (+)_p r(i,j) (+)_p d_j(p_j,y). Labels become "i:label"
 * with 1-based i.
 */
template <Scalar T>
BasicSpace<T> p_amalgam(const BasepointedFamily<T>& fam, GlueExponent g) {
    g.check();
    const std::size_t k = fam.spaces.size();
    if (k == 0) throw MalformedInput("amalgam of an empty family");
    if (fam.basepoints.size() != k) throw MalformedInput("one basepoint per space required");
    if (fam.glue.size() != k) throw MalformedInput("glue must have one point per space");
    for (std::size_t i = 0; i < k; ++i) {
        if (fam.basepoints[i] >= fam.spaces[i].size()) throw MalformedInput("basepoint out of range");
    }
    bool pseudo = is_pseudo(fam.glue.kind());
    bool ultra = is_ultra(fam.glue.kind());
    for (const auto& s : fam.spaces) {
        pseudo = pseudo || is_pseudo(s.kind());
        ultra = ultra && is_ultra(s.kind());
    }
    if (g.is_maximum() && !ultra) {
        throw KindMismatch("p = inf amalgam requires (pseudo-)ultrametric components and glue");
    }
    if (!g.is_maximum() && !g.is_additive()) {
        for (const auto& s : fam.spaces) {
            if (!is_p_metric(s, g.p)) throw KindMismatch("component is not a p-metric for the requested p");
        }
        if (!is_p_metric(fam.glue, g.p)) throw KindMismatch("glue is not a p-metric for the requested p");
    }

    std::vector<std::size_t> offset(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) offset[i + 1] = offset[i] + fam.spaces[i].size();
    const std::size_t n = offset[k];
    if (n > kMaxPoints<T>) throw SizeError("amalgam exceeds the dense cap");

    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < k; ++i)
        for (const auto& l : fam.spaces[i].labels()) labels.push_back(std::to_string(i + 1) + ":" + l);

    std::vector<T> flat(n * n, T(0));
    for (std::size_t i = 0; i < k; ++i) {
        const auto& si = fam.spaces[i];
        for (std::size_t a = 0; a < si.size(); ++a) {
            for (std::size_t b = 0; b < si.size(); ++b) flat[(offset[i] + a) * n + offset[i] + b] = si(a, b);
        }
        for (std::size_t j = i + 1; j < k; ++j) {
            const auto& sj = fam.spaces[j];
            for (std::size_t a = 0; a < si.size(); ++a) {
                for (std::size_t b = 0; b < sj.size(); ++b) {
                    T v = detail::combine3(si(a, fam.basepoints[i]), fam.glue(i, j), sj(fam.basepoints[j], b), g);
                    flat[(offset[i] + a) * n + offset[j] + b] = v;
                    flat[(offset[j] + b) * n + offset[i] + a] = v;
                }
            }
        }
    }
    return BasicSpace<T>(std::move(labels), std::move(flat), make_kind(g.is_maximum(), pseudo));
}

/// l-infinity product; labels "(a,b)".
template <Scalar T>
BasicSpace<T> linf_product(const BasicSpace<T>& a, const BasicSpace<T>& b) {
    const std::size_t na = a.size(), nb = b.size(), n = na * nb;
    if (n > kMaxPoints<T>) throw SizeError("product exceeds the dense cap");
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) labels.push_back("(" + a.label(i) + "," + b.label(j) + ")");
    std::vector<T> flat(n * n, T(0));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            const T& v = std::max(a(x / nb, y / nb), b(x % nb, y % nb));
            flat[x * n + y] = v;
            flat[y * n + x] = v;
        }
    }
    bool ultra = is_ultra(a.kind()) && is_ultra(b.kind());
    bool pseudo = is_pseudo(a.kind()) || is_pseudo(b.kind());
    return BasicSpace<T>(std::move(labels), std::move(flat), make_kind(ultra, pseudo));
}

/// Entrywise d^gamma. Exact spaces need a rational result for every entry.
template <Scalar T>
BasicSpace<T> snowflake(const BasicSpace<T>& s, const T& gamma) {
    if (!(gamma > 0)) throw DomainError("snowflake exponent must be positive");
    std::vector<T> flat;
    flat.reserve(s.data().size());
    if constexpr (ScalarTraits<T>::exact) {
        std::map<Rational, Rational> cache;
        for (const auto& v : s.data()) {
            auto it = cache.find(v);
            if (it == cache.end()) {
                auto p = exact_pow(v, gamma);
                if (!p) throw DomainError(to_string(v) + "^" + to_string(gamma) + " is not rational");
                it = cache.emplace(v, *p).first;
            }
            flat.push_back(it->second);
        }
    } else {
        for (double v : s.data()) flat.push_back(v == 0 ? 0.0 : std::pow(v, gamma));
    }
    BasicSpace<T> out(s.labels(), std::move(flat), s.kind());
    if (gamma > 1 && !is_ultra(s.kind())) require_valid(out, "snowflaked space");
    return out;
}

/// lambda * d; lambda = 0 collapses everything to a pseudo-metric.
template <Scalar T>
BasicSpace<T> dilate(const BasicSpace<T>& s, const T& lambda) {
    if (lambda < 0) throw DomainError("dilation factor must be non-negative");
    std::vector<T> flat;
    flat.reserve(s.data().size());
    for (const auto& v : s.data()) flat.push_back(v * lambda);
    Kind k = s.kind();
    if (lambda == 0 && s.size() > 1) k = make_kind(is_ultra(k), true);
    return BasicSpace<T>(s.labels(), std::move(flat), k);
}

template <Scalar T>
struct QuotientResult {
    BasicSpace<T> space;
    /// class_of[i] is the quotient point of input point i.
    std::vector<std::size_t> class_of;
};

/// Metric identification of zero-distance points.
template <Scalar T>
QuotientResult<T> quotient(const BasicSpace<T>& s) {
    const std::size_t n = s.size();
    std::vector<std::size_t> cls(n, n), reps;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] != n) continue;
        cls[i] = reps.size();
        for (std::size_t j = i + 1; j < n; ++j) {
            if (cls[j] == n && s(i, j) == 0) cls[j] = reps.size();
        }
        reps.push_back(i);
    }
    const std::size_t m = reps.size();
    const T tol = s.tolerance();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            T diff = s(i, j) - s(reps[cls[i]], reps[cls[j]]);
            if (diff < 0) diff = -diff;
            if (diff > tol) throw InternalError("quotient representatives disagree; input is not a pseudo-metric");
        }
    }
    std::vector<std::string> labels;
    labels.reserve(m);
    for (std::size_t r : reps) labels.push_back(s.label(r));
    std::vector<T> flat(m * m, T(0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) flat[a * m + b] = s(reps[a], reps[b]);
    return {BasicSpace<T>(std::move(labels), std::move(flat), make_kind(is_ultra(s.kind()), false)),
            std::move(cls)};
}

/// Induced subspace on the given indices (in that order).
template <Scalar T>
BasicSpace<T> restrict(const BasicSpace<T>& s, const std::vector<std::size_t>& subset) {
    if (subset.empty()) throw DomainError("restriction to an empty subset");
    std::vector<bool> seen(s.size(), false);
    for (std::size_t i : subset) {
        if (i >= s.size()) throw DomainError("subset index out of range");
        if (seen[i]) throw DomainError("subset index repeated");
        seen[i] = true;
    }
    const std::size_t m = subset.size();
    std::vector<std::string> labels;
    labels.reserve(m);
    for (std::size_t i : subset) labels.push_back(s.label(i));
    std::vector<T> flat(m * m, T(0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) flat[a * m + b] = s(subset[a], subset[b]);
    return BasicSpace<T>(std::move(labels), std::move(flat), s.kind());
}

/// Indices of the closed ball B(center, radius).
template <Scalar T>
std::vector<std::size_t> ball_indices(const BasicSpace<T>& s, std::size_t center, const T& radius) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s(center, i) <= radius) out.push_back(i);
    return out;
}

/// Single-point space.
template <Scalar T>
BasicSpace<T> point_space(std::string label = "pt") {
    return BasicSpace<T>({std::move(label)}, std::vector<T>{T(0)}, Kind::ultrametric);
}

/// n points, all pairwise distances equal to d (> 0).
template <Scalar T>
BasicSpace<T> equilateral(std::size_t n, const T& d, std::string_view prefix = "") {
    return make_space<T>(
        n, [&](std::size_t, std::size_t) { return d; }, [&](std::size_t i) { return std::string(prefix) + std::to_string(i); },
        Kind::ultrametric);
}

}  // namespace mgeom

#endif  // MGEOM_METRIC_OPERATIONS_HPP
