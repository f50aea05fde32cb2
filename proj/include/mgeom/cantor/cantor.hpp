#pragma once
#ifndef MGEOM_CANTOR_CANTOR_HPP
#define MGEOM_CANTOR_CANTOR_HPP

#include <mgeom/cantor/sequences.hpp>
#include <mgeom/metric/space.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mgeom {

inline constexpr std::uint64_t kEnumerationBudget = 1'000'000;

/// S(m, alpha) truncated at `depth` levels.
struct CantorSpec {
    BranchingSequence m;
    ShrinkingSequence alpha;
    std::uint64_t depth = 1;

    CantorSpec(BranchingSequence m_, ShrinkingSequence alpha_, std::uint64_t depth_ = 1)
        : m(std::move(m_)), alpha(std::move(alpha_)), depth(depth_) {
        if (depth < 1) throw DomainError("depth must be >= 1");
    }

    /// prod_{i<depth} m_i when at most the enumeration budget.
    std::optional<std::uint64_t> point_count() const {
        auto p = m.product(0, depth, 64);
        if (!p || *p > kEnumerationBudget) return std::nullopt;
        return p->convert_to<std::uint64_t>();
    }

    bool enumerable() const { return point_count().has_value(); }

    CantorSpec with_depth(std::uint64_t d) const { return CantorSpec(m, alpha, d); }

    /// (m^{(k)}, alpha^{(k)}): isometric to any closed ball B(x, alpha(k)).
    CantorSpec shifted(std::uint64_t k) const {
        return CantorSpec(m.shifted(k), alpha.shifted(k), depth > k ? depth - k : 1);
    }

    /// alpha -> alpha^gamma; the metric d -> d^gamma.
    CantorSpec snowflaked(const Rational& gamma) const { return CantorSpec(m, alpha.snowflaked(gamma), depth); }

    std::string descriptor() const { return m.descriptor() + "; " + alpha.descriptor(); }
};

/// A covering number as an exact count (when materializable) and its exact log2.
struct IntLog {
    std::optional<BigInt> count;
    Magnitude log2;
    /// Ball level(s) used: covering balls are cylinders of length `fine_level`.
    std::uint64_t coarse_level = 0;
    std::uint64_t fine_level = 0;
};

/// -log2 r for a positive rational radius.
inline Magnitude neg_log2(const Rational& r) {
    if (r <= 0) throw DomainError("radius must be positive");
    return Magnitude::log2_of(1 / r);
}

namespace detail {

inline IntLog cylinder_count(const CantorSpec& spec, std::uint64_t lo, std::uint64_t hi) {
    IntLog out;
    out.coarse_level = lo;
    out.fine_level = hi;
    if (hi <= lo) {
        out.count = BigInt(1);
        out.log2 = Magnitude(0);
        return out;
    }
    out.log2 = spec.m.log2_prefix(hi) - spec.m.log2_prefix(lo);
    out.count = spec.m.product(lo, hi);
    return out;
}

}  // namespace detail

/**
 * N(S(m), r) = m_0...m_n for alpha(n+1) <= r < alpha(n); 1 when r >= alpha(0).
 * The radius is passed as -log2 r.
 */
inline IntLog covering_formula(const CantorSpec& spec, const Magnitude& neg_log2_r) {
    return detail::cylinder_count(spec, 0, spec.alpha.level(neg_log2_r));
}

inline IntLog covering_formula(const CantorSpec& spec, const Rational& r) {
    return covering_formula(spec, neg_log2(r));
}

/**
 * N(B(x,R), r) = m_{n+1}...m_{n+m} with R in gap n and r in gap n+m; 1 when m = 0.
 * Radii are passed as -log2; requires R > r > 0.
 */
inline IntLog ball_covering_formula(const CantorSpec& spec, const Magnitude& neg_log2_R, const Magnitude& neg_log2_r) {
    if (!(neg_log2_R < neg_log2_r)) throw DomainError("ball covering requires R > r");
    return detail::cylinder_count(spec, spec.alpha.level(neg_log2_R), spec.alpha.level(neg_log2_r));
}

inline IntLog ball_covering_formula(const CantorSpec& spec, const Rational& R, const Rational& r) {
    return ball_covering_formula(spec, neg_log2(R), neg_log2(r));
}

/// Digits of point `index` in mixed radix (m_0, ..., m_{depth-1}), most significant first.
inline std::vector<std::uint64_t> cantor_digits(const std::vector<std::uint64_t>& radix, std::uint64_t index) {
    std::vector<std::uint64_t> d(radix.size());
    for (std::size_t i = radix.size(); i-- > 0;) {
        d[i] = index % radix[i];
        index /= radix[i];
    }
    return d;
}

inline std::string cantor_label(const std::vector<std::uint64_t>& digits) {
    std::string s;
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (i) s += '.';
        s += std::to_string(digits[i]);
    }
    return s;
}

namespace detail {

template <Scalar T>
BasicSpace<T> enumerate_with(const CantorSpec& spec, const std::vector<T>& alpha) {
    auto count = spec.point_count();
    if (!count) throw SizeError("truncation of " + spec.descriptor() + " exceeds 10^6 points");
    if (*count > kMaxPoints<T>) {
        throw SizeError("truncation has " + std::to_string(*count) + " points; dense matrices are capped at " +
                        std::to_string(kMaxPoints<T>));
    }
    std::vector<std::uint64_t> radix;
    for (std::uint64_t i = 0; i < spec.depth; ++i) radix.push_back(spec.m.count(i)->convert_to<std::uint64_t>());
    // Block size below level v: points agreeing on v+1 leading digits share index / stride[v].
    std::vector<std::uint64_t> stride(spec.depth, 1);
    for (std::size_t i = spec.depth - 1; i-- > 0;) stride[i] = stride[i + 1] * radix[i + 1];
    const std::uint64_t n = *count;
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) labels.push_back(cantor_label(cantor_digits(radix, i)));
    std::vector<T> flat(n * n, T(0));
    for (std::uint64_t x = 0; x < n; ++x) {
        for (std::uint64_t y = x + 1; y < n; ++y) {
            // Digits 0..i agree exactly when x / stride[i] == y / stride[i].
            std::uint64_t v = 0;
            while (x / stride[v] == y / stride[v]) ++v;
            flat[x * n + y] = alpha[v];
            flat[y * n + x] = alpha[v];
        }
    }
    return BasicSpace<T>(std::move(labels), std::move(flat), Kind::ultrametric);
}

}  // namespace detail

/// All length-depth prefixes with d(x,y) = alpha(first disagreement), exact values.
inline ExactSpace enumerate_exact(const CantorSpec& spec) {
    std::vector<Rational> alpha;
    for (std::uint64_t i = 0; i < spec.depth; ++i) {
        auto v = spec.alpha.exact_value(i);
        if (!v) throw DomainError("alpha(" + std::to_string(i) + ") has no exact rational form; use enumerate_float");
        alpha.push_back(*v);
    }
    return detail::enumerate_with(spec, alpha);
}

inline FloatSpace enumerate_float(const CantorSpec& spec) {
    std::vector<double> alpha;
    for (std::uint64_t i = 0; i < spec.depth; ++i) alpha.push_back(spec.alpha.value(i));
    return detail::enumerate_with(spec, alpha);
}

/// Exact when every alpha(v), v < depth, is rational; float otherwise.
inline AnySpace enumerate(const CantorSpec& spec) {
    for (std::uint64_t i = 0; i < spec.depth; ++i) {
        if (!spec.alpha.exact_value(i)) return enumerate_float(spec);
    }
    return enumerate_exact(spec);
}

/// mu(B(x, alpha(n+1))) = 1 / (m_0...m_n).
inline Rational measure_ball(const CantorSpec& spec, std::uint64_t n) {
    auto p = spec.m.product(0, n + 1);
    if (!p) throw SizeError("m_0...m_n is not materializable");
    return Rational(BigInt(1), *p);
}

// ---------------------------------------------------------------------------
// Dimension sequences

struct DimensionRow {
    std::uint64_t n = 0;
    Magnitude h;  ///< sum_{i<=n} L(i) / E(n+1)
    Magnitude p;  ///< sum_{i<=n} L(i) / E(n)
};

struct DimensionTable {
    std::vector<DimensionRow> rows;

    /// min h_n and max p_n over n in [lo, hi].
    std::pair<Magnitude, Magnitude> window(std::uint64_t lo, std::uint64_t hi) const {
        std::optional<Magnitude> h, p;
        for (const auto& r : rows) {
            if (r.n < lo || r.n > hi) continue;
            h = h ? min(*h, r.h) : r.h;
            p = p ? max(*p, r.p) : r.p;
        }
        if (!h) throw DomainError("empty estimator window");
        return {*h, *p};
    }
};

/// h_n and p_n for n <= N, skipping the prefix with alpha(n) >= 1.
inline DimensionTable dim_sequences(const CantorSpec& spec, std::uint64_t N) {
    DimensionTable t;
    t.rows.reserve(N + 1);
    Magnitude sum(0);
    Magnitude e_next = spec.alpha.neg_log2(0);
    for (std::uint64_t n = 0; n <= N; ++n) {
        sum += spec.m.log2_count(n);
        Magnitude e_n = e_next;
        e_next = spec.alpha.neg_log2(n + 1);
        if (!(e_n > Magnitude(0))) continue;
        t.rows.push_back({n, sum / e_next, sum / e_n});
    }
    return t;
}

// ---------------------------------------------------------------------------
// Assouad function

struct ThetaScale {
    std::uint64_t n = 0;  ///< ball radius R = alpha(n)
    Magnitude log2_count;
};

struct ThetaResult {
    Magnitude neg_log2_eps;
    Magnitude log2_theta;  ///< max over the window
    Magnitude eta;         ///< log2_theta / -log2 eps
    std::uint64_t argmax = 0;
    std::uint64_t window = 0;
    std::vector<ThetaScale> scales;
};

/**
 * max over R = alpha(n), n <= window, of N(B(x,R), eps R).
 *
 * For these spaces the ball is constant on [alpha(n+1), alpha(n)) while the
 * count grows as r shrinks, so the value is exact over R >= alpha(window).
 */
inline ThetaResult theta_eta(const CantorSpec& spec, const Magnitude& neg_log2_eps, std::uint64_t window = 200) {
    if (!(neg_log2_eps > Magnitude(0))) throw DomainError("epsilon must lie in (0,1)");
    ThetaResult out;
    out.neg_log2_eps = neg_log2_eps;
    out.window = window;
    std::optional<Magnitude> best;
    for (std::uint64_t n = 0; n <= window; ++n) {
        Magnitude R = spec.alpha.neg_log2(n);
        IntLog c = ball_covering_formula(spec, R, R + neg_log2_eps);
        out.scales.push_back({n, c.log2});
        if (!best || *best < c.log2) {
            best = c.log2;
            out.argmax = n;
        }
    }
    out.log2_theta = *best;
    out.eta = out.log2_theta / neg_log2_eps;
    return out;
}

inline ThetaResult theta_eta(const CantorSpec& spec, const Rational& eps, std::uint64_t window = 200) {
    if (eps <= 0 || eps >= 1) throw DomainError("epsilon must lie in (0,1)");
    return theta_eta(spec, neg_log2(eps), window);
}

/// Finite-window certificate that Theta(eps) is unbounded (see README).
inline bool non_doubling_flag(const ThetaResult& t, unsigned witnesses = 8) {
    if (t.scales.size() < 4) return false;
    std::size_t half = t.scales.size() / 2;
    Magnitude first = t.scales[0].log2_count, second = t.scales[half].log2_count;
    for (std::size_t i = 0; i < half; ++i) first = max(first, t.scales[i].log2_count);
    for (std::size_t i = half; i < t.scales.size(); ++i) second = max(second, t.scales[i].log2_count);
    return first < second && t.log2_theta >= t.neg_log2_eps * Magnitude(witnesses);
}

/// Upper bound log2(max m) / min_i (E(i+1) - E(i)) over i < n_max (adim bound by ball splitting).
inline Magnitude upadim_bound(const CantorSpec& spec, std::uint64_t n_max) {
    std::optional<Magnitude> gap, lm;
    for (std::uint64_t i = 0; i <= n_max; ++i) {
        Magnitude g = spec.alpha.neg_log2(i + 1) - spec.alpha.neg_log2(i);
        gap = gap ? min(*gap, g) : g;
        Magnitude l = spec.m.log2_count(i);
        lm = lm ? max(*lm, l) : l;
    }
    return *lm / *gap;
}

}  // namespace mgeom

#endif  // MGEOM_CANTOR_CANTOR_HPP
