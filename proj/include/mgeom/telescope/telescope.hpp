#pragma once
#ifndef MGEOM_TELESCOPE_TELESCOPE_HPP
#define MGEOM_TELESCOPE_TELESCOPE_HPP

#include <mgeom/metric/operations.hpp>
#include <mgeom/metric/space.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace mgeom {

enum class Flavor { metric_u, ultrametric_v };

inline std::string_view to_string(Flavor f) { return f == Flavor::metric_u ? "u" : "v"; }

inline Flavor parse_flavor(std::string_view s) {
    if (s == "u" || s == "metric" || s == "metric-u") return Flavor::metric_u;
    if (s == "v" || s == "ultrametric" || s == "ultrametric-v") return Flavor::ultrametric_v;
    throw MalformedInput("unknown flavor '" + std::string(s) + "'; expected u or v");
}

/// l(x) = sqrt(2 - 2 cos x): chord of the unit circle subtending angle x.
inline double chord(double x) { return std::sqrt(2.0 - 2.0 * std::cos(x)); }

/// Apex angle theta(t) = (pi/6)(t + 1) in [pi/6, pi/3].
inline double apex_angle(double t) { return std::numbers::pi / 6.0 * (t + 1.0); }

/// Levels 0..levels of the telescope over q, scaled by K.
struct TelescopeSpec {
    std::vector<double> q;
    std::size_t levels = 1;
    Flavor flavor = Flavor::metric_u;
    double scale = 1.0;

    void check() const {
        if (levels < 1) throw DomainError("telescope needs at least one level beyond level 0");
        if (q.size() < levels + 1) {
            throw DomainError("q has " + std::to_string(q.size()) + " entries; levels 0.." + std::to_string(levels) +
                              " need " + std::to_string(levels + 1));
        }
        for (double v : q)
            if (!(v >= 0.0 && v <= 1.0)) throw DomainError("q entries must lie in [0,1]");
        if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale K must be positive");
    }
};

inline std::string telescope_label(int vertex, std::size_t level) {
    return std::to_string(vertex) + "_" + std::to_string(level);
}

/**
 * Points inf and o_j (o in {1,2,3}, j = 0..levels). Level j is an isosceles
 * triangle with legs 2^{-j-1} (o = 1,2 and 2,3) and base 2^{-j-1} l(theta(q_j));
 * o_j lies at 2^{-j} from inf; distinct levels i, j are |2^{-i} - 2^{-j}| apart
 * (u) or max(2^{-i}, 2^{-j}) apart (v). Everything is scaled by K.
 */
inline FloatSpace telescope(const TelescopeSpec& spec) {
    spec.check();
    const std::size_t n = 1 + 3 * (spec.levels + 1);
    const double K = spec.scale;
    auto level_of = [](std::size_t idx) { return (idx - 1) / 3; };
    auto vertex_of = [](std::size_t idx) { return static_cast<int>((idx - 1) % 3) + 1; };
    return make_space<double>(
        n,
        [&](std::size_t a, std::size_t b) {
            if (a == 0) return K * std::ldexp(1.0, -static_cast<int>(level_of(b)));
            std::size_t i = level_of(a), j = level_of(b);
            if (i == j) {
                double leg = K * std::ldexp(1.0, -static_cast<int>(i) - 1);
                int o = vertex_of(a), p = vertex_of(b);
                return (o == 1 && p == 3) ? leg * chord(apex_angle(spec.q[i])) : leg;
            }
            double x = std::ldexp(1.0, -static_cast<int>(i)), y = std::ldexp(1.0, -static_cast<int>(j));
            return K * (spec.flavor == Flavor::metric_u ? std::abs(x - y) : std::max(x, y));
        },
        [&](std::size_t idx) { return idx == 0 ? std::string("inf") : telescope_label(vertex_of(idx), level_of(idx)); },
        spec.flavor == Flavor::metric_u ? Kind::metric : Kind::ultrametric);
}

struct FingerprintResult {
    bool ok = false;
    std::string failure;
    Flavor flavor = Flavor::metric_u;
    double scale = 0.0;
    std::vector<double> q;
    std::size_t accumulation_point = 0;
    /// Point indices of each level triangle.
    std::vector<std::array<std::size_t, 3>> levels;

    static FingerprintResult fail(std::string why) {
        FingerprintResult r;
        r.failure = std::move(why);
        return r;
    }
};

inline constexpr double kFingerprintTolerance = 1e-9;

namespace detail {

/// q from base/leg of one level triangle, or nullopt when the triangle is not of the telescope shape.
inline std::optional<double> apex_parameter(std::array<double, 3> sides, double leg, double tol) {
    std::sort(sides.begin(), sides.end());
    if (std::abs(sides[1] - leg) > tol || std::abs(sides[2] - leg) > tol) return std::nullopt;
    double ratio = sides[0] / leg;
    if (ratio < chord(std::numbers::pi / 6.0) - tol / leg) return std::nullopt;
    double c = std::clamp(1.0 - ratio * ratio / 2.0, -1.0, 1.0);
    double q = std::acos(c) * 6.0 / std::numbers::pi - 1.0;
    return std::clamp(q, 0.0, 1.0);
}

/// Tries `c` as the accumulation point of a full telescope made of all points.
inline FingerprintResult fingerprint_at(const FloatSpace& s, std::size_t c) {
    const std::size_t n = s.size();
    const std::size_t levels = (n - 1) / 3;
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < n; ++i)
        if (i != c) others.push_back(i);
    std::stable_sort(others.begin(), others.end(), [&](std::size_t x, std::size_t y) { return s(c, x) > s(c, y); });
    const double K = s(c, others.front());
    if (!(K > 0)) return FingerprintResult::fail("degenerate distances");
    const double tol = kFingerprintTolerance * K;

    FingerprintResult r;
    r.scale = K;
    r.accumulation_point = c;
    for (std::size_t j = 0; j < levels; ++j) {
        double expect = K * std::ldexp(1.0, -static_cast<int>(j));
        std::array<std::size_t, 3> tri{others[3 * j], others[3 * j + 1], others[3 * j + 2]};
        for (auto p : tri) {
            if (std::abs(s(c, p) - expect) > tol) {
                return FingerprintResult::fail("distances from the candidate accumulation point do not halve by level");
            }
        }
        std::sort(tri.begin(), tri.end());
        double leg = expect / 2.0;
        auto q = apex_parameter({s(tri[0], tri[1]), s(tri[1], tri[2]), s(tri[0], tri[2])}, leg, tol);
        if (!q) return FingerprintResult::fail("level " + std::to_string(j) + " is not a telescope triangle");
        r.q.push_back(*q);
        r.levels.push_back(tri);
    }
    if (levels >= 2) {
        double d01 = s(r.levels[0][0], r.levels[1][0]);
        if (std::abs(d01 - K / 2.0) <= tol) r.flavor = Flavor::metric_u;
        else if (std::abs(d01 - K) <= tol) r.flavor = Flavor::ultrametric_v;
        else return FingerprintResult::fail("cross-level distance matches neither flavor");
        for (std::size_t i = 0; i < levels; ++i) {
            for (std::size_t j = i + 1; j < levels; ++j) {
                double x = std::ldexp(1.0, -static_cast<int>(i)), y = std::ldexp(1.0, -static_cast<int>(j));
                double expect = K * (r.flavor == Flavor::metric_u ? x - y : x);
                for (auto a : r.levels[i])
                    for (auto b : r.levels[j])
                        if (std::abs(s(a, b) - expect) > tol) {
                            return FingerprintResult::fail("cross-level distance between levels " + std::to_string(i) +
                                                           " and " + std::to_string(j) + " is inconsistent");
                        }
            }
        }
    } else {
        r.flavor = is_ultra(s.kind()) ? Flavor::ultrametric_v : Flavor::metric_u;
    }
    r.ok = true;
    return r;
}

}  // namespace detail

/**
 * @brief Recovers (q, K) and the flavor from an unlabeled telescope truncation.
 *
 * The accumulation point is the unique point whose sorted distances come in
 * triples K, K/2, K/4, ...; each triple is a level triangle whose base/leg
 * ratio gives q_j.
 */
inline FingerprintResult fingerprint(const FloatSpace& s) {
    const std::size_t n = s.size();
    if (n < 4 || (n - 1) % 3 != 0) {
        return FingerprintResult::fail("point count " + std::to_string(n) + " is not 1 + 3(J+1)");
    }
    std::string last = "no accumulation point candidate";
    for (std::size_t c = 0; c < n; ++c) {
        auto r = detail::fingerprint_at(s, c);
        if (r.ok) return r;
        last = r.failure;
    }
    return FingerprintResult::fail(last);
}

inline FingerprintResult fingerprint(const ExactSpace& s) { return fingerprint(to_float(s)); }

/**
 * Telescope with levels 0..levels located inside a larger space.
 *
 * For every candidate accumulation point c and scale K (a distance from c),
 * level j is chosen among points at distance K 2^{-j} from c as a triple with
 * legs K 2^{-j-1}; the extracted subset is then fingerprinted as a whole.
 */
inline FingerprintResult fingerprint_embedded(const FloatSpace& s, std::size_t levels) {
    const std::size_t n = s.size();
    if (n < 1 + 3 * (levels + 1)) return FingerprintResult::fail("space too small for the requested levels");
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<double> scales;
        for (std::size_t x = 0; x < n; ++x)
            if (x != c && s(c, x) > 0) scales.push_back(s(c, x));
        std::sort(scales.begin(), scales.end(), std::greater<>());
        scales.erase(std::unique(scales.begin(), scales.end()), scales.end());
        for (double K : scales) {
            const double tol = kFingerprintTolerance * K;
            std::vector<std::size_t> subset{c};
            bool found_all = true;
            for (std::size_t j = 0; j <= levels && found_all; ++j) {
                double expect = K * std::ldexp(1.0, -static_cast<int>(j));
                std::vector<std::size_t> ring;
                for (std::size_t x = 0; x < n; ++x)
                    if (x != c && std::abs(s(c, x) - expect) <= tol) ring.push_back(x);
                bool found = false;
                for (std::size_t a = 0; a < ring.size() && !found; ++a)
                    for (std::size_t b = a + 1; b < ring.size() && !found; ++b)
                        for (std::size_t d = b + 1; d < ring.size() && !found; ++d) {
                            auto q = detail::apex_parameter(
                                {s(ring[a], ring[b]), s(ring[b], ring[d]), s(ring[a], ring[d])}, expect / 2.0, tol);
                            if (!q) continue;
                            subset.insert(subset.end(), {ring[a], ring[b], ring[d]});
                            found = true;
                        }
                found_all = found;
            }
            if (!found_all) continue;
            auto r = detail::fingerprint_at(restrict(s, subset), 0);
            if (!r.ok) continue;
            r.accumulation_point = c;
            for (auto& tri : r.levels)
                for (auto& p : tri) p = subset[p];
            return r;
        }
    }
    return FingerprintResult::fail("no embedded telescope with " + std::to_string(levels + 1) + " levels found");
}

/// Componentwise comparison of two successful fingerprints.
inline bool same_fingerprint(const FingerprintResult& a, const FingerprintResult& b, double tol = kFingerprintTolerance) {
    if (!a.ok || !b.ok || a.flavor != b.flavor || a.q.size() != b.q.size()) return false;
    for (std::size_t i = 0; i < a.q.size(); ++i)
        if (std::abs(a.q[i] - b.q[i]) > tol) return false;
    return true;
}

}  // namespace mgeom

#endif  // MGEOM_TELESCOPE_TELESCOPE_HPP
