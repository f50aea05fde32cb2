#pragma once
#ifndef MGEOM_TELESCOPE_SIMPLEX_PATH_HPP
#define MGEOM_TELESCOPE_SIMPLEX_PATH_HPP

#include <mgeom/cantor/cantor.hpp>
#include <mgeom/gromov/gromov.hpp>
#include <mgeom/metric/isometry.hpp>
#include <mgeom/metric/operations.hpp>
#include <mgeom/telescope/telescope.hpp>

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

namespace mgeom {

/// Barycentric coordinates s_1..s_{n+1} on the n-simplex, exact.
struct SimplexPoint {
    std::vector<Rational> s;

    SimplexPoint() = default;
    explicit SimplexPoint(std::vector<Rational> coords) : s(std::move(coords)) { check(); }

    /// Vertex v_i, 1-based.
    static SimplexPoint vertex(std::size_t n, std::size_t i) {
        if (i < 1 || i > n + 1) throw DomainError("vertex index out of range");
        std::vector<Rational> c(n + 1, Rational(0));
        c[i - 1] = 1;
        return SimplexPoint(std::move(c));
    }

    /// (1 - t) a + t b.
    static SimplexPoint lerp(const SimplexPoint& a, const SimplexPoint& b, const Rational& t) {
        if (a.s.size() != b.s.size()) throw DomainError("segment endpoints live in different simplices");
        std::vector<Rational> c;
        for (std::size_t i = 0; i < a.s.size(); ++i) c.push_back((1 - t) * a.s[i] + t * b.s[i]);
        return SimplexPoint(std::move(c));
    }

    /// "v2" or a comma list of rationals.
    static SimplexPoint parse(std::string_view text, std::size_t n) {
        if (!text.empty() && text[0] == 'v') return vertex(n, std::stoul(std::string(text.substr(1))));
        std::vector<Rational> c;
        std::string cur;
        for (char ch : std::string(text) + ",") {
            if (ch == ',') {
                c.push_back(parse_rational(cur));
                cur.clear();
            } else if (ch != ' ') {
                cur.push_back(ch);
            }
        }
        if (c.size() != n + 1) throw MalformedInput("simplex point needs " + std::to_string(n + 1) + " coordinates");
        return SimplexPoint(std::move(c));
    }

    void check() const {
        if (s.size() < 2) throw DomainError("simplex point needs at least two coordinates");
        Rational sum = 0;
        for (const auto& v : s) {
            if (v < 0) throw DomainError("barycentric coordinates must be non-negative");
            sum += v;
        }
        if (sum != 1) throw DomainError("barycentric coordinates must sum to 1, got " + to_string(sum));
    }

    std::size_t dimension() const { return s.size() - 1; }

    Rational max_coordinate() const { return *std::max_element(s.begin(), s.end()); }

    bool is_vertex() const { return max_coordinate() == 1; }
};

/// xi(s) = 1 - max_j s_j; zero exactly on the vertices.
inline Rational xi(const SimplexPoint& p) { return 1 - p.max_coordinate(); }

/// zeta_i(s) = max(s_i, 1 - max_j s_j), 1-based i.
inline Rational zeta(const SimplexPoint& p, std::size_t i) {
    if (i < 1 || i > p.s.size()) throw DomainError("zeta index out of range");
    return std::max(p.s[i - 1], xi(p));
}

struct PathSpec {
    std::size_t n = 1;
    std::size_t m = 3;
    std::vector<ExactSpace> spaces;  ///< X_1..X_{n+1}
    std::vector<std::size_t> basepoints;
    /// Metric on the n+2 component indices; unit equilateral when empty.
    std::optional<ExactSpace> glue;
    /// Depth of the (0,0,0,0) factor P.
    std::uint64_t p_depth = 2;
    /// Telescope levels 0..levels; n + m + 1 when unset.
    std::optional<std::size_t> levels;
    Flavor flavor = Flavor::metric_u;

    std::size_t telescope_levels() const { return levels.value_or(n + m + 1); }

    void check() const {
        if (n < 1) throw DomainError("simplex dimension n must be >= 1");
        if (m < 2) throw DomainError("branch count m must be >= 2");
        if (spaces.size() != n + 1) throw DomainError("need n+1 component spaces");
        if (!basepoints.empty() && basepoints.size() != n + 1) throw DomainError("one basepoint per component");
        for (std::size_t i = 0; i < spaces.size(); ++i) {
            if (flavor == Flavor::ultrametric_v && !is_ultra(spaces[i].kind())) {
                throw KindMismatch("ultrametric flavor needs ultrametric components");
            }
            require_valid(spaces[i], "component X_" + std::to_string(i + 1));
        }
        if (glue) {
            if (glue->size() != n + 2) throw DomainError("glue needs n+2 points");
            if (flavor == Flavor::ultrametric_v && !is_ultra(glue->kind())) {
                throw KindMismatch("ultrametric flavor needs an ultrametric glue");
            }
            require_valid(*glue, "glue");
        }
        if (telescope_levels() + 1 < n + 1 + m) {
            throw DomainError("telescope needs at least n+m+1 levels to carry the simplex point and branch");
        }
    }

    std::size_t basepoint(std::size_t i) const { return basepoints.empty() ? 0 : basepoints[i]; }
};

/// tau(s, k) = (s_1, ..., s_{n+1}, xi [k=1], ..., xi [k=m], 0, ...) padded to `length`.
inline std::vector<Rational> hilbert_point(const SimplexPoint& p, std::size_t k, std::size_t m, std::size_t length) {
    if (k < 1 || k > m) throw DomainError("branch index out of range");
    std::vector<Rational> q(p.s.begin(), p.s.end());
    Rational x = xi(p);
    for (std::size_t j = 1; j <= m; ++j) q.push_back(j == k ? x : Rational(0));
    if (q.size() > length) throw DomainError("telescope too short for the Hilbert-cube coordinates");
    q.resize(length, Rational(0));
    return q;
}

/// The (0,0,0,0) factor: S(2, 2^{-n^2}) truncated at `depth`.
inline ExactSpace zero_type_factor(std::uint64_t depth) {
    return enumerate_exact(CantorSpec(BranchingSequence::constant(2), sequences::square_exponent(), depth));
}

struct PathSample {
    SimplexPoint point;
    std::size_t branch = 1;
    Rational xi_value;
    std::vector<Rational> zeta_values;
    std::vector<double> q;
    FloatSpace space;  ///< D_{s,k}, a pseudo-metric
    QuotientResult<double> quotient;
};

/**
 * @brief D_{s,k} on Z = Y_1 u ... u Y_{n+1} u telescope.
 *
 * Y_i = zeta_i(s) (X_i x_inf xi(s) P); the telescope is xi(s) u[tau(s,k)] (v for
 * the ultrametric flavor); components are glued at basepoints through
 * xi(s) r with + (metric) or max (ultrametric).
 */
inline PathSample simplex_metric(const PathSpec& path, const SimplexPoint& s, std::size_t k) {
    path.check();
    if (s.dimension() != path.n) throw DomainError("simplex point has the wrong dimension");
    if (k < 1 || k > path.m) throw DomainError("branch index out of range");
    PathSample out;
    out.point = s;
    out.branch = k;
    out.xi_value = xi(s);
    const ExactSpace P = zero_type_factor(path.p_depth);
    const ExactSpace P_scaled = dilate(P, out.xi_value);

    BasepointedFamily<double> fam;
    for (std::size_t i = 0; i < path.n + 1; ++i) {
        Rational z = zeta(s, i + 1);
        out.zeta_values.push_back(z);
        ExactSpace y = dilate(linf_product(path.spaces[i], P_scaled), z);
        fam.spaces.push_back(to_float(y));
        fam.basepoints.push_back(path.basepoint(i) * P.size());
    }
    const std::size_t levels = path.telescope_levels();
    auto q = hilbert_point(s, k, path.m, levels + 1);
    for (const auto& v : q) out.q.push_back(to_double(v));
    TelescopeSpec ts{out.q, levels, path.flavor, 1.0};
    fam.spaces.push_back(dilate(telescope(ts), to_double(out.xi_value)));
    fam.basepoints.push_back(0);
    ExactSpace glue = path.glue ? *path.glue : equilateral<Rational>(path.n + 2, Rational(1), "c");
    fam.glue = to_float(dilate(glue, out.xi_value));
    out.space = p_amalgam(fam, path.flavor == Flavor::metric_u ? GlueExponent::additive() : GlueExponent::maximum());
    out.quotient = quotient(out.space);
    return out;
}

struct AuditRow {
    Rational t;
    double sup_distance = 0;
    double gh_bound = 0;
};

struct ContinuityAudit {
    std::vector<AuditRow> rows;
    double max_sup = 0;
    bool start_matches = false;  ///< quotient at a vertex start is isometric to its X_i
    bool end_matches = false;
};

namespace detail {

inline std::optional<std::size_t> vertex_index(const SimplexPoint& s) {
    for (std::size_t i = 0; i < s.s.size(); ++i)
        if (s.s[i] == 1) return i;
    return std::nullopt;
}

inline bool vertex_matches(const PathSpec& path, const PathSample& sample) {
    auto v = vertex_index(sample.point);
    if (!v) return false;
    return isometry_check(sample.quotient.space, to_float(path.spaces[*v])).has_value();
}

}  // namespace detail

/**
 * Consecutive sup distances of D along the segment from `from` to `to` at
 * t_k = k / grid, with the GH bound 2 sup distance of each step.
 */
inline ContinuityAudit path_continuity_audit(const PathSpec& path, const SimplexPoint& from, const SimplexPoint& to,
                                             std::size_t grid, std::size_t k = 1) {
    if (grid < 1) throw DomainError("grid must be positive");
    ContinuityAudit audit;
    std::optional<PathSample> prev;
    for (std::size_t g = 0; g <= grid; ++g) {
        Rational t{BigInt(g), BigInt(grid)};
        PathSample cur = simplex_metric(path, SimplexPoint::lerp(from, to, t), k);
        if (g == 0) audit.start_matches = detail::vertex_matches(path, cur);
        if (g == grid) audit.end_matches = detail::vertex_matches(path, cur);
        AuditRow row{t, 0.0, 0.0};
        if (prev) {
            row.sup_distance = sup_distance(prev->space, cur.space);
            row.gh_bound = 2 * row.sup_distance;
        }
        audit.max_sup = std::max(audit.max_sup, row.sup_distance);
        audit.rows.push_back(row);
        prev = std::move(cur);
    }
    return audit;
}

/// max step at `grid` over max step at 2 grid; about 2 for Lipschitz paths.
inline double refinement_ratio(const PathSpec& path, const SimplexPoint& from, const SimplexPoint& to, std::size_t grid,
                               std::size_t k = 1) {
    double coarse = path_continuity_audit(path, from, to, grid, k).max_sup;
    double fine = path_continuity_audit(path, from, to, 2 * grid, k).max_sup;
    if (fine == 0) return coarse == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return coarse / fine;
}

/// Interior sample {a / g : a_i >= 1, sum a_i = g} of the n-simplex.
inline std::vector<SimplexPoint> interior_sample(std::size_t n, std::size_t g) {
    if (g < n + 1) throw DomainError("denominator too small for a strictly interior sample");
    std::vector<SimplexPoint> out;
    std::vector<std::size_t> a(n + 1, 1);
    auto rec = [&](auto&& self, std::size_t i, std::size_t left) -> void {
        if (i == n) {
            a[n] = left;
            std::vector<Rational> c;
            for (auto v : a) c.emplace_back(BigInt(v), BigInt(g));
            out.emplace_back(std::move(c));
            return;
        }
        for (std::size_t v = 1; v + (n - i) <= left; ++v) {
            a[i] = v;
            self(self, i + 1, left - v);
        }
    };
    rec(rec, 0, g);
    return out;
}

struct BranchSelection {
    std::size_t branch = 0;
    std::size_t samples = 0;
    /// collisions[k-1]: sample points whose quotient is isometric to some X_i.
    std::vector<std::size_t> collisions;
    /// Distinct embedded-telescope fingerprints over the sample for the chosen branch.
    std::size_t distinct_fingerprints = 0;
};

/**
 * Smallest branch k whose sampled interior spaces collide with no X_i, with
 * the fingerprint count as a certificate. Requires m = n + 2 and pairwise
 * non-isometric X_i.
 */
inline BranchSelection vertex_branch_selection(const PathSpec& path, std::size_t g = 7) {
    path.check();
    if (path.m != path.n + 2) throw PreconditionError("branch selection needs m = n + 2");
    for (std::size_t i = 0; i < path.spaces.size(); ++i)
        for (std::size_t j = i + 1; j < path.spaces.size(); ++j)
            if (isometry_check(path.spaces[i], path.spaces[j])) {
                throw PreconditionError("X_" + std::to_string(i + 1) + " and X_" + std::to_string(j + 1) +
                                        " are isometric; distinct components are required");
            }
    auto sample = interior_sample(path.n, g);
    BranchSelection out;
    out.samples = sample.size();
    std::vector<FloatSpace> targets;
    for (const auto& x : path.spaces) targets.push_back(to_float(x));
    for (std::size_t k = 1; k <= path.m; ++k) {
        std::size_t hits = 0;
        std::vector<FingerprintResult> prints;
        for (const auto& s : sample) {
            PathSample d = simplex_metric(path, s, k);
            for (const auto& x : targets)
                if (isometry_check(d.quotient.space, x)) {
                    ++hits;
                    break;
                }
            prints.push_back(fingerprint_embedded(d.quotient.space, path.telescope_levels()));
        }
        out.collisions.push_back(hits);
        if (hits == 0 && out.branch == 0) {
            out.branch = k;
            std::vector<const FingerprintResult*> distinct;
            for (const auto& p : prints) {
                if (!p.ok) continue;
                bool seen = false;
                for (auto* d : distinct) seen = seen || same_fingerprint(*d, p);
                if (!seen) distinct.push_back(&p);
            }
            out.distinct_fingerprints = distinct.size();
        }
    }
    if (out.branch == 0) throw InternalError("every branch collides on the sample");
    return out;
}

}  // namespace mgeom

#endif  // MGEOM_TELESCOPE_SIMPLEX_PATH_HPP
