#pragma once
#ifndef MGEOM_GROMOV_GROMOV_HPP
#define MGEOM_GROMOV_GROMOV_HPP

#include <mgeom/metric/isometry.hpp>
#include <mgeom/metric/operations.hpp>
#include <mgeom/metric/validate.hpp>

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mgeom {

/// Relation between X and Y stored as an |X| x |Y| bitset.
class Correspondence {
public:
    Correspondence(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), bits_(nx * ny, false) {}

    static Correspondence from_pairs(std::size_t nx, std::size_t ny,
                                     const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
        Correspondence c(nx, ny);
        for (auto [x, y] : pairs) c.add(x, y);
        return c;
    }

    /// Graph of a total map X -> Y.
    static Correspondence from_map(std::size_t ny, const std::vector<std::size_t>& f) {
        Correspondence c(f.size(), ny);
        for (std::size_t x = 0; x < f.size(); ++x) c.add(x, f[x]);
        return c;
    }

    void add(std::size_t x, std::size_t y) {
        if (x >= nx_ || y >= ny_) throw MalformedInput("correspondence pair out of range");
        bits_[x * ny_ + y] = true;
    }
    bool contains(std::size_t x, std::size_t y) const { return bits_[x * ny_ + y]; }
    std::size_t size_x() const { return nx_; }
    std::size_t size_y() const { return ny_; }

    std::vector<std::pair<std::size_t, std::size_t>> pairs() const {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t x = 0; x < nx_; ++x)
            for (std::size_t y = 0; y < ny_; ++y)
                if (contains(x, y)) out.emplace_back(x, y);
        return out;
    }

    /// Every x and every y has a partner.
    bool is_valid() const {
        std::vector<bool> hy(ny_, false);
        for (std::size_t x = 0; x < nx_; ++x) {
            bool any = false;
            for (std::size_t y = 0; y < ny_; ++y) {
                if (contains(x, y)) {
                    any = true;
                    hy[y] = true;
                }
            }
            if (!any) return false;
        }
        return std::all_of(hy.begin(), hy.end(), [](bool b) { return b; });
    }

private:
    std::size_t nx_, ny_;
    std::vector<bool> bits_;
};

template <Scalar T>
struct GhResult {
    bool exact = false;
    T lower = 0;
    T upper = 0;
    std::optional<Correspondence> witness;
    std::string method;

    T value() const {
        if (!exact) throw DomainError("result is an interval; use lower and upper");
        return lower;
    }
};

namespace detail {

template <Scalar T>
T absdiff(const T& a, const T& b) {
    return a < b ? T(b - a) : T(a - b);
}

template <Scalar T>
std::vector<T> eccentricities(const BasicSpace<T>& s) {
    std::vector<T> e(s.size(), T(0));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j) e[i] = std::max(e[i], s(i, j));
    return e;
}

}  // namespace detail

/// max over pairs of |d(x,x') - e(y,y')| for (x,y), (x',y') in the relation.
template <Scalar T>
T distortion(const BasicSpace<T>& a, const BasicSpace<T>& b, const Correspondence& r) {
    auto ps = r.pairs();
    T worst = 0;
    for (std::size_t i = 0; i < ps.size(); ++i)
        for (std::size_t j = i + 1; j < ps.size(); ++j)
            worst = std::max(worst, detail::absdiff(a(ps[i].first, ps[j].first), b(ps[i].second, ps[j].second)));
    return worst;
}

/// dis(f) = max over x, x' of |d(x,x') - e(f(x),f(x'))|.
template <Scalar T>
T distortion(const BasicSpace<T>& a, const BasicSpace<T>& b, const std::vector<std::size_t>& f) {
    if (f.size() != a.size()) throw MalformedInput("map must be total on the domain");
    for (auto y : f)
        if (y >= b.size()) throw MalformedInput("map value out of range");
    T worst = 0;
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t x2 = x + 1; x2 < a.size(); ++x2)
            worst = std::max(worst, detail::absdiff(a(x, x2), b(f[x], f[x2])));
    return worst;
}

/// The bound d_GH <= 2 dis(f) for a surjection f.
template <Scalar T>
GhResult<T> gh_upper_via_surjection(const BasicSpace<T>& a, const BasicSpace<T>& b, const std::vector<std::size_t>& f) {
    T dis = distortion(a, b, f);
    std::vector<bool> hit(b.size(), false);
    for (auto y : f) hit[y] = true;
    if (!std::all_of(hit.begin(), hit.end(), [](bool v) { return v; })) {
        throw DomainError("map is not surjective");
    }
    GhResult<T> r;
    r.lower = 0;
    r.upper = dis + dis;
    r.witness = Correspondence::from_map(b.size(), f);
    r.method = "surjection-bound";
    return r;
}

inline constexpr std::size_t kGhExactGuard = 14;

namespace detail {

/// Partner of each x by nearest eccentricity, then each uncovered y likewise.
template <Scalar T>
Correspondence greedy_correspondence(const std::vector<T>& ea, const std::vector<T>& eb) {
    Correspondence c(ea.size(), eb.size());
    std::vector<bool> hit(eb.size(), false);
    for (std::size_t x = 0; x < ea.size(); ++x) {
        std::size_t best = 0;
        for (std::size_t y = 1; y < eb.size(); ++y)
            if (absdiff(ea[x], eb[y]) < absdiff(ea[x], eb[best])) best = y;
        c.add(x, best);
        hit[best] = true;
    }
    for (std::size_t y = 0; y < eb.size(); ++y) {
        if (hit[y]) continue;
        std::size_t best = 0;
        for (std::size_t x = 1; x < ea.size(); ++x)
            if (absdiff(eb[y], ea[x]) < absdiff(eb[y], ea[best])) best = x;
        c.add(best, y);
    }
    return c;
}

/// Hausdorff distance between two finite sets of reals.
template <Scalar T>
T hausdorff(const std::vector<T>& u, const std::vector<T>& v) {
    auto one_side = [](const std::vector<T>& p, const std::vector<T>& q) {
        T worst = 0;
        for (const auto& x : p) {
            T best = absdiff(x, q.front());
            for (const auto& y : q) best = std::min(best, absdiff(x, y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_side(u, v), one_side(v, u));
}

template <Scalar T>
T half(const T& v) {
    if constexpr (ScalarTraits<T>::exact) return v / 2;
    else return v / 2.0;
}

/**
 * Minimum distortion over correspondences. Any correspondence contains the
 * graph of some f: X -> Y together with partners for the y outside f(X), and
 * distortion is monotone under inclusion, so the search assigns partners to
 * every x and then to each uncovered y.
 */
template <Scalar T>
class CorrespondenceSearch {
public:
    CorrespondenceSearch(const BasicSpace<T>& a, const BasicSpace<T>& b, T incumbent, Correspondence best)
        : a_(a), b_(b), ea_(eccentricities(a)), eb_(eccentricities(b)), best_(incumbent), witness_(std::move(best)) {}

    void run() {
        order_.resize(a_.size());
        std::iota(order_.begin(), order_.end(), 0);
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) { return ea_[y] < ea_[x]; });
        cover_.assign(b_.size(), 0);
        assign_x(0, T(0));
    }

    const T& best() const { return best_; }
    const Correspondence& witness() const { return witness_; }
    std::uint64_t nodes() const { return nodes_; }

private:
    /// Distortion added by (x, y) against the current pairs.
    T added(std::size_t x, std::size_t y, const T& limit) const {
        T worst = 0;
        for (auto [x2, y2] : pairs_) {
            worst = std::max(worst, absdiff(a_(x, x2), b_(y, y2)));
            if (!(worst < limit)) break;
        }
        return worst;
    }

    std::vector<std::size_t> candidates(const std::vector<T>& e_from, std::size_t p, const std::vector<T>& e_to) const {
        std::vector<std::size_t> c;
        for (std::size_t q = 0; q < e_to.size(); ++q)
            if (absdiff(e_from[p], e_to[q]) < best_) c.push_back(q);
        std::stable_sort(c.begin(), c.end(), [&](std::size_t u, std::size_t v) {
            return absdiff(e_from[p], e_to[u]) < absdiff(e_from[p], e_to[v]);
        });
        return c;
    }

    void assign_x(std::size_t depth, T current) {
        ++nodes_;
        if (depth == order_.size()) {
            assign_y(0, current);
            return;
        }
        std::size_t x = order_[depth];
        for (std::size_t y : candidates(ea_, x, eb_)) {
            if (!(absdiff(ea_[x], eb_[y]) < best_)) continue;
            T next = std::max(current, added(x, y, best_));
            if (!(next < best_)) continue;
            pairs_.emplace_back(x, y);
            ++cover_[y];
            assign_x(depth + 1, next);
            --cover_[y];
            pairs_.pop_back();
        }
    }

    void assign_y(std::size_t y, T current) {
        ++nodes_;
        while (y < b_.size() && cover_[y] > 0) ++y;
        if (y == b_.size()) {
            if (current < best_) {
                best_ = current;
                witness_ = Correspondence::from_pairs(a_.size(), b_.size(), pairs_);
            }
            return;
        }
        for (std::size_t x : candidates(eb_, y, ea_)) {
            T next = std::max(current, added(x, y, best_));
            if (!(next < best_)) continue;
            pairs_.emplace_back(x, y);
            ++cover_[y];
            assign_y(y + 1, next);
            --cover_[y];
            pairs_.pop_back();
        }
    }

    const BasicSpace<T>& a_;
    const BasicSpace<T>& b_;
    std::vector<T> ea_, eb_;
    std::vector<std::size_t> order_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<int> cover_;
    T best_;
    Correspondence witness_;
    std::uint64_t nodes_ = 0;
};

}  // namespace detail

/**
 * @brief d_GH as half the minimum correspondence distortion.
 *
 * Exact with a witness when |a| + |b| <= guard. Larger inputs return the
 * interval [1/2 Hausdorff(ecc(a), ecc(b)), min(1/2 max diam, 1/2 dis(greedy))].
 */
template <Scalar T>
GhResult<T> gh_exact(const BasicSpace<T>& a, const BasicSpace<T>& b, std::size_t guard = kGhExactGuard) {
    auto ea = detail::eccentricities(a), eb = detail::eccentricities(b);
    Correspondence greedy = detail::greedy_correspondence(ea, eb);
    T greedy_dis = distortion(a, b, greedy);
    T full_dis = std::max(a.diameter(), b.diameter());
    Correspondence full(a.size(), b.size());
    for (std::size_t x = 0; x < a.size(); ++x)
        for (std::size_t y = 0; y < b.size(); ++y) full.add(x, y);
    // Every (x,y) in a correspondence of distortion D has |ecc x - ecc y| <= D.
    T lower = detail::half(detail::hausdorff(ea, eb));

    GhResult<T> r;
    if (a.size() + b.size() > guard) {
        r.lower = lower;
        r.upper = detail::half(std::min(greedy_dis, full_dis));
        r.witness = greedy_dis <= full_dis ? greedy : full;
        r.method = "interval: eccentricity bound / greedy correspondence";
        r.exact = r.lower == r.upper;
        return r;
    }
    bool greedy_wins = greedy_dis < full_dis;
    detail::CorrespondenceSearch<T> search(a, b, greedy_wins ? greedy_dis : full_dis, greedy_wins ? greedy : full);
    if (lower < detail::half(search.best())) search.run();
    r.exact = true;
    r.lower = r.upper = detail::half(search.best());
    r.witness = search.witness();
    r.method = "branch-and-bound";
    return r;
}

/// D_X(d, e) = max |d(x,y) - e(x,y)| over one point set; points are matched by label.
template <Scalar T>
T sup_distance(const BasicSpace<T>& d, const BasicSpace<T>& e) {
    if (d.size() != e.size()) throw MalformedInput("sup distance needs the same point set");
    std::vector<std::size_t> to_e(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        auto j = e.index_of(d.label(i));
        if (!j) throw MalformedInput("label '" + d.label(i) + "' missing from the second metric");
        to_e[i] = *j;
    }
    T worst = 0;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j)
            worst = std::max(worst, detail::absdiff(d(i, j), e(to_e[i], to_e[j])));
    return worst;
}

namespace detail {

template <Scalar T>
void require_ultrametric(const BasicSpace<T>& s, std::string_view what) {
    if (!is_ultra(s.kind()) || is_pseudo(s.kind())) {
        throw KindMismatch(std::string(what) + " must be declared ultrametric, not " + std::string(to_string(s.kind())));
    }
    require_valid(s, what);
}

}  // namespace detail

/**
 * @brief Non-Archimedean GH distance.
 *
 * Distinct diameters give max(diam a, diam b) exactly. Equal diameters give
 * exact 0 for isometric inputs and otherwise [2 GH, diam], with GH exact when
 * small or its certified lower bound.
 */
template <Scalar T>
GhResult<T> ugh(const BasicSpace<T>& a, const BasicSpace<T>& b) {
    detail::require_ultrametric(a, "first space");
    detail::require_ultrametric(b, "second space");
    T da = a.diameter(), db = b.diameter();
    GhResult<T> r;
    bool same = ScalarTraits<T>::exact ? da == db : detail::absdiff(da, db) <= std::max(a.tolerance(), b.tolerance());
    if (!same) {
        r.exact = true;
        r.lower = r.upper = std::max(da, db);
        r.method = "distinct-diameter rule";
        return r;
    }
    if (auto iso = isometry_check(a, b)) {
        r.exact = true;
        r.lower = r.upper = T(0);
        r.witness = Correspondence::from_map(b.size(), *iso);
        r.method = "isometry";
        return r;
    }
    GhResult<T> gh = gh_exact(a, b);
    r.lower = gh.lower + gh.lower;
    r.upper = da;
    r.exact = r.lower == r.upper;
    r.method = std::string("equal-diameter interval: lower 2 x GH (") + (gh.exact ? "exact" : "lower bound") +
               "), upper one-point amalgam at the diameter";
    return r;
}

template <Scalar T>
struct UghAudit {
    bool performed = false;
    bool passed = false;
    std::string reason;
    std::array<T, 3> values{};  ///< ugh(a,b), ugh(b,c), ugh(a,c)
};

/// Strong triangle inequality on the three pairwise ugh values, when all are exact.
template <Scalar T>
UghAudit<T> ugh_ultrametric_axiom_audit(const BasicSpace<T>& a, const BasicSpace<T>& b, const BasicSpace<T>& c) {
    UghAudit<T> out;
    GhResult<T> r[3] = {ugh(a, b), ugh(b, c), ugh(a, c)};
    static const char* names[] = {"(a,b)", "(b,c)", "(a,c)"};
    for (int i = 0; i < 3; ++i) {
        if (!r[i].exact) {
            out.reason = std::string("pair ") + names[i] + " has only an interval";
            return out;
        }
        out.values[i] = r[i].value();
    }
    out.performed = true;
    const auto& v = out.values;
    out.passed = v[0] <= std::max(v[1], v[2]) && v[1] <= std::max(v[0], v[2]) && v[2] <= std::max(v[0], v[1]);
    if (!out.passed) out.reason = "strong triangle inequality fails";
    return out;
}

struct QiuRow {
    Rational eps;
    Rational delta;
    Rational gh_upper;  ///< eps * delta
    std::optional<Rational> gh_exact;
    Rational ugh;  ///< (1 + eps) * delta
    Rational certified_ratio;
};

/**
 * GH versus u_GH between d and (1+eps) d. GH is at most eps * delta while
 * u_GH = (1+eps) delta, so u_GH / GH >= (1+eps)/eps.
 */
inline std::vector<QiuRow> qiu_demo(const ExactSpace& x, const std::vector<Rational>& epsilons,
                                    std::size_t exact_guard = kGhExactGuard) {
    if (x.size() < 2) throw DomainError("one-point space: GH and u_GH both vanish");
    detail::require_ultrametric(x, "input");
    std::vector<QiuRow> rows;
    for (const auto& eps : epsilons) {
        if (eps <= 0) throw DomainError("epsilon must be positive");
        ExactSpace scaled = dilate(x, Rational(1 + eps));
        require_valid(scaled, "scaled space");
        QiuRow row;
        row.eps = eps;
        row.delta = x.diameter();
        row.gh_upper = eps * row.delta;
        if (2 * x.size() <= exact_guard) row.gh_exact = gh_exact(x, scaled).value();
        GhResult<Rational> u = ugh(x, scaled);
        row.ugh = u.value();
        row.certified_ratio = row.ugh / row.gh_upper;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace mgeom

#endif  // MGEOM_GROMOV_GROMOV_HPP
