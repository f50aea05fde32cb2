#pragma once
#ifndef MGEOM_METRIC_VALIDATE_HPP
#define MGEOM_METRIC_VALIDATE_HPP

#include <mgeom/metric/space.hpp>

#include <limits>
#include <optional>
#include <sstream>
#include <string>

namespace mgeom {

/// Points (x, y, z) with d(x,y) exceeding the bound through z by `excess`.
template <Scalar T>
struct ViolatingTriple {
    std::size_t x = 0, y = 0, z = 0;
    T excess = 0;
};

template <Scalar T>
struct ValidationReport {
    bool is_pseudo_metric = true;
    bool is_metric = true;
    bool is_pseudo_ultrametric = true;
    bool is_ultrametric = true;
    /// Worst triangle violation when is_pseudo_metric is false, otherwise the
    /// worst strong-triangle violation when is_pseudo_ultrametric is false.
    std::optional<ViolatingTriple<T>> worst_violating_triple;
    std::optional<ViolatingTriple<T>> worst_triangle;
    std::optional<ViolatingTriple<T>> worst_strong_triangle;
    std::optional<std::pair<std::size_t, std::size_t>> zero_pair;

    bool satisfies(Kind k) const {
        switch (k) {
            case Kind::metric: return is_metric;
            case Kind::ultrametric: return is_ultrametric;
            case Kind::pseudo_metric: return is_pseudo_metric;
            case Kind::pseudo_ultrametric: return is_pseudo_ultrametric;
        }
        return false;
    }
};

/**
 * Exact truth of the four axioms over all triples.
 *
 * Exact spaces are screened in double first; only triples that are tight in
 * double are re-checked in rational arithmetic. Float spaces use the
 * tolerance max(1e-12, 1e-12 * diameter).
 */
template <Scalar T>
ValidationReport<T> validate(const BasicSpace<T>& s) {
    ValidationReport<T> rep;
    const std::size_t n = s.size();
    const T tol = s.tolerance();

    std::vector<double> approx;
    if constexpr (ScalarTraits<T>::exact) {
        approx.reserve(n * n);
        for (const auto& v : s.data()) approx.push_back(to_double(v));
    }

    for (std::size_t i = 0; i < n && !rep.zero_pair; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (s(i, j) == 0) {
                rep.zero_pair = {i, j};
                break;
            }
        }
    }

    auto record = [](std::optional<ViolatingTriple<T>>& slot, std::size_t x, std::size_t y, std::size_t z,
                     const T& excess) {
        if (!slot || slot->excess < excess) slot = ViolatingTriple<T>{x, y, z, excess};
    };

    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            const T& dxy = s(x, y);
            for (std::size_t z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                const T& dxz = s(x, z);
                const T& dzy = s(z, y);
                if constexpr (ScalarTraits<T>::exact) {
                    double a = approx[x * n + y], b = approx[x * n + z], c = approx[z * n + y];
                    double sum = b + c;
                    if (a >= sum * (1 - 1e-12)) {
                        if (dxy > dxz + dzy) record(rep.worst_triangle, x, y, z, dxy - dxz - dzy);
                    }
                    double m = std::max(b, c);
                    if (a >= m) {
                        const T& mx = std::max(dxz, dzy);
                        if (dxy > mx) record(rep.worst_strong_triangle, x, y, z, dxy - mx);
                    }
                } else {
                    if (dxy > dxz + dzy + tol) record(rep.worst_triangle, x, y, z, dxy - dxz - dzy);
                    T mx = std::max(dxz, dzy);
                    if (dxy > mx + tol) record(rep.worst_strong_triangle, x, y, z, dxy - mx);
                }
            }
        }
    }

    rep.is_pseudo_metric = !rep.worst_triangle.has_value();
    rep.is_pseudo_ultrametric = !rep.worst_strong_triangle.has_value();
    rep.is_metric = rep.is_pseudo_metric && !rep.zero_pair;
    rep.is_ultrametric = rep.is_pseudo_ultrametric && !rep.zero_pair;
    rep.worst_violating_triple = rep.worst_triangle ? rep.worst_triangle : rep.worst_strong_triangle;
    return rep;
}

/// p-triangle inequality d(x,y)^p <= d(x,z)^p + d(z,y)^p, in double.
template <Scalar T>
bool is_p_metric(const BasicSpace<T>& s, double p) {
    const std::size_t n = s.size();
    double tol = to_double(s.tolerance());
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y)
            for (std::size_t z = 0; z < n; ++z) {
                if (z == x || z == y) continue;
                double a = to_double(s(x, y)), b = to_double(s(x, z)), c = to_double(s(z, y));
                if (a > std::pow(std::pow(b, p) + std::pow(c, p), 1.0 / p) + tol) return false;
            }
    return true;
}

template <Scalar T>
std::string describe(const BasicSpace<T>& s, const ViolatingTriple<T>& t) {
    std::ostringstream os;
    os << "(" << s.label(t.x) << ", " << s.label(t.y) << ", " << s.label(t.z) << ") excess ";
    if constexpr (ScalarTraits<T>::exact) os << to_string(t.excess);
    else os << t.excess;
    return os.str();
}

/// Throws KindMismatch naming the violation when s fails its declared kind.
template <Scalar T>
const BasicSpace<T>& require_valid(const BasicSpace<T>& s, std::string_view context = "space") {
    auto rep = validate(s);
    if (rep.satisfies(s.kind())) return s;
    std::string why;
    if ((s.kind() == Kind::metric || s.kind() == Kind::ultrametric) && rep.zero_pair) {
        why = "distinct points " + s.label(rep.zero_pair->first) + " and " + s.label(rep.zero_pair->second) +
              " at distance 0";
    } else if (!is_ultra(s.kind()) && rep.worst_triangle) {
        why = "triangle inequality fails at " + describe(s, *rep.worst_triangle);
    } else if (rep.worst_strong_triangle) {
        why = "strong triangle inequality fails at " + describe(s, *rep.worst_strong_triangle);
    } else if (rep.worst_triangle) {
        why = "triangle inequality fails at " + describe(s, *rep.worst_triangle);
    }
    throw KindMismatch(std::string(context) + " is not a valid " + std::string(to_string(s.kind())) + ": " + why);
}

}  // namespace mgeom

#endif  // MGEOM_METRIC_VALIDATE_HPP
