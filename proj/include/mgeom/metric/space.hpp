#pragma once
#ifndef MGEOM_METRIC_SPACE_HPP
#define MGEOM_METRIC_SPACE_HPP

#include <mgeom/errors.hpp>
#include <mgeom/numeric.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace mgeom {

enum class Kind { metric, ultrametric, pseudo_metric, pseudo_ultrametric };

inline std::string_view to_string(Kind k) {
    switch (k) {
        case Kind::metric: return "metric";
        case Kind::ultrametric: return "ultrametric";
        case Kind::pseudo_metric: return "pseudo-metric";
        case Kind::pseudo_ultrametric: return "pseudo-ultrametric";
    }
    return "metric";
}

inline Kind parse_kind(std::string_view s) {
    if (s == "metric") return Kind::metric;
    if (s == "ultrametric") return Kind::ultrametric;
    if (s == "pseudo-metric" || s == "pseudo_metric") return Kind::pseudo_metric;
    if (s == "pseudo-ultrametric" || s == "pseudo_ultrametric") return Kind::pseudo_ultrametric;
    throw MalformedInput("unknown kind '" + std::string(s) + "'");
}

inline bool is_ultra(Kind k) { return k == Kind::ultrametric || k == Kind::pseudo_ultrametric; }
inline bool is_pseudo(Kind k) { return k == Kind::pseudo_metric || k == Kind::pseudo_ultrametric; }
inline Kind make_kind(bool ultra, bool pseudo) {
    if (ultra) return pseudo ? Kind::pseudo_ultrametric : Kind::ultrametric;
    return pseudo ? Kind::pseudo_metric : Kind::metric;
}

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr const char* name = "exact";
    static Rational tolerance(const Rational&) { return 0; }
    static bool finite(const Rational&) { return true; }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr const char* name = "float";
    static double tolerance(double diameter) { return std::max(1e-12, 1e-12 * diameter); }
    static bool finite(double v) { return std::isfinite(v); }
};

template <class T>
concept Scalar = std::same_as<T, Rational> || std::same_as<T, double>;

/// Dense cap on stored points (exact entries are 64 bytes each).
template <Scalar T>
inline constexpr std::size_t kMaxPoints = ScalarTraits<T>::exact ? 2048 : 4096;

/**
 * @brief Labeled finite (pseudo-)metric space stored as a dense matrix.
 *
 * The constructor checks structure only (shape, symmetry, zero diagonal,
 * non-negativity, unique labels). The metric axioms for the declared kind are
 * checked by validate().
 */
template <Scalar T>
class BasicSpace {
public:
    using scalar_type = T;

    BasicSpace() = default;

    BasicSpace(std::vector<std::string> labels, std::vector<T> flat, Kind kind)
        : labels_(std::move(labels)), dist_(std::move(flat)), kind_(kind) {
        n_ = labels_.size();
        if (n_ == 0) throw MalformedInput("space must have at least one point");
        if (n_ > kMaxPoints<T>) {
            throw SizeError("space with " + std::to_string(n_) + " points exceeds the dense cap of " +
                            std::to_string(kMaxPoints<T>));
        }
        if (dist_.size() != n_ * n_) throw MalformedInput("distance matrix shape does not match labels");
        check_structure();
    }

    BasicSpace(std::vector<std::string> labels, const std::vector<std::vector<T>>& rows, Kind kind)
        : BasicSpace(std::move(labels), flatten(rows), kind) {}

    std::size_t size() const { return n_; }
    Kind kind() const { return kind_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const T& operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    const std::vector<T>& data() const { return dist_; }

    T diameter() const {
        T best = 0;
        for (const T& v : dist_) best = std::max(best, v);
        return best;
    }

    T tolerance() const { return ScalarTraits<T>::tolerance(diameter()); }

    BasicSpace with_kind(Kind k) const {
        BasicSpace out = *this;
        out.kind_ = k;
        return out;
    }

    BasicSpace with_labels(std::vector<std::string> labels) const {
        return BasicSpace(std::move(labels), dist_, kind_);
    }

    std::optional<std::size_t> index_of(std::string_view label) const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (labels_[i] == label) return i;
        }
        return std::nullopt;
    }

private:
    static std::vector<T> flatten(const std::vector<std::vector<T>>& rows) {
        std::vector<T> flat;
        flat.reserve(rows.size() * rows.size());
        for (const auto& row : rows) {
            if (row.size() != rows.size()) throw MalformedInput("distance matrix is not square");
            flat.insert(flat.end(), row.begin(), row.end());
        }
        return flat;
    }

    void check_structure() {
        std::unordered_set<std::string> seen;
        for (const auto& l : labels_) {
            if (!seen.insert(l).second) throw MalformedInput("duplicate label '" + l + "'");
        }
        for (std::size_t i = 0; i < n_; ++i) {
            if (dist_[i * n_ + i] != 0) throw MalformedInput("non-zero diagonal at " + labels_[i]);
            for (std::size_t j = i + 1; j < n_; ++j) {
                const T& a = dist_[i * n_ + j];
                const T& b = dist_[j * n_ + i];
                if (!ScalarTraits<T>::finite(a) || !ScalarTraits<T>::finite(b)) {
                    throw MalformedInput("non-finite distance");
                }
                if (a < 0 || b < 0) {
                    throw MalformedInput("negative distance between " + labels_[i] + " and " + labels_[j]);
                }
                if (a != b) {
                    throw MalformedInput("asymmetric distance between " + labels_[i] + " and " + labels_[j]);
                }
            }
        }
    }

    std::size_t n_ = 0;
    std::vector<std::string> labels_;
    std::vector<T> dist_;
    Kind kind_ = Kind::metric;
};

using ExactSpace = BasicSpace<Rational>;
using FloatSpace = BasicSpace<double>;
using AnySpace = std::variant<ExactSpace, FloatSpace>;

inline FloatSpace to_float(const ExactSpace& s) {
    std::vector<double> flat;
    flat.reserve(s.data().size());
    for (const auto& v : s.data()) flat.push_back(to_double(v));
    return FloatSpace(s.labels(), std::move(flat), s.kind());
}
inline const FloatSpace& to_float(const FloatSpace& s) { return s; }
inline FloatSpace to_float(const AnySpace& s) {
    return std::visit([](const auto& x) { return FloatSpace(to_float(x)); }, s);
}

/// Builds a space from a distance callback over n points labelled by callback.
template <Scalar T, class Dist, class Label>
BasicSpace<T> make_space(std::size_t n, Dist&& dist, Label&& label, Kind kind) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back(label(i));
    std::vector<T> flat(n * n, T(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            T v = dist(i, j);
            flat[i * n + j] = v;
            flat[j * n + i] = v;
        }
    }
    return BasicSpace<T>(std::move(labels), std::move(flat), kind);
}

inline std::vector<std::string> index_labels(std::size_t n, std::string_view prefix = "") {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(prefix) + std::to_string(i));
    return out;
}

}  // namespace mgeom

#endif  // MGEOM_METRIC_SPACE_HPP
