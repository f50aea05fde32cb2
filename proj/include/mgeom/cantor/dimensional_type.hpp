#pragma once
#ifndef MGEOM_CANTOR_DIMENSIONAL_TYPE_HPP
#define MGEOM_CANTOR_DIMENSIONAL_TYPE_HPP

#include <mgeom/errors.hpp>
#include <mgeom/numeric.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mgeom {

/// A value in [0, inf].
struct Dim {
    bool infinite = false;
    Rational value = 0;

    Dim() = default;
    Dim(const Rational& v) : value(v) {  // NOLINT(google-explicit-constructor)
        if (v < 0) throw DomainError("dimension values are non-negative");
    }
    static Dim inf() {
        Dim d;
        d.infinite = true;
        return d;
    }

    static Dim parse(std::string_view s) {
        if (s == "inf" || s == "infinity" || s == "i") return inf();
        return Dim(parse_rational(s));
    }

    bool is_zero() const { return !infinite && value == 0; }

    /// eta * this, with 0 * inf treated as 0 (a zero entry stays zero under snowflaking).
    Dim scaled(const Rational& eta) const {
        if (infinite) return eta == 0 ? Dim(0) : inf();
        return Dim(value * eta);
    }

    std::string str() const { return infinite ? "inf" : to_string(value); }

    friend bool operator==(const Dim& a, const Dim& b) {
        return a.infinite == b.infinite && (a.infinite || a.value == b.value);
    }
    friend bool operator<(const Dim& a, const Dim& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator<=(const Dim& a, const Dim& b) { return !(b < a); }
};

inline Dim max(const Dim& a, const Dim& b) { return a < b ? b : a; }

/// (hdim, pdim, ubdim, adim) with an optional topological-dimension label l.
struct DimensionalType {
    std::optional<Dim> tdim;
    std::array<Dim, 4> a{};

    /// Throws naming the violated inequality of l <= a1 <= a2 <= a3 <= a4.
    void check() const {
        static const char* names[] = {"a1", "a2", "a3", "a4"};
        if (tdim) {
            if (!tdim->infinite && mp::denominator(tdim->value) != 1) {
                throw DomainError("topological dimension label must be an integer or inf");
            }
            if (a[0] < *tdim) throw DomainError("ordering violated: l <= a1 fails (" + tdim->str() + " > " + a[0].str() + ")");
        }
        for (int i = 0; i < 3; ++i) {
            if (a[i + 1] < a[i]) {
                throw DomainError(std::string("ordering violated: ") + names[i] + " <= " + names[i + 1] + " fails (" +
                                  a[i].str() + " > " + a[i + 1].str() + ")");
            }
        }
    }

    /// "a1,a2,a3,a4" with entries rational, decimal, or "inf".
    static DimensionalType parse(std::string_view text) {
        DimensionalType t;
        std::vector<std::string> parts;
        std::string cur;
        for (char ch : text) {
            if (ch == ',') {
                parts.push_back(cur);
                cur.clear();
            } else if (ch != ' ' && ch != '(' && ch != ')') {
                cur.push_back(ch);
            }
        }
        parts.push_back(cur);
        if (parts.size() != 4) throw MalformedInput("a dimensional type has four entries");
        for (int i = 0; i < 4; ++i) t.a[i] = Dim::parse(parts[i]);
        return t;
    }

    DimensionalType scaled(const Rational& eta) const {
        DimensionalType out = *this;
        for (auto& v : out.a) v = v.scaled(eta);
        return out;
    }

    std::string str() const {
        std::string s = "(";
        for (int i = 0; i < 4; ++i) s += (i ? ", " : "") + a[i].str();
        return s + ")";
    }

    friend bool operator==(const DimensionalType& x, const DimensionalType& y) { return x.a == y.a; }
};

inline DimensionalType componentwise_max(const std::vector<DimensionalType>& types) {
    DimensionalType out;
    for (const auto& t : types)
        for (int i = 0; i < 4; ++i) out.a[i] = max(out.a[i], t.a[i]);
    return out;
}

}  // namespace mgeom

#endif  // MGEOM_CANTOR_DIMENSIONAL_TYPE_HPP
