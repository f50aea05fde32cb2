#pragma once
#ifndef MGEOM_NUMERIC_HPP
#define MGEOM_NUMERIC_HPP

#include <mgeom/errors.hpp>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

namespace mgeom {

namespace mp = boost::multiprecision;

using BigInt = mp::cpp_int;
using Rational = mp::cpp_rational;

/// 100-bit mantissa with a 64-bit exponent, enough for 2^(15!).
using WideFloat = mp::number<
    mp::cpp_bin_float<100, mp::digit_base_2, void, std::int64_t,
                      -(std::int64_t(1) << 62), (std::int64_t(1) << 62)>,
    mp::et_off>;

inline constexpr double kWideUnit = 0x1p-96;

// ---------------------------------------------------------------------------
// Rational helpers

inline Rational make_rational(long long num, long long den = 1) {
    if (den == 0) throw DomainError("zero denominator");
    return Rational(BigInt(num), BigInt(den));
}

inline std::string to_string(const BigInt& v) { return v.str(); }

/// "p/q", or "p" for integers.
inline std::string to_string(const Rational& q) {
    if (mp::denominator(q) == 1) return mp::numerator(q).str();
    return mp::numerator(q).str() + "/" + mp::denominator(q).str();
}

/// Accepts "p/q", integers, and finite decimals with an optional exponent.
inline Rational parse_rational(std::string_view text) {
    auto fail = [&]() -> Rational {
        throw MalformedInput("not a rational number: '" + std::string(text) + "'");
    };
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) return fail();
    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational num = parse_rational(s.substr(0, slash));
        Rational den = parse_rational(s.substr(slash + 1));
        if (den == 0) return fail();
        return num / den;
    }
    bool negative = false;
    std::size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    BigInt mantissa = 0;
    long long scale = 0;
    bool digits = false, dot = false;
    for (; i < s.size(); ++i) {
        char ch = s[i];
        if (ch >= '0' && ch <= '9') {
            mantissa = mantissa * 10 + (ch - '0');
            digits = true;
            if (dot) --scale;
        } else if (ch == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (!digits) return fail();
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') return fail();
        std::string exp_text = s.substr(i + 1);
        if (exp_text.empty()) return fail();
        std::size_t used = 0;
        long long e = 0;
        try {
            e = std::stoll(exp_text, &used);
        } catch (...) {
            return fail();
        }
        if (used != exp_text.size() || std::llabs(e) > 100000) return fail();
        scale += e;
    }
    Rational value(mantissa);
    BigInt ten_power = mp::pow(BigInt(10), static_cast<unsigned>(std::llabs(scale)));
    value = scale >= 0 ? Rational(value * ten_power) : Rational(value / ten_power);
    return negative ? Rational(-value) : value;
}

inline double to_double(const Rational& q) { return q.convert_to<double>(); }
inline double to_double(double x) { return x; }

inline WideFloat to_wide(const Rational& q) {
    return WideFloat(mp::numerator(q)) / WideFloat(mp::denominator(q));
}

/// Nearest rational with denominator 2^52-ish; exact for every finite double.
inline Rational from_double(double x) {
    if (!std::isfinite(x)) throw DomainError("non-finite value has no rational form");
    int exponent = 0;
    double mant = std::frexp(x, &exponent);
    auto scaled = static_cast<long long>(std::ldexp(mant, 53));
    Rational q{BigInt(scaled)};
    int shift = exponent - 53;
    BigInt p = BigInt(1) << std::abs(shift);
    return shift >= 0 ? Rational(q * p) : Rational(q / p);
}

inline Rational pow2(std::int64_t e) {
    BigInt p = BigInt(1) << static_cast<unsigned>(e >= 0 ? e : -e);
    return e >= 0 ? Rational(p) : Rational(BigInt(1), p);
}

inline bool is_power_of_two(const BigInt& v) { return v > 0 && (v & (v - 1)) == 0; }

/// Number of trailing zero bits; v > 0.
inline std::uint64_t two_adic_valuation(const BigInt& v) {
    return static_cast<std::uint64_t>(mp::lsb(v));
}

/// floor(x^(1/k)) when it is exact, else nullopt.
inline std::optional<BigInt> exact_root(const BigInt& x, unsigned k) {
    if (x < 0 || k == 0) return std::nullopt;
    if (x < 2 || k == 1) return x;
    std::size_t bits = mp::msb(x) + 1;
    BigInt lo = 0, hi = BigInt(1) << (bits / k + 1);
    while (lo < hi) {
        BigInt mid = (lo + hi + 1) / 2;
        if (mp::pow(mid, k) <= x) lo = mid;
        else hi = mid - 1;
    }
    if (mp::pow(lo, k) == x) return lo;
    return std::nullopt;
}

/// base^exponent when the result is rational, else nullopt.
inline std::optional<Rational> exact_pow(const Rational& base, const Rational& exponent) {
    if (base < 0) return std::nullopt;
    if (base == 0) return exponent > 0 ? std::optional<Rational>(Rational(0)) : std::nullopt;
    const BigInt& p = mp::numerator(exponent);
    const BigInt& q = mp::denominator(exponent);
    if (q > 4096 || mp::abs(p) > 1'000'000) return std::nullopt;
    auto qk = q.convert_to<unsigned>();
    auto num = exact_root(mp::numerator(base), qk);
    auto den = exact_root(mp::denominator(base), qk);
    if (!num || !den) return std::nullopt;
    Rational root(*num, *den);
    auto pk = mp::abs(p).convert_to<unsigned>();
    Rational out(mp::pow(mp::numerator(root), pk), mp::pow(mp::denominator(root), pk));
    return p < 0 ? Rational(1 / out) : out;
}

inline std::string wide_to_string(const WideFloat& v, int digits = 25) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------
// Magnitude

/**
 * Non-negative-exponent bookkeeping for E(n) = -log2 alpha(n), L(n) = log2 m_n
 * and their ratios.
 *
 * A value is either exact, of the form a + c * log2(u) with a, c rational and
 * u a positive odd/odd rational (u = 1 when c = 0), or a WideFloat with a
 * relative error bound.
 */
class Magnitude {
public:
    Magnitude() = default;
    Magnitude(const Rational& a) : a_(a) {}  // NOLINT(google-explicit-constructor)
    template <std::integral I>
    Magnitude(I a) : a_(BigInt(a)) {}  // NOLINT(google-explicit-constructor)

    static Magnitude log2_of(const Rational& q) {
        if (q <= 0) throw DomainError("log2 of a non-positive number");
        BigInt num = mp::numerator(q), den = mp::denominator(q);
        auto vn = two_adic_valuation(num), vd = two_adic_valuation(den);
        num >>= vn;
        den >>= vd;
        Magnitude m(Rational(BigInt(vn)) - Rational(BigInt(vd)));
        if (num != 1 || den != 1) {
            m.c_ = 1;
            m.u_ = Rational(num, den);
        }
        return m;
    }

    static Magnitude approx(const WideFloat& value, double rel_error) {
        Magnitude m;
        m.exact_ = false;
        m.w_ = value;
        m.err_ = rel_error;
        return m;
    }

    /// 2^e, exact as a rational when the exponent is modest.
    static Magnitude pow2(std::int64_t e) {
        if (e >= -4096 && e <= 4096) return Magnitude(mgeom::pow2(e));
        return approx(mp::ldexp(WideFloat(1), e), 0.0);
    }

    bool is_exact() const { return exact_; }
    bool is_rational() const { return exact_ && c_ == 0; }

    const Rational& rational() const {
        if (!is_rational()) throw InternalError("magnitude is not rational");
        return a_;
    }

    /// Exact pieces; meaningful only when is_exact().
    const Rational& constant_part() const { return a_; }
    const Rational& log_coefficient() const { return c_; }
    const Rational& log_argument() const { return u_; }

    WideFloat wide() const {
        if (!exact_) return w_;
        WideFloat v = to_wide(a_);
        if (c_ != 0) v += to_wide(c_) * log2_wide(u_);
        return v;
    }

    /// Relative error bound of wide().
    double error_bound() const {
        if (!exact_) return err_;
        if (c_ == 0) return mp::denominator(a_) == 1 && mp::msb(mp::abs(mp::numerator(a_)) + 1) < 90
                               ? 0.0
                               : kWideUnit;
        WideFloat a = mp::abs(to_wide(a_));
        WideFloat l = mp::abs(to_wide(c_) * log2_wide(u_));
        WideFloat v = mp::abs(a + (c_ > 0 ? l : WideFloat(-l)));
        if (v == 0) return std::numeric_limits<double>::infinity();
        WideFloat bound = (a + l) * WideFloat(4 * kWideUnit) / v;
        return bound.convert_to<double>();
    }

    double to_double() const {
        if (is_rational()) return mgeom::to_double(a_);
        return wide().convert_to<double>();
    }

    std::string str(int digits = 25) const {
        if (is_rational()) return to_string(a_);
        return wide_to_string(wide(), digits);
    }

    Magnitude operator-() const {
        Magnitude m = *this;
        m.a_ = -m.a_;
        m.c_ = -m.c_;
        m.w_ = -m.w_;
        return m;
    }

    friend Magnitude operator+(const Magnitude& x, const Magnitude& y) {
        if (x.exact_ && y.exact_) {
            if (y.c_ == 0) return x.shifted(y.a_);
            if (x.c_ == 0) return y.shifted(x.a_);
            if (x.u_ == y.u_) {
                Magnitude m = x;
                m.a_ += y.a_;
                m.c_ += y.c_;
                if (m.c_ == 0) m.u_ = 1;
                return m;
            }
        }
        WideFloat vx = x.wide(), vy = y.wide(), v = vx + vy;
        WideFloat abs_err = mp::abs(vx) * x.error_bound() + mp::abs(vy) * y.error_bound() +
                            mp::abs(v) * kWideUnit;
        return approx(v, relative(abs_err, v));
    }

    friend Magnitude operator-(const Magnitude& x, const Magnitude& y) { return x + (-y); }

    friend Magnitude operator*(const Magnitude& x, const Magnitude& y) {
        if (x.exact_ && y.exact_) {
            if (y.c_ == 0) return x.scaled(y.a_);
            if (x.c_ == 0) return y.scaled(x.a_);
        }
        WideFloat v = x.wide() * y.wide();
        double e = x.error_bound() + y.error_bound() + x.error_bound() * y.error_bound() + kWideUnit;
        return approx(v, e);
    }

    friend Magnitude operator/(const Magnitude& x, const Magnitude& y) {
        if (y.is_rational() && y.a_ == 0) throw DomainError("division by zero magnitude");
        if (x.exact_ && y.exact_) {
            if (y.c_ == 0) return x.scaled(1 / y.a_);
            if (x.a_ == 0 && y.a_ == 0 && (x.c_ == 0 || x.u_ == y.u_)) return Magnitude(x.c_ / y.c_);
        }
        WideFloat d = y.wide();
        if (d == 0) throw DomainError("division by zero magnitude");
        WideFloat v = x.wide() / d;
        double ey = y.error_bound();
        if (ey >= 0.5) throw AmbiguousComparison("divisor magnitude indistinguishable from zero");
        double e = (x.error_bound() + ey) / (1 - ey) + kWideUnit;
        return approx(v, e);
    }

    Magnitude& operator+=(const Magnitude& y) { return *this = *this + y; }
    Magnitude& operator-=(const Magnitude& y) { return *this = *this - y; }
    Magnitude& operator*=(const Magnitude& y) { return *this = *this * y; }

    /// -1, 0 or +1. Throws AmbiguousComparison when undecidable in float.
    friend int compare(const Magnitude& x, const Magnitude& y) {
        if (x.exact_ && y.exact_) {
            bool same_log = x.c_ == 0 || y.c_ == 0 || x.u_ == y.u_;
            if (same_log) {
                Rational dc = x.c_ - y.c_;
                Rational da = x.a_ - y.a_;
                if (dc == 0) return da < 0 ? -1 : (da > 0 ? 1 : 0);
                // a + c*log2(u) with u odd/odd != 1 and c != 0 is irrational,
                // so the float sign below is decided once the bound is small.
            }
            auto dx = x.quick_double(), dy = y.quick_double();
            if (dx && dy && std::abs(*dx - *dy) > 1e-9 * (1.0 + std::abs(*dx) + std::abs(*dy))) {
                return *dx < *dy ? -1 : 1;
            }
        }
        Magnitude diff = x - y;
        if (diff.is_rational()) return diff.a_ < 0 ? -1 : (diff.a_ > 0 ? 1 : 0);
        WideFloat v = diff.wide();
        double e = diff.error_bound();
        if (v == 0 || !(e < 1.0)) {
            throw AmbiguousComparison("cannot order " + x.str() + " and " + y.str());
        }
        return v < 0 ? -1 : 1;
    }

    friend bool operator<(const Magnitude& x, const Magnitude& y) { return compare(x, y) < 0; }
    friend bool operator<=(const Magnitude& x, const Magnitude& y) { return compare(x, y) <= 0; }
    friend bool operator>(const Magnitude& x, const Magnitude& y) { return compare(x, y) > 0; }
    friend bool operator>=(const Magnitude& x, const Magnitude& y) { return compare(x, y) >= 0; }
    friend bool operator==(const Magnitude& x, const Magnitude& y) { return compare(x, y) == 0; }

private:
    /// Exact form in double (relative error near 1e-15), or nullopt when a part overflows.
    std::optional<double> quick_double() const {
        auto finite = [](double v) { return std::isfinite(v) ? std::optional<double>(v) : std::nullopt; };
        auto a = finite(mgeom::to_double(a_));
        if (!a || c_ == 0) return a;
        auto c = finite(mgeom::to_double(c_));
        auto n = finite(mp::numerator(u_).convert_to<double>()), d = finite(mp::denominator(u_).convert_to<double>());
        if (!c || !n || !d) return std::nullopt;
        return finite(*a + *c * (std::log2(*n) - std::log2(*d)));
    }

    static WideFloat log2_wide(const Rational& u) {
        static const WideFloat ln2 = mp::log(WideFloat(2));
        return (mp::log(WideFloat(mp::numerator(u))) - mp::log(WideFloat(mp::denominator(u)))) / ln2;
    }

    static double relative(const WideFloat& abs_err, const WideFloat& v) {
        if (v == 0) return abs_err == 0 ? 0.0 : std::numeric_limits<double>::infinity();
        return (abs_err / mp::abs(v)).convert_to<double>();
    }

    Magnitude shifted(const Rational& k) const {
        Magnitude m = *this;
        m.a_ += k;
        return m;
    }

    Magnitude scaled(const Rational& k) const {
        Magnitude m = *this;
        m.a_ *= k;
        m.c_ *= k;
        if (m.c_ == 0) m.u_ = 1;
        return m;
    }

    Rational a_{0};
    Rational c_{0};
    Rational u_{1};
    bool exact_ = true;
    WideFloat w_{0};
    double err_ = 0.0;
};

inline Magnitude min(const Magnitude& x, const Magnitude& y) { return y < x ? y : x; }
inline Magnitude max(const Magnitude& x, const Magnitude& y) { return x < y ? y : x; }

}  // namespace mgeom

#endif  // MGEOM_NUMERIC_HPP
