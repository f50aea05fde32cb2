#pragma once
#ifndef MGEOM_CANTOR_SEQUENCES_HPP
#define MGEOM_CANTOR_SEQUENCES_HPP

#include <mgeom/errors.hpp>
#include <mgeom/numeric.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mgeom {

/// Indices beyond this are never probed by level searches.
inline constexpr std::uint64_t kIndexCap = std::uint64_t(1) << 62;

/**
 * @brief Strictly decreasing alpha(n) -> 0, handled through E(n) = -log2 alpha(n).
 *
 * The generator must be pure. `exact_value` optionally returns alpha(n) as a
 * rational when that is cheap to write down.
 */
class ShrinkingSequence {
public:
    using NegLog2 = std::function<Magnitude(std::uint64_t)>;
    using ExactValue = std::function<std::optional<Rational>(std::uint64_t)>;

    ShrinkingSequence(std::string descriptor, NegLog2 neg_log2, ExactValue exact = {})
        : descriptor_(std::move(descriptor)), e_(std::move(neg_log2)), v_(std::move(exact)) {}

    const std::string& descriptor() const { return descriptor_; }

    /// E(n) = -log2 alpha(n).
    Magnitude neg_log2(std::uint64_t n) const { return e_(n); }

    std::optional<Rational> exact_value(std::uint64_t n) const {
        if (v_) return v_(n);
        Magnitude e = e_(n);
        if (e.is_rational() && mp::denominator(e.rational()) == 1) {
            const BigInt& k = mp::numerator(e.rational());
            if (mp::abs(k) <= 1 << 16) return pow2(-k.convert_to<std::int64_t>());
        }
        return std::nullopt;
    }

    double value(std::uint64_t n) const {
        if (auto q = exact_value(n)) return to_double(*q);
        return std::exp2(-e_(n).to_double());
    }

    /// alpha^{(k)}(n) = alpha(n + k).
    ShrinkingSequence shifted(std::uint64_t k) const {
        auto e = e_;
        auto v = v_;
        ExactValue shifted_v;
        if (v) shifted_v = [v, k](std::uint64_t n) { return v(n + k); };
        return ShrinkingSequence(descriptor_ + " shifted by " + std::to_string(k),
                                 [e, k](std::uint64_t n) { return e(n + k); }, shifted_v);
    }

    /// alpha^gamma, i.e. E -> gamma * E.
    ShrinkingSequence snowflaked(const Rational& gamma) const {
        if (gamma <= 0) throw DomainError("snowflake exponent must be positive");
        auto e = e_;
        auto self = std::make_shared<ShrinkingSequence>(*this);
        return ShrinkingSequence(
            descriptor_ + " ^ " + to_string(gamma), [e, gamma](std::uint64_t n) { return e(n) * Magnitude(gamma); },
            [self, gamma](std::uint64_t n) -> std::optional<Rational> {
                Magnitude scaled = self->neg_log2(n) * Magnitude(gamma);
                if (scaled.is_rational() && mp::denominator(scaled.rational()) == 1 &&
                    mp::abs(mp::numerator(scaled.rational())) <= 1 << 16) {
                    return pow2(-mp::numerator(scaled.rational()).convert_to<std::int64_t>());
                }
                if (auto base = self->exact_value(n)) return exact_pow(*base, gamma);
                return std::nullopt;
            });
    }

    /**
     * Number of indices k with alpha(k) > r, for r given as -log2 r.
     *
     * Equivalently the first k with E(k) >= -log2 r, so r lies in the gap
     * alpha(k) <= r < alpha(k - 1).
     */
    std::uint64_t level(const Magnitude& neg_log2_r) const {
        auto below = [&](std::uint64_t k) {  // alpha(k) > r
            return e_(k) < neg_log2_r;
        };
        if (!below(0)) return 0;
        std::uint64_t lo = 0, hi = 1;
        while (true) {
            bool b = false;
            try {
                b = below(hi);
            } catch (const SizeError&) {
                throw SizeError("scale " + neg_log2_r.str() + " lies beyond the representable range of " + descriptor_);
            }
            if (!b) break;
            lo = hi;
            if (hi >= kIndexCap) throw SizeError("scale beyond the searchable index range of " + descriptor_);
            hi *= 2;
        }
        while (hi - lo > 1) {
            std::uint64_t mid = lo + (hi - lo) / 2;
            if (below(mid)) lo = mid;
            else hi = mid;
        }
        return hi;
    }

    /// Checks E(n) < E(n+1) for n < n_max.
    bool strictly_decreasing_up_to(std::uint64_t n_max) const {
        Magnitude prev = e_(0);
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            Magnitude cur = e_(n);
            if (!(prev < cur)) return false;
            prev = cur;
        }
        return true;
    }

    /// Some index with E(n) > bound (doubling search), confirming alpha -> 0 on demand.
    std::uint64_t index_exceeding(const Magnitude& bound) const {
        for (std::uint64_t n = 0;; n = n == 0 ? 1 : 2 * n) {
            if (e_(n) > bound) return n;
            if (n >= kIndexCap) throw SizeError("no index found below the cap");
        }
    }

private:
    std::string descriptor_;
    NegLog2 e_;
    ExactValue v_;
};

/**
 * @brief Branching numbers m_n >= 2 with L(n) = log2 m_n.
 *
 * `count` may return nullopt for astronomically large m_n; `log2_count` is
 * always available. `prefix` optionally gives sum_{i<n} L(i) in closed form.
 */
class BranchingSequence {
public:
    using Count = std::function<std::optional<BigInt>(std::uint64_t)>;
    using Log2 = std::function<Magnitude(std::uint64_t)>;

    BranchingSequence(std::string descriptor, Count count, Log2 log2, Log2 prefix = {})
        : descriptor_(std::move(descriptor)), count_(std::move(count)), log2_(std::move(log2)),
          prefix_(std::move(prefix)) {}

    static BranchingSequence constant(const BigInt& m) {
        if (m < 2) throw DomainError("branching numbers must be >= 2");
        Magnitude l = Magnitude::log2_of(Rational(m));
        return BranchingSequence(
            "m = " + m.str(), [m](std::uint64_t) { return std::optional<BigInt>(m); },
            [l](std::uint64_t) { return l; }, [l](std::uint64_t n) { return l * Magnitude(n); });
    }

    /// Cycles through the list.
    static BranchingSequence periodic(std::vector<BigInt> ms) {
        if (ms.empty()) throw DomainError("empty branching list");
        for (const auto& m : ms)
            if (m < 2) throw DomainError("branching numbers must be >= 2");
        std::string d = "m periodic (";
        for (std::size_t i = 0; i < ms.size(); ++i) d += (i ? "," : "") + ms[i].str();
        d += ")";
        auto shared = std::make_shared<const std::vector<BigInt>>(std::move(ms));
        return BranchingSequence(
            d, [shared](std::uint64_t n) { return std::optional<BigInt>((*shared)[n % shared->size()]); },
            [shared](std::uint64_t n) { return Magnitude::log2_of(Rational((*shared)[n % shared->size()])); });
    }

    /// m_n = 2^{e(n)}; counts are materialized only below 2^4096.
    static BranchingSequence powers_of_two(std::string descriptor, std::function<Magnitude(std::uint64_t)> exponent) {
        return BranchingSequence(
            std::move(descriptor),
            [exponent](std::uint64_t n) -> std::optional<BigInt> {
                Magnitude e = exponent(n);
                if (!e.is_rational() || mp::denominator(e.rational()) != 1 || e.rational() > 4096) return std::nullopt;
                return BigInt(1) << e.rational().convert_to<unsigned>();
            },
            exponent);
    }

    const std::string& descriptor() const { return descriptor_; }
    std::optional<BigInt> count(std::uint64_t n) const { return count_(n); }
    Magnitude log2_count(std::uint64_t n) const { return log2_(n); }

    /// sum_{i < n} L(i).
    Magnitude log2_prefix(std::uint64_t n) const {
        if (prefix_) return prefix_(n);
        if (n > 10'000'000) throw SizeError("prefix sum over " + std::to_string(n) + " terms needs a closed form");
        Magnitude s(0);
        for (std::uint64_t i = 0; i < n; ++i) s += log2_(i);
        return s;
    }

    /// prod_{lo <= i < hi} m_i when every factor is known and the product stays below 2^bit_cap.
    std::optional<BigInt> product(std::uint64_t lo, std::uint64_t hi, std::size_t bit_cap = 1 << 16) const {
        BigInt p = 1;
        if (hi > lo && hi - lo > bit_cap) return std::nullopt;
        for (std::uint64_t i = lo; i < hi; ++i) {
            auto m = count_(i);
            if (!m) return std::nullopt;
            p *= *m;
            if (mp::msb(p) > bit_cap) return std::nullopt;
        }
        return p;
    }

    BranchingSequence shifted(std::uint64_t k) const {
        auto c = count_;
        auto l = log2_;
        Log2 pre;
        if (prefix_) {
            auto p = prefix_;
            pre = [p, k](std::uint64_t n) { return p(n + k) - p(k); };
        }
        return BranchingSequence(
            descriptor_ + " shifted by " + std::to_string(k), [c, k](std::uint64_t n) { return c(n + k); },
            [l, k](std::uint64_t n) { return l(n + k); }, pre);
    }

private:
    std::string descriptor_;
    Count count_;
    Log2 log2_;
    Log2 prefix_;
};

// ---------------------------------------------------------------------------
// Builtin shrinking sequences

namespace sequences {

/// alpha(n) = 2^{-rho (n+1)}.
inline ShrinkingSequence geometric(const Rational& ratio_log2 = 1) {
    if (ratio_log2 <= 0) throw DomainError("geometric ratio must be positive");
    return ShrinkingSequence("alpha(n) = 2^-(" + to_string(ratio_log2) + "(n+1))",
                             [ratio_log2](std::uint64_t n) { return Magnitude(ratio_log2 * Rational(BigInt(n) + 1)); });
}

/// alpha(n) = 2^{-n^2}.
inline ShrinkingSequence square_exponent() {
    return ShrinkingSequence("alpha(n) = 2^-(n^2)", [](std::uint64_t n) { return Magnitude(BigInt(n) * n); });
}

/// alpha(n) = 1 / (n + 1).
inline ShrinkingSequence harmonic() {
    return ShrinkingSequence(
        "alpha(n) = 1/(n+1)", [](std::uint64_t n) { return Magnitude::log2_of(Rational(BigInt(n) + 1)); },
        [](std::uint64_t n) { return std::optional<Rational>(Rational(BigInt(1), BigInt(n) + 1)); });
}

/// Row j and offset k in the triangular interleaving of level j with its j inserts.
inline std::pair<std::uint64_t, std::uint64_t> triangular_split(std::uint64_t n) {
    auto j = static_cast<std::uint64_t>((std::sqrt(8.0 * static_cast<double>(n) + 1.0) - 1.0) / 2.0);
    while (j * (j + 1) / 2 > n) --j;
    while ((j + 1) * (j + 2) / 2 <= n) ++j;
    return {j, n - j * (j + 1) / 2};
}

/// First index of row j: j(j+1)/2.
inline std::uint64_t triangular_start(std::uint64_t j) { return j * (j + 1) / 2; }

/// 2^{-j^3} interleaved with 2^{-k} 2^{-j^3}, k = 1..j.
inline ShrinkingSequence cubic_with_dyadic_inserts() {
    return ShrinkingSequence("theta: 2^-(j^3) with inserts 2^-k 2^-(j^3), k=1..j", [](std::uint64_t n) {
        auto [j, k] = triangular_split(n);
        return Magnitude(BigInt(j) * j * j + k);
    });
}

/// 2^{-j^3} interleaved with (i/(i+1)) 2^{-j^3}, i = j..1.
inline ShrinkingSequence cubic_with_ratio_inserts() {
    auto split = [](std::uint64_t n) {
        auto [j, k] = triangular_split(n);
        // Offset k >= 1 carries the factor (j+1-k)/(j+2-k), running j/(j+1) .. 1/2.
        Rational factor = k == 0 ? Rational(1) : Rational(BigInt(j + 1 - k), BigInt(j + 2 - k));
        return std::make_pair(j, factor);
    };
    return ShrinkingSequence(
        "theta: 2^-(j^3) with inserts (i/(i+1)) 2^-(j^3), i=1..j",
        [split](std::uint64_t n) {
            auto [j, factor] = split(n);
            return Magnitude(BigInt(j) * j * j) + Magnitude::log2_of(1 / factor);
        },
        [split](std::uint64_t n) -> std::optional<Rational> {
            auto [j, factor] = split(n);
            if (j > 24) return std::nullopt;
            return factor * pow2(-static_cast<std::int64_t>(j * j * j));
        });
}

/// Tower t(0) = 2, t(n+1) = 2^{t(n)}; materialized for n <= 4 only.
inline BigInt tower(unsigned n) {
    if (n > 4) throw SizeError("t(" + std::to_string(n) + ") is not representable");
    BigInt t = 2;
    for (unsigned i = 0; i < n; ++i) t = BigInt(1) << t.convert_to<unsigned>();
    return t;
}

/**
 * Exact-tower (0,1,1,1) sequence: c_n = 1/t(5i+8) at n = t(5i+5)+1, else 1/2.
 * Since t(5) > 2^64, every 64-bit index precedes the first jump and
 * E(n) = n + 1 on the whole representable range.
 */
inline ShrinkingSequence tower_exact() {
    return ShrinkingSequence("alpha(n) = c_0...c_n, c = 1/t(5i+8) at n = t(5i+5)+1, else 1/2",
                             [](std::uint64_t n) { return Magnitude(BigInt(n) + 1); });
}

/// Jump index k(i) = 2^{12 * 2^i} and jump exponent B_i = k(i)^{3/2} of the mild tower.
inline BigInt mild_jump_index(unsigned i) { return BigInt(1) << (12u << i); }
inline BigInt mild_jump_exponent(unsigned i) { return BigInt(1) << (18u << i); }

/**
 * Mild (0,1,1,1) sequence: c_n = 2^{-b_n}, b = B_i at n = k(i)+1, else 1.
 * E(n) = (n+1) + sum over jumps k(i)+1 <= n of (B_i - 1).
 */
inline ShrinkingSequence tower_mild() {
    return ShrinkingSequence("alpha(n) = c_0...c_n, c = 2^-(k(i)^1.5) at n = k(i)+1 with k(i) = 2^(12*2^i), else 1/2",
                             [](std::uint64_t n) {
                                 BigInt e = BigInt(n) + 1;
                                 for (unsigned i = 0; i < 3; ++i) {
                                     if (mild_jump_index(i) + 1 > n) break;
                                     e += mild_jump_exponent(i) - 1;
                                 }
                                 return Magnitude(e);
                             });
}

/// g(i) = 2^{i!} as a power-of-two magnitude; i!, must fit in 62 bits.
inline Magnitude factorial_tower(std::uint64_t i) {
    if (i > 20) throw SizeError("2^(" + std::to_string(i) + "!) exceeds the float exponent range");
    std::uint64_t f = 1;
    for (std::uint64_t k = 2; k <= i; ++k) f *= k;
    if (f >= (std::uint64_t(1) << 62)) throw SizeError("exponent overflow");
    return Magnitude::pow2(static_cast<std::int64_t>(f));
}

/// Exact-tower (0,inf,inf,inf): alpha(n) = prod_{i<=n} 2^{-g(2i+1)}, g(i) = 2^{i!}.
inline ShrinkingSequence factorial_giants() {
    return ShrinkingSequence("alpha(n) = prod 2^-g(2i+1), g(i) = 2^(i!)", [](std::uint64_t n) {
        if (n > 9) throw SizeError("g(2n+1) beyond the float exponent range");
        Magnitude e(0);
        for (std::uint64_t i = 0; i <= n; ++i) e += factorial_tower(2 * i + 1);
        return e;
    });
}

/// Mild (0,inf,inf,inf): g(j) = 2^{j^2}, exact in bigints.
inline ShrinkingSequence square_giants() {
    return ShrinkingSequence("alpha(n) = prod 2^-g(2i+1), g(j) = 2^(j^2)", [](std::uint64_t n) {
        if (n > 2000) throw SizeError("square giants limited to n <= 2000");
        BigInt e = 0;
        for (std::uint64_t i = 0; i <= n; ++i) e += BigInt(1) << static_cast<unsigned>((2 * i + 1) * (2 * i + 1));
        return Magnitude(e);
    });
}

}  // namespace sequences

}  // namespace mgeom

#endif  // MGEOM_CANTOR_SEQUENCES_HPP
