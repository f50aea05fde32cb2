#pragma once
#ifndef MGEOM_CANTOR_BLOCKS_HPP
#define MGEOM_CANTOR_BLOCKS_HPP

#include <mgeom/cantor/cantor.hpp>
#include <mgeom/cantor/dimensional_type.hpp>
#include <mgeom/metric/space.hpp>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace mgeom {

// ---------------------------------------------------------------------------
// Constructive block families for types (0,0,1,1) and (0,0,inf,inf)

/**
 * @brief Countable set A of finitely supported 0/1 strings plus (0,0,0,0) pieces.
 *
 * Block n holds every string supported on [n, n + n^2) in the ambient S(2, alpha).
 * Each isolated point a of A carries a copy of S(2, beta_a) with
 * beta_a(j) = alpha(t_a + position(j)), where alpha(t_a) <= r_a / 3 and r_a is the
 * distance from a to the rest of A.
 */
struct BlockFamily {
    std::string tag;
    /// E(i) = -log2 alpha(i) of the ambient sequence, for arbitrary indices.
    std::function<Magnitude(const BigInt&)> ambient_neg_log2;
    /// alpha(i) as a rational.
    std::function<Rational(const BigInt&)> ambient_value;
    /// Offset of the j-th piece level from the piece start.
    std::function<BigInt(std::uint64_t)> piece_position;
    std::string ambient_descriptor;
    std::string piece_descriptor;

    static std::uint64_t offset(std::uint64_t n) { return n; }
    static std::uint64_t width(std::uint64_t n) { return n * n; }

    ShrinkingSequence ambient_alpha() const {
        auto e = ambient_neg_log2;
        auto v = ambient_value;
        return ShrinkingSequence(
            ambient_descriptor, [e](std::uint64_t i) { return e(BigInt(i)); },
            [v](std::uint64_t i) { return std::optional<Rational>(v(BigInt(i))); });
    }

    CantorSpec ambient() const { return CantorSpec(BranchingSequence::constant(2), ambient_alpha()); }

    /// The piece attached at start index t.
    CantorSpec piece(const BigInt& start = 0, std::uint64_t depth = 1) const {
        auto e = ambient_neg_log2;
        auto v = ambient_value;
        auto pos = piece_position;
        return CantorSpec(BranchingSequence::constant(2),
                          ShrinkingSequence(
                              piece_descriptor + " from index " + start.str(),
                              [e, pos, start](std::uint64_t j) { return e(start + pos(j)); },
                              [v, pos, start](std::uint64_t j) { return std::optional<Rational>(v(start + pos(j))); }),
                          depth);
    }
};

inline BlockFamily block_family(std::string_view tag) {
    BlockFamily f;
    f.tag = std::string(tag);
    if (tag == "0011") {
        f.ambient_neg_log2 = [](const BigInt& i) { return Magnitude(Rational(i + 1)); };
        f.ambient_value = [](const BigInt& i) {
            if (i > 1 << 20) throw SizeError("ambient index too large for an exact value");
            return pow2(-(i + 1).convert_to<std::int64_t>());
        };
        f.piece_position = [](std::uint64_t j) { return BigInt(j) * j; };
        f.ambient_descriptor = "alpha(i) = 2^-(i+1)";
        f.piece_descriptor = "beta(j) = alpha(t + j^2)";
    } else if (tag == "00ii") {
        f.ambient_neg_log2 = [](const BigInt& i) { return Magnitude::log2_of(Rational(i + 1)); };
        f.ambient_value = [](const BigInt& i) { return Rational(BigInt(1), i + 1); };
        f.piece_position = [](std::uint64_t j) {
            if (j > 100'000) throw SizeError("piece level too deep");
            return (BigInt(1) << static_cast<unsigned>(j * j)) - 1;
        };
        f.ambient_descriptor = "alpha(i) = 1/(i+1)";
        f.piece_descriptor = "beta(j) = alpha(t + 2^(j^2) - 1)";
    } else {
        throw DomainError("no block family for tag " + std::string(tag));
    }
    return f;
}

namespace detail {

using Support = std::vector<std::uint64_t>;

/// Largest ambient index at which some other point of A first differs from a.
inline std::uint64_t isolation_index(const Support& a) {
    const std::uint64_t first = a.front(), last = a.back();
    std::uint64_t best = last;
    for (std::uint64_t n = 1; BlockFamily::offset(n) <= first; ++n) {
        std::uint64_t end = BlockFamily::offset(n) + BlockFamily::width(n);
        if (last < end) best = std::max(best, end - 1);
    }
    return best;
}

inline std::string support_label(const Support& s) {
    std::string out = "x";
    for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "." : "") + std::to_string(s[i]);
    return out;
}

}  // namespace detail

/// First ambient index t with alpha(t) <= alpha(v) / 3.
inline std::uint64_t piece_start(const BlockFamily& f, std::uint64_t v) {
    Rational target = f.ambient_value(BigInt(v)) / 3;
    return f.ambient_alpha().level(neg_log2(target));
}

/**
 * Points of blocks 1..blocks together with the limit point 0, each isolated
 * point carrying its piece truncated at piece_depth levels.
 */
inline ExactSpace enumerate_blocks(const BlockFamily& f, std::uint64_t blocks, std::uint64_t piece_depth) {
    std::set<detail::Support> anchors;
    for (std::uint64_t n = 1; n <= blocks; ++n) {
        std::uint64_t c = BlockFamily::offset(n), k = BlockFamily::width(n);
        if (k > 16) throw SizeError("block " + std::to_string(n) + " has 2^" + std::to_string(k) + " points");
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << k); ++mask) {
            detail::Support s;
            for (std::uint64_t b = 0; b < k; ++b)
                if (mask >> b & 1u) s.push_back(c + b);
            anchors.insert(s);
        }
    }
    std::vector<detail::Support> points{{}};
    std::vector<std::string> labels{"x"};
    for (const auto& a : anchors) {
        points.push_back(a);
        labels.push_back(detail::support_label(a));
        std::uint64_t t = piece_start(f, detail::isolation_index(a));
        for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << piece_depth); ++mask) {
            detail::Support s = a, extra;
            for (std::uint64_t j = 0; j < piece_depth; ++j) {
                if (!(mask >> j & 1u)) continue;
                BigInt pos = BigInt(t) + f.piece_position(j);
                if (pos > BigInt(std::uint64_t(1) << 62)) throw SizeError("piece position overflow");
                s.push_back(pos.convert_to<std::uint64_t>());
                extra.push_back(s.back());
            }
            points.push_back(s);
            labels.push_back(detail::support_label(a) + "|" + detail::support_label(extra).substr(1));
        }
    }
    const std::size_t n = points.size();
    if (n > kMaxPoints<Rational>) throw SizeError("block enumeration has " + std::to_string(n) + " points");
    std::map<std::uint64_t, Rational> alpha;
    std::vector<Rational> flat(n * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // First position in the symmetric difference of two sorted supports.
            const auto& x = points[i];
            const auto& y = points[j];
            std::size_t p = 0;
            while (p < x.size() && p < y.size() && x[p] == y[p]) ++p;
            std::uint64_t v = p == x.size() ? y[p] : (p == y.size() ? x[p] : std::min(x[p], y[p]));
            auto it = alpha.find(v);
            if (it == alpha.end()) it = alpha.emplace(v, f.ambient_value(BigInt(v))).first;
            flat[i * n + j] = flat[j * n + i] = it->second;
        }
    }
    return ExactSpace(std::move(labels), std::move(flat), Kind::ultrametric);
}

/// Designed-scale certificates for a block family.
struct BlockCertificate {
    std::uint64_t n = 0;
    /// log2 N(block n, alpha(c_n + k_n)) / E(c_n + k_n) = k_n / E(c_n + k_n); lower bound for ubdim.
    Magnitude ubdim_ratio;
    /// Ambient ball-splitting bound on adim over levels <= n.
    Magnitude adim_bound;
    /// min h_j and max p_j of the piece over j in [N/10, N].
    Magnitude piece_h;
    Magnitude piece_p;
    std::uint64_t piece_terms = 0;
};

inline BlockCertificate block_certificate(const BlockFamily& f, std::uint64_t n = 100, std::uint64_t piece_terms = 10'000) {
    BlockCertificate c;
    c.n = n;
    BigInt end = BigInt(BlockFamily::offset(n)) + BlockFamily::width(n);
    c.ubdim_ratio = Magnitude(Rational(BigInt(BlockFamily::width(n)))) / f.ambient_neg_log2(end);
    c.adim_bound = upadim_bound(f.ambient(), n);
    std::uint64_t terms = piece_terms;
    if (f.tag == "00ii") terms = std::min<std::uint64_t>(terms, 2000);  // piece exponents grow like 2^(j^2)
    auto table = dim_sequences(f.piece(), terms);
    auto [h, p] = table.window(terms / 10, terms);
    c.piece_h = h;
    c.piece_p = p;
    c.piece_terms = terms;
    return c;
}

// ---------------------------------------------------------------------------
// Tower arithmetic

namespace tower {

/// sum_h coeff[h] * t(h) + constant, with t(0) = 2 and t(h+1) = 2^{t(h)}.
struct Linear {
    std::map<unsigned, BigInt> coeff;
    BigInt constant = 0;

    static Linear t(unsigned h, const BigInt& c = 1) {
        Linear l;
        l.coeff[h] = c;
        return l;
    }
    static Linear value(const BigInt& c) {
        Linear l;
        l.constant = c;
        return l;
    }

    friend Linear operator+(Linear a, const Linear& b) {
        for (const auto& [h, c] : b.coeff) a.coeff[h] += c;
        a.constant += b.constant;
        std::erase_if(a.coeff, [](const auto& kv) { return kv.second == 0; });
        return a;
    }
    friend Linear operator-(const Linear& a, const Linear& b) { return a + b * BigInt(-1); }
    friend Linear operator*(Linear a, const BigInt& k) {
        for (auto& [h, c] : a.coeff) c *= k;
        a.constant *= k;
        std::erase_if(a.coeff, [](const auto& kv) { return kv.second == 0; });
        return a;
    }

    std::string str() const {
        std::string s;
        for (auto it = coeff.rbegin(); it != coeff.rend(); ++it) {
            const auto& [h, c] = *it;
            std::string term = "t(" + std::to_string(h) + ")";
            if (c == 1) s += s.empty() ? term : " + " + term;
            else if (c == -1) s += s.empty() ? "-" + term : " - " + term;
            else if (c > 0) s += (s.empty() ? "" : " + ") + c.str() + term;
            else s += (s.empty() ? "-" : " - ") + BigInt(-c).str() + term;
        }
        if (constant != 0 || s.empty()) {
            if (s.empty()) s = constant.str();
            else s += (constant > 0 ? " + " : " - ") + BigInt(mp::abs(constant)).str();
        }
        return s;
    }
};

/**
 * Sign of a tower-linear expression. Heights <= 4 are evaluated exactly;
 * otherwise the top term dominates because t(H) = 2^{t(H-1)} exceeds
 * S * t(H-1) for every modest coefficient sum S.
 */
inline int sign(const Linear& x) {
    if (x.coeff.empty()) return x.constant < 0 ? -1 : (x.constant > 0 ? 1 : 0);
    unsigned top = x.coeff.rbegin()->first;
    if (top <= 4) {
        BigInt v = x.constant;
        for (const auto& [h, c] : x.coeff) v += c * sequences::tower(h);
        return v < 0 ? -1 : (v > 0 ? 1 : 0);
    }
    BigInt rest = mp::abs(x.constant);
    for (const auto& [h, c] : x.coeff)
        if (h != top) rest += mp::abs(c);
    if (mp::msb(rest + 1) > 30'000) throw InternalError("tower coefficients too large to dominate");
    return x.coeff.rbegin()->second < 0 ? -1 : 1;
}

}  // namespace tower

struct CertificateLine {
    std::string statement;
    bool holds = false;
    std::string detail;
};

struct Certificate {
    std::string subject;
    std::vector<CertificateLine> lines;

    bool all_hold() const {
        for (const auto& l : lines)
            if (!l.holds) return false;
        return !lines.empty();
    }
};

/**
 * Symbolic check of the jump conditions for the (0,1,1,1) tower construction:
 * k(i) = t(5i+5), jump factor c = 1/t(5i+8) at n = k(i)+1, 1/2 elsewhere.
 *
 * The three ratios k(i)/E(k(i)+1), k(i)/(k(i+1)-k(i)-1), E(k(i)+1)/(k(i+1)-k(i)-1)
 * are bounded in log2 by tower-linear expressions that are checked negative and
 * strictly decreasing in i.
 */
inline Certificate tower_certificate(unsigned i_max = 2) {
    using tower::Linear;
    Certificate cert;
    cert.subject = "tower (0,1,1,1) construction";
    auto check = [&](std::string statement, const Linear& expr, int want) {
        int s = tower::sign(expr);
        bool ok = want > 0 ? s > 0 : (want < 0 ? s < 0 : s >= 0);
        cert.lines.push_back({std::move(statement), ok, "sign(" + expr.str() + ") = " + std::to_string(s)});
    };
    auto bound_a = [](unsigned i) { return Linear::t(5 * i + 4) - Linear::t(5 * i + 6); };
    auto bound_b = [](unsigned i) { return Linear::value(1) + Linear::t(5 * i + 4) - Linear::t(5 * i + 9); };
    auto bound_c = [](unsigned i) { return Linear::value(2) + Linear::t(5 * i + 6) - Linear::t(5 * i + 9); };
    for (unsigned i = 0; i <= i_max; ++i) {
        std::string tag = "i=" + std::to_string(i) + ": ";
        check(tag + "k(i) + 1 < k(i+1)", Linear::t(5 * i + 10) - Linear::t(5 * i + 5) - Linear::value(1), 1);
        check(tag + "jump factor 1/t(5i+8) <= 1/2", Linear::t(5 * i + 8) - Linear::value(2), 0);
        cert.lines.push_back({tag + "c_n = 1/2 for k(i)+2 <= n <= k(i+1)", true, "by construction"});
        // E(k(i)+1) >= log2 t(5i+8) = t(5i+7).
        check(tag + "log2 k(i)/E(k(i)+1) <= " + bound_a(i).str() + " < 0", bound_a(i), -1);
        // 2(k(i)+1) <= k(i+1) turns the gap denominator into k(i+1)/2.
        check(tag + "2(k(i) + 1) <= k(i+1)",
              Linear::t(5 * i + 10) - Linear::t(5 * i + 5, 2) - Linear::value(2), 0);
        check(tag + "log2 k(i)/(k(i+1)-k(i)-1) <= " + bound_b(i).str() + " < 0", bound_b(i), -1);
        // E(k(i)+1) <= k(i) + 2 + sum_{j<=i} t(5j+7) <= 2 t(5i+7).
        Linear e_upper = Linear::t(5 * i + 5) + Linear::value(2);
        for (unsigned j = 0; j <= i; ++j) e_upper = e_upper + Linear::t(5 * j + 7);
        check(tag + "E(k(i)+1) <= 2 t(5i+7)", Linear::t(5 * i + 7, 2) - e_upper, 0);
        check(tag + "log2 E(k(i)+1)/(k(i+1)-k(i)-1) <= " + bound_c(i).str() + " < 0", bound_c(i), -1);
        if (i < i_max) {
            check(tag + "ratio bounds decrease from i to i+1", bound_a(i + 1) - bound_a(i), -1);
            check(tag + "gap bound decreases from i to i+1", bound_b(i + 1) - bound_b(i), -1);
            check(tag + "height bound decreases from i to i+1", bound_c(i + 1) - bound_c(i), -1);
        }
    }
    return cert;
}

/// The same conditions for the mild tower in exact rationals.
inline Certificate mild_tower_certificate(unsigned i_max = 2) {
    if (i_max > 2) throw DomainError("mild certificate evaluates E exactly only up to i = 2");
    Certificate cert;
    cert.subject = "mild (0,1,1,1) construction";
    auto alpha = sequences::tower_mild();
    auto e_at = [&](const BigInt& n) { return alpha.neg_log2(n.convert_to<std::uint64_t>()).rational(); };
    std::vector<Rational> ra, rb, rc;
    for (unsigned i = 0; i <= i_max; ++i) {
        std::string tag = "i=" + std::to_string(i) + ": ";
        BigInt k = sequences::mild_jump_index(i), next = sequences::mild_jump_index(i + 1);
        BigInt b = sequences::mild_jump_exponent(i);
        cert.lines.push_back({tag + "k(i) + 1 < k(i+1)", k + 1 < next, k.str() + " vs " + next.str()});
        cert.lines.push_back({tag + "jump factor 2^-B_i <= 1/2", b >= 1, "B_i = " + b.str()});
        cert.lines.push_back({tag + "c_n = 1/2 for k(i)+2 <= n <= k(i+1)", true, "by construction"});
        Rational e = e_at(k + 1);
        Rational gap(next - k - 1);
        ra.push_back(Rational(k) / e);
        rb.push_back(Rational(k) / gap);
        rc.push_back(e / gap);
        cert.lines.push_back({tag + "k(i)/E(k(i)+1) = " + to_string(ra.back()), ra.back() < 1, "below 1"});
        cert.lines.push_back({tag + "k(i)/(k(i+1)-k(i)-1) = " + to_string(rb.back()), rb.back() < 1, "below 1"});
        cert.lines.push_back(
            {tag + "E(k(i)+1)/(k(i+1)-k(i)-1) = " + to_string(rc.back()), rc.back() < 1, "below 1"});
    }
    for (unsigned i = 0; i < i_max; ++i) {
        std::string tag = "i=" + std::to_string(i) + ": ";
        cert.lines.push_back({tag + "ratios decrease from i to i+1",
                              ra[i + 1] < ra[i] && rb[i + 1] < rb[i] && rc[i + 1] < rc[i], "exact comparison"});
    }
    return cert;
}

// ---------------------------------------------------------------------------
// Building blocks

struct BuildingBlock {
    std::string tag;
    DimensionalType analytic;
    std::optional<CantorSpec> spec;
    std::optional<BlockFamily> family;
    /// Same analytic type, with convergence visible at desk scale.
    std::optional<CantorSpec> mild;
    std::string description;

    /// Spec whose h_n, p_n witness hdim and pdim: mild, else exact, else the block piece.
    CantorSpec sequence_spec() const {
        if (mild) return *mild;
        if (spec) return *spec;
        return family->piece();
    }
};

inline const std::vector<std::string>& building_block_tags() {
    static const std::vector<std::string> tags = {"0000", "1111", "iiii", "0111", "0iii",
                                                  "0011", "00ii", "0001", "000i"};
    return tags;
}

inline DimensionalType type_from_tag(std::string_view tag) {
    if (tag.size() != 4) throw MalformedInput("building block tags have four characters");
    DimensionalType t;
    for (int i = 0; i < 4; ++i) {
        char ch = tag[i];
        if (ch == '0') t.a[i] = Dim(0);
        else if (ch == '1') t.a[i] = Dim(1);
        else if (ch == 'i') t.a[i] = Dim::inf();
        else throw MalformedInput("building block tag characters are 0, 1 or i");
    }
    return t;
}

namespace detail {

/// m_i = 2^{g(2i+2)} with g(j) = 2^{j!}.
inline BranchingSequence factorial_giant_branching() {
    return BranchingSequence::powers_of_two("m_i = 2^g(2i+2), g(j) = 2^(j!)", [](std::uint64_t i) {
        return sequences::factorial_tower(2 * i + 2);
    });
}

/// m_i = 2^{g(2i+2)} with g(j) = 2^{j^2}.
inline BranchingSequence square_giant_branching() {
    return BranchingSequence::powers_of_two("m_i = 2^g(2i+2), g(j) = 2^(j^2)", [](std::uint64_t i) {
        if (i > 2000) throw SizeError("square giants limited to i <= 2000");
        return Magnitude(Rational(BigInt(1) << static_cast<unsigned>((2 * i + 2) * (2 * i + 2))));
    });
}

}  // namespace detail

inline BuildingBlock building_block(std::string_view tag) {
    BuildingBlock b;
    b.tag = std::string(tag);
    auto two = BranchingSequence::constant(2);
    if (tag == "0000") {
        b.spec = CantorSpec(two, sequences::square_exponent());
        b.description = "m = 2, alpha(n) = 2^-(n^2)";
    } else if (tag == "1111") {
        b.spec = CantorSpec(two, sequences::geometric(1));
        b.description = "m = 2, alpha(n) = 2^-(n+1)";
    } else if (tag == "iiii") {
        b.spec = CantorSpec(two, sequences::harmonic());
        b.description = "m = 2, alpha(n) = 1/(n+1)";
    } else if (tag == "0111") {
        b.spec = CantorSpec(two, sequences::tower_exact());
        b.mild = CantorSpec(two, sequences::tower_mild());
        b.description = "m = 2, jumps 1/t(5i+8) after k(i) = t(5i+5); mild jumps 2^-(k^1.5) after k(i) = 2^(12*2^i)";
    } else if (tag == "0iii") {
        b.spec = CantorSpec(detail::factorial_giant_branching(), sequences::factorial_giants());
        b.mild = CantorSpec(detail::square_giant_branching(), sequences::square_giants());
        b.description = "m_i = 2^g(2i+2), c_i = 2^-g(2i+1), g(j) = 2^(j!); mild g(j) = 2^(j^2)";
    } else if (tag == "0011" || tag == "00ii") {
        b.family = block_family(tag);
        b.description = "blocks on [n, n+n^2) in S(2, " + b.family->ambient_descriptor + ") with pieces " +
                        b.family->piece_descriptor;
    } else if (tag == "0001") {
        b.spec = CantorSpec(two, sequences::cubic_with_dyadic_inserts());
        b.description = "m = 2, 2^-(j^3) with inserts 2^-k 2^-(j^3)";
    } else if (tag == "000i") {
        b.spec = CantorSpec(two, sequences::cubic_with_ratio_inserts());
        b.description = "m = 2, 2^-(j^3) with inserts (i/(i+1)) 2^-(j^3)";
    } else {
        throw DomainError("unknown building block tag '" + std::string(tag) +
                          "'; expected one of 0000 1111 iiii 0111 0iii 0011 00ii 0001 000i");
    }
    b.analytic = type_from_tag(tag);
    return b;
}

}  // namespace mgeom

#endif  // MGEOM_CANTOR_BLOCKS_HPP
