#pragma once
#ifndef MGEOM_CANTOR_FACTORY_HPP
#define MGEOM_CANTOR_FACTORY_HPP

#include <mgeom/cantor/blocks.hpp>
#include <mgeom/metric/operations.hpp>

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace mgeom {

struct AssemblyComponent {
    BuildingBlock block;
    /// Distances are raised to 1/exponent, so every dimension scales by exponent.
    Rational exponent = 1;
    DimensionalType scaled;
    std::string provenance;

    /// Sequence spec of the snowflaked component.
    CantorSpec sequence_spec() const { return block.sequence_spec().snowflaked(1 / exponent); }
};

struct CantorAssembly {
    DimensionalType target;
    std::vector<AssemblyComponent> components;
    std::string glue = "r(i,j) = largest component diameter, p = inf";

    DimensionalType max_of_components() const {
        std::vector<DimensionalType> ts;
        for (const auto& c : components) ts.push_back(c.scaled);
        return componentwise_max(ts);
    }
};

/**
 * @brief Ultrametric assembly realizing a prescribed dimensional type.
 *
 * Entry i gets a block of type 1111, 0111, 0011, 0001 (by position)
 * snowflaked with exponent a_i, or the matching infinite block for the first
 * infinite entry. Entries equal to their predecessor add nothing and are
 * skipped; the all-zero target uses the 0000 block.
 */
inline CantorAssembly prescribed_factory(const DimensionalType& target) {
    target.check();
    static const char* finite_tags[] = {"1111", "0111", "0011", "0001"};
    static const char* infinite_tags[] = {"iiii", "0iii", "00ii", "000i"};
    CantorAssembly out;
    out.target = target;
    Dim prev(0);
    for (int i = 0; i < 4; ++i) {
        const Dim& a = target.a[i];
        if (a == prev) continue;
        prev = a;
        AssemblyComponent c;
        if (a.infinite) {
            c.block = building_block(infinite_tags[i]);
            c.exponent = 1;
        } else {
            c.block = building_block(finite_tags[i]);
            c.exponent = a.value;
        }
        c.scaled = c.block.analytic.scaled(c.exponent);
        c.provenance = "type " + c.block.analytic.str() + " block, snowflake exponent " + to_string(c.exponent);
        out.components.push_back(std::move(c));
    }
    if (out.components.empty()) {
        AssemblyComponent c;
        c.block = building_block("0000");
        c.scaled = c.block.analytic;
        c.provenance = "type (0, 0, 0, 0) block";
        out.components.push_back(std::move(c));
    }
    if (!(out.max_of_components() == target)) {
        throw InternalError("assembly type " + out.max_of_components().str() + " differs from target " + target.str());
    }
    return out;
}

/// Window estimates for one component: min h_n and max p_n over n in [N/10, N].
struct ComponentEstimate {
    Magnitude h;
    Magnitude p;
    std::uint64_t terms = 0;
};

inline ComponentEstimate component_estimate(const AssemblyComponent& c, std::uint64_t terms = 10'000) {
    auto table = dim_sequences(c.sequence_spec(), terms);
    auto [h, p] = table.window(terms / 10, terms);
    return {h, p, terms};
}

namespace detail {

/// Deepest truncation with at most `budget` points.
inline CantorSpec truncate_to_budget(const CantorSpec& spec, std::uint64_t budget) {
    CantorSpec s = spec.with_depth(1);
    if (!s.point_count() || *s.point_count() > budget) {
        throw SizeError("even depth 1 of " + spec.descriptor() + " exceeds the point budget");
    }
    while (s.depth < 64) {
        auto next = s.with_depth(s.depth + 1);
        auto c = next.point_count();
        if (!c || *c > budget) break;
        s = next;
    }
    return s;
}

inline AnySpace component_space(const AssemblyComponent& c, std::uint64_t budget) {
    Rational gamma = 1 / c.exponent;
    if (c.block.family) {
        ExactSpace s = enumerate_blocks(*c.block.family, 2, 1);
        if (gamma == 1) return s;
        bool rational = true;
        for (const auto& v : s.data()) {
            if (!exact_pow(v, gamma)) {
                rational = false;
                break;
            }
        }
        if (rational) return snowflake(s, gamma);
        return snowflake(to_float(s), to_double(gamma));
    }
    CantorSpec spec = truncate_to_budget(*c.block.spec, budget).snowflaked(gamma);
    return enumerate(spec);
}

}  // namespace detail

/**
 * Finite truncation of the assembly: every component enumerated within
 * `budget` points (blocks 1..2 with depth-1 pieces for block families), glued
 * at their first points with constant r = largest component diameter.
 */
inline AnySpace enumerate_assembly(const CantorAssembly& a, std::uint64_t budget = 256) {
    std::vector<AnySpace> parts;
    bool exact = true;
    for (const auto& c : a.components) {
        parts.push_back(detail::component_space(c, budget));
        exact = exact && std::holds_alternative<ExactSpace>(parts.back());
    }
    auto glue_with = [&](auto tag) -> AnySpace {
        using T = decltype(tag);
        BasepointedFamily<T> fam;
        T r = 0;
        for (const auto& p : parts) {
            if constexpr (ScalarTraits<T>::exact) fam.spaces.push_back(std::get<ExactSpace>(p));
            else fam.spaces.push_back(to_float(p));
            fam.basepoints.push_back(0);
            r = std::max(r, fam.spaces.back().diameter());
        }
        if (fam.spaces.size() == 1) return fam.spaces.front();
        fam.glue = equilateral<T>(fam.spaces.size(), r, "c");
        return p_amalgam(fam, GlueExponent::maximum());
    };
    if (exact) return glue_with(Rational(0));
    return glue_with(0.0);
}

// ---------------------------------------------------------------------------
// Topological-dimension label

struct TdimAssembly {
    CantorAssembly cantor;
    Dim tdim;
    /// Grid points per axis minus one; 0 when no cube is attached.
    std::uint64_t grid = 0;
    /// Present for finite l; for l = 0 equals the Cantor truncation.
    std::optional<FloatSpace> space;
    std::string note;
};

/// Euclidean grid {0, 1/g, ..., 1}^l.
inline FloatSpace cube_grid(std::uint64_t l, std::uint64_t g) {
    if (g == 0) throw DomainError("grid resolution must be positive");
    double count = std::pow(static_cast<double>(g + 1), static_cast<double>(l));
    if (count > static_cast<double>(kMaxPoints<double>)) {
        throw SizeError("cube grid with " + std::to_string(static_cast<std::uint64_t>(count)) + " points exceeds the cap");
    }
    const auto n = static_cast<std::size_t>(count);
    auto coords = [&](std::size_t idx) {
        std::vector<std::uint64_t> c(l);
        for (std::size_t k = 0; k < l; ++k) {
            c[k] = idx % (g + 1);
            idx /= g + 1;
        }
        return c;
    };
    return make_space<double>(
        n,
        [&](std::size_t i, std::size_t j) {
            auto a = coords(i), b = coords(j);
            double s = 0;
            for (std::size_t k = 0; k < l; ++k) {
                double d = (static_cast<double>(a[k]) - static_cast<double>(b[k])) / static_cast<double>(g);
                s += d * d;
            }
            return std::sqrt(s);
        },
        [&](std::size_t i) {
            auto c = coords(i);
            std::string s = "q";
            for (std::size_t k = 0; k < l; ++k) s += (k ? "," : "") + std::to_string(c[k]);
            return s;
        },
        Kind::metric);
}

/**
 * p = 1 amalgam of the Cantor assembly with a grid sample of [0,1]^l,
 * glue distance 1, basepoints at the first points. l = inf carries the label
 * only.
 */
inline TdimAssembly prescribed_with_tdim(const DimensionalType& target, std::uint64_t grid = 4,
                                         std::uint64_t budget = 256) {
    if (!target.tdim) throw DomainError("target carries no topological dimension label");
    target.check();
    TdimAssembly out;
    out.cantor = prescribed_factory(target);
    out.tdim = *target.tdim;
    if (out.tdim.infinite) {
        out.note = "l = inf: label only, no cube component";
        return out;
    }
    auto l = out.tdim.value.convert_to<std::uint64_t>();
    FloatSpace cantor = to_float(enumerate_assembly(out.cantor, budget));
    if (l == 0) {
        out.space = cantor;
        out.note = "l = 0: no cube attached";
        return out;
    }
    out.grid = grid;
    BasepointedFamily<double> fam;
    fam.spaces = {cantor, cube_grid(l, grid)};
    fam.basepoints = {0, 0};
    fam.glue = equilateral<double>(2, 1.0, "c");
    out.space = p_amalgam(fam, GlueExponent::additive());
    out.note = "cube [0,1]^" + std::to_string(l) + " sampled at step 1/" + std::to_string(grid);
    return out;
}

}  // namespace mgeom

#endif  // MGEOM_CANTOR_FACTORY_HPP
