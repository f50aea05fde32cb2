#pragma once
#ifndef MGEOM_IO_JSON_HPP
#define MGEOM_IO_JSON_HPP

#include <mgeom/cantor/blocks.hpp>
#include <mgeom/cantor/factory.hpp>
#include <mgeom/gromov/gromov.hpp>
#include <mgeom/telescope/simplex_path.hpp>
#include <mgeom/telescope/telescope.hpp>

#include <json.hpp>

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace mgeom::io {

using nlohmann::json;

/// Shortest decimal that round-trips a binary64.
inline std::string format_double(double x) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

inline json scalar_to_json(const Rational& q) { return to_string(q); }
inline json scalar_to_json(double x) { return x; }

inline std::string scalar_text(const Rational& q) { return to_string(q); }
inline std::string scalar_text(double x) { return format_double(x); }

/// A Magnitude as "p/q" when rational, otherwise its double value.
inline json magnitude_to_json(const Magnitude& m) {
    if (m.is_rational()) return to_string(m.rational());
    return m.to_double();
}

inline std::string magnitude_text(const Magnitude& m) {
    if (m.is_rational()) return to_string(m.rational());
    return format_double(m.to_double());
}

// ---------------------------------------------------------------------------
// Spaces

template <Scalar T>
json space_to_json(const BasicSpace<T>& s) {
    json rows = json::array();
    for (std::size_t i = 0; i < s.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.size(); ++j) row.push_back(scalar_to_json(s(i, j)));
        rows.push_back(std::move(row));
    }
    return json{{"labels", s.labels()},
                {"matrix", std::move(rows)},
                {"kind", std::string(to_string(s.kind()))},
                {"exact", ScalarTraits<T>::exact}};
}

inline json space_to_json(const AnySpace& s) {
    return std::visit([](const auto& x) { return space_to_json(x); }, s);
}

/**
 * Reads {"labels", "matrix", "kind"}. Entries that are strings or integers
 * keep the space exact; any fractional number makes it binary64. Labels
 * default to 0..n-1 and kind to metric.
 */
inline AnySpace space_from_json(const json& j) {
    if (!j.is_object() || !j.contains("matrix")) throw MalformedInput("space JSON needs a \"matrix\" field");
    const json& m = j.at("matrix");
    if (!m.is_array() || m.empty()) throw MalformedInput("\"matrix\" must be a non-empty array of rows");
    const std::size_t n = m.size();
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        for (const auto& l : j.at("labels")) {
            if (!l.is_string()) throw MalformedInput("labels must be strings");
            labels.push_back(l.get<std::string>());
        }
        if (labels.size() != n) throw MalformedInput("label count does not match the matrix");
    } else {
        labels = index_labels(n);
    }
    Kind kind = j.contains("kind") ? parse_kind(j.at("kind").get<std::string>()) : Kind::metric;
    bool exact = true;
    for (const auto& row : m) {
        if (!row.is_array() || row.size() != n) throw MalformedInput("distance matrix is not square");
        for (const auto& v : row) {
            if (v.is_string() || v.is_number_integer()) continue;
            if (v.is_number_float()) exact = false;
            else throw MalformedInput("matrix entries must be numbers or \"p/q\" strings");
        }
    }
    if (exact) {
        std::vector<Rational> flat;
        flat.reserve(n * n);
        for (const auto& row : m)
            for (const auto& v : row)
                flat.push_back(v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long long>()));
        return ExactSpace(std::move(labels), std::move(flat), kind);
    }
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : m)
        for (const auto& v : row)
            flat.push_back(v.is_string() ? to_double(parse_rational(v.get<std::string>())) : v.get<double>());
    return FloatSpace(std::move(labels), std::move(flat), kind);
}

// ---------------------------------------------------------------------------
// Results

template <Scalar T>
json gh_to_json(const GhResult<T>& r, const BasicSpace<T>& a, const BasicSpace<T>& b) {
    json out;
    if (r.exact) out["value"] = scalar_to_json(r.lower);
    else {
        out["lower"] = scalar_to_json(r.lower);
        out["upper"] = scalar_to_json(r.upper);
    }
    out["exact"] = r.exact;
    out["method"] = r.method;
    if (r.witness) {
        json pairs = json::array();
        for (auto [x, y] : r.witness->pairs()) pairs.push_back({a.label(x), b.label(y)});
        out["witness"] = std::move(pairs);
    }
    return out;
}

inline json type_to_json(const DimensionalType& t) {
    json a = json::array();
    for (const auto& d : t.a) a.push_back(d.str());
    json out{{"hdim", a[0]}, {"pdim", a[1]}, {"ubdim", a[2]}, {"adim", a[3]}};
    if (t.tdim) out["tdim"] = t.tdim->str();
    return out;
}

inline json assembly_to_json(const CantorAssembly& a) {
    json comps = json::array();
    for (const auto& c : a.components) {
        comps.push_back({{"block", c.block.tag},
                         {"description", c.block.description},
                         {"exponent", to_string(c.exponent)},
                         {"scaled_type", type_to_json(c.scaled)},
                         {"provenance", c.provenance}});
    }
    return json{{"target", type_to_json(a.target)},
                {"components", std::move(comps)},
                {"glue", a.glue},
                {"max_of_components", type_to_json(a.max_of_components())}};
}

inline json fingerprint_to_json(const FingerprintResult& f) {
    if (!f.ok) return json{{"ok", false}, {"failure", f.failure}};
    return json{{"ok", true},
                {"flavor", std::string(to_string(f.flavor))},
                {"scale", f.scale},
                {"q", f.q},
                {"accumulation_point", f.accumulation_point}};
}

// ---------------------------------------------------------------------------
// Family configs

/// A Cantor spec named by a config, plus its analytic type when known.
struct FamilyConfig {
    std::string name;
    CantorSpec spec;
    std::optional<DimensionalType> analytic;
};

inline std::uint64_t get_u64(const json& j, const char* key, std::uint64_t fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw MalformedInput(std::string("\"") + key + "\" must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

inline Rational get_rational(const json& j, const char* key, const Rational& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long long>());
    if (v.is_number_float()) return from_double(v.get<double>());
    throw MalformedInput(std::string("\"") + key + "\" must be a number or \"p/q\" string");
}

/**
 * {"family": name, ...}. Names: geometric (ratio_log2, m), harmonic (m),
 * square_exponent (m), or "lemma" + a building block tag with optional
 * "variant": "mild" | "exact" (default mild where one exists). Optional
 * "depth" and "snowflake" (gamma) apply to every family.
 */
inline FamilyConfig family_from_json(const json& j) {
    if (!j.is_object() || !j.contains("family") || !j.at("family").is_string()) {
        throw MalformedInput("family config needs a string \"family\" field");
    }
    std::string name = j.at("family").get<std::string>();
    std::uint64_t depth = get_u64(j, "depth", 1);
    if (depth < 1) throw DomainError("depth must be >= 1");
    auto branching = [&] {
        std::uint64_t m = get_u64(j, "m", 2);
        return BranchingSequence::constant(BigInt(m));
    };
    std::optional<CantorSpec> spec;
    std::optional<DimensionalType> analytic;
    if (name == "geometric") {
        spec = CantorSpec(branching(), sequences::geometric(get_rational(j, "ratio_log2", 1)), depth);
    } else if (name == "harmonic") {
        spec = CantorSpec(branching(), sequences::harmonic(), depth);
    } else if (name == "square_exponent") {
        spec = CantorSpec(branching(), sequences::square_exponent(), depth);
    } else if (name.rfind("lemma", 0) == 0) {
        BuildingBlock b = building_block(name.substr(5));
        std::string variant = j.value("variant", std::string("mild"));
        if (variant != "mild" && variant != "exact") throw MalformedInput("variant must be mild or exact");
        if (variant == "exact" && b.spec) spec = *b.spec;
        else spec = b.sequence_spec();
        spec = spec->with_depth(depth);
        analytic = b.analytic;
    } else {
        throw MalformedInput("unknown family '" + name +
                             "'; expected geometric, harmonic, square_exponent or lemma<tag>");
    }
    if (j.contains("snowflake")) {
        Rational gamma = get_rational(j, "snowflake", 1);
        if (gamma <= 0) throw DomainError("snowflake exponent must be positive");
        spec = spec->snowflaked(gamma);
        if (analytic) analytic = analytic->scaled(1 / gamma);
    }
    return {name, *spec, analytic};
}

/// "lemma1111" or a JSON object text.
inline FamilyConfig family_from_text(const std::string& text) {
    if (!text.empty() && text.front() == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw MalformedInput(std::string("family JSON: ") + e.what());
        }
        return family_from_json(j);
    }
    return family_from_json(json{{"family", text}});
}

/**
 * {"n", "m", "spaces": [space...], "basepoints"?, "glue"?, "flavor"?,
 *  "p_depth"?, "levels"?}. Spaces must be exact.
 */
inline PathSpec path_from_json(const json& j) {
    PathSpec p;
    p.n = get_u64(j, "n", 1);
    p.m = get_u64(j, "m", 0);
    if (!j.contains("spaces") || !j.at("spaces").is_array()) throw MalformedInput("path config needs \"spaces\"");
    for (const auto& s : j.at("spaces")) {
        AnySpace a = space_from_json(s);
        if (!std::holds_alternative<ExactSpace>(a)) throw MalformedInput("path vertex spaces must have exact entries");
        p.spaces.push_back(std::get<ExactSpace>(std::move(a)));
    }
    if (p.m == 0) p.m = p.spaces.size();
    if (j.contains("basepoints")) p.basepoints = j.at("basepoints").get<std::vector<std::size_t>>();
    if (j.contains("glue")) {
        AnySpace g = space_from_json(j.at("glue"));
        if (!std::holds_alternative<ExactSpace>(g)) throw MalformedInput("glue space must have exact entries");
        p.glue = std::get<ExactSpace>(std::move(g));
    }
    if (j.contains("flavor")) p.flavor = parse_flavor(j.at("flavor").get<std::string>());
    p.p_depth = get_u64(j, "p_depth", p.p_depth);
    if (j.contains("levels")) p.levels = get_u64(j, "levels", 0);
    p.check();
    return p;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string dims_csv(const DimensionTable& t) {
    std::ostringstream os;
    os << "n,h_n,p_n\n";
    for (const auto& r : t.rows) os << r.n << ',' << magnitude_text(r.h) << ',' << magnitude_text(r.p) << '\n';
    return os.str();
}

inline std::string theta_csv(const std::vector<ThetaResult>& rows) {
    std::ostringstream os;
    os << "eps_log2,theta_log2,eta\n";
    for (const auto& r : rows) {
        os << magnitude_text(Magnitude(0) - r.neg_log2_eps) << ',' << magnitude_text(r.log2_theta) << ','
           << magnitude_text(r.eta) << '\n';
    }
    return os.str();
}

inline std::string audit_csv(const ContinuityAudit& a) {
    std::ostringstream os;
    os << "t,sup_distance,gh_bound\n";
    for (const auto& r : a.rows) os << to_string(r.t) << ',' << scalar_text(r.sup_distance) << ',' << scalar_text(r.gh_bound) << '\n';
    return os.str();
}

inline std::string qiu_csv(const std::vector<QiuRow>& rows) {
    std::ostringstream os;
    os << "eps,delta,gh_upper,gh_exact,ugh,certified_ratio\n";
    for (const auto& r : rows) {
        os << to_string(r.eps) << ',' << to_string(r.delta) << ',' << to_string(r.gh_upper) << ','
           << (r.gh_exact ? to_string(*r.gh_exact) : std::string()) << ',' << to_string(r.ugh) << ','
           << to_string(r.certified_ratio) << '\n';
    }
    return os.str();
}

template <Scalar T>
std::string matrix_csv(const BasicSpace<T>& s) {
    std::ostringstream os;
    os << "label";
    for (const auto& l : s.labels()) os << ',' << l;
    os << '\n';
    for (std::size_t i = 0; i < s.size(); ++i) {
        os << s.label(i);
        for (std::size_t j = 0; j < s.size(); ++j) os << ',' << scalar_text(s(i, j));
        os << '\n';
    }
    return os.str();
}

}  // namespace mgeom::io

#endif  // MGEOM_IO_JSON_HPP
