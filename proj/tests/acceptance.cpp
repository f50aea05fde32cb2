// Acceptance run: one PASS/FAIL line per criterion, each with its time limit.
// Exit status is 0 only when every criterion passes.

#include <mgeom/mgeom.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace mgeom;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double limit_seconds;
    std::function<Outcome()> run;
};

template <class... Args>
std::string fmt(const char* f, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

/// Radii in [alpha(depth), 2 alpha(0)]: every scale, every midpoint, and random fill up to `count`.
std::vector<Rational> sample_radii(random::Rng& rng, const CantorSpec& spec, std::size_t count) {
    std::vector<Rational> r;
    for (std::uint64_t k = 0; k <= spec.depth; ++k) {
        r.push_back(*spec.alpha.exact_value(k));
        if (k > 0) r.push_back((*spec.alpha.exact_value(k) + *spec.alpha.exact_value(k - 1)) / 2);
    }
    Rational lo = *spec.alpha.exact_value(spec.depth), hi = 2 * *spec.alpha.exact_value(0);
    r.push_back(hi);
    while (r.size() < count) r.push_back(lo + (hi - lo) * Rational(BigInt(random::uniform(rng, 0, 1000)), BigInt(1000)));
    return r;
}

Outcome formula_vs_oracle() {
    random::Rng rng(101);
    std::size_t specs = 0, checks = 0;
    for (; specs < 60; ++specs) {
        CantorSpec spec = random::random_cantor_spec(rng, 8, 256, true);
        ExactSpace s = enumerate_exact(spec);
        auto radii = sample_radii(rng, spec, 24);
        for (const auto& r : radii) {
            ++checks;
            BigInt formula = *covering_formula(spec, r).count;
            std::size_t oracle = covering_oracle(s, r).value();
            if (formula != oracle) {
                return {false, spec.descriptor() + ": covering at r = " + to_string(r) + " gives " + formula.str() +
                                   ", oracle " + std::to_string(oracle)};
            }
        }
        for (std::size_t i = 0; i < radii.size(); ++i) {
            const Rational& R = radii[i];
            const Rational& r = radii[(i + 1 + random::uniform(rng, 0, radii.size() - 2)) % radii.size()];
            if (!(r < R)) continue;
            ++checks;
            BigInt formula = *ball_covering_formula(spec, R, r).count;
            std::size_t oracle = covering_oracle(restrict(s, ball_indices(s, 0, R)), r).value();
            if (formula != oracle) {
                return {false, spec.descriptor() + ": ball R = " + to_string(R) + ", r = " + to_string(r) + " gives " +
                                   formula.str() + ", oracle " + std::to_string(oracle)};
            }
        }
    }
    return {true, fmt("%zu specs, %zu exact comparisons", specs, checks)};
}

Outcome interleaved_ball_counts() {
    auto spec = CantorSpec(BranchingSequence::constant(2), sequences::cubic_with_dyadic_inserts());
    std::ostringstream bad;
    int mismatches = 0;
    for (std::int64_t n = 1; n <= 40; ++n) {
        Magnitude R(BigInt(n * n * n)), r(BigInt(n + n * n * n));
        Magnitude got = ball_covering_formula(spec, R, r).log2;
        if (!(got == Magnitude(BigInt(n + 1)))) {
            if (mismatches++ < 3) bad << (mismatches > 1 ? ", " : "") << "n=" << n << " log2 " << got.str();
        }
    }
    if (mismatches) return {false, fmt("%d of 40 differ from n+1 (", mismatches) + bad.str() + ", ...)"};
    return {true, "log2 = n+1 for n = 1..40"};
}

Outcome factory_convergence() {
    random::Rng rng(303);
    std::vector<DimensionalType> targets = {DimensionalType::parse("0.5,0.7,1.3,2.0")};
    for (int i = 0; i < 10; ++i) targets.push_back(random::random_target(rng, true));
    double worst = 0;
    std::size_t components = 0;
    for (const auto& t : targets) {
        auto a = prescribed_factory(t);
        if (!(a.max_of_components() == t)) return {false, "max of analytic types differs for " + t.str()};
        for (const auto& c : a.components) {
            auto est = component_estimate(c, 10'000);
            double h_err = std::abs(est.h.to_double() - to_double(c.scaled.a[0].value));
            double p_err = std::abs(est.p.to_double() - to_double(c.scaled.a[1].value));
            worst = std::max({worst, h_err, p_err});
            ++components;
            if (h_err > 0.05 || p_err > 0.05) {
                return {false, t.str() + " component " + c.block.tag + fmt(": h err %.4f, p err %.4f", h_err, p_err)};
            }
        }
    }
    return {true, fmt("%zu targets, %zu components, worst window error %.4f", targets.size(), components, worst)};
}

Outcome gap_target_blocks() {
    auto a = prescribed_factory(DimensionalType::parse("0,0,1,1"));
    if (a.components.size() != 1 || a.components[0].block.tag != "0011") return {false, "unexpected assembly"};
    const auto& analytic = a.components[0].block.analytic;
    if (!(analytic.a[0] == Dim(0) && analytic.a[1] == Dim(0))) return {false, "hdim/pdim labels are not 0"};
    auto c = block_certificate(block_family("0011"), 100, 10000);
    double ub = c.ubdim_ratio.to_double(), h = c.piece_h.to_double(), p = c.piece_p.to_double();
    bool ok = ub >= 0.95 && c.adim_bound <= Magnitude(1) && h <= 0.05 && p <= 0.05;
    return {ok, "k/(c+k) = " + c.ubdim_ratio.str() + ", adim bound " + c.adim_bound.str() + fmt(", piece h %.6f p %.6f", h, p)};
}

Outcome snowflake_identity() {
    random::Rng rng(505);
    std::size_t rows = 0;
    for (int i = 0; i < 20; ++i) {
        CantorSpec spec = random::random_cantor_spec(rng, 8, 512, true);
        auto base = dim_sequences(spec, 200);
        for (Rational eta : {Rational(1, 2), Rational(2), Rational(3)}) {
            auto scaled = dim_sequences(spec.snowflaked(1 / eta), 200);
            if (scaled.rows.size() != base.rows.size()) return {false, spec.descriptor() + ": row count changed"};
            for (std::size_t k = 0; k < base.rows.size(); ++k, ++rows) {
                const auto &b = base.rows[k], &s = scaled.rows[k];
                if (!s.h.is_exact() || !(s.h == b.h * Magnitude(eta)) || !(s.p == b.p * Magnitude(eta))) {
                    return {false, spec.descriptor() + fmt(": n = %llu", static_cast<unsigned long long>(b.n))};
                }
            }
        }
    }
    return {true, fmt("%zu rows scale exactly", rows)};
}

Outcome non_doubling() {
    auto block = building_block("000i");
    auto t = theta_eta(*block.spec, Rational(1, 2), sequences::triangular_start(61));
    bool flag = non_doubling_flag(t);
    int mismatches = 0;
    std::ostringstream bad;
    for (std::uint64_t n = 1; n <= 60; ++n) {
        const auto& got = t.scales[sequences::triangular_start(n)].log2_count;
        if (!(got == Magnitude(BigInt(n + 1)))) {
            if (mismatches++ < 3) bad << (mismatches > 1 ? ", " : "") << "n=" << n << " log2 " << got.str();
        }
    }
    std::string flag_text = std::string("flag ") + (flag ? "set" : "not set");
    if (mismatches) return {false, flag_text + fmt("; %d of 60 window values differ from 2^(n+1) (", mismatches) + bad.str() + ", ...)"};
    return {flag, flag_text + "; window values 2^(n+1) for n = 1..60"};
}

ExactSpace small_space(random::Rng& rng, std::string_view prefix) {
    std::size_t n = random::uniform(rng, 1, 4);
    return random::uniform(rng, 0, 1) ? random::random_metric(rng, n, prefix) : random::random_ultrametric(rng, n, prefix);
}

Outcome gh_sanity() {
    ExactSpace two({"a", "b"}, {Rational(0), Rational(1), Rational(1), Rational(0)}, Kind::ultrametric);
    ExactSpace one({"p"}, {Rational(0)}, Kind::ultrametric);
    auto r = gh_exact(two, one);
    if (!r.exact || r.value() != Rational(1, 2)) return {false, "two points vs one point is not 1/2"};

    random::Rng rng(707);
    for (int i = 0; i < 50; ++i) {
        ExactSpace a = small_space(rng, "a");
        ExactSpace b = random::permuted(a, random::permutation(rng, a.size()));
        auto self = gh_exact(a, b);
        if (!self.exact || self.value() != 0 || !self.witness || distortion(a, b, *self.witness) != 0) {
            return {false, "self distance is not witnessed as 0"};
        }
    }
    for (int i = 0; i < 200; ++i) {
        ExactSpace a = small_space(rng, "a"), b = small_space(rng, "b"), c = small_space(rng, "c");
        Rational ab = gh_exact(a, b).value(), bc = gh_exact(b, c).value(), ac = gh_exact(a, c).value();
        if (ac > ab + bc || ab > ac + bc || bc > ab + ac) return {false, fmt("triangle inequality fails on triple %d", i)};
    }
    for (int i = 0; i < 200; ++i) {
        ExactSpace a = random::random_metric(rng, random::uniform(rng, 2, 6), "a");
        ExactSpace b = small_space(rng, "b");
        while (b.size() > a.size()) b = small_space(rng, "b");
        std::vector<std::size_t> f(a.size());
        auto perm = random::permutation(rng, a.size());
        for (std::size_t x = 0; x < a.size(); ++x) f[perm[x]] = x < b.size() ? x : random::uniform(rng, 0, b.size() - 1);
        if (gh_exact(a, b).value() > gh_upper_via_surjection(a, b, f).upper) return {false, fmt("surjection %d undercuts", i)};
    }
    return {true, "1/2 exact; 50 self-distances, 200 triples, 200 surjections"};
}

Outcome qiu_ratio() {
    ExactSpace x = enumerate_exact(CantorSpec(BranchingSequence::constant(2), sequences::geometric(1), 4));
    if (x.size() != 16 || x.diameter() != Rational(1, 2)) return {false, "unexpected truncation"};
    auto rows = qiu_demo(x, {Rational(1), Rational(1, 10), Rational(1, 100)});
    bool ok = rows[2].ugh == Rational(505, 1000) && rows[2].certified_ratio >= 101 && rows[0].certified_ratio >= 2 &&
              rows[1].certified_ratio >= 11;
    return {ok, "u_GH(0.01) = " + to_string(rows[2].ugh) + ", ratios " + to_string(rows[0].certified_ratio) + ", " +
                    to_string(rows[1].certified_ratio) + ", " + to_string(rows[2].certified_ratio)};
}

Outcome ugh_axiom() {
    random::Rng rng(909);
    int done = 0;
    while (done < 100) {
        ExactSpace s[3] = {random::random_ultrametric(rng, random::uniform(rng, 1, 6), "a"),
                           random::random_ultrametric(rng, random::uniform(rng, 1, 6), "b"),
                           random::random_ultrametric(rng, random::uniform(rng, 1, 6), "c")};
        if (s[0].diameter() == s[1].diameter() || s[1].diameter() == s[2].diameter() ||
            s[0].diameter() == s[2].diameter()) {
            continue;
        }
        auto audit = ugh_ultrametric_axiom_audit(s[0], s[1], s[2]);
        if (!audit.performed || !audit.passed) return {false, fmt("triple %d: ", done) + audit.reason};
        ++done;
    }
    return {true, "100 triples with distinct diameters"};
}

Outcome telescope_fingerprint() {
    random::Rng rng(1111);
    double worst = 0;
    for (int i = 0; i < 100; ++i) {
        TelescopeSpec t;
        t.levels = 12;
        for (int j = 0; j <= 12; ++j) t.q.push_back(random::unit(rng));
        t.flavor = i % 2 ? Flavor::ultrametric_v : Flavor::metric_u;
        t.scale = 0.1 + 10.0 * random::unit(rng);
        FloatSpace s = telescope(t);
        auto fp = fingerprint(random::permuted(s, random::permutation(rng, s.size())));
        if (!fp.ok) return {false, fmt("case %d: ", i) + fp.failure};
        if (fp.flavor != t.flavor || fp.q.size() != t.q.size()) return {false, fmt("case %d: wrong shape", i)};
        worst = std::max(worst, std::abs(fp.scale - t.scale));
        for (std::size_t j = 0; j < t.q.size(); ++j) worst = std::max(worst, std::abs(fp.q[j] - t.q[j]));
    }
    return {worst <= 1e-9, fmt("max componentwise error %.3g", worst)};
}

ExactSpace triangle(Rational a, Rational b, Rational c, std::string_view prefix) {
    return ExactSpace(index_labels(3, prefix), {Rational(0), a, b, a, Rational(0), c, b, c, Rational(0)}, Kind::metric);
}

Outcome vertex_quotients() {
    PathSpec p;
    p.n = 2;
    p.m = 4;
    p.spaces = {triangle(1, 1, 1, "a"), triangle(1, 2, 1, "b"), triangle(1, 2, 2, "c")};
    std::size_t checked = 0;
    for (std::size_t i = 1; i <= 3; ++i) {
        for (std::size_t k = 1; k <= p.m; ++k) {
            auto d = simplex_metric(p, SimplexPoint::vertex(2, i), k);
            FloatSpace x = to_float(p.spaces[i - 1]);
            auto w = isometry_check(d.quotient.space, x);
            if (!w) return {false, fmt("vertex %zu branch %zu: no isometry", i, k)};
            for (std::size_t a = 0; a < x.size(); ++a)
                for (std::size_t b = 0; b < x.size(); ++b)
                    if (std::abs(d.quotient.space(a, b) - x((*w)[a], (*w)[b])) > 1e-12) {
                        return {false, fmt("vertex %zu branch %zu: witness distorts", i, k)};
                    }
            ++checked;
        }
    }
    return {true, fmt("%zu vertex/branch pairs with explicit witnesses", checked)};
}

Outcome path_continuity() {
    PathSpec p;
    p.n = 1;
    p.m = 3;
    p.spaces = {ExactSpace(index_labels(2, "a"), {Rational(0), Rational(1), Rational(1), Rational(0)}, Kind::metric),
                triangle(1, 2, 1, "b")};
    auto v1 = SimplexPoint::vertex(1, 1), v2 = SimplexPoint::vertex(1, 2);
    auto coarse = path_continuity_audit(p, v1, v2, 100);
    auto fine = path_continuity_audit(p, v1, v2, 200);
    double ratio = coarse.max_sup / fine.max_sup;
    bool ends = fine.start_matches && fine.end_matches && coarse.start_matches && coarse.end_matches;
    return {ratio >= 1.5 && ratio <= 2.5 && ends,
            fmt("max sup %.6g at grid 100, %.6g at 200, ratio %.4f; endpoints ", coarse.max_sup, fine.max_sup, ratio) +
                (ends ? "match" : "do not match")};
}

/// One random composition and whether it satisfies its declared kind.
std::pair<std::string, FloatSpace> random_composition(random::Rng& rng) {
    bool ultra = random::uniform(rng, 0, 1);
    auto leaf = [&](std::string_view prefix) {
        std::size_t n = random::uniform(rng, 1, 5);
        return to_float(ultra ? random::random_ultrametric(rng, n, prefix) : random::random_metric(rng, n, prefix));
    };
    switch (random::uniform(rng, 0, 5)) {
        case 0: {
            BasepointedFamily<double> fam;
            std::size_t k = random::uniform(rng, 1, 3);
            for (std::size_t i = 0; i < k; ++i) {
                fam.spaces.push_back(leaf("x"));
                fam.basepoints.push_back(random::uniform(rng, 0, fam.spaces.back().size() - 1));
            }
            fam.glue = to_float(ultra ? random::random_ultrametric(rng, k, "c") : random::random_metric(rng, k, "c"));
            return {"p_amalgam", p_amalgam(fam, ultra ? GlueExponent::maximum() : GlueExponent::additive())};
        }
        case 1: {
            const double p = 1.0 + 4.0 * random::unit(rng);
            BasepointedFamily<double> fam;
            std::size_t k = random::uniform(rng, 1, 3);
            for (std::size_t i = 0; i < k; ++i) {
                fam.spaces.push_back(snowflake(leaf("x"), 1.0 / p));
                fam.basepoints.push_back(0);
            }
            fam.glue = snowflake(to_float(random::random_metric(rng, k, "c")), 1.0 / p);
            return {"p_amalgam (p in (1,5))", p_amalgam(fam, GlueExponent{p})};
        }
        case 2: return {"linf_product", linf_product(leaf("a"), leaf("b"))};
        case 3: {
            double gamma = ultra ? 0.25 + 3.0 * random::unit(rng) : 0.05 + 0.95 * random::unit(rng);
            return {"snowflake of linf_product", snowflake(linf_product(leaf("a"), leaf("b")), gamma)};
        }
        case 4: {
            TelescopeSpec t;
            t.levels = random::uniform(rng, 1, 8);
            for (std::size_t j = 0; j <= t.levels; ++j) t.q.push_back(random::unit(rng));
            t.flavor = ultra ? Flavor::ultrametric_v : Flavor::metric_u;
            t.scale = 0.1 + 5.0 * random::unit(rng);
            FloatSpace tel = telescope(t);
            if (random::uniform(rng, 0, 1)) return {"telescope", tel};
            return {"telescope x leaf", linf_product(tel, leaf("a"))};
        }
        default: {
            PathSpec p;
            p.n = random::uniform(rng, 1, 2);
            p.m = random::uniform(rng, 2, 3);
            p.flavor = ultra ? Flavor::ultrametric_v : Flavor::metric_u;
            for (std::size_t i = 0; i <= p.n; ++i) {
                std::size_t n = random::uniform(rng, 1, 3);
                p.spaces.push_back(ultra ? random::random_ultrametric(rng, n, "x") : random::random_metric(rng, n, "x"));
            }
            std::vector<Rational> c(p.n + 1);
            BigInt total = 0;
            std::vector<BigInt> w;
            for (std::size_t i = 0; i <= p.n; ++i) {
                w.push_back(BigInt(random::uniform(rng, 0, 6)));
                total += w.back();
            }
            if (total == 0) {
                w[0] = 1;
                total = 1;
            }
            for (std::size_t i = 0; i <= p.n; ++i) c[i] = Rational(w[i], total);
            auto d = simplex_metric(p, SimplexPoint(c), random::uniform(rng, 1, p.m));
            return {"simplex_metric", d.space};
        }
    }
}

Outcome axiom_fuzzing() {
    random::Rng rng(1313);
    for (int i = 0; i < 1000; ++i) {
        auto [what, s] = random_composition(rng);
        auto rep = validate(s);
        if (!rep.satisfies(s.kind())) {
            std::string why = rep.worst_violating_triple ? describe(s, *rep.worst_violating_triple) : "zero distance";
            return {false, fmt("case %d (", i) + what + ", declared " + std::string(to_string(s.kind())) + "): " + why};
        }
    }
    return {true, "1000 compositions, zero violations"};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "covering formulas equal the oracle", 10, formula_vs_oracle},
        {2, "interleaved-cubic ball counts are 2^(n+1)", 1, interleaved_ball_counts},
        {3, "factory convergence", 60, factory_convergence},
        {4, "gap targets via block families", 60, gap_target_blocks},
        {5, "snowflake identity", 5, snowflake_identity},
        {6, "non-doubling detection", 1, non_doubling},
        {7, "GH sanity", 120, gh_sanity},
        {8, "GH versus u_GH ratio", 1, qiu_ratio},
        {9, "u_GH strong triangle inequality", 5, ugh_axiom},
        {10, "telescope fingerprint", 5, telescope_fingerprint},
        {11, "vertex quotients", 10, vertex_quotients},
        {12, "path continuity", 30, path_continuity},
        {13, "metric-axiom fuzzing", 60, axiom_fuzzing},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool in_time = secs <= c.limit_seconds;
        bool pass = o.ok && in_time;
        failures += !pass;
        std::printf("%s %2d %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                    o.detail.c_str(), secs, c.limit_seconds, in_time ? "" : ", exceeded");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
