#pragma once
#ifndef MGEOM_VERIFY_HPP
#define MGEOM_VERIFY_HPP

#include <mgeom/cantor/factory.hpp>
#include <mgeom/gromov/gromov.hpp>
#include <mgeom/metric/covering.hpp>
#include <mgeom/metric/isometry.hpp>
#include <mgeom/metric/validate.hpp>
#include <mgeom/random.hpp>
#include <mgeom/telescope/simplex_path.hpp>
#include <mgeom/telescope/telescope.hpp>

#include <chrono>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mgeom::verify {

inline constexpr std::uint64_t kDefaultSeed = 20240611;
inline constexpr std::size_t kDefaultCases = 1000;

struct Options {
    std::uint64_t seed = kDefaultSeed;
    std::size_t cases = kDefaultCases;
    /// Adds a perturbed ultrametric to the metric-core suite.
    bool inject_fault = false;
};

struct CaseResult {
    std::string suite;
    std::string name;
    std::size_t cases = 0;
    bool passed = true;
    std::string message;
    double seconds = 0;
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"metric-core", "cantor-dims", "gromov", "telescope"};
    return names;
}

/// Failure message, or nullopt when the case holds.
using Check = std::function<std::optional<std::string>(random::Rng&, std::size_t)>;

namespace detail {

inline std::uint64_t suite_seed(std::uint64_t seed, std::string_view suite) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : suite) h = (h ^ c) * 1099511628211ull;
    return seed ^ h;
}

class Runner {
public:
    Runner(std::string suite, const Options& opt)
        : suite_(std::move(suite)), opt_(opt), rng_(suite_seed(opt.seed, suite_)) {}

    void property(std::string name, std::size_t cases, const Check& check) {
        CaseResult r{suite_, std::move(name), cases, true, {}, 0};
        auto t0 = std::chrono::steady_clock::now();
        for (std::size_t i = 0; i < cases && r.passed; ++i) {
            try {
                if (auto why = check(rng_, i)) {
                    r.passed = false;
                    r.message = "case " + std::to_string(i) + ": " + *why;
                }
            } catch (const std::exception& e) {
                r.passed = false;
                r.message = "case " + std::to_string(i) + ": " + e.what();
            }
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        results_.push_back(std::move(r));
    }

    std::size_t cases() const { return opt_.cases; }
    const Options& options() const { return opt_; }
    std::vector<CaseResult> take() { return std::move(results_); }

private:
    std::string suite_;
    Options opt_;
    random::Rng rng_;
    std::vector<CaseResult> results_;
};

template <Scalar T>
std::optional<std::string> expect_kind(const BasicSpace<T>& s, std::string_view what) {
    try {
        require_valid(s, what);
    } catch (const KindMismatch& e) {
        return std::string(e.what());
    }
    return std::nullopt;
}

inline std::optional<std::string> fail_if(bool bad, std::string why) {
    if (bad) return why;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

inline void metric_core(Runner& run) {
    const std::size_t n = run.cases();
    run.property("random ultrametrics validate", n, [](random::Rng& g, std::size_t) {
        return expect_kind(random::random_ultrametric(g, random::uniform(g, 1, 9)), "ultrametric");
    });
    run.property("additive amalgam of metrics is a metric", n, [](random::Rng& g, std::size_t) {
        BasepointedFamily<Rational> fam;
        std::size_t k = random::uniform(g, 1, 3);
        for (std::size_t i = 0; i < k; ++i) {
            fam.spaces.push_back(random::random_metric(g, random::uniform(g, 1, 5)));
            fam.basepoints.push_back(random::uniform(g, 0, fam.spaces.back().size() - 1));
        }
        fam.glue = random::random_metric(g, k, "c");
        return expect_kind(p_amalgam(fam, GlueExponent::additive()), "amalgam");
    });
    run.property("max amalgam of ultrametrics is an ultrametric", n, [](random::Rng& g, std::size_t) {
        BasepointedFamily<Rational> fam;
        std::size_t k = random::uniform(g, 1, 3);
        for (std::size_t i = 0; i < k; ++i) {
            fam.spaces.push_back(random::random_ultrametric(g, random::uniform(g, 1, 5)));
            fam.basepoints.push_back(random::uniform(g, 0, fam.spaces.back().size() - 1));
        }
        fam.glue = random::random_ultrametric(g, k, "c");
        return expect_kind(p_amalgam(fam, GlueExponent::maximum()), "amalgam");
    });
    run.property("p-amalgam of metrics is a metric for p in (1, inf)", n, [](random::Rng& g, std::size_t) {
        // d^(1/p) is a p-metric whenever d is a metric.
        const double p = 1.0 + 4.0 * random::unit(g);
        BasepointedFamily<double> fam;
        std::size_t k = random::uniform(g, 1, 3);
        for (std::size_t i = 0; i < k; ++i) {
            fam.spaces.push_back(snowflake(to_float(random::random_metric(g, random::uniform(g, 1, 5))), 1.0 / p));
            fam.basepoints.push_back(0);
        }
        fam.glue = snowflake(to_float(random::random_metric(g, k, "c")), 1.0 / p);
        return expect_kind(p_amalgam(fam, GlueExponent{p}), "amalgam");
    });
    run.property("sup product keeps the kind", n, [](random::Rng& g, std::size_t) {
        bool ultra = random::uniform(g, 0, 1);
        auto make = [&](std::string_view p) {
            std::size_t k = random::uniform(g, 1, 4);
            return ultra ? random::random_ultrametric(g, k, p) : random::random_metric(g, k, p);
        };
        return expect_kind(linf_product(make("a"), make("b")), "product");
    });
    run.property("snowflakes of ultrametrics are ultrametrics", n, [](random::Rng& g, std::size_t) {
        auto s = to_float(random::random_ultrametric(g, random::uniform(g, 2, 7)));
        return expect_kind(snowflake(s, 0.25 + 3.0 * random::unit(g)), "snowflake");
    });
    run.property("snowflakes of metrics with exponent <= 1 are metrics", n, [](random::Rng& g, std::size_t) {
        auto s = to_float(random::random_metric(g, random::uniform(g, 2, 7)));
        return expect_kind(snowflake(s, 0.05 + 0.95 * random::unit(g)), "snowflake");
    });
    run.property("quotient merges exactly the zero-distance pairs", n, [](random::Rng& g, std::size_t) {
        auto base = random::random_metric(g, random::uniform(g, 1, 5));
        // Duplicate one point to get a pseudo-metric.
        std::size_t dup = random::uniform(g, 0, base.size() - 1);
        std::vector<std::size_t> idx(base.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        idx.push_back(dup);
        const std::size_t m = idx.size();
        auto pseudo = make_space<Rational>(
            m, [&](std::size_t i, std::size_t j) { return base(idx[i], idx[j]); },
            [&](std::size_t i) { return "p" + std::to_string(i); }, Kind::pseudo_metric);
        auto q = quotient(pseudo);
        if (q.space.size() != base.size()) return std::optional<std::string>("quotient has the wrong size");
        if (!isometry_check(q.space, base)) return std::optional<std::string>("quotient is not isometric to the base");
        return expect_kind(q.space.with_kind(Kind::metric), "quotient");
    });
    if (run.options().inject_fault) {
        run.property("injected perturbation is caught", 1, [](random::Rng& g, std::size_t) {
            auto s = random::random_ultrametric(g, 6);
            std::vector<Rational> flat = s.data();
            // Raise one distance above the diameter: some triple now breaks the strong triangle inequality.
            Rational bump = s.diameter() + 1;
            flat[0 * 6 + 1] = flat[1 * 6 + 0] = bump;
            return expect_kind(ExactSpace(s.labels(), std::move(flat), Kind::ultrametric), "perturbed space");
        });
    }
}

inline void cantor_dims(Runner& run) {
    const std::size_t n = run.cases();
    run.property("covering formula equals the oracle on truncations", n, [](random::Rng& g, std::size_t) {
        CantorSpec spec = random::random_cantor_spec(g, 6, 64, true);
        ExactSpace s = enumerate_exact(spec);
        // Radii at or above alpha(depth) see the truncation like the full space.
        std::uint64_t k = random::uniform(g, 0, spec.depth);
        Rational r = *spec.alpha.exact_value(k);
        if (random::uniform(g, 0, 1) && k > 0) r = (r + *spec.alpha.exact_value(k - 1)) / 2;
        auto f = covering_formula(spec, r);
        auto o = covering_oracle(s, r).value();
        return fail_if(*f.count != o, "r = " + to_string(r) + ": formula " + f.count->str() + ", oracle " +
                                          std::to_string(o));
    });
    run.property("h_n <= p_n", n, [](random::Rng& g, std::size_t) {
        CantorSpec spec = random::random_cantor_spec(g);
        for (const auto& row : dim_sequences(spec, 40).rows)
            if (row.p < row.h) return std::optional<std::string>("n = " + std::to_string(row.n));
        return std::optional<std::string>();
    });
    run.property("snowflake scales h_n and p_n exactly", n, [](random::Rng& g, std::size_t) {
        CantorSpec spec = random::random_cantor_spec(g, 8, 512, true);
        Rational gamma(BigInt(random::uniform(g, 1, 6)), BigInt(random::uniform(g, 1, 6)));
        auto a = dim_sequences(spec, 30), b = dim_sequences(spec.snowflaked(gamma), 30);
        if (a.rows.size() != b.rows.size()) return std::optional<std::string>("row counts differ");
        Magnitude eta(1 / gamma);
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            if (b.rows[i].h != a.rows[i].h * eta || b.rows[i].p != a.rows[i].p * eta) {
                return std::optional<std::string>("n = " + std::to_string(a.rows[i].n));
            }
        }
        return std::optional<std::string>();
    });
    run.property("factory type equals the target", n, [](random::Rng& g, std::size_t) {
        DimensionalType t = random::random_target(g, random::uniform(g, 0, 1));
        auto a = prescribed_factory(t);
        return fail_if(!(a.max_of_components() == t), t.str());
    });
}

inline void gromov(Runner& run) {
    const std::size_t n = run.cases();
    auto small = [](random::Rng& g, std::string_view p) {
        std::size_t k = random::uniform(g, 1, 4);
        return random::uniform(g, 0, 1) ? random::random_metric(g, k, p) : random::random_ultrametric(g, k, p);
    };
    run.property("gh is symmetric", n, [=](random::Rng& g, std::size_t) {
        auto a = small(g, "a"), b = small(g, "b");
        return fail_if(gh_exact(a, b).value() != gh_exact(b, a).value(), "asymmetric");
    });
    run.property("gh of a space with itself is zero", n, [=](random::Rng& g, std::size_t) {
        auto a = small(g, "a");
        auto b = random::permuted(a, random::permutation(g, a.size()));
        return fail_if(gh_exact(a, b).value() != 0, "non-zero");
    });
    run.property("gh triangle inequality", n, [=](random::Rng& g, std::size_t) {
        auto a = small(g, "a"), b = small(g, "b"), c = small(g, "c");
        Rational ab = gh_exact(a, b).value(), bc = gh_exact(b, c).value(), ac = gh_exact(a, c).value();
        return fail_if(ac > ab + bc, to_string(ac) + " > " + to_string(ab) + " + " + to_string(bc));
    });
    run.property("gh is at most every surjection bound", n, [=](random::Rng& g, std::size_t) {
        auto a = random::random_metric(g, random::uniform(g, 2, 5), "a");
        auto b = small(g, "b");
        if (b.size() > a.size()) std::swap(a, b);
        std::vector<std::size_t> f(a.size());
        auto perm = random::permutation(g, a.size());
        for (std::size_t i = 0; i < a.size(); ++i) f[perm[i]] = i < b.size() ? i : random::uniform(g, 0, b.size() - 1);
        Rational upper = gh_upper_via_surjection(a, b, f).upper;
        Rational v = gh_exact(a, b).value();
        return fail_if(v > upper, to_string(v) + " > " + to_string(upper));
    });
    run.property("gh lies between the eccentricity and diameter bounds", n, [=](random::Rng& g, std::size_t) {
        auto a = small(g, "a"), b = small(g, "b");
        auto bounds = gh_exact(a, b, 0);
        Rational v = gh_exact(a, b).value();
        return fail_if(v < bounds.lower || v > bounds.upper, "value outside the interval");
    });
    run.property("ugh with distinct diameters satisfies the strong triangle inequality", n,
                 [](random::Rng& g, std::size_t) {
                     std::vector<ExactSpace> s;
                     while (s.size() < 3) {
                         auto x = random::random_ultrametric(g, random::uniform(g, 2, 5), "x");
                         bool fresh = std::none_of(s.begin(), s.end(),
                                                   [&](const ExactSpace& y) { return y.diameter() == x.diameter(); });
                         if (fresh) s.push_back(std::move(x));
                     }
                     auto audit = ugh_ultrametric_axiom_audit(s[0], s[1], s[2]);
                     return fail_if(!audit.performed || !audit.passed, audit.reason);
                 });
}

inline void telescope_suite(Runner& run) {
    const std::size_t n = run.cases();
    run.property("telescope fingerprint round trip", n, [](random::Rng& g, std::size_t) {
        TelescopeSpec spec;
        spec.levels = random::uniform(g, 1, 12);
        for (std::size_t j = 0; j <= spec.levels; ++j) spec.q.push_back(random::unit(g));
        spec.flavor = random::uniform(g, 0, 1) ? Flavor::metric_u : Flavor::ultrametric_v;
        spec.scale = 0.1 + 10.0 * random::unit(g);
        auto t = random::permuted(telescope(spec), random::permutation(g, 1 + 3 * (spec.levels + 1)));
        auto f = fingerprint(t);
        if (!f.ok) return std::optional<std::string>(f.failure);
        if (spec.levels >= 2 && f.flavor != spec.flavor) return std::optional<std::string>("flavor mismatch");
        if (std::abs(f.scale - spec.scale) > kFingerprintTolerance * spec.scale)
            return std::optional<std::string>("scale mismatch");
        for (std::size_t j = 0; j <= spec.levels; ++j)
            if (std::abs(f.q[j] - spec.q[j]) > kFingerprintTolerance) {
                return std::optional<std::string>("q_" + std::to_string(j) + " mismatch");
            }
        return std::optional<std::string>();
    });
    run.property("telescopes validate for their flavor", n, [](random::Rng& g, std::size_t) {
        TelescopeSpec spec;
        spec.levels = random::uniform(g, 1, 12);
        for (std::size_t j = 0; j <= spec.levels; ++j) spec.q.push_back(random::unit(g));
        spec.flavor = random::uniform(g, 0, 1) ? Flavor::metric_u : Flavor::ultrametric_v;
        return expect_kind(telescope(spec), "telescope");
    });
    auto random_path = [](random::Rng& g) {
        PathSpec p;
        p.n = random::uniform(g, 1, 2);
        p.m = random::uniform(g, 2, 3);
        p.flavor = random::uniform(g, 0, 1) ? Flavor::metric_u : Flavor::ultrametric_v;
        for (std::size_t i = 0; i <= p.n; ++i) {
            std::size_t k = random::uniform(g, 1, 3);
            p.spaces.push_back(p.flavor == Flavor::ultrametric_v ? random::random_ultrametric(g, k)
                                                                   : random::random_metric(g, k));
        }
        p.p_depth = 1;
        return p;
    };
    auto random_point = [](random::Rng& g, std::size_t n) {
        std::vector<std::uint64_t> w(n + 1);
        std::uint64_t total = 0;
        for (auto& v : w) total += v = random::uniform(g, 0, 6);
        if (total == 0) w[0] = total = 1;
        std::vector<Rational> c;
        for (auto v : w) c.emplace_back(BigInt(v), BigInt(total));
        return SimplexPoint(std::move(c));
    };
    run.property("simplex metrics are pseudo-metrics of their flavor", n, [=](random::Rng& g, std::size_t) {
        PathSpec p = random_path(g);
        auto d = simplex_metric(p, random_point(g, p.n), random::uniform(g, 1, p.m));
        Kind want = p.flavor == Flavor::ultrametric_v ? Kind::pseudo_ultrametric : Kind::pseudo_metric;
        return expect_kind(d.space.with_kind(want), "simplex metric");
    });
    run.property("vertex quotients are isometric to the components", n, [=](random::Rng& g, std::size_t) {
        PathSpec p = random_path(g);
        std::size_t i = random::uniform(g, 1, p.n + 1);
        auto d = simplex_metric(p, SimplexPoint::vertex(p.n, i), random::uniform(g, 1, p.m));
        return fail_if(!isometry_check(d.quotient.space, to_float(p.spaces[i - 1])),
                       "vertex " + std::to_string(i) + " quotient differs from X_" + std::to_string(i));
    });
    run.property("xi vanishes exactly at vertices and zeta_i >= s_i", n, [=](random::Rng& g, std::size_t) {
        std::size_t dim = random::uniform(g, 1, 4);
        SimplexPoint s = random_point(g, dim);
        if ((xi(s) == 0) != s.is_vertex()) return std::optional<std::string>("xi and vertex disagree");
        for (std::size_t i = 1; i <= dim + 1; ++i)
            if (zeta(s, i) < s.s[i - 1] || zeta(s, i) < xi(s)) return std::optional<std::string>("zeta too small");
        return std::optional<std::string>();
    });
}

}  // namespace detail

/// Runs one suite by name.
inline std::vector<CaseResult> run_suite(const std::string& suite, const Options& opt = {}) {
    detail::Runner run(suite, opt);
    if (suite == "metric-core") detail::metric_core(run);
    else if (suite == "cantor-dims") detail::cantor_dims(run);
    else if (suite == "gromov") detail::gromov(run);
    else if (suite == "telescope") detail::telescope_suite(run);
    else throw MalformedInput("unknown suite '" + suite + "'; expected metric-core, cantor-dims, gromov, telescope or all");
    return run.take();
}

/// "all" or a single suite name.
inline std::vector<CaseResult> run(const std::string& selector, const Options& opt = {}) {
    if (selector != "all") return run_suite(selector, opt);
    std::vector<CaseResult> out;
    for (const auto& s : suite_names()) {
        auto r = run_suite(s, opt);
        out.insert(out.end(), r.begin(), r.end());
    }
    return out;
}

inline bool all_passed(const std::vector<CaseResult>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const CaseResult& r) { return r.passed; });
}

inline std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

/// JUnit XML with one testsuite per suite and one testcase per property.
inline std::string junit_xml(const std::vector<CaseResult>& rs, bool with_times = false) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<testsuites>\n";
    std::vector<std::string> order;
    for (const auto& r : rs)
        if (std::find(order.begin(), order.end(), r.suite) == order.end()) order.push_back(r.suite);
    for (const auto& suite : order) {
        std::size_t tests = 0, failures = 0;
        for (const auto& r : rs)
            if (r.suite == suite) {
                ++tests;
                failures += !r.passed;
            }
        os << "  <testsuite name=\"" << xml_escape(suite) << "\" tests=\"" << tests << "\" failures=\"" << failures
           << "\">\n";
        for (const auto& r : rs) {
            if (r.suite != suite) continue;
            os << "    <testcase classname=\"" << xml_escape(suite) << "\" name=\"" << xml_escape(r.name) << "\"";
            if (with_times) os << " time=\"" << r.seconds << "\"";
            os << ">\n      <properties><property name=\"cases\" value=\"" << r.cases << "\"/></properties>\n";
            if (!r.passed) os << "      <failure message=\"" << xml_escape(r.message) << "\"/>\n";
            os << "    </testcase>\n";
        }
        os << "  </testsuite>\n";
    }
    os << "</testsuites>\n";
    return os.str();
}

}  // namespace mgeom::verify

#endif  // MGEOM_VERIFY_HPP
