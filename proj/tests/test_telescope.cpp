#include <mgeom/metric/validate.hpp>
#include <mgeom/random.hpp>
#include <mgeom/telescope/simplex_path.hpp>
#include <mgeom/telescope/telescope.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mgeom;

namespace {

ExactSpace path_metric(std::size_t n, const std::string& prefix) {
    std::vector<Rational> flat(n * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) flat[i * n + j] = Rational(BigInt(i > j ? i - j : j - i));
    return ExactSpace(index_labels(n, prefix), std::move(flat), Kind::metric);
}

ExactSpace chain_ultrametric(std::size_t n, const std::string& prefix) {
    // d(i, j) = max(i, j) + 1 for i != j.
    std::vector<Rational> flat(n * n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) flat[i * n + j] = Rational(BigInt(std::max(i, j) + 1));
    return ExactSpace(index_labels(n, prefix), std::move(flat), Kind::ultrametric);
}

PathSpec edge_path(Flavor flavor) {
    PathSpec p;
    p.n = 1;
    p.m = 3;
    p.flavor = flavor;
    if (flavor == Flavor::metric_u) p.spaces = {path_metric(2, "a"), path_metric(3, "b")};
    else p.spaces = {chain_ultrametric(2, "a"), chain_ultrametric(3, "b")};
    return p;
}

TelescopeSpec random_spec(random::Rng& rng, Flavor flavor) {
    TelescopeSpec t;
    t.levels = random::uniform(rng, 2, 7);
    for (std::size_t j = 0; j <= t.levels; ++j) t.q.push_back(random::unit(rng));
    t.flavor = flavor;
    t.scale = 0.25 + 4 * random::unit(rng);
    return t;
}

}  // namespace

TEST(Telescope, LevelGeometry) {
    TelescopeSpec t{{0.0, 1.0, 0.5}, 2, Flavor::metric_u, 2.0};
    FloatSpace s = telescope(t);
    ASSERT_EQ(s.size(), 10u);
    EXPECT_EQ(s.label(0), "inf");
    EXPECT_EQ(s.label(4), "1_1");
    EXPECT_DOUBLE_EQ(s(0, 4), 1.0);
    EXPECT_DOUBLE_EQ(s(4, 5), 0.5);
    // q = 1 makes the apex angle pi/3 and the level triangle equilateral.
    EXPECT_NEAR(s(4, 6), 0.5, 1e-15);
    EXPECT_NEAR(s(1, 3), std::sqrt(2.0 - 2.0 * std::cos(std::numbers::pi / 6)), 1e-15);
    EXPECT_DOUBLE_EQ(s(1, 4), 1.0);
    EXPECT_TRUE(validate(s).is_metric);
    t.flavor = Flavor::ultrametric_v;
    FloatSpace v = telescope(t);
    EXPECT_DOUBLE_EQ(v(1, 4), 2.0);
    EXPECT_TRUE(validate(v).is_ultrametric);
}

TEST(Telescope, RejectsBadParameters) {
    EXPECT_THROW(telescope({{0.5}, 1, Flavor::metric_u, 1.0}), DomainError);
    EXPECT_THROW(telescope({{0.5, 1.5}, 1, Flavor::metric_u, 1.0}), DomainError);
    EXPECT_THROW(telescope({{0.5, 0.5}, 1, Flavor::metric_u, 0.0}), DomainError);
    EXPECT_THROW(parse_flavor("w"), MalformedInput);
}

TEST(Fingerprint, RecoversParametersUnderPermutation) {
    random::Rng rng(17);
    for (int it = 0; it < 200; ++it) {
        TelescopeSpec t = random_spec(rng, it % 2 ? Flavor::ultrametric_v : Flavor::metric_u);
        FloatSpace s = telescope(t);
        auto fp = fingerprint(random::permuted(s, random::permutation(rng, s.size())));
        ASSERT_TRUE(fp.ok) << fp.failure;
        EXPECT_EQ(fp.flavor, t.flavor);
        EXPECT_NEAR(fp.scale, t.scale, 1e-9 * t.scale);
        ASSERT_EQ(fp.q.size(), t.q.size());
        for (std::size_t j = 0; j < t.q.size(); ++j) EXPECT_NEAR(fp.q[j], t.q[j], 1e-6) << j;
    }
}

TEST(Fingerprint, RejectsOtherSpaces) {
    random::Rng rng(3);
    auto fp = fingerprint(random::random_ultrametric(rng, 7));
    EXPECT_FALSE(fp.ok);
    EXPECT_FALSE(fp.failure.empty());
}

TEST(Fingerprint, DistinguishesNearbyParameters) {
    TelescopeSpec a{{0.2, 0.4, 0.6}, 2, Flavor::metric_u, 1.0};
    TelescopeSpec b = a;
    b.q[1] = 0.41;
    EXPECT_FALSE(same_fingerprint(fingerprint(telescope(a)), fingerprint(telescope(b))));
    EXPECT_TRUE(same_fingerprint(fingerprint(telescope(a)), fingerprint(telescope(a))));
}

TEST(SimplexCoordinates, XiAndZeta) {
    auto v2 = SimplexPoint::vertex(2, 2);
    EXPECT_EQ(xi(v2), Rational(0));
    EXPECT_EQ(zeta(v2, 2), Rational(1));
    EXPECT_EQ(zeta(v2, 1), Rational(0));
    auto c = SimplexPoint::parse("1/2, 1/3, 1/6", 2);
    EXPECT_EQ(xi(c), Rational(1, 2));
    EXPECT_EQ(zeta(c, 1), Rational(1, 2));
    EXPECT_EQ(zeta(c, 3), Rational(1, 2));
    EXPECT_EQ(hilbert_point(c, 2, 3, 8),
              (std::vector<Rational>{Rational(1, 2), Rational(1, 3), Rational(1, 6), Rational(0), Rational(1, 2),
                                     Rational(0), Rational(0), Rational(0)}));
    EXPECT_THROW(SimplexPoint::parse("1/2,1/3", 2), MalformedInput);
    EXPECT_THROW(SimplexPoint::parse("1/2,1/3,1/3", 2), DomainError);
    EXPECT_EQ(interior_sample(2, 5).size(), 6u);
}

TEST(SimplexPath, VertexQuotientsAreTheComponents) {
    for (Flavor f : {Flavor::metric_u, Flavor::ultrametric_v}) {
        PathSpec p = edge_path(f);
        for (std::size_t i = 1; i <= 2; ++i) {
            auto d = simplex_metric(p, SimplexPoint::vertex(1, i), 1);
            EXPECT_TRUE(isometry_check(d.quotient.space, to_float(p.spaces[i - 1])).has_value());
        }
    }
}

TEST(SimplexPath, InteriorSpacesAreOfTheFlavor) {
    for (Flavor f : {Flavor::metric_u, Flavor::ultrametric_v}) {
        PathSpec p = edge_path(f);
        for (const auto& s : interior_sample(1, 5)) {
            for (std::size_t k = 1; k <= p.m; ++k) {
                auto d = simplex_metric(p, s, k);
                auto rep = validate(d.space);
                EXPECT_TRUE(f == Flavor::metric_u ? rep.is_pseudo_metric : rep.is_pseudo_ultrametric);
            }
        }
    }
}

TEST(SimplexPath, InteriorTelescopeCarriesThePoint) {
    PathSpec p = edge_path(Flavor::metric_u);
    auto s = SimplexPoint::parse("2/5,3/5", 1);
    auto d = simplex_metric(p, s, 2);
    auto fp = fingerprint_embedded(d.quotient.space, p.telescope_levels());
    ASSERT_TRUE(fp.ok) << fp.failure;
    ASSERT_EQ(fp.q.size(), d.q.size());
    for (std::size_t j = 0; j < d.q.size(); ++j) EXPECT_NEAR(fp.q[j], d.q[j], 1e-6) << j;
}

TEST(SimplexPath, ContinuityAlongAnEdge) {
    PathSpec p = edge_path(Flavor::metric_u);
    auto a = SimplexPoint::vertex(1, 1), b = SimplexPoint::vertex(1, 2);
    auto audit = path_continuity_audit(p, a, b, 16);
    EXPECT_EQ(audit.rows.size(), 17u);
    EXPECT_TRUE(audit.start_matches);
    EXPECT_TRUE(audit.end_matches);
    for (const auto& row : audit.rows) EXPECT_DOUBLE_EQ(row.gh_bound, 2 * row.sup_distance);
    auto fine = path_continuity_audit(p, a, b, 64);
    EXPECT_LT(fine.max_sup, audit.max_sup);
    double ratio = refinement_ratio(p, a, b, 16);
    EXPECT_GT(ratio, 1.5);
    EXPECT_LT(ratio, 2.5);
}

TEST(SimplexPath, BranchSelectionAvoidsTheComponents) {
    PathSpec p = edge_path(Flavor::ultrametric_v);
    auto sel = vertex_branch_selection(p, 7);
    ASSERT_GE(sel.branch, 1u);
    EXPECT_EQ(sel.collisions.size(), p.m);
    EXPECT_EQ(sel.collisions[sel.branch - 1], 0u);
    EXPECT_EQ(sel.samples, 6u);
    EXPECT_EQ(sel.distinct_fingerprints, sel.samples);

    PathSpec same = p;
    same.spaces[1] = same.spaces[0];
    EXPECT_THROW(vertex_branch_selection(same), PreconditionError);
    PathSpec wrong_m = p;
    wrong_m.m = 2;
    wrong_m.levels = 6;
    EXPECT_THROW(vertex_branch_selection(wrong_m), PreconditionError);
}

TEST(SimplexPath, SpecChecks) {
    PathSpec p = edge_path(Flavor::ultrametric_v);
    p.spaces[0] = path_metric(3, "a");
    EXPECT_THROW(p.check(), KindMismatch);
    p = edge_path(Flavor::metric_u);
    p.levels = 2;
    EXPECT_THROW(p.check(), DomainError);
    EXPECT_THROW(simplex_metric(edge_path(Flavor::metric_u), SimplexPoint::vertex(1, 1), 4), DomainError);
}
