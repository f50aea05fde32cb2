#include <mgeom/cantor/cantor.hpp>
#include <mgeom/gromov/gromov.hpp>
#include <mgeom/metric/operations.hpp>
#include <mgeom/random.hpp>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace mgeom;

namespace {

ExactSpace two_point(Rational d, Kind kind = Kind::ultrametric) {
    return ExactSpace({"a", "b"}, {Rational(0), d, d, Rational(0)}, kind);
}

ExactSpace one_point() { return ExactSpace({"p"}, {Rational(0)}, Kind::ultrametric); }

}  // namespace

TEST(GromovHausdorff, TwoPointsVersusOnePoint) {
    auto r = gh_exact(two_point(1), one_point());
    ASSERT_TRUE(r.exact);
    EXPECT_EQ(r.value(), Rational(1, 2));
    ASSERT_TRUE(r.witness);
    EXPECT_TRUE(r.witness->is_valid());
    EXPECT_EQ(distortion(two_point(1), one_point(), *r.witness), Rational(1));
}

TEST(GromovHausdorff, AgreesWithAllRelations) {
    random::Rng rng(31);
    for (int it = 0; it < 150; ++it) {
        std::size_t na = random::uniform(rng, 1, 4), nb = random::uniform(rng, 1, 4);
        while (na * nb > 12) --nb;
        ExactSpace a = it % 2 ? random::random_metric(rng, na, "a") : random::random_ultrametric(rng, na, "a");
        ExactSpace b = random::random_metric(rng, nb, "b");
        auto r = gh_exact(a, b);
        ASSERT_TRUE(r.exact);
        EXPECT_EQ(r.value(), oracle::gh_all_relations(a, b));
        EXPECT_EQ(distortion(a, b, *r.witness) / 2, r.value());
    }
}

TEST(GromovHausdorff, IntervalAboveGuardBracketsExactValue) {
    random::Rng rng(5);
    for (int it = 0; it < 40; ++it) {
        ExactSpace a = random::random_metric(rng, 5, "a"), b = random::random_metric(rng, 6, "b");
        auto exact = gh_exact(a, b);
        auto bounds = gh_exact(a, b, 0);
        ASSERT_TRUE(exact.exact);
        EXPECT_LE(bounds.lower, exact.value());
        EXPECT_GE(bounds.upper, exact.value());
        EXPECT_TRUE(bounds.witness->is_valid());
    }
}

TEST(GromovHausdorff, SurjectionBoundIsAnUpperBound) {
    random::Rng rng(12);
    for (int it = 0; it < 100; ++it) {
        ExactSpace a = random::random_metric(rng, 5, "a"), b = random::random_metric(rng, 3, "b");
        std::vector<std::size_t> f(5);
        for (std::size_t x = 0; x < 5; ++x) f[x] = x < 3 ? x : random::uniform(rng, 0, 2);
        auto up = gh_upper_via_surjection(a, b, f);
        EXPECT_FALSE(up.exact);
        EXPECT_GE(up.upper, gh_exact(a, b).value());
    }
}

TEST(GromovHausdorff, FloatInputs) {
    FloatSpace a(std::vector<std::string>{"a", "b"}, std::vector<double>{0.0, 1.5, 1.5, 0.0}, Kind::metric);
    FloatSpace b(std::vector<std::string>{"p"}, std::vector<double>{0.0}, Kind::metric);
    EXPECT_DOUBLE_EQ(gh_exact(a, b).value(), 0.75);
}

TEST(UltrametricGh, DistinctDiametersGiveTheLargerOne) {
    auto r = ugh(two_point(1), two_point(Rational(3, 2)));
    ASSERT_TRUE(r.exact);
    EXPECT_EQ(r.value(), Rational(3, 2));
    EXPECT_EQ(ugh(two_point(1), one_point()).value(), Rational(1));
}

TEST(UltrametricGh, IsometricInputsGiveZero) {
    random::Rng rng(2);
    ExactSpace a = random::random_ultrametric(rng, 7);
    auto r = ugh(a, random::permuted(a, random::permutation(rng, 7)));
    ASSERT_TRUE(r.exact);
    EXPECT_EQ(r.value(), Rational(0));
}

TEST(UltrametricGh, EqualDiametersGiveAnInterval) {
    ExactSpace a({"x", "y", "z"}, {Rational(0), Rational(1), Rational(2), Rational(1), Rational(0), Rational(2),
                                   Rational(2), Rational(2), Rational(0)},
                 Kind::ultrametric);
    auto r = ugh(a, two_point(2));
    EXPECT_EQ(r.upper, Rational(2));
    EXPECT_EQ(r.lower, 2 * gh_exact(a, two_point(2)).value());
    EXPECT_THROW(r.value(), DomainError);
}

TEST(UltrametricGh, RejectsNonUltrametricInput) {
    ExactSpace m({"x", "y", "z"}, {Rational(0), Rational(1), Rational(2), Rational(1), Rational(0), Rational(1),
                                   Rational(2), Rational(1), Rational(0)},
                 Kind::metric);
    EXPECT_THROW(ugh(m, one_point()), KindMismatch);
}

TEST(UltrametricGh, AxiomAuditOnDistinctDiameters) {
    random::Rng rng(8);
    for (int it = 0; it < 50; ++it) {
        ExactSpace a = random::random_ultrametric(rng, 4, "a");
        ExactSpace b = dilate(random::random_ultrametric(rng, 3, "b"), Rational(7, 3));
        ExactSpace c = dilate(random::random_ultrametric(rng, 5, "c"), Rational(11, 5));
        if (a.diameter() == b.diameter() || b.diameter() == c.diameter() || a.diameter() == c.diameter()) continue;
        auto audit = ugh_ultrametric_axiom_audit(a, b, c);
        EXPECT_TRUE(audit.performed);
        EXPECT_TRUE(audit.passed);
    }
}

TEST(ScaledCopy, UghOverGhGrowsLikeOneOverEpsilon) {
    CantorSpec spec(BranchingSequence::constant(2), sequences::geometric(1), 2);
    ExactSpace x = enumerate_exact(spec);
    ASSERT_EQ(x.diameter(), Rational(1, 2));
    auto rows = qiu_demo(x, {Rational(1), Rational(1, 10), Rational(1, 100)});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].certified_ratio, Rational(2));
    EXPECT_EQ(rows[1].certified_ratio, Rational(11));
    EXPECT_EQ(rows[2].ugh, Rational(101, 200));
    EXPECT_EQ(rows[2].certified_ratio, Rational(101));
    for (const auto& row : rows) {
        ASSERT_TRUE(row.gh_exact);
        EXPECT_LE(*row.gh_exact, row.gh_upper);
        EXPECT_EQ(*row.gh_exact, oracle::gh_all_relations(x, dilate(x, Rational(1 + row.eps))));
    }
    EXPECT_THROW(qiu_demo(one_point(), {Rational(1)}), DomainError);
    EXPECT_THROW(qiu_demo(x, {Rational(0)}), DomainError);
}

TEST(SupDistance, MatchesByLabel) {
    ExactSpace a = two_point(1), b = two_point(Rational(5, 2));
    EXPECT_EQ(sup_distance(a, b), Rational(3, 2));
}
