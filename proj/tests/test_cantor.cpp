#include <mgeom/cantor/blocks.hpp>
#include <mgeom/cantor/factory.hpp>
#include <mgeom/metric/covering.hpp>
#include <mgeom/metric/validate.hpp>
#include <mgeom/random.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace mgeom;

namespace {

CantorSpec dyadic(std::uint64_t depth) {
    return CantorSpec(BranchingSequence::constant(2), sequences::geometric(1), depth);
}

}  // namespace

TEST(CantorEnumeration, MatchesStringConstruction) {
    CantorSpec spec(BranchingSequence::periodic({BigInt(2), BigInt(3)}), sequences::geometric(1), 4);
    ExactSpace s = enumerate_exact(spec);
    ExactSpace ref = oracle::cantor_by_strings({2, 3, 2, 3}, {Rational(1, 2), Rational(1, 4), Rational(1, 8), Rational(1, 16)});
    ASSERT_EQ(s.size(), 36u);
    EXPECT_EQ(s.data(), ref.data());
    EXPECT_EQ(s.label(7), "0.1.0.1");
    EXPECT_TRUE(validate(s).is_ultrametric);
}

TEST(CantorEnumeration, FloatWhenAlphaIsIrrational) {
    CantorSpec spec(BranchingSequence::constant(2), sequences::geometric(Rational(1, 2)), 3);
    AnySpace s = enumerate(spec);
    ASSERT_TRUE(std::holds_alternative<FloatSpace>(s));
    EXPECT_NEAR(std::get<FloatSpace>(s)(0, 4), std::sqrt(0.5), 1e-15);
    EXPECT_THROW(enumerate_exact(spec), DomainError);
}

TEST(CantorEnumeration, RefusesOverBudget) {
    CantorSpec spec(BranchingSequence::constant(2), sequences::geometric(1), 12);
    EXPECT_THROW(enumerate_exact(spec), SizeError);
    EXPECT_FALSE(CantorSpec(BranchingSequence::constant(2), sequences::geometric(1), 21).enumerable());
}

TEST(CoveringFormula, DepthFiveDyadicAtOneSixteenth) {
    // r = alpha(3) lies in gap 2 under the half-open convention: N = m0 m1 m2 = 8.
    CantorSpec spec = dyadic(5);
    auto f = covering_formula(spec, Rational(1, 16));
    EXPECT_EQ(*f.count, 8);
    EXPECT_EQ(f.log2, Magnitude(3));
    EXPECT_EQ(covering_oracle(enumerate_exact(spec), Rational(1, 16)).value(), 8u);
    EXPECT_EQ(oracle::ultrametric_classes(enumerate_exact(spec), Rational(1, 16)), 8u);
}

TEST(CoveringFormula, AgreesWithOracleOnRandomTruncations) {
    random::Rng rng(21);
    for (int it = 0; it < 60; ++it) {
        CantorSpec spec = random::random_cantor_spec(rng, 6, 256, true);
        ExactSpace s = enumerate_exact(spec);
        for (std::uint64_t k = 0; k <= spec.depth; ++k) {
            Rational r = *spec.alpha.exact_value(k);
            EXPECT_EQ(*covering_formula(spec, r).count, oracle::ultrametric_classes(s, r)) << spec.descriptor();
            if (k > 0) {
                Rational R = *spec.alpha.exact_value(k - 1);
                Rational mid = (r + R) / 2;
                EXPECT_EQ(*covering_formula(spec, mid).count, oracle::ultrametric_classes(s, mid));
                // Ball of radius R around point 0, covered at radius r.
                auto ball = restrict(s, ball_indices(s, 0, R));
                EXPECT_EQ(*ball_covering_formula(spec, R, r).count, oracle::ultrametric_classes(ball, r));
            }
        }
    }
}

TEST(CoveringFormula, LargeRadiusAndDomain) {
    CantorSpec spec = dyadic(3);
    EXPECT_EQ(*covering_formula(spec, Rational(2)).count, 1);
    EXPECT_THROW(covering_formula(spec, Rational(0)), DomainError);
    EXPECT_THROW(ball_covering_formula(spec, Rational(1, 8), Rational(1, 4)), DomainError);
}

TEST(CoveringFormula, InterleavedCubicBallCountsAreTwoToTheN) {
    // Brute force on the truncation: B(x, 2^-(n^3)) covered at 2^-n 2^-(n^3).
    auto seq = sequences::cubic_with_dyadic_inserts();
    for (std::uint64_t n = 1; n <= 2; ++n) {
        std::uint64_t R_index = sequences::triangular_start(n);
        std::uint64_t r_index = R_index + n;
        CantorSpec spec(BranchingSequence::constant(2), seq, r_index + 1);
        ExactSpace s = enumerate_exact(spec);
        Rational R = pow2(-static_cast<std::int64_t>(n * n * n));
        Rational r = R * pow2(-static_cast<std::int64_t>(n));
        ASSERT_EQ(*spec.alpha.exact_value(R_index), R);
        ASSERT_EQ(*spec.alpha.exact_value(r_index), r);
        auto ball = restrict(s, ball_indices(s, 0, R));
        std::size_t brute = oracle::ultrametric_classes(ball, r);
        EXPECT_EQ(brute, std::size_t{1} << n);
        EXPECT_EQ(*ball_covering_formula(spec, R, r).count, brute);
    }
}

TEST(DimensionSequences, DyadicClosedForm) {
    auto t = dim_sequences(dyadic(1), 1000);
    ASSERT_EQ(t.rows.size(), 1001u);
    for (const auto& row : t.rows) {
        EXPECT_EQ(row.h, Magnitude(Rational(BigInt(row.n + 1), BigInt(row.n + 2))));
        EXPECT_EQ(row.p, Magnitude(1));
    }
}

TEST(DimensionSequences, MatchExplicitLongDoubleSums) {
    random::Rng rng(4);
    for (int it = 0; it < 20; ++it) {
        std::vector<BigInt> ms = {BigInt(random::uniform(rng, 2, 5)), BigInt(random::uniform(rng, 2, 5))};
        Rational rho(BigInt(random::uniform(rng, 1, 6)), BigInt(random::uniform(rng, 1, 3)));
        CantorSpec spec(BranchingSequence::periodic(ms), sequences::geometric(rho));
        std::vector<long double> lm, E;
        for (std::size_t i = 0; i <= 61; ++i) {
            lm.push_back(std::log2(static_cast<long double>(ms[i % 2].convert_to<int>())));
            E.push_back(static_cast<long double>(rho.convert_to<double>()) * (i + 1));
        }
        auto t = dim_sequences(spec, 60);
        for (const auto& row : t.rows) {
            auto ref = oracle::explicit_hp(lm, E, row.n);
            EXPECT_NEAR(row.h.to_double(), static_cast<double>(ref.h), 1e-12);
            EXPECT_NEAR(row.p.to_double(), static_cast<double>(ref.p), 1e-12);
        }
    }
}

TEST(DimensionSequences, SnowflakeScalesExactly) {
    CantorSpec spec(BranchingSequence::periodic({BigInt(3), BigInt(2)}), sequences::square_exponent());
    for (Rational eta : {Rational(1, 2), Rational(2), Rational(3)}) {
        auto a = dim_sequences(spec, 50), b = dim_sequences(spec.snowflaked(1 / eta), 50);
        ASSERT_EQ(a.rows.size(), b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            EXPECT_TRUE(b.rows[i].h.is_exact());
            EXPECT_EQ(b.rows[i].h, a.rows[i].h * Magnitude(eta));
            EXPECT_EQ(b.rows[i].p, a.rows[i].p * Magnitude(eta));
        }
    }
}

TEST(Theta, DyadicIsDoublingWithEtaOne) {
    auto t = theta_eta(dyadic(1), Rational(1, 8));
    EXPECT_EQ(t.log2_theta, Magnitude(3));
    EXPECT_EQ(t.eta, Magnitude(1));
    EXPECT_FALSE(non_doubling_flag(t));
    EXPECT_THROW(theta_eta(dyadic(1), Rational(1)), DomainError);
    EXPECT_EQ(upadim_bound(dyadic(1), 50), Magnitude(1));
}

TEST(Theta, RatioInsertsTripTheNonDoublingFlag) {
    auto block = building_block("000i");
    auto t = theta_eta(*block.spec, Rational(1, 2), 60);
    EXPECT_TRUE(non_doubling_flag(t));
    // Row j of the interleaving contributes 2^j cylinders to one ball at eps = 1/2.
    for (std::uint64_t j = 1; j <= 10; ++j) {
        EXPECT_EQ(t.scales[sequences::triangular_start(j)].log2_count, Magnitude(BigInt(j))) << j;
    }
}

TEST(Theta, DyadicInsertsHaveEtaTendingToOne) {
    auto block = building_block("0001");
    Magnitude prev(0);
    for (std::int64_t n : {2, 4, 8, 16}) {
        auto t = theta_eta(*block.spec, pow2(-n), 200);
        EXPECT_LE(t.eta.to_double(), 1.0 + 1e-12);
        EXPECT_GE(t.eta.to_double(), prev.to_double());
        prev = t.eta;
    }
    EXPECT_EQ(prev, Magnitude(1));
}

TEST(DimensionalTypes, ParseCheckScale) {
    auto t = DimensionalType::parse("0.5, 0.7, 1.3, inf");
    EXPECT_EQ(t.str(), "(1/2, 7/10, 13/10, inf)");
    EXPECT_EQ(t.scaled(2).str(), "(1, 7/5, 13/5, inf)");
    EXPECT_EQ(DimensionalType::parse("0,0,0,inf").scaled(0).str(), "(0, 0, 0, 0)");
    try {
        DimensionalType::parse("1,0.5,2,3").check();
        FAIL();
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("a1 <= a2"), std::string::npos);
    }
    auto l = DimensionalType::parse("1,1,1,1");
    l.tdim = Dim(2);
    EXPECT_THROW(l.check(), DomainError);
    EXPECT_THROW(DimensionalType::parse("1,2,3"), MalformedInput);
    EXPECT_THROW(Dim::parse("-1"), DomainError);
}

TEST(BuildingBlocks, TagsAndAnalyticTypes) {
    for (const auto& tag : building_block_tags()) {
        auto b = building_block(tag);
        EXPECT_EQ(b.analytic, type_from_tag(tag));
        EXPECT_NO_THROW(b.sequence_spec());
    }
    EXPECT_THROW(building_block("0101"), DomainError);
    EXPECT_THROW(type_from_tag("01x1"), MalformedInput);
}

TEST(BuildingBlocks, TowerCertificatesHold) {
    auto c = tower_certificate(2);
    EXPECT_TRUE(c.all_hold());
    for (const auto& line : c.lines) EXPECT_TRUE(line.holds) << line.statement << ": " << line.detail;
    EXPECT_TRUE(mild_tower_certificate(2).all_hold());
}

TEST(BuildingBlocks, TowerSignEngine) {
    using tower::Linear;
    // t(0) = 2, t(1) = 4, t(2) = 16; t(5) dominates any linear combination of lower heights.
    EXPECT_EQ(tower::sign(Linear::t(2) - Linear::t(1) * BigInt(4)), 0);
    EXPECT_EQ(tower::sign(Linear::t(3) - Linear::value(65536)), 0);
    EXPECT_EQ(tower::sign(Linear::t(5) - Linear::t(4) * BigInt(1000000)), 1);
    EXPECT_EQ(tower::sign(Linear::t(4) - Linear::t(5)), -1);
}

TEST(BuildingBlocks, SquareWidthBlockCertificate) {
    auto f = block_family("0011");
    auto c = block_certificate(f, 100, 10000);
    EXPECT_EQ(c.ubdim_ratio, Magnitude(Rational(10000, 10101)));
    EXPECT_EQ(c.adim_bound, Magnitude(1));
    EXPECT_EQ(c.piece_h, Magnitude(Rational(10001, 100020002)));
    EXPECT_EQ(c.piece_p, Magnitude(Rational(1001, 1000001)));
    ExactSpace s = enumerate_blocks(f, 2, 2);
    EXPECT_EQ(s.size(), 65u);
    EXPECT_TRUE(validate(s).is_ultrametric);
}

TEST(Factory, FourComponentTarget) {
    auto a = prescribed_factory(DimensionalType::parse("0.5,0.7,1.3,2.0"));
    ASSERT_EQ(a.components.size(), 4u);
    std::vector<std::string> tags;
    for (const auto& c : a.components) tags.push_back(c.block.tag);
    EXPECT_EQ(tags, (std::vector<std::string>{"1111", "0111", "0011", "0001"}));
    EXPECT_EQ(a.components[2].exponent, Rational(13, 10));
    EXPECT_EQ(a.max_of_components(), a.target);
    AnySpace s = enumerate_assembly(a, 64);
    std::visit([](const auto& x) { EXPECT_TRUE(validate(x).is_ultrametric); }, s);
}

TEST(Factory, ZeroAndInfiniteTargets) {
    auto zero = prescribed_factory(DimensionalType::parse("0,0,0,0"));
    ASSERT_EQ(zero.components.size(), 1u);
    EXPECT_EQ(zero.components[0].block.tag, "0000");
    auto inf = prescribed_factory(DimensionalType::parse("1,inf,inf,inf"));
    ASSERT_EQ(inf.components.size(), 2u);
    EXPECT_EQ(inf.components[1].block.tag, "0iii");
    EXPECT_EQ(inf.max_of_components(), inf.target);
    auto equal = prescribed_factory(DimensionalType::parse("1/2,1,1,1"));
    EXPECT_EQ(equal.components.size(), 2u);
}

TEST(Factory, RandomTargetsReachTheirTypeExactly) {
    random::Rng rng(9);
    for (int i = 0; i < 200; ++i) {
        auto t = random::random_target(rng, i % 2 == 0);
        EXPECT_EQ(prescribed_factory(t).max_of_components(), t) << t.str();
    }
}

TEST(Factory, TopologicalDimensionLabel) {
    auto t = DimensionalType::parse("2,2,2,2");
    t.tdim = Dim(2);
    auto a = prescribed_with_tdim(t, 3, 64);
    ASSERT_TRUE(a.space);
    EXPECT_TRUE(validate(*a.space).is_metric);
    t.tdim = Dim(0);
    EXPECT_EQ(prescribed_with_tdim(t, 3, 64).grid, 0u);
    t = DimensionalType::parse("inf,inf,inf,inf");
    t.tdim = Dim::inf();
    EXPECT_FALSE(prescribed_with_tdim(t).space);
    EXPECT_THROW(prescribed_with_tdim(DimensionalType::parse("1,1,1,1")), DomainError);
}
