#include "quasicross/bounds.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace quasicross;

namespace {

// Floating-point reference for the amplified bound, independent of the
// exact implementation.
double eq2_reference(double n, double e, double alpha) {
    return (alpha - 6.5) / std::pow(alpha, 5) * std::pow(e, 5) / std::pow(n, 4) +
           20.0 * std::pow(e, 6) / (std::pow(alpha, 6) * std::pow(n, 6));
}

// The derivative in alpha is proportional to -4A a^2 + 5cA a - 6B with
// A = e^5/n^4, B = 20 e^6/n^6; its larger root is the interior maximizer.
double analytic_maximizer(double n, double e) {
    const double a = std::pow(e, 5) / std::pow(n, 4);
    const double b = 20.0 * std::pow(e, 6) / std::pow(n, 6);
    const double c = 6.5;
    const double disc = 25 * c * c * a * a - 96 * a * b;
    return (5 * c * a + std::sqrt(disc)) / (8 * a);
}

}  // namespace

TEST(LinearBound, Values) {
    EXPECT_EQ(eq1_bound({11, 55}), Rational(7, 2));
    EXPECT_EQ(eq1_bound({10, 45}), Rational(0));
    EXPECT_EQ(eq1_bound({12, 66}), Rational(8));
    EXPECT_EQ(eq1_bound({4, 0}), Rational(-6));
    EXPECT_THROW(eq1_bound({3, 3}), BoundError);
    EXPECT_THROW(eq1_bound({5, 11}), BoundError);
    EXPECT_THROW(eq1_bound({5, -1}), BoundError);
}

TEST(LinearBound, Linear) {
    for (long n = 4; n <= 20; ++n) {
        for (long e = 0; e < n * (n - 1) / 2; ++e) {
            EXPECT_EQ(eq1_bound({n, e + 1}) - eq1_bound({n, e}), Rational(1));
            EXPECT_EQ(eq1_bound({n + 1, e}) - eq1_bound({n, e}), Rational(-13, 2));
        }
    }
}

TEST(AmplifiedBound, CoefficientsAtTheFixedAlpha) {
    const Rational alpha(65, 8);
    EXPECT_EQ(alpha, Rational::parse("8125/1000"));
    EXPECT_EQ(eq2_first_coefficient(alpha), Rational::parse("1625/1000") / pow(alpha, 5));
    EXPECT_EQ(eq2_second_coefficient(alpha), Rational(20) / pow(alpha, 6));
}

TEST(AmplifiedBound, EighteenVerticesBeatsTheLinearBound) {
    const BoundInput in{18, 153};
    const Rational value = eq2_bound(in, Rational(65, 8));
    EXPECT_EQ(eq1_bound(in), Rational(56));
    EXPECT_GT(value, Rational(56));
    EXPECT_NEAR(value.approx(), eq2_reference(18, 153, 8.125), 1e-9);
}

TEST(AmplifiedBound, AlphaConstraints) {
    EXPECT_THROW(eq2_bound({11, 55}, Rational(65, 8)), BoundError);  // e/n = 5
    EXPECT_THROW(eq2_bound({18, 153}, Rational(13, 2)), BoundError);  // alpha must exceed 13/2
    EXPECT_THROW(eq2_bound({18, 153}, Rational(9)), BoundError);      // 9 > e/n = 17/2
    EXPECT_NO_THROW(eq2_bound({18, 153}, Rational(17, 2)));
    try {
        eq2_bound({11, 55}, Rational(65, 8));
    } catch (const BoundError& e) {
        EXPECT_NE(std::string(e.what()).find("e >= alpha * n"), std::string::npos);
    }
}

TEST(OptimalAlpha, FirstTermMaximizer) {
    const Rational a = optimal_alpha_first_term();
    EXPECT_EQ(a, Rational(65, 8));
    auto g = [](const Rational& x) { return eq2_first_coefficient(x); };
    EXPECT_GE(g(a), g(Rational(8)));
    EXPECT_GE(g(a), g(Rational(33, 4)));
    EXPECT_LT(g(Rational(7)), g(a));
    EXPECT_GT(g(a), g(Rational(10)));
    // first-term coefficient at the optimum is 1.625 / 8.125^5
    EXPECT_EQ(g(a), Rational(13, 8) / pow(a, 5));
}

TEST(OptimizeAlpha, DominatesFixedAlpha) {
    const BoundInput in{18, 153};
    AlphaOptimum best = optimize_alpha(in);
    EXPECT_GE(best.bound, eq2_bound(in, Rational(65, 8)));
    EXPECT_GT(best.alpha, Rational(13, 2));
    EXPECT_LE(best.alpha, Rational(17, 2));
    // The larger stationary point lies below 13/2, so the bound decreases on
    // the whole admissible range and the supremum is approached at 13/2.
    EXPECT_LT(analytic_maximizer(18, 153), 6.5);
    EXPECT_NEAR(best.alpha.approx(), 6.5, 1e-6 * 6.5);
    EXPECT_NEAR(best.bound.approx(), eq2_reference(18, 153, 6.5), 1e-4);
}

TEST(OptimizeAlpha, InteriorMaximizerMatchesTheAnalyticRoot) {
    // Dense graphs push the stationary point inside (13/2, e/n].
    const BoundInput in{100, 2000};
    const double root = analytic_maximizer(100, 2000);
    ASSERT_GT(root, 6.5);
    ASSERT_LT(root, 20.0);
    AlphaOptimum best = optimize_alpha(in);
    EXPECT_NEAR(best.alpha.approx(), root, 1e-6 * root);
}

TEST(OptimizeAlpha, EndpointAdmissible) {
    const BoundInput in{15, 105};  // K15, e/n = 7
    AlphaOptimum best = optimize_alpha(in);
    EXPECT_GE(best.bound, eq2_bound(in, Rational(7)));
    EXPECT_LE(best.alpha, Rational(7));
    EXPECT_THROW(optimize_alpha({12, 66}), BoundError);
    EXPECT_THROW(optimize_alpha({14, 91}), BoundError);  // e/n = 6.5 exactly
}

TEST(OptimizeAlpha, UnimodalProfileForEighteenVertices) {
    const BoundInput in{18, 153};
    int direction_changes = 0;
    int last = 0;
    Rational prev = eq2_bound(in, Rational(6501, 1000));
    for (int k = 6502; k <= 8500; ++k) {
        Rational cur = eq2_bound(in, Rational(k, 1000));
        const int dir = cur > prev ? 1 : (cur < prev ? -1 : 0);
        if (dir != 0 && last != 0 && dir != last) ++direction_changes;
        if (dir != 0) last = dir;
        prev = cur;
    }
    EXPECT_LE(direction_changes, 1);
}

TEST(OptimizeAlpha, DominatesAGridOfAdmissibleAlphas) {
    for (long n : {20L, 30L, 40L}) {
        const BoundInput in = BoundInput::complete(n);
        BoundReport r = best_lower_bound(in);
        ASSERT_TRUE(r.eq2_optimized.has_value());
        const Rational top = Rational(in.e) / Rational(in.n);
        for (int k = 1; k <= 40; ++k) {
            Rational alpha = Rational(13, 2) + (top - Rational(13, 2)) * Rational(k, 40);
            EXPECT_GE(Rational(r.best_integer_lower_bound), Rational(eq2_bound(in, alpha).ceil())) << n << " " << k;
            EXPECT_GE(r.eq2_optimized->bound, eq2_bound(in, alpha));
        }
    }
}

TEST(BestLowerBound, CompleteGraphs) {
    EXPECT_EQ(best_lower_bound(BoundInput::complete(11)).best_integer_lower_bound, 4);
    EXPECT_EQ(best_lower_bound(BoundInput::complete(10)).best_integer_lower_bound, 0);
    BoundReport k12 = best_lower_bound(BoundInput::complete(12));
    EXPECT_EQ(k12.best_integer_lower_bound, 8);
    EXPECT_FALSE(k12.eq2_optimized.has_value());
    EXPECT_FALSE(k12.eq2_fixed.has_value());
    // K13: 78 - 84.5 + 20; K14: 91 - 91 + 20
    EXPECT_EQ(best_lower_bound(BoundInput::complete(13)).eq1_value, Rational(27, 2));
    EXPECT_EQ(best_lower_bound(BoundInput::complete(13)).best_integer_lower_bound, 14);
    EXPECT_EQ(best_lower_bound(BoundInput::complete(14)).eq1_value, Rational(20));
    EXPECT_EQ(best_lower_bound(BoundInput::complete(14)).best_integer_lower_bound, 20);
    for (long n = 4; n <= 10; ++n) EXPECT_EQ(best_lower_bound(BoundInput::complete(n)).best_integer_lower_bound, 0);
}

TEST(BestLowerBound, ReportsBothAmplifiedValuesWhenAdmissible) {
    BoundReport r = best_lower_bound({18, 153});
    ASSERT_TRUE(r.eq2_fixed.has_value());
    ASSERT_TRUE(r.eq2_optimized.has_value());
    EXPECT_EQ(r.eq2_fixed->alpha, Rational(65, 8));
    EXPECT_GE(r.eq2_optimized->bound, r.eq2_fixed->bound);
    EXPECT_EQ(Rational(r.best_integer_lower_bound), Rational(r.eq2_optimized->bound.ceil()));
}

TEST(MonteCarlo, FullAndEmptySamples) {
    Drawing d = convex_complete(7);
    SubsampleStats all = monte_carlo_subsample(d, Rational(1), 50, 9);
    EXPECT_EQ(all.mean_vertices, Rational(7));
    EXPECT_EQ(all.mean_edges, Rational(21));
    EXPECT_EQ(all.mean_triples, Rational(7));
    EXPECT_EQ(all.variance_of_mean_triples, Rational(0));
    EXPECT_EQ(all.expected_triples, Rational(7));

    SubsampleStats none = monte_carlo_subsample(d, Rational(0), 50, 9);
    EXPECT_EQ(none.mean_vertices, Rational(0));
    EXPECT_EQ(none.mean_edges, Rational(0));
    EXPECT_EQ(none.mean_triples, Rational(0));
    EXPECT_THROW(monte_carlo_subsample(d, Rational(3, 2), 5, 1), std::invalid_argument);
    EXPECT_THROW(monte_carlo_subsample(d, Rational(1, 2), 0, 1), std::invalid_argument);
}

TEST(MonteCarlo, SingleTrialMatchesAnExplicitSubdrawing) {
    std::mt19937_64 gen(61);
    Drawing d = quasicross::testing::random_perturbed_drawing(gen, 8);
    const Rational p(3, 5);
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        SubsampleStats s = monte_carlo_subsample(d, p, 1, seed);
        RandomStream rng(seed, 0);
        RationalCoin coin(p);
        std::set<std::string> keep;
        for (const auto& v : d.vertices())
            if (coin.flip(rng)) keep.insert(v.id);
        Drawing sub = subdrawing(d, keep);
        EXPECT_EQ(s.mean_vertices, Rational(static_cast<long>(sub.vertex_count())));
        EXPECT_EQ(s.mean_edges, Rational(static_cast<long>(sub.edge_count())));
        EXPECT_EQ(s.mean_triples, Rational(static_cast<long>(count_triples(crossing_pairs(sub)).triple_count)));
    }
}

TEST(MonteCarlo, MeansTrackExactExpectations) {
    Drawing d = convex_complete(8);
    SubsampleStats s = monte_carlo_subsample(d, Rational(1, 2), 20000, 2024);
    EXPECT_EQ(s.expected_vertices, Rational(4));
    EXPECT_EQ(s.expected_edges, Rational(7));
    EXPECT_EQ(s.expected_triples, Rational(7, 16));
    EXPECT_TRUE(within_standard_errors(s.mean_vertices, s.expected_vertices, s.variance_of_mean_vertices, 3));
    EXPECT_TRUE(within_standard_errors(s.mean_edges, s.expected_edges, s.variance_of_mean_edges, 3));
    EXPECT_TRUE(within_standard_errors(s.mean_triples, s.expected_triples, s.variance_of_mean_triples, 3));
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
    Drawing d = convex_complete(7);
    SubsampleStats a = monte_carlo_subsample(d, Rational(2, 3), 3001, 77, 1);
    SubsampleStats b = monte_carlo_subsample(d, Rational(2, 3), 3001, 77, 4);
    EXPECT_EQ(a.mean_triples, b.mean_triples);
    EXPECT_EQ(a.variance_of_mean_edges, b.variance_of_mean_edges);
    SubsampleStats c = monte_carlo_subsample(d, Rational(2, 3), 3001, 78, 1);
    EXPECT_NE(a.mean_edges, c.mean_edges);
}

TEST(RandomStream, ReproducibleAndRestorable) {
    RandomStream a(123, 4), b(123, 4), c(123, 5);
    for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next(), b.next());
    EXPECT_NE(RandomStream(123, 4).next(), c.next());
    std::string saved = a.state();
    const std::uint64_t next = a.next();
    RandomStream d(0);
    d.restore(saved);
    EXPECT_EQ(d.next(), next);
    for (int i = 0; i < 1000; ++i) {
        auto x = a.between(-3, 3);
        EXPECT_GE(x, -3);
        EXPECT_LE(x, 3);
    }
}
