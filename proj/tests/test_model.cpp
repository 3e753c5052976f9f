#include "fixtures.hpp"

#include <asaw/enumerate.hpp>
#include <asaw/interaction.hpp>
#include <asaw/stepdist.hpp>

#include <gtest/gtest.h>

using namespace asaw;
using fixtures::W;

TEST(StepDistribution, NearestNeighbour) {
    auto D = make_nearest_neighbour(2);
    EXPECT_EQ(D.steps().size(), 4u);
    for (const auto& s : D.steps()) EXPECT_EQ(s.prob, Rational(1, 4));
    EXPECT_EQ(D.p1(), Rational(1, 4));
    EXPECT_EQ(D.sigma2(), Rational(1));
    EXPECT_EQ(make_nearest_neighbour(5).p1(), Rational(1, 10));
    for (int d = 2; d <= 6; ++d) EXPECT_EQ(make_nearest_neighbour(d).steps().size(), static_cast<std::size_t>(2 * d));
}

TEST(StepDistribution, SpreadOutBoxes) {
    auto D1 = make_spread_out(2, 1);
    EXPECT_EQ(D1.steps().size(), 8u);
    EXPECT_EQ(D1.p1(), Rational(1, 8));
    auto D2 = make_spread_out(2, 2);
    EXPECT_EQ(D2.steps().size(), 24u);
    EXPECT_EQ(D2.p1(), Rational(1, 24));
    EXPECT_EQ(D2.sigma2(), Rational(25, 6));
    EXPECT_EQ(make_spread_out(5, 1).steps().size(), 242u);
    EXPECT_THROW(make_spread_out(2, 0), std::invalid_argument);
}

TEST(StepDistribution, ParseSpecs) {
    EXPECT_EQ(parse_distribution("nn", 3).steps().size(), 6u);
    EXPECT_EQ(parse_distribution("spread:L=2,shape=uniform", 2).steps().size(), 24u);
    EXPECT_THROW(parse_distribution("spread:L=x", 2), std::invalid_argument);
    EXPECT_THROW(parse_distribution("levy", 2), std::invalid_argument);
}

TEST(StepDistribution, AprioriWeight) {
    auto D = make_nearest_neighbour(2);
    EXPECT_EQ(apriori_weight(D, W("0,0;1,0;1,1")), Rational(1, 16));
    EXPECT_EQ(apriori_weight(D, Walk::zero_step(2)), Rational(1));
    EXPECT_EQ(apriori_weight(D, W("0,0;2,0")), Rational(0));
}

TEST(Model, DerivedConstants) {
    ModelParams P(Rational(1, 10), make_nearest_neighbour(2));
    EXPECT_EQ(P.k0(), 4);
    EXPECT_EQ(P.alpha(), Rational(1, 9));
    EXPECT_EQ(P.lambda(), Rational(16));
    EXPECT_EQ(P.z0(), Rational(100, 121));
    ModelParams P3(Rational(1, 10), make_nearest_neighbour(3));
    EXPECT_EQ(P3.k0(), 12);
    EXPECT_EQ(P3.alpha(), Rational(1, 33));
    EXPECT_EQ(P3.lambda(), Rational(36) * Rational(121, 100));
    EXPECT_THROW(ModelParams(Rational(-1, 2), make_nearest_neighbour(2)), std::invalid_argument);
}

TEST(Model, AsawWeightExamples) {
    for (const auto& k : {Rational(0), Rational(1, 10), Rational(3)}) {
        ModelParams P(k, make_nearest_neighbour(2));
        EXPECT_EQ(asaw_weight(P, W("0,0;1,0;2,0")), Rational(1, 16));
        EXPECT_EQ(asaw_weight(P, W("0,0;0,1;1,1;1,0")), (1 + k) / 64);
        EXPECT_EQ(asaw_weight(P, fixtures::reference_walk()), pow(1 + k, 7) * pow(Rational(1, 4), 30));
    }
}

TEST(Model, ConditionalWeight) {
    ModelParams P(Rational(1, 10), make_nearest_neighbour(2));
    Walk w = W("0,0;0,1;1,1");
    EXPECT_EQ(conditional_weight(P, w, Walk()), asaw_weight(P, w));
    EXPECT_EQ(conditional_weight(P, w, W("1,0;0,0")), asaw_weight(P, w) * Rational(11, 10));
}

TEST(Model, ConditionalWeightFactorizesOverEverySplit) {
    ModelParams P(Rational(1, 7), make_nearest_neighbour(2));
    long checked = 0;
    enumerate_walks(P, 7, WalkFilter::saw, [&](const Walk& w) {
        for (int m = 0; m <= w.steps(); ++m) {
            Walk eta = translate(subwalk(w, 0, m), -w[m]);
            Walk om = normalized(subwalk(w, m, w.steps()));
            EXPECT_EQ(asaw_weight(P, w), asaw_weight(P, eta) * conditional_weight(P, om, eta)) << w.str() << " m=" << m;
            ++checked;
        }
    });
    EXPECT_GT(checked, 10000);
}

TEST(Model, MemoryValidation) {
    EXPECT_NO_THROW(make_memory(W("1,0;0,0")));
    EXPECT_NO_THROW(make_memory(W("0,0;1,0;1,1;0,1;0,0")));
    EXPECT_THROW(make_memory(W("0,0;1,0")), std::invalid_argument);
}

TEST(Model, InteractionCoefficients) {
    ModelParams P(Rational(1, 10), make_nearest_neighbour(2));
    EXPECT_EQ(u_ij(P, W("0,0;1,0;0,0"), 0, 2), Rational(1));
    EXPECT_EQ(u_ij(P, W("0,0;0,1;1,1;1,0"), 0, 3), Rational(-1, 10));
    EXPECT_EQ(u_ij(P, W("0,0;1,0;2,0;3,0"), 0, 3), Rational(0));
    EXPECT_THROW(u_ij(P, W("0,0;1,0"), 0, 1), std::out_of_range);
    EXPECT_EQ(r_kappa(P, Point{0, 0}), Rational(1));
    EXPECT_EQ(r_kappa(P, Point{1, 0}), Rational(1, 10));
    EXPECT_EQ(r_kappa(P, Point{2, 0}), Rational(0));
}

TEST(Model, SpreadOutDiagonalStepsCarryNoPlaquetteInteraction) {
    ModelParams P(Rational(1, 10), make_spread_out(2, 1));
    // Steps (0,0)->(1,1) and (1,0)->(2,1) are parallel but not unit edges.
    EXPECT_EQ(u_ij(P, W("0,0;1,1;1,0;2,1"), 0, 3), Rational(0));
}

TEST(Model, InteractionProductExamples) {
    ModelParams P(Rational(1, 3), make_nearest_neighbour(2));
    Walk f = normalized(fixtures::reference_walk());
    EXPECT_EQ(interaction_product(P, f), asaw_weight(P, f));
    EXPECT_EQ(interaction_product(P, W("0,0;1,0;1,1;0,1;0,0;0,-1")), Rational(0));
    EXPECT_EQ(interaction_product(P, W("0,0;1,0;0,0")), Rational(0));
}
