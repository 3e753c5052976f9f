#include "fixtures.hpp"

#include <asaw/checks.hpp>
#include <asaw/enumerate.hpp>

#include <gtest/gtest.h>

using namespace asaw;
using fixtures::W;

namespace {
ModelParams nn2(const Rational& k = 0) { return ModelParams(k, make_nearest_neighbour(2)); }
long count(const ModelParams& P, int n, WalkFilter f) {
    long c = 0;
    enumerate_walks(P, n, f, [&](const Walk& w) { c += w.steps() == n; });
    return c;
}
}  // namespace

TEST(Enumerate, SawCounts) {
    EXPECT_EQ(count(nn2(), 0, WalkFilter::saw), 1);
    EXPECT_EQ(count(nn2(), 3, WalkFilter::saw), 36);
    EXPECT_EQ(count(nn2(), 4, WalkFilter::saw), 100);
    EXPECT_EQ(count(nn2(), 10, WalkFilter::saw), 44100);
    EXPECT_EQ(count(nn2(), 4, WalkFilter::walks), 256);
    EXPECT_EQ(count(nn2(), 4, WalkFilter::polygon), 8);
    EXPECT_EQ(count(ModelParams(0, make_nearest_neighbour(3)), 3, WalkFilter::saw), 150);
}

TEST(Enumerate, ZeroStepWalkOnly) {
    std::vector<Walk> seen;
    enumerate_walks(nn2(), 0, WalkFilter::saw, [&](const Walk& w) { seen.push_back(w); });
    ASSERT_EQ(seen.size(), 1u);
    EXPECT_EQ(seen[0], Walk::zero_step(2));
}

TEST(Enumerate, ClassesAreNested) {
    ModelParams P = nn2();
    enumerate_walks(P, 7, WalkFilter::bridge, [&](const Walk& w) {
        auto c = classify(w);
        EXPECT_TRUE(c.bridge && c.half_space && c.self_avoiding) << w.str();
    });
    EXPECT_EQ(count(P, 7, WalkFilter::bridge) <= count(P, 7, WalkFilter::half_space), true);
}

TEST(Enumerate, MassesAtSmallN) {
    auto t = mass_table(nn2(Rational(1, 10)), 4, false);
    EXPECT_EQ(t.c[0], 1);
    EXPECT_EQ(t.c[1], 1);
    EXPECT_EQ(t.c[2], Rational(3, 4));
    EXPECT_EQ(t.c[3], Rational(9, 16) + Rational(1, 8) * Rational(1, 10));
    auto z = mass_table(nn2(), 12, false);
    EXPECT_EQ(z.b[2], Rational(3, 16));
    EXPECT_EQ(z.b[12], Rational(26083, 16777216));
}

TEST(Enumerate, MassPolynomialsMatchDirectWeights) {
    ModelParams P = nn2(Rational(1, 3));
    auto t = mass_table(P, 8, false);
    for (int n = 0; n <= 8; ++n) {
        Rational direct = 0;
        enumerate_walks(P, n, WalkFilter::saw, [&](const Walk& w) {
            if (w.steps() == n) direct += asaw_weight(P, w);
        });
        EXPECT_EQ(t.c[static_cast<std::size_t>(n)], direct) << n;
    }
}

TEST(Enumerate, MarkedMassesSumToHalfSpaceMass) {
    auto t = mass_table(nn2(Rational(1, 10)), 9, true);
    for (int n = 0; n <= 9; ++n) {
        Rational s = 0;
        for (const auto& [k, v] : t.h_by_k[static_cast<std::size_t>(n)]) s += v;
        EXPECT_EQ(s, t.h[static_cast<std::size_t>(n)]) << n;
    }
}

TEST(Enumerate, TwoPointCoefficients) {
    auto G = two_point_coeffs(nn2(Rational(1, 10)), 6);
    EXPECT_EQ(G.coeff(origin(2), 0), 1);
    EXPECT_EQ(G.coeff(unit_vector(2, 0), 1), Rational(1, 4));
    EXPECT_EQ(G.coeff(origin(2), 1), 0);
    EXPECT_EQ(G.coeff(Point{1, 1}, 2), Rational(1, 8));
    Series tot = G.total();
    auto t = mass_table(nn2(Rational(1, 10)), 6, false);
    for (int n = 0; n <= 6; ++n) EXPECT_EQ(tot[n], t.c[static_cast<std::size_t>(n)]);
}

TEST(Enumerate, MemoryTwoPoint) {
    ModelParams P = nn2(Rational(1, 10));
    Walk eta = W("1,0;0,0");
    auto G = memory_two_point_coeffs(P, eta, 3, false, 0);
    EXPECT_EQ(G.coeff(unit_vector(2, 0), 1), 0);
    EXPECT_EQ(G.coeff(unit_vector(2, 0, -1), 1), Rational(1, 4));
    // The second step runs parallel to the memory edge.
    EXPECT_EQ(G.coeff(Point{1, 1}, 2), Rational(11, 10) / 16);
    auto L = memory_two_point_coeffs(P, eta, 3, false, 2);
    EXPECT_EQ(L.coeff(unit_vector(2, 0, -1), 1), 0);
    EXPECT_EQ(L.coeff(Point{1, 1}, 2), G.coeff(Point{1, 1}, 2));
    auto E = memory_two_point_coeffs(P, eta, 3, true, 0);
    EXPECT_GT(E.coeff(unit_vector(2, 0), 1), 0);
    EXPECT_THROW(memory_two_point_coeffs(P, W("0,0;1,0"), 3, false, 0), std::invalid_argument);
}

TEST(Enumerate, TorusSusceptibility) {
    auto chi = torus_susceptibility(nn2(), 3, 8);
    std::vector<Rational> want{1, 1, Rational(3, 4), Rational(1, 2), Rational(5, 16), Rational(5, 32), Rational(1, 16), Rational(37, 2048), Rational(21, 8192)};
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(chi[n], want[static_cast<std::size_t>(n)]) << n;
    EXPECT_THROW(torus_susceptibility(nn2(), 2, 4), std::invalid_argument);
}

TEST(Enumerate, SpreadOutMasses) {
    auto D = make_spread_out(2, 1);
    auto t = mass_table(ModelParams(Rational(1, 10), D), 2, false);
    EXPECT_EQ(t.c[1], 1);
    EXPECT_EQ(t.c[2], Rational(7, 8));
}

TEST(Enumerate, CapsAreEnforced) {
    EXPECT_THROW(mass_table(nn2(), 15, false), std::invalid_argument);
    EXPECT_THROW(two_point_coeffs(ModelParams(0, make_spread_out(2, 1)), 8), std::invalid_argument);
}

TEST(Enumerate, Lemma61AndSupermultiplicativity) {
    auto D = make_nearest_neighbour(2);
    std::vector<Rational> ks{Rational(0), Rational(1, 4)};
    auto a = checks::interaction_product_identity(D, 5, ks);
    EXPECT_TRUE(a["passed"].get<bool>()) << a.dump(2);
    auto b = checks::bridge_supermultiplicativity(D, 10, ks);
    EXPECT_TRUE(b["passed"].get<bool>()) << b.dump(2);
}
