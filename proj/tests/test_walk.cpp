#include "fixtures.hpp"

#include <asaw/walk.hpp>

#include <gtest/gtest.h>

using namespace asaw;
using fixtures::W;

TEST(Walk, ParseAndPrintRoundTrip) {
    Walk w = W("0,0;1,0;1,1");
    EXPECT_EQ(w.steps(), 2);
    EXPECT_EQ(w.dim(), 2);
    EXPECT_EQ(w.str(), "0,0;1,0;1,1");
    EXPECT_EQ(parse_walk(w.str()), w);
    EXPECT_THROW(W("0,0;0,0"), std::invalid_argument);
    EXPECT_THROW(W("0,0;1"), std::invalid_argument);
    EXPECT_THROW(W("0,x"), std::invalid_argument);
}

TEST(Walk, ClassifyExamples) {
    auto c = classify(W("0,0;1,0"));
    EXPECT_TRUE(c.bridge);
    EXPECT_EQ(c.span, 1);
    EXPECT_EQ(c.bridge_point, 1);

    c = classify(W("0,0;1,0;2,0;2,1;1,1"));
    EXPECT_TRUE(c.half_space);
    EXPECT_FALSE(c.bridge);
    EXPECT_EQ(c.span, 2);
    EXPECT_EQ(c.bridge_point, 3);

    c = classify(W("0,0;1,0;1,1;0,1;0,0"));
    EXPECT_TRUE(c.polygon);
    EXPECT_FALSE(c.self_avoiding);
    EXPECT_FALSE(c.half_space);
}

TEST(Walk, ZeroStepWalkIsABridge) {
    auto c = classify(Walk::zero_step(2));
    EXPECT_TRUE(c.self_avoiding);
    EXPECT_TRUE(c.bridge);
    EXPECT_EQ(c.span, 0);
}

TEST(Walk, AdjacentPairsReferenceWalk) {
    Walk w = fixtures::reference_walk();
    EXPECT_EQ(w.steps(), 30);
    EXPECT_TRUE(is_self_avoiding(w));
    auto a = adj_pairs(w);
    EXPECT_EQ(a.pair_count, 7);
    // The seven plaquettes spanned by its adjacent pairs.
    std::vector<Plaquette> expect;
    for (auto [x, y] : std::vector<std::pair<int, int>>{{1, 2}, {0, 0}, {2, 0}, {6, 1}, {6, 2}, {5, 3}, {7, 3}})
        expect.push_back(make_plaquette(Point{x, y}, 0, 1));
    std::sort(expect.begin(), expect.end());
    EXPECT_EQ(a.plaquettes, expect);
}

TEST(Walk, AdjacentPairsSmallExamples) {
    EXPECT_EQ(adj_pairs(W("0,0;0,1;1,1;1,0")).pair_count, 1);
    auto sq = adj_pairs(W("0,0;1,0;1,1;0,1;0,0"));
    EXPECT_EQ(sq.pair_count, 2);
    EXPECT_EQ(sq.plaquettes.size(), 1u);
    EXPECT_EQ(adj_pairs(W("0,0;1,0;2,0")).pair_count, 0);
}

TEST(Walk, AdjBetweenExamples) {
    auto A = adj_between(W("0,0;0,1"), W("1,0;1,1"), false);
    ASSERT_EQ(A.size(), 1u);
    EXPECT_EQ(A[0], make_plaquette(Point{0, 0}, 0, 1));
    Walk f = fixtures::reference_walk();
    EXPECT_EQ(adj_between(f, f, false), adj_pairs(f).plaquettes);
    EXPECT_TRUE(adj_between(W("0,0;1,0"), W("0,3;1,3"), false).empty());
    EXPECT_TRUE(adj_between(W("0,0;1,0"), W("5,5;5,6"), false).empty());
}

TEST(Walk, CrossPairsCountsIndexPairs) {
    // Memory (e1, o) against (o, e2, e1+e2): one spanning pair.
    EXPECT_EQ(cross_pairs(W("1,0;0,0"), W("0,0;0,1;1,1")), 1);
    EXPECT_EQ(cross_pairs(Walk(), W("0,0;0,1")), 0);
}

TEST(Walk, ConcatExamples) {
    EXPECT_EQ(concat(W("0,0;1,0"), W("0,0;0,1")), W("0,0;1,0;1,1"));
    Walk w = W("0,0;1,0;1,1");
    EXPECT_EQ(concat(w, Walk::zero_step(2)), w);
    auto b = concat(W("0,0;1,0"), W("0,0;1,0"));
    EXPECT_TRUE(classify(b).bridge);
    EXPECT_EQ(b.steps(), 2);
}

TEST(Walk, ReverseExamples) {
    Walk w = W("0,0;1,0;1,1");
    EXPECT_EQ(reverse(w), W("1,1;1,0;0,0"));
    EXPECT_EQ(reverse(reverse(w)), w);
    Walk f = fixtures::reference_walk();
    EXPECT_EQ(adj_pairs(reverse(f)).pair_count, adj_pairs(f).pair_count);
}

TEST(Walk, SubwalkExamples) {
    Walk w = W("0,0;1,0;1,1");
    EXPECT_EQ(subwalk(w, 0, 1), W("0,0;1,0"));
    EXPECT_EQ(subwalk(w, 0, w.steps()), w);
    Walk f = fixtures::reference_walk();
    for (int m = 0; m <= f.steps(); ++m) EXPECT_EQ(concat(subwalk(f, 0, m), normalized(subwalk(f, m, f.steps()))), f);
    EXPECT_THROW(subwalk(w, 2, 1), std::out_of_range);
}

TEST(Walk, Flippability) {
    Plaquette P = make_plaquette(Point{0, 0}, 0, 1);
    EXPECT_TRUE(is_flippable(P, W("0,0;1,0")));
    EXPECT_FALSE(is_flippable(P, W("0,0;1,0;1,1")));
    EXPECT_FALSE(is_flippable(P, W("3,3;4,3")));
    // Two walk vertices in P that are not joined by a walk edge.
    EXPECT_FALSE(is_flippable(P, W("0,0;-1,0;-1,1;0,1")));
}

TEST(Walk, ReflectionInvolution) {
    Walk f = fixtures::reference_walk();
    EXPECT_EQ(reflect(reflect(f, 0), 0), f);
    EXPECT_EQ(reflect(reflect(f, 1), 1), f);
    EXPECT_EQ(adj_pairs(reflect(f, 1)).pair_count, 7);
}
