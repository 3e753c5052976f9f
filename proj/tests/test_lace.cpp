#include "fixtures.hpp"

#include <asaw/checks.hpp>
#include <asaw/lace.hpp>

#include <gtest/gtest.h>

using namespace asaw;
using fixtures::W;

namespace {

IntervalGraph G(int a, int b, std::vector<Edge> es) { return IntervalGraph(a, b, std::move(es)); }

// Closed-form description of the edges compatible with a lace, in terms of
// the interval structure I_l = (M_{l-1}, M_l].
bool classified_compatible(const Lace& L, int i, int j) {
    int parts = static_cast<int>(L.composition.size());
    int n = L.M.back();
    auto M = [&](int k) { return k < 0 ? 0 : L.M[static_cast<std::size_t>(k)]; };
    if (L.graph.has({i, j})) return false;
    int l = 1;
    while (l < parts && !(M(l - 1) < j && j <= M(l))) ++l;
    int m = L.m;
    int k, hi;
    if (l % 2 == 1) {
        k = (l - 1) / 2;
        hi = M(2 * k + 1);
    } else {
        k = (l - 2) / 2;
        hi = M(2 * k + 2);
    }
    int lo = M(2 * k - 2);
    bool in = (lo < i && i <= hi) || (i == lo && k != 1);
    if (!in) return false;
    if (j == n && i <= M(2 * m - 3)) return false;
    if (l % 2 == 0 && j == M(2 * k + 2) && i <= M(2 * k - 1)) return false;
    return true;
}

}  // namespace

TEST(Lace, GraphPredicates) {
    EXPECT_TRUE(is_connected(G(0, 4, {{0, 2}, {1, 4}})));
    EXPECT_FALSE(is_connected(G(0, 4, {{0, 2}, {2, 4}})));
    EXPECT_TRUE(is_lace(G(0, 4, {{0, 2}, {1, 4}})));
    EXPECT_FALSE(is_lace(G(0, 4, {{0, 3}, {0, 4}})));
    auto f = graph_predicates(G(0, 5, {{0, 3}, {2, 5}, {1, 4}}));
    EXPECT_TRUE(f.connected);
    EXPECT_FALSE(f.lace);
    EXPECT_THROW(G(0, 4, {{0, 1}}), std::invalid_argument);
}

TEST(Lace, LaceMapExamples) {
    auto L = lace_map(G(0, 10, {{0, 3}, {0, 5}, {2, 7}, {4, 8}, {5, 10}, {6, 8}}));
    EXPECT_EQ(L, G(0, 10, {{0, 5}, {4, 8}, {5, 10}}));
    EXPECT_EQ(lace_map(G(0, 4, {{0, 4}, {0, 3}, {1, 4}})), G(0, 4, {{0, 4}}));
    EXPECT_THROW(lace_map(G(0, 4, {{0, 2}})), std::invalid_argument);
}

TEST(Lace, LaceMapIsIdempotentAndProducesLaces) {
    for (int n = 2; n <= 6; ++n) {
        auto es = all_edges(0, n);
        for (unsigned long mask = 1; mask < (1UL << es.size()); ++mask) {
            std::vector<Edge> pick;
            for (std::size_t k = 0; k < es.size(); ++k)
                if (mask >> k & 1UL) pick.push_back(es[k]);
            IntervalGraph g(0, n, pick);
            if (!is_connected(g)) continue;
            auto L = lace_map(g);
            ASSERT_TRUE(is_lace(L));
            ASSERT_EQ(lace_map(L), L);
            for (const auto& e : L.edges) ASSERT_TRUE(g.has(e));
        }
    }
}

TEST(Lace, SingleEdgeLaceAdmitsEverything) {
    for (int n = 2; n <= 7; ++n) {
        auto c = compatible_edges(G(0, n, {{0, n}}));
        EXPECT_EQ(c.size(), all_edges(0, n).size() - 1);
    }
}

TEST(Lace, CompatibleEdgesMatchClassification) {
    long laces = 0;
    for (int n = 2; n <= 7; ++n)
        for (int m = 1; m <= n; ++m) {
            if (2 * m - 1 > n + m - 1) break;
            for (const auto& L : enumerate_laces(n, m)) {
                ++laces;
                auto c = compatible_edges(L.graph);
                std::vector<Edge> want;
                for (const auto& e : all_edges(0, n))
                    if (classified_compatible(L, e.first, e.second)) want.push_back(e);
                ASSERT_EQ(c, want) << "n=" << n << " m=" << m;
            }
        }
    EXPECT_GT(laces, 100);
}

TEST(Lace, LaceCountsByBruteForce) {
    EXPECT_EQ(enumerate_laces(4, 1).size(), 1u);
    EXPECT_EQ(enumerate_laces(4, 2).size(), 3u);
    for (int n = 2; n <= 6; ++n) {
        auto es = all_edges(0, n);
        std::map<int, std::set<std::vector<Edge>>> by_m;
        for (unsigned long mask = 1; mask < (1UL << es.size()); ++mask) {
            std::vector<Edge> pick;
            for (std::size_t k = 0; k < es.size(); ++k)
                if (mask >> k & 1UL) pick.push_back(es[k]);
            IntervalGraph g(0, n, pick);
            if (is_lace(g)) by_m[static_cast<int>(pick.size())].insert(g.edges);
        }
        for (const auto& [m, graphs] : by_m) {
            std::set<std::vector<Edge>> got;
            for (const auto& L : enumerate_laces(n, m)) got.insert(L.graph.edges);
            EXPECT_EQ(got, graphs) << "n=" << n << " m=" << m;
        }
    }
}

TEST(Lace, CompositionConstraints) {
    EXPECT_THROW(lace_from_composition({1, 1}), std::invalid_argument);
    EXPECT_THROW(lace_from_composition({0, 2, 1}), std::invalid_argument);
    auto L = lace_from_composition({1, 1, 0, 1, 1});
    EXPECT_EQ(L.m, 3);
    EXPECT_EQ(L.graph.edges.size(), 3u);
}

TEST(Lace, KAndJAgreeAcrossMethods) {
    ModelParams P(Rational(1, 10), make_nearest_neighbour(2));
    long checked = 0;
    enumerate_walks(P, 5, WalkFilter::walks, [&](const Walk& w) {
        if (w.steps() < 2) return;
        int n = w.steps();
        ASSERT_EQ(K_value(P, w, 0, n), K_value(P, w, 0, n, KMethod::graph_sum)) << w.str();
        ASSERT_EQ(J_value(P, w, 0, n), J_value(P, w, 0, n, JMethod::lace_sum)) << w.str();
        ++checked;
    });
    EXPECT_EQ(checked, 16 + 64 + 256 + 1024);
}

TEST(Lace, PiAtOriginAtKappaZero) {
    auto Pi = pi_coeffs(ModelParams(0, make_nearest_neighbour(2)), 0, 8);
    std::vector<Rational> want{0, 0, Rational(-1, 4), 0, Rational(-3, 64), 0, Rational(-15, 1024), 0, Rational(-83, 16384)};
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(Pi.coeff(origin(2), n), want[static_cast<std::size_t>(n)]) << n;
}

TEST(Lace, OneLaceTermAtOrderTwo) {
    auto pi1 = pi_coeffs(ModelParams(Rational(1, 10), make_nearest_neighbour(2)), 1, 4);
    EXPECT_EQ(pi1.coeff(origin(2), 2), Rational(-1, 4));
}

TEST(Lace, LaceSumsReassemblePi) {
    ModelParams P(Rational(1, 7), make_nearest_neighbour(2));
    PiOptions opt;
    opt.lace_sizes = {1, 2, 3, 4, 5};
    auto poly = pi_polynomials(P.D, 6, opt);
    // No lace on six steps has more than five edges.
    SpatialSeries sum(2, 6);
    for (int m = 1; m <= 5; ++m) sum += poly.pi_m(m, P.kappa);
    auto Pi = poly.Pi(P.kappa);
    SpatialSeries diff = Pi - sum;
    diff.prune();
    EXPECT_TRUE(diff.is_zero());
}

TEST(Lace, RecursionResidualVanishes) {
    for (auto k : {Rational(0), Rational(1, 10)}) {
        auto r = recursion_residual(ModelParams(k, make_nearest_neighbour(2)), 7);
        EXPECT_TRUE(r.is_zero());
    }
    auto r3 = recursion_residual(ModelParams(Rational(1, 10), make_nearest_neighbour(3)), 5);
    EXPECT_TRUE(r3.is_zero());
}

TEST(Lace, OrderCap) { EXPECT_THROW(pi_coeffs(ModelParams(0, make_nearest_neighbour(2)), 0, 9), std::invalid_argument); }

TEST(Lace, DiagramBoundsSmall) {
    auto rep = checks::diagram_bounds(make_nearest_neighbour(2), 6, {2}, {Rational(1, 10)});
    EXPECT_TRUE(rep["passed"].get<bool>()) << rep.dump(2);
}
