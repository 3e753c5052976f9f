#include <asaw/lattice.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace asaw;

namespace {

UnitEdge E(Point a, Point b) { return *UnitEdge::make(a, b); }

// Every plaquette with base in [-r, r]^d.
std::vector<Plaquette> plaquettes_in_box(int d, int r) {
    std::vector<Plaquette> out;
    std::vector<int> c(static_cast<std::size_t>(d), -r);
    while (true) {
        Point b(d);
        for (int a = 0; a < d; ++a) b[a] = c[static_cast<std::size_t>(a)];
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) out.push_back(make_plaquette(b, i, j));
        int a = 0;
        while (a < d && ++c[static_cast<std::size_t>(a)] > r) {
            c[static_cast<std::size_t>(a)] = -r;
            ++a;
        }
        if (a == d) break;
    }
    return out;
}

}  // namespace

TEST(Lattice, PlaquetteOfEdgesExamples) {
    auto P = plaquette_of_edges(E({0, 0}, {0, 1}), E({1, 0}, {1, 1}));
    ASSERT_TRUE(P);
    EXPECT_EQ(P->base, (Point{0, 0}));
    EXPECT_EQ(P->i, 0);
    EXPECT_EQ(P->j, 1);
    EXPECT_FALSE(plaquette_of_edges(E({0, 0}, {0, 1}), E({0, 1}, {1, 1})));
    EXPECT_FALSE(plaquette_of_edges(E({0, 0}, {0, 1}), E({2, 0}, {2, 1})));
}

TEST(Lattice, PlaquetteOfEdgesDimensionMismatchThrows) {
    EXPECT_THROW(plaquette_of_edges(E({0, 0}, {0, 1}), E(Point{1, 0, 0}, Point{1, 1, 0})), std::invalid_argument);
}

TEST(Lattice, PlaquetteOfEdgesMatchesFourVertexDefinition) {
    // All unit edges in a 5x5 box.
    std::vector<UnitEdge> edges;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
            if (x + 1 < 5) edges.push_back(E({x, y}, {x + 1, y}));
            if (y + 1 < 5) edges.push_back(E({x, y}, {x, y + 1}));
        }
    for (const auto& e : edges)
        for (const auto& f : edges) {
            auto P = plaquette_of_edges(e, f);
            auto Q = plaquette_of_edges(f, e);
            EXPECT_EQ(P.has_value(), Q.has_value());
            if (P) EXPECT_EQ(*P, *Q);
            std::set<Point> vs{e.a, e.b, f.a, f.b};
            bool brute = false;
            if (vs.size() == 4)
                for (const auto& cand : plaquettes_in_box(2, 5)) {
                    auto cv = cand.vertices();
                    if (std::set<Point>(cv.begin(), cv.end()) == vs) brute = true;
                }
            EXPECT_EQ(P.has_value(), brute);
        }
}

TEST(Lattice, IncidentPlaquetteCounts) {
    EXPECT_EQ(incident_plaquettes(Point{0, 0}).size(), 4u);
    EXPECT_EQ(incident_plaquettes(E({0, 0}, {1, 0})).size(), 2u);
    EXPECT_EQ(incident_plaquettes(origin(3)).size(), 12u);
    for (int d = 2; d <= 5; ++d) {
        EXPECT_EQ(incident_plaquettes(origin(d)).size(), static_cast<std::size_t>(2 * d * (d - 1)));
        EXPECT_EQ(incident_plaquettes(E(origin(d), unit_vector(d, 0))).size(), static_cast<std::size_t>(2 * (d - 1)));
        for (const auto& P : incident_plaquettes(origin(d))) EXPECT_TRUE(P.contains(origin(d)));
    }
}

TEST(Lattice, NeighbourhoodSizeIsEightDMinusOneSquared) {
    for (int d = 2; d <= 4; ++d) {
        Plaquette P = make_plaquette(origin(d), 0, 1);
        long count = 0;
        for (const auto& Q : plaquettes_in_box(d, 2))
            if (!(Q == P) && share_vertex(P, Q)) ++count;
        EXPECT_EQ(count, 8L * (d - 1) * (d - 1)) << "d=" << d;
    }
}

TEST(Lattice, Symmetries) {
    EXPECT_EQ(translate(Point{1, 2}, Point{0, 1}), (Point{1, 3}));
    EXPECT_EQ(reflect(Point{3, -1}, 0), (Point{-3, -1}));
    EXPECT_EQ(reflect(reflect(Point{3, -1}, 0), 0), (Point{3, -1}));
    Plaquette P = make_plaquette(Point{2, 5}, 0, 1);
    Plaquette R = reflect(P, 0);
    EXPECT_EQ(R.base, (Point{-3, 5}));
    EXPECT_EQ(reflect(R, 0), P);
    EXPECT_EQ(translate(P, Point{-2, -5}).base, (Point{0, 0}));
}

TEST(Lattice, CanonicalPlaquetteForm) {
    auto a = make_plaquette(Point{0, 0, 0}, 2, 0);
    auto b = make_plaquette(Point{0, 0, 0}, 0, 2);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.i, 0);
    EXPECT_EQ(a.j, 2);
    EXPECT_NE(make_plaquette(Point{0, 0, 0}, 0, 1), b);
    EXPECT_EQ(a.str(), "(0,0,0)[1,3]");
}
