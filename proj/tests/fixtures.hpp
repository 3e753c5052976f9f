#pragma once

// Hand-checked reference walks, plus small helpers shared by the unit tests.

#include <asaw/walk.hpp>

#include <cstdlib>
#include <initializer_list>
#include <utility>
#include <vector>

namespace asaw::fixtures {

// Expands a corner path with axis-parallel segments into unit steps.
inline Walk corner_path(std::initializer_list<std::pair<int, int>> corners) {
    std::vector<Point> vs;
    auto it = corners.begin();
    vs.push_back(Point{it->first, it->second});
    for (++it; it != corners.end(); ++it) {
        Point cur = vs.back();
        int dx = it->first - static_cast<int>(cur[0]), dy = it->second - static_cast<int>(cur[1]);
        if (dx != 0 && dy != 0) std::abort();
        int len = std::abs(dx) + std::abs(dy);
        for (int s = 1; s <= len; ++s) {
            Point p = cur;
            p[0] += (dx > 0) - (dx < 0);
            p[1] += (dy > 0) - (dy < 0);
            vs.push_back(p);
            cur = p;
        }
    }
    return Walk(std::move(vs));
}

// Seven adjacent pairs, 30 steps.
inline Walk reference_walk() {
    return corner_path({{0, 0}, {0, 1}, {1, 1}, {1, 0}, {3, 0}, {3, 1}, {2, 1}, {2, 2}, {1, 2}, {1, 3}, {3, 3}, {3, 2}, {4, 2},
                        {4, 1}, {6, 1}, {6, 3}, {5, 3}, {5, 4}, {8, 4}, {8, 3}, {7, 3}, {7, 0}, {8, 0}});
}

// Before and after flipping the plaquette with base (1,2).
inline Walk flip_before() { return corner_path({{0, 0}, {0, 1}, {1, 1}, {1, 2}, {2, 2}, {2, 1}, {3, 1}, {3, 3}, {4, 3}}); }
inline Walk flip_after() { return corner_path({{0, 0}, {0, 1}, {1, 1}, {1, 3}, {2, 3}, {2, 1}, {3, 1}, {3, 3}, {4, 3}}); }

// Half-space walk starting at (2,7) with its bridge point at (10,1).
inline Walk half_space_reference() {
    return corner_path({{2, 7}, {6, 7}, {6, 8}, {5, 8}, {5, 9}, {8, 9}, {8, 8}, {9, 8}, {9, 9}, {10, 9}, {10, 7}, {9, 7},
                        {9, 6}, {8, 6}, {8, 5}, {10, 5}, {10, 1}, {6, 1}, {6, 2}, {7, 2}, {7, 3}, {9, 3}, {9, 4},
                        {6, 4}, {6, 3}, {5, 3}, {5, 6}, {3, 6}, {3, 3}, {4, 3}, {4, 1}});
}

// Its image: first bridge flipped at bases (4,6) and (9,3), remainder reflected.
inline Walk half_space_reference_image() {
    return corner_path({{2, 7}, {4, 7}, {4, 6}, {5, 6}, {5, 7}, {6, 7}, {6, 8}, {5, 8}, {5, 9}, {8, 9}, {8, 8}, {9, 8},
                        {9, 9}, {10, 9}, {10, 7}, {9, 7}, {9, 6}, {8, 6}, {8, 5}, {10, 5}, {10, 4}, {9, 4}, {9, 3},
                        {10, 3}, {10, 1}, {14, 1}, {14, 2}, {13, 2}, {13, 3}, {11, 3}, {11, 4}, {14, 4}, {14, 3},
                        {15, 3}, {15, 6}, {17, 6}, {17, 3}, {16, 3}, {16, 1}});
}

inline Walk W(const char* s) { return parse_walk(s); }

}  // namespace asaw::fixtures
