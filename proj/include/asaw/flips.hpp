#pragma once

#include "lattice.hpp"
#include "rational.hpp"
#include "walk.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace asaw {

// Pairwise vertex-disjoint plaquettes, kept in canonical order.
class FlipSet {
public:
    FlipSet() = default;
    explicit FlipSet(std::vector<Plaquette> ps) : ps_(std::move(ps)) {
        std::sort(ps_.begin(), ps_.end());
        ps_.erase(std::unique(ps_.begin(), ps_.end()), ps_.end());
        for (std::size_t a = 0; a < ps_.size(); ++a)
            for (std::size_t b = a + 1; b < ps_.size(); ++b)
                if (share_vertex(ps_[a], ps_[b])) throw std::invalid_argument("flip set is not vertex-disjoint");
    }
    const std::vector<Plaquette>& plaquettes() const { return ps_; }
    std::size_t size() const { return ps_.size(); }
    bool empty() const { return ps_.empty(); }
    friend bool operator==(const FlipSet&, const FlipSet&) = default;

private:
    std::vector<Plaquette> ps_;
};

// Replace the unique edge of w in P by the other three sides of P.
inline Walk flip(const Plaquette& P, const Walk& w) {
    auto idx = flippable_index(P, w);
    if (!idx) return w;
    int i = *idx;
    const Point& a = w[i];
    const Point& b = w[i + 1];
    int ax = unit_axis(b - a);
    int ox = P.i == ax ? P.j : P.i;
    Point t = unit_vector(w.dim(), ox, a[ox] == P.base[ox] ? 1 : -1);
    std::vector<Point> vs(w.vertices().begin(), w.vertices().begin() + i + 1);
    vs.push_back(a + t);
    vs.push_back(b + t);
    vs.insert(vs.end(), w.vertices().begin() + i + 1, w.vertices().end());
    return Walk(std::move(vs));
}

inline Walk flip_set(const FlipSet& B, const Walk& w) {
    Walk out = w;
    for (const auto& P : B.plaquettes()) out = flip(P, out);
    return out;
}

// Greedy pass in canonical order; keeps P when it is disjoint from all kept so far.
inline std::vector<Plaquette> greedy_disjoint(std::vector<Plaquette> A) {
    std::sort(A.begin(), A.end());
    A.erase(std::unique(A.begin(), A.end()), A.end());
    std::vector<Plaquette> out;
    for (const auto& P : A) {
        bool ok = true;
        for (const auto& Q : out)
            if (share_vertex(P, Q)) {
                ok = false;
                break;
            }
        if (ok) out.push_back(P);
    }
    return out;
}

// The committed choice adj*: first ceil(alpha |A|) plaquettes of the greedy pass.
inline std::vector<Plaquette> committed_subset(const std::vector<Plaquette>& A, const Rational& alpha) {
    auto g = greedy_disjoint(A);
    std::set<Plaquette> uniq(A.begin(), A.end());
    long need = ceil_long(alpha * Rational(static_cast<long>(uniq.size())));
    if (static_cast<long>(g.size()) < need) throw std::logic_error("greedy selection below the alpha fraction");
    g.resize(static_cast<std::size_t>(need));
    return g;
}

struct Unflipped {
    Walk w;
    FlipSet B;
};

// Recover (w, B) from flip_B(w) given the memory eta: every flipped plaquette
// has its middle edge on eta, and possibly one side edge as well.
inline Unflipped unflip_with_memory(const Walk& flipped, const Walk& eta) {
    std::set<UnitEdge> memory = eta.empty() ? std::set<UnitEdge>{} : unit_edge_set(eta);
    int n = flipped.steps();
    std::vector<int> shared;
    for (int i = 0; i < n; ++i) {
        auto e = UnitEdge::make(flipped[i], flipped[i + 1]);
        if (e && memory.count(*e)) shared.push_back(i);
    }
    auto fail = [] { throw std::invalid_argument("no consistent unflip preimage"); };
    std::vector<std::pair<int, Plaquette>> found;  // (start of the three-edge detour, plaquette)
    for (std::size_t k = 0; k < shared.size();) {
        int i = shared[k];
        int start;
        if (k + 1 < shared.size() && shared[k + 1] == i + 1) {
            if (k + 2 < shared.size() && shared[k + 2] == i + 2) fail();
            if (i + 2 > n) fail();
            // Two perpendicular sides meeting at flipped[i+1] span the plaquette.
            Point corner = flipped[i] + flipped[i + 2] - flipped[i + 1];
            if (i + 3 <= n && flipped[i + 3] == corner) {
                start = i;
            } else if (i >= 1 && flipped[i - 1] == corner) {
                start = i - 1;
            } else {
                fail();
            }
            k += 2;
        } else {
            start = i - 1;
            k += 1;
        }
        if (start < 0 || start + 3 > n) fail();
        auto e1 = UnitEdge::make(flipped[start], flipped[start + 3]);
        auto e2 = UnitEdge::make(flipped[start + 1], flipped[start + 2]);
        if (!e1 || !e2) fail();
        auto P = plaquette_of_edges(*e1, *e2);
        if (!P) fail();
        found.emplace_back(start, *P);
    }
    std::vector<Point> vs = flipped.vertices();
    for (auto it = found.rbegin(); it != found.rend(); ++it) {
        int s = it->first;
        vs.erase(vs.begin() + s + 1, vs.begin() + s + 3);
    }
    std::vector<Plaquette> ps;
    for (const auto& f : found) ps.push_back(f.second);
    Unflipped out{Walk(std::move(vs)), FlipSet(ps)};
    for (const auto& P : out.B.plaquettes())
        if (!is_flippable(P, out.w)) fail();
    if (flip_set(out.B, out.w) != flipped) fail();
    return out;
}

}  // namespace asaw
