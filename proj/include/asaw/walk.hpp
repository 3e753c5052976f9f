#pragma once

#include "lattice.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace asaw {

// Vertex sequence with omega_i != omega_{i-1}.  Equality is exact sequence
// equality (rooted and oriented).
class Walk {
public:
    Walk() = default;
    explicit Walk(std::vector<Point> vs) : v_(std::move(vs)) { validate(); }
    Walk(std::initializer_list<Point> vs) : v_(vs) { validate(); }

    static Walk zero_step(int d) { return Walk(std::vector<Point>{origin(d)}); }

    int steps() const { return v_.empty() ? 0 : static_cast<int>(v_.size()) - 1; }
    int dim() const { return v_.empty() ? 0 : v_.front().dim; }
    bool empty() const { return v_.empty(); }
    const Point& operator[](int i) const { return v_.at(static_cast<std::size_t>(i)); }
    const Point& front() const { return v_.front(); }
    const Point& back() const { return v_.back(); }
    const std::vector<Point>& vertices() const { return v_; }

    friend bool operator==(const Walk&, const Walk&) = default;
    friend auto operator<=>(const Walk& a, const Walk& b) { return a.v_ <=> b.v_; }

    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < v_.size(); ++i) {
            if (i) s += ';';
            s += v_[i].str();
        }
        return s;
    }

private:
    void validate() const {
        for (std::size_t i = 1; i < v_.size(); ++i) {
            require_same_dim(v_[i - 1], v_[i]);
            if (v_[i] == v_[i - 1]) throw std::invalid_argument("walk repeats a vertex consecutively");
        }
    }

    std::vector<Point> v_;
};

inline Walk parse_walk(std::string_view text) {
    std::vector<Point> pts;
    std::string s(text);
    std::stringstream ss(s);
    std::string tuple;
    int d = -1;
    while (std::getline(ss, tuple, ';')) {
        std::vector<std::int64_t> xs;
        std::stringstream ts(tuple);
        std::string num;
        while (std::getline(ts, num, ',')) {
            std::size_t used = 0;
            long long x = 0;
            try {
                x = std::stoll(num, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("malformed walk coordinate: " + num);
            }
            if (used != num.size()) throw std::invalid_argument("malformed walk coordinate: " + num);
            xs.push_back(x);
        }
        if (d < 0) d = static_cast<int>(xs.size());
        if (static_cast<int>(xs.size()) != d || d < 1 || d > kMaxDim)
            throw std::invalid_argument("inconsistent walk dimension");
        Point p(d);
        for (int i = 0; i < d; ++i) p[i] = xs[static_cast<std::size_t>(i)];
        pts.push_back(p);
    }
    if (pts.empty()) throw std::invalid_argument("empty walk");
    return Walk(std::move(pts));
}

inline Walk translate(const Walk& w, const Point& x) {
    std::vector<Point> vs;
    vs.reserve(w.vertices().size());
    for (const auto& p : w.vertices()) vs.push_back(p + x);
    return Walk(std::move(vs));
}

inline Walk reflect(const Walk& w, int axis) {
    std::vector<Point> vs;
    vs.reserve(w.vertices().size());
    for (const auto& p : w.vertices()) vs.push_back(reflect(p, axis));
    return Walk(std::move(vs));
}

// Translate so that the walk starts at the origin.
inline Walk normalized(const Walk& w) { return translate(w, -w.front()); }

inline Walk reverse(const Walk& w) {
    std::vector<Point> vs(w.vertices().rbegin(), w.vertices().rend());
    return Walk(std::move(vs));
}

inline Walk subwalk(const Walk& w, int i, int j) {
    if (i < 0 || j > w.steps() || i > j) throw std::out_of_range("subwalk indices out of range");
    return Walk(std::vector<Point>(w.vertices().begin() + i, w.vertices().begin() + j + 1));
}

inline Walk concat(const Walk& w1, const Walk& w2) {
    if (w1.empty()) return w2;
    if (w2.empty()) return w1;
    require_same_dim(w1.front(), w2.front());
    std::vector<Point> vs = w1.vertices();
    Point shift = w1.back() - w2.front();
    for (std::size_t k = 1; k < w2.vertices().size(); ++k) vs.push_back(w2.vertices()[k] + shift);
    return Walk(std::move(vs));
}

inline bool is_self_avoiding(const Walk& w) {
    std::unordered_set<Point, PointHash> seen;
    for (const auto& p : w.vertices())
        if (!seen.insert(p).second) return false;
    return true;
}

// |omega| > 2, closed, otherwise distinct.
inline bool is_polygon(const Walk& w) {
    if (w.steps() <= 2 || w.front() != w.back()) return false;
    return is_self_avoiding(subwalk(w, 0, w.steps() - 1));
}

struct WalkClass {
    bool self_avoiding = false;
    bool polygon = false;
    bool bridge = false;
    bool half_space = false;
    std::int64_t span = 0;
    std::optional<int> bridge_point;
};

inline WalkClass classify(const Walk& w) {
    WalkClass c;
    c.self_avoiding = is_self_avoiding(w);
    c.polygon = is_polygon(w);
    std::int64_t lo = w.front()[0], hi = w.front()[0];
    for (const auto& p : w.vertices()) {
        lo = std::min(lo, p[0]);
        hi = std::max(hi, p[0]);
    }
    c.span = hi - lo;
    if (!c.self_avoiding) return c;
    std::int64_t start = w.front()[0];
    bool hs = true;
    for (int i = 1; i <= w.steps(); ++i)
        if (w[i][0] <= start) hs = false;
    c.half_space = hs;
    if (hs) {
        int bp = 0;
        for (int i = 0; i <= w.steps(); ++i)
            if (w[i][0] == hi) bp = i;
        c.bridge_point = bp;
        c.bridge = w.back()[0] == hi;
    }
    return c;
}

inline std::vector<UnitEdge> unit_edges(const Walk& w) {
    std::vector<UnitEdge> out;
    for (int i = 0; i < w.steps(); ++i)
        if (auto e = UnitEdge::make(w[i], w[i + 1])) out.push_back(*e);
    return out;
}

inline std::set<UnitEdge> unit_edge_set(const Walk& w) {
    auto es = unit_edges(w);
    return std::set<UnitEdge>(es.begin(), es.end());
}

struct AdjInfo {
    long pair_count = 0;
    std::vector<Plaquette> plaquettes;  // sorted, unique
};

namespace detail {

// Unordered pairs (f1 in A, f2 in B) of unit edges spanning a plaquette.
// With A == B each unordered pair is counted once.
inline AdjInfo adjacency(const std::set<UnitEdge>& A, const std::set<UnitEdge>& B, bool same) {
    AdjInfo out;
    std::set<Plaquette> ps;
    long ordered = 0;
    for (const auto& e : A) {
        int ax = e.axis();
        int d = e.a.dim;
        for (int b = 0; b < d; ++b) {
            if (b == ax) continue;
            for (int s = -1; s <= 1; s += 2) {
                Point t = unit_vector(d, b, s);
                UnitEdge f{e.a + t, e.b + t};
                if (B.count(f)) {
                    ++ordered;
                    ps.insert(*plaquette_of_edges(e, f));
                }
            }
        }
    }
    out.pair_count = same ? ordered / 2 : ordered;
    out.plaquettes.assign(ps.begin(), ps.end());
    return out;
}

}  // namespace detail

inline AdjInfo adj_pairs(const Walk& w) {
    auto es = unit_edge_set(w);
    return detail::adjacency(es, es, true);
}

// Index pairs (i, j) with steps eta_i and w_j lattice edges spanning a plaquette.
// Repeated edges of eta count once per occurrence.
inline long cross_pairs(const Walk& eta, const Walk& w) {
    if (eta.empty() || w.empty()) return 0;
    auto B = unit_edges(w);
    long c = 0;
    for (const auto& e : unit_edges(eta))
        for (const auto& f : B)
            if (plaquette_of_edges(e, f)) ++c;
    return c;
}

// True iff exactly one edge (w_i, w_{i+1}) of w meets P and no other vertex of w lies in P.
inline std::optional<int> flippable_index(const Plaquette& P, const Walk& w) {
    if (w.empty() || w.dim() != P.dim()) return std::nullopt;
    int first = -1, count = 0;
    for (int k = 0; k <= w.steps(); ++k) {
        if (P.contains(w[k])) {
            if (count == 0) first = k;
            ++count;
            if (count > 2) return std::nullopt;
        }
    }
    if (count != 2) return std::nullopt;
    if (first + 1 > w.steps() || !P.contains(w[first + 1])) return std::nullopt;
    if (unit_axis(w[first + 1] - w[first]) < 0) return std::nullopt;
    return first;
}

inline bool is_flippable(const Plaquette& P, const Walk& w) { return flippable_index(P, w).has_value(); }

// Plaquettes spanned by a unit edge of w1 and a unit edge of w2, optionally
// restricted to those flippable for w2.
inline std::vector<Plaquette> adj_between(const Walk& w1, const Walk& w2, bool flippable_only) {
    if (w1.empty() || w2.empty()) return {};
    auto info = detail::adjacency(unit_edge_set(w1), unit_edge_set(w2), false);
    if (!flippable_only) return info.plaquettes;
    std::vector<Plaquette> out;
    for (const auto& P : info.plaquettes)
        if (is_flippable(P, w2)) out.push_back(P);
    return out;
}

}  // namespace asaw
