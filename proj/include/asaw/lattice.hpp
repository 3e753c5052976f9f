#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asaw {

inline constexpr int kMaxDim = 8;

// A point of Z^d.  Coordinates beyond `dim` are kept at zero so that the
// defaulted comparisons and hashing only ever see meaningful entries.
struct Point {
    std::array<std::int64_t, kMaxDim> c{};
    int dim = 0;

    Point() = default;
    explicit Point(int d) : dim(d) {
        if (d < 1 || d > kMaxDim) throw std::invalid_argument("dimension out of range");
    }
    Point(std::initializer_list<std::int64_t> xs) : dim(static_cast<int>(xs.size())) {
        if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("dimension out of range");
        std::copy(xs.begin(), xs.end(), c.begin());
    }

    std::int64_t operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
    std::int64_t& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

    friend bool operator==(const Point&, const Point&) = default;
    friend auto operator<=>(const Point& a, const Point& b) {
        if (auto o = a.dim <=> b.dim; o != 0) return o;
        return a.c <=> b.c;
    }

    Point& operator+=(const Point& o) {
        for (int i = 0; i < dim; ++i) c[i] += o.c[i];
        return *this;
    }
    Point& operator-=(const Point& o) {
        for (int i = 0; i < dim; ++i) c[i] -= o.c[i];
        return *this;
    }
    friend Point operator+(Point a, const Point& b) { return a += b; }
    friend Point operator-(Point a, const Point& b) { return a -= b; }
    friend Point operator-(Point a) {
        for (int i = 0; i < a.dim; ++i) a.c[i] = -a.c[i];
        return a;
    }

    std::int64_t norm1() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim; ++i) s += c[i] < 0 ? -c[i] : c[i];
        return s;
    }
    std::int64_t norm_inf() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim; ++i) s = std::max(s, c[i] < 0 ? -c[i] : c[i]);
        return s;
    }
    std::int64_t norm2sq() const {
        std::int64_t s = 0;
        for (int i = 0; i < dim; ++i) s += c[i] * c[i];
        return s;
    }
    bool is_origin() const {
        for (int i = 0; i < dim; ++i)
            if (c[i] != 0) return false;
        return true;
    }

    std::string str() const {
        std::string s;
        for (int i = 0; i < dim; ++i) {
            if (i) s += ',';
            s += std::to_string(c[i]);
        }
        return s;
    }
};

struct PointHash {
    std::size_t operator()(const Point& p) const noexcept {
        std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ static_cast<std::uint64_t>(p.dim);
        for (int i = 0; i < p.dim; ++i) {
            h ^= static_cast<std::uint64_t>(p.c[i]) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

inline Point origin(int d) { return Point(d); }

// Axes are 0-based in code; text output is 1-based.
inline Point unit_vector(int d, int axis, int sign = 1) {
    Point p(d);
    p[axis] = sign;
    return p;
}

inline void require_same_dim(const Point& a, const Point& b) {
    if (a.dim != b.dim) throw std::invalid_argument("dimension mismatch");
}

// Axis of a unit increment, or -1.
inline int unit_axis(const Point& step) {
    int axis = -1;
    for (int i = 0; i < step.dim; ++i) {
        if (step[i] == 0) continue;
        if (axis >= 0 || (step[i] != 1 && step[i] != -1)) return -1;
        axis = i;
    }
    return axis;
}

// Unordered lattice edge, stored with the lexicographically smaller endpoint first.
struct UnitEdge {
    Point a, b;

    static std::optional<UnitEdge> make(const Point& u, const Point& v) {
        require_same_dim(u, v);
        if (unit_axis(v - u) < 0) return std::nullopt;
        return u < v ? UnitEdge{u, v} : UnitEdge{v, u};
    }
    int axis() const { return unit_axis(b - a); }
    friend bool operator==(const UnitEdge&, const UnitEdge&) = default;
    friend auto operator<=>(const UnitEdge&, const UnitEdge&) = default;
};

struct UnitEdgeHash {
    std::size_t operator()(const UnitEdge& e) const noexcept {
        PointHash h;
        return h(e.a) * 31u + h(e.b);
    }
};

// Canonical plaquette: coordinatewise-minimal vertex plus axes i < j.
struct Plaquette {
    Point base;
    int i = 0;
    int j = 1;

    friend bool operator==(const Plaquette&, const Plaquette&) = default;
    friend auto operator<=>(const Plaquette& p, const Plaquette& q) {
        if (auto o = p.base <=> q.base; o != 0) return o;
        if (auto o = p.i <=> q.i; o != 0) return o;
        return p.j <=> q.j;
    }

    int dim() const { return base.dim; }

    // Order: base, base+e_i, base+e_i+e_j, base+e_j (a cycle).
    std::array<Point, 4> vertices() const {
        Point ei = unit_vector(dim(), i), ej = unit_vector(dim(), j);
        return {base, base + ei, base + ei + ej, base + ej};
    }

    bool contains(const Point& x) const {
        if (x.dim != dim()) return false;
        for (int k = 0; k < dim(); ++k) {
            std::int64_t dx = x[k] - base[k];
            if (k == i || k == j) {
                if (dx != 0 && dx != 1) return false;
            } else if (dx != 0) {
                return false;
            }
        }
        return true;
    }

    bool contains(const UnitEdge& e) const {
        int ax = e.axis();
        return (ax == i || ax == j) && contains(e.a) && contains(e.b);
    }

    std::array<UnitEdge, 4> edges() const {
        auto v = vertices();
        return {*UnitEdge::make(v[0], v[1]), *UnitEdge::make(v[1], v[2]),
                *UnitEdge::make(v[2], v[3]), *UnitEdge::make(v[3], v[0])};
    }

    std::string str() const {
        return "(" + base.str() + ")[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]";
    }
};

struct PlaquetteHash {
    std::size_t operator()(const Plaquette& p) const noexcept {
        return PointHash{}(p.base) * 131u + static_cast<std::size_t>(p.i * 17 + p.j);
    }
};

inline Plaquette make_plaquette(const Point& base, int a, int b) {
    if (a == b) throw std::invalid_argument("plaquette axes must differ");
    if (a > b) std::swap(a, b);
    if (a < 0 || b >= base.dim) throw std::invalid_argument("plaquette axis out of range");
    return Plaquette{base, a, b};
}

inline bool share_vertex(const Plaquette& p, const Plaquette& q) {
    for (const auto& v : p.vertices())
        if (q.contains(v)) return true;
    return false;
}

// Canonical plaquette spanned by two unit edges, if they are parallel, disjoint
// and at distance one.
inline std::optional<Plaquette> plaquette_of_edges(const UnitEdge& e1, const UnitEdge& e2) {
    require_same_dim(e1.a, e2.a);
    int ax = e1.axis();
    if (ax < 0 || ax != e2.axis()) return std::nullopt;
    Point shift = e2.a - e1.a;
    int other = unit_axis(shift);
    if (other < 0 || other == ax) return std::nullopt;
    Point base = shift[other] > 0 ? e1.a : e2.a;
    return make_plaquette(base, ax, other);
}

// All 4*C(d,2) plaquettes containing v, canonical order.
inline std::vector<Plaquette> incident_plaquettes(const Point& v) {
    std::vector<Plaquette> out;
    int d = v.dim;
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b)
            for (int sa = 0; sa <= 1; ++sa)
                for (int sb = 0; sb <= 1; ++sb) {
                    Point base = v;
                    base[a] -= sa;
                    base[b] -= sb;
                    out.push_back(Plaquette{base, a, b});
                }
    std::sort(out.begin(), out.end());
    return out;
}

// All 2(d-1) plaquettes containing e, canonical order.
inline std::vector<Plaquette> incident_plaquettes(const UnitEdge& e) {
    std::vector<Plaquette> out;
    int ax = e.axis();
    int d = e.a.dim;
    for (int b = 0; b < d; ++b) {
        if (b == ax) continue;
        for (int s = 0; s <= 1; ++s) {
            Point base = e.a;
            base[b] -= s;
            out.push_back(make_plaquette(base, ax, b));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Lattice symmetries used throughout: translation and coordinate reflection.
struct Symmetry {
    enum class Kind { translate, reflect } kind = Kind::translate;
    Point shift;
    int axis = 0;

    static Symmetry translation(const Point& x) { return Symmetry{Kind::translate, x, 0}; }
    static Symmetry reflection(int axis) { return Symmetry{Kind::reflect, Point(), axis}; }

    Point apply(Point p) const {
        if (kind == Kind::translate) {
            require_same_dim(p, shift);
            return p + shift;
        }
        if (axis < 0 || axis >= p.dim) throw std::invalid_argument("reflection axis out of range");
        p[axis] = -p[axis];
        return p;
    }

    Plaquette apply(const Plaquette& q) const {
        if (kind == Kind::translate) return Plaquette{apply(q.base), q.i, q.j};
        Point base = apply(q.base);
        if (axis == q.i || axis == q.j) base[axis] -= 1;
        return Plaquette{base, q.i, q.j};
    }

    Symmetry inverse() const {
        if (kind == Kind::translate) return translation(-shift);
        return *this;
    }
};

inline Point translate(const Point& p, const Point& x) { return Symmetry::translation(x).apply(p); }
inline Point reflect(const Point& p, int axis) { return Symmetry::reflection(axis).apply(p); }
inline Plaquette translate(const Plaquette& p, const Point& x) { return Symmetry::translation(x).apply(p); }
inline Plaquette reflect(const Plaquette& p, int axis) { return Symmetry::reflection(axis).apply(p); }

}  // namespace asaw
