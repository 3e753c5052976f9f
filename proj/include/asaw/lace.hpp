#pragma once

#include "enumerate.hpp"
#include "interaction.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "walk.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

namespace asaw {

using Edge = std::pair<int, int>;

// Edge set on [a, b]; every edge ij has j > i + 1.
struct IntervalGraph {
    int a = 0;
    int b = 0;
    std::vector<Edge> edges;

    IntervalGraph() = default;
    IntervalGraph(int lo, int hi, std::vector<Edge> es) : a(lo), b(hi), edges(std::move(es)) {
        for (auto& e : edges) {
            if (e.first > e.second) std::swap(e.first, e.second);
            if (e.first < a || e.second > b || e.second <= e.first + 1) throw std::invalid_argument("invalid interval-graph edge");
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    }
    bool has(const Edge& e) const { return std::binary_search(edges.begin(), edges.end(), e); }
    friend bool operator==(const IntervalGraph&, const IntervalGraph&) = default;
};

inline std::string edge_str(const Edge& e) { return std::to_string(e.first) + "-" + std::to_string(e.second); }

// Every j in (a, b) is strictly covered by some edge.
inline bool is_connected(const IntervalGraph& G) {
    for (int j = G.a + 1; j < G.b; ++j) {
        bool cov = false;
        for (const auto& e : G.edges)
            if (e.first < j && j < e.second) {
                cov = true;
                break;
            }
        if (!cov) return false;
    }
    return true;
}

inline bool is_lace(const IntervalGraph& G) {
    if (G.edges.empty() || !is_connected(G)) return false;
    for (std::size_t k = 0; k < G.edges.size(); ++k) {
        IntervalGraph H = G;
        H.edges.erase(H.edges.begin() + static_cast<long>(k));
        if (is_connected(H)) return false;
    }
    return true;
}

struct GraphFlags {
    bool connected = false;
    bool lace = false;
};

inline GraphFlags graph_predicates(const IntervalGraph& G) { return {is_connected(G), is_lace(G)}; }

inline IntervalGraph lace_map(const IntervalGraph& G) {
    if (G.b - G.a < 2 || G.edges.empty() || !is_connected(G)) throw std::invalid_argument("lace map needs a connected graph");
    std::vector<Edge> L;
    int s = G.a, t = G.a;
    for (const auto& e : G.edges)
        if (e.first == s) t = std::max(t, e.second);
    L.emplace_back(s, t);
    while (t < G.b) {
        int tn = t;
        for (const auto& e : G.edges)
            if (e.first < t) tn = std::max(tn, e.second);
        if (tn <= t) throw std::invalid_argument("lace map needs a connected graph");
        int sn = tn;
        for (const auto& e : G.edges)
            if (e.second == tn) sn = std::min(sn, e.first);
        L.emplace_back(sn, tn);
        t = tn;
    }
    return IntervalGraph(G.a, G.b, L);
}

inline std::vector<Edge> all_edges(int a, int b) {
    std::vector<Edge> out;
    for (int i = a; i <= b; ++i)
        for (int j = i + 2; j <= b; ++j) out.emplace_back(i, j);
    return out;
}

inline std::vector<Edge> compatible_edges(const IntervalGraph& L) {
    std::vector<Edge> out;
    for (const auto& e : all_edges(L.a, L.b)) {
        if (L.has(e)) continue;
        IntervalGraph H = L;
        H.edges.push_back(e);
        H = IntervalGraph(H.a, H.b, H.edges);
        if (lace_map(H) == L) out.push_back(e);
    }
    return out;
}

struct Lace {
    IntervalGraph graph;
    int m = 0;
    std::vector<int> composition;  // n_1, ..., n_{2m-1}
    std::vector<int> M;            // prefix sums M_0 .. M_{2m-1}
};

// Unique lace on [0, n] attached to a composition with 2m-1 parts.
inline Lace lace_from_composition(const std::vector<int>& nv) {
    int parts = static_cast<int>(nv.size());
    if (parts % 2 == 0) throw std::invalid_argument("composition must have an odd number of parts");
    int m = (parts + 1) / 2;
    for (int j = 1; j <= parts; ++j) {
        bool zero_ok = j % 2 == 1 && j >= 3 && j <= 2 * m - 3;
        if (nv[static_cast<std::size_t>(j - 1)] < (zero_ok ? 0 : 1)) throw std::invalid_argument("composition violates the interval constraints");
    }
    Lace L;
    L.m = m;
    L.composition = nv;
    L.M.assign(static_cast<std::size_t>(parts) + 1, 0);
    for (int j = 1; j <= parts; ++j) L.M[static_cast<std::size_t>(j)] = L.M[static_cast<std::size_t>(j - 1)] + nv[static_cast<std::size_t>(j - 1)];
    int n = L.M.back();
    std::vector<Edge> es;
    for (int j = 1; j <= m; ++j) {
        int s = j == 1 ? 0 : L.M[static_cast<std::size_t>(2 * j - 3)];
        int t = j == m ? n : L.M[static_cast<std::size_t>(2 * j)];
        es.emplace_back(s, t);
    }
    L.graph = IntervalGraph(0, n, es);
    return L;
}

inline std::vector<Lace> enumerate_laces(int n, int m) {
    if (n < 2 || m < 1) throw std::invalid_argument("need n >= 2 and m >= 1");
    std::vector<Lace> out;
    int parts = 2 * m - 1;
    std::vector<int> nv(static_cast<std::size_t>(parts), 0);
    std::function<void(int, int)> rec = [&](int j, int left) {
        if (j > parts) {
            if (left == 0) out.push_back(lace_from_composition(nv));
            return;
        }
        bool zero_ok = j % 2 == 1 && j >= 3 && j <= 2 * m - 3;
        for (int v = zero_ok ? 0 : 1; v <= left; ++v) {
            nv[static_cast<std::size_t>(j - 1)] = v;
            rec(j + 1, left - v);
        }
    };
    rec(1, n);
    return out;
}

enum class KMethod { direct_product, graph_sum };
enum class JMethod { lace_sum, recursion };

inline Rational K_value(const ModelParams& P, const Walk& w, int a, int b, KMethod method = KMethod::direct_product) {
    if (a < 0 || b > w.steps() || a > b) throw std::out_of_range("K interval out of range");
    if (method == KMethod::direct_product) {
        Rational out = 1;
        for (int j = a + 2; j <= b; ++j)
            for (int i = a; i + 1 < j; ++i) out *= 1 - u_ij(P, w, i, j);
        return out;
    }
    if (b - a > 6) throw std::invalid_argument("graph-sum K is capped at intervals of length 6");
    auto es = all_edges(a, b);
    std::vector<Rational> mu;
    for (const auto& e : es) mu.push_back(-u_ij(P, w, e.first, e.second));
    Rational total = 0;
    for (unsigned long mask = 0; mask < (1UL << es.size()); ++mask) {
        Rational term = 1;
        for (std::size_t k = 0; k < es.size() && term != 0; ++k)
            if (mask >> k & 1UL) term *= mu[k];
        total += term;
    }
    return total;
}

inline Rational J_value(const ModelParams& P, const Walk& w, int a, int b, JMethod method = JMethod::recursion) {
    if (a < 0 || b > w.steps() || a > b) throw std::out_of_range("J interval out of range");
    if (b - a <= 1) return 1;
    if (method == JMethod::lace_sum) {
        int n = b - a;
        Rational total = 0;
        for (int m = 1; 2 * m - 1 <= n + m - 1; ++m) {
            for (const auto& L : enumerate_laces(n, m)) {
                Rational term = 1;
                for (const auto& e : L.graph.edges) term *= -u_ij(P, w, a + e.first, a + e.second);
                if (term == 0) continue;
                for (const auto& e : compatible_edges(L.graph)) term *= 1 - u_ij(P, w, a + e.first, a + e.second);
                total += term;
            }
        }
        return total;
    }
    std::vector<Rational> J(static_cast<std::size_t>(b - a) + 1, Rational(1));
    for (int t = a + 2; t <= b; ++t) {
        Rational v = K_value(P, w, a, t) - K_value(P, w, a + 1, t);
        for (int j = a + 2; j <= t - 1; ++j) v -= J[static_cast<std::size_t>(j - a)] * K_value(P, w, j, t);
        J[static_cast<std::size_t>(t - a)] = v;
    }
    return J[static_cast<std::size_t>(b - a)];
}

using i128 = __int128;

// Exact sum of w * kappa^p * (1+kappa)^q, keyed by (p, q).
struct MonomialSum {
    std::map<std::pair<int, int>, i128> terms;

    void add(int p, int q, i128 w) {
        if (w == 0) return;
        auto& slot = terms[{p, q}];
        slot += w;
    }
    MonomialSum& operator+=(const MonomialSum& o) {
        for (const auto& [k, w] : o.terms) terms[k] += w;
        return *this;
    }
    Rational evaluate(const Rational& kappa, std::uint64_t den, int n) const {
        Rational acc = 0;
        for (const auto& [k, w] : terms) {
            if (w == 0) continue;
            bool neg = w < 0;
            u128 mag = neg ? static_cast<u128>(-w) : static_cast<u128>(w);
            Rational c = KappaPolynomial::to_rational(mag);
            if (neg) c = -c;
            acc += c * pow(kappa, k.first) * pow(1 + kappa, k.second);
        }
        return acc / pow(Rational(static_cast<unsigned long>(den)), n);
    }
};

struct PiOptions {
    bool j_recursion = true;        // full Pi via the recursion for J
    std::vector<int> lace_sizes;    // pi^(m) via lace sums
    std::vector<int> bound_sizes;   // coefficient-wise diagram bounds (m >= 2)
    std::vector<int> lace_edge_sizes;  // per-walk lace-edge bound checks
};

struct LaceEdgeReport {
    long long checked = 0;
    long long violations = 0;
    long long two_step_returns = 0;  // violations on (o, y, o) with m = 1
    std::vector<std::string> samples;
};

// Per-endpoint, per-order monomial sums; evaluate at any kappa afterwards.
struct PiPolynomials {
    int dim = 2;
    int N = 0;
    std::uint64_t den = 1;
    std::map<Point, std::vector<MonomialSum>> J;
    std::map<int, std::map<Point, std::vector<MonomialSum>>> lace;
    std::map<int, std::map<Point, std::vector<MonomialSum>>> bound;
    std::map<int, LaceEdgeReport> lace_edge_checks;

    static SpatialSeries evaluate(const std::map<Point, std::vector<MonomialSum>>& src, int dim, int N, const Rational& kappa, std::uint64_t den) {
        SpatialSeries s(dim, N);
        for (const auto& [x, v] : src) {
            Series& ser = s.at(x);
            for (int n = 0; n <= N; ++n) ser[n] = v[static_cast<std::size_t>(n)].evaluate(kappa, den, n);
        }
        s.prune();
        return s;
    }
    SpatialSeries Pi(const Rational& kappa) const { return evaluate(J, dim, N, kappa, den); }
    SpatialSeries pi_m(int m, const Rational& kappa) const { return evaluate(lace.at(m), dim, N, kappa, den); }
    SpatialSeries bound_m(int m, const Rational& kappa) const { return evaluate(bound.at(m), dim, N, kappa, den); }
};

namespace detail {

enum : std::uint8_t { U_NONE = 0, U_ONE = 1, U_PLAQ = 2 };

inline int lower_axis_edge(const Point& u, const Point& v, Point& low) {
    int ax = unit_axis(v - u);
    if (ax < 0) return -1;
    low = u < v ? u : v;
    return ax;
}

// U code for (i, j) given the path; edges must be lattice edges.
inline std::uint8_t u_code(const std::vector<Point>& p, int i, int j) {
    if (p[static_cast<std::size_t>(i)] == p[static_cast<std::size_t>(j)]) return U_ONE;
    if (j < i + 3) return U_NONE;
    Point le, lf;
    int ae = lower_axis_edge(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i + 1)], le);
    if (ae < 0) return U_NONE;
    int af = lower_axis_edge(p[static_cast<std::size_t>(j - 1)], p[static_cast<std::size_t>(j)], lf);
    if (af != ae) return U_NONE;
    int b = unit_axis(lf - le);
    return (b >= 0 && b != ae) ? U_PLAQ : U_NONE;
}

struct LaceInfo {
    int m = 0;
    std::vector<int> M;
    std::vector<Edge> edges;
    std::vector<Edge> compat;
    std::vector<std::vector<Edge>> compat_by_interval;  // index k = 1..2m-1
};

inline std::vector<LaceInfo> lace_infos(int n, const std::vector<int>& sizes) {
    std::vector<LaceInfo> out;
    for (int m : sizes) {
        if (m < 1 || n < 2) continue;
        for (const auto& L : enumerate_laces(n, m)) {
            LaceInfo li;
            li.m = m;
            li.M = L.M;
            li.edges = L.graph.edges;
            li.compat = compatible_edges(L.graph);
            li.compat_by_interval.assign(static_cast<std::size_t>(2 * m), {});
            for (const auto& e : li.compat) {
                for (int k = 1; k <= 2 * m - 1; ++k)
                    if (e.second > L.M[static_cast<std::size_t>(k - 1)] && e.second <= L.M[static_cast<std::size_t>(k)]) {
                        li.compat_by_interval[static_cast<std::size_t>(k)].push_back(e);
                        break;
                    }
            }
            out.push_back(std::move(li));
        }
    }
    return out;
}

// Global index range of the memory walk attached to interval k.
inline std::pair<int, int> memory_range(const std::vector<int>& M, int m, int k) {
    auto at = [&](int i) { return i <= 0 ? 0 : M[static_cast<std::size_t>(i)]; };
    if (m == 1 || k == 1) return {1, 0};
    if (k == 2) return {at(0), at(1)};
    if (k % 2 == 1) {
        int kk = (k - 1) / 2;
        return {at(2 * kk - 2), at(2 * kk)};
    }
    int kk = k / 2;
    return {at(2 * kk - 4), at(2 * kk - 1)};
}

// Index pairs of lattice edges (one in each range) spanning a plaquette.
inline int cross_edge_pairs(const std::vector<Point>& p, int a0, int a1, int b0, int b1) {
    int c = 0;
    for (int i = a0; i < a1; ++i) {
        Point le;
        int ae = lower_axis_edge(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(i + 1)], le);
        if (ae < 0) continue;
        for (int j = b0; j < b1; ++j) {
            Point lf;
            int af = lower_axis_edge(p[static_cast<std::size_t>(j)], p[static_cast<std::size_t>(j + 1)], lf);
            if (af != ae) continue;
            int b = unit_axis(lf - le);
            if (b >= 0 && b != ae) ++c;
        }
    }
    return c;
}

inline bool distinct_range(const std::vector<Point>& p, int a, int b) {
    for (int i = a; i <= b; ++i)
        for (int j = i + 1; j <= b; ++j)
            if (p[static_cast<std::size_t>(i)] == p[static_cast<std::size_t>(j)]) return false;
    return true;
}

// Exponent of (1+kappa) in W(omega^(k); eta^(k)) / P, or -1 when the indicator of A_k fails.
inline int lace_edge_rhs(const std::vector<Point>& p, const LaceInfo& L, int k) {
    int lo = L.M[static_cast<std::size_t>(k - 1)], hi = L.M[static_cast<std::size_t>(k)];
    bool closed_ok = L.m == 1 && hi - lo > 2 && p[static_cast<std::size_t>(lo)] == p[static_cast<std::size_t>(hi)] && distinct_range(p, lo, hi - 1);
    if (!distinct_range(p, lo, hi) && !closed_ok) return -1;
    auto [m0, m1] = memory_range(L.M, L.m, k);
    if (m0 <= m1) {
        for (const auto& e : L.compat_by_interval[static_cast<std::size_t>(k)])
            if (e.first >= m0 && e.first <= m1 && p[static_cast<std::size_t>(e.first)] == p[static_cast<std::size_t>(e.second)]) return -1;
    }
    int internal = cross_edge_pairs(p, lo, hi, lo, hi) / 2;
    int cross = m0 <= m1 ? cross_edge_pairs(p, m0, m1, lo, hi) : 0;
    return internal + cross;
}

class PiWalker {
public:
    PiWalker(const StepDistribution& D, int N, const PiOptions& opt) : D_(D), N_(N), opt_(opt) {
        std::set<int> sizes(opt.lace_sizes.begin(), opt.lace_sizes.end());
        sizes.insert(opt.bound_sizes.begin(), opt.bound_sizes.end());
        sizes.insert(opt.lace_edge_sizes.begin(), opt.lace_edge_sizes.end());
        std::vector<int> sv(sizes.begin(), sizes.end());
        infos_.resize(static_cast<std::size_t>(N) + 1);
        for (int n = 2; n <= N; ++n) infos_[static_cast<std::size_t>(n)] = lace_infos(n, sv);
        binom_.assign(64, std::vector<i128>(64, 0));
        for (int a = 0; a < 64; ++a) {
            binom_[static_cast<std::size_t>(a)][0] = 1;
            for (int b = 1; b <= a; ++b)
                binom_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                    binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)] + (b <= a - 1 ? binom_[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)] : 0);
        }
    }

    struct Acc {
        std::map<Point, std::vector<MonomialSum>> J;
        std::map<int, std::map<Point, std::vector<MonomialSum>>> lace, bound;
        std::map<int, LaceEdgeReport> lace_edge_checks;
    };

    void run(const std::vector<int>& prefix, int min_visit, int max_depth, Acc& acc) const {
        Frame f(N_);
        f.path.push_back(origin(D_.dim()));
        f.weight.push_back(1);
        f.Kzero.push_back({false});
        f.Kexp.push_back({0});
        f.J.push_back({1});
        for (int s : prefix) {
            push(f, s);
            if (static_cast<int>(f.path.size()) - 1 >= min_visit) visit(f, acc);
        }
        dfs(f, min_visit, max_depth, acc);
    }

    std::vector<std::vector<int>> prefixes() const {
        std::vector<std::vector<int>> out;
        int S = static_cast<int>(D_.steps().size());
        for (int a = 0; a < S; ++a)
            for (int b = 0; b < S; ++b) out.push_back({a, b});
        return out;
    }

private:
    using Poly = std::vector<i128>;

    struct Frame {
        explicit Frame(int N) : U(static_cast<std::size_t>(N) + 1, std::vector<std::uint8_t>(static_cast<std::size_t>(N) + 1, 0)) {}
        std::vector<Point> path;
        std::vector<u128> weight;
        std::vector<std::vector<bool>> Kzero;  // Kzero[n][j]: K_[j,n] = 0
        std::vector<std::vector<int>> Kexp;    // K_[j,n] = (1+kappa)^Kexp
        std::vector<Poly> J;                   // J_[0,n] in powers of kappa
        std::vector<std::vector<std::uint8_t>> U;
    };

    Poly times_power(const Poly& p, int e) const {
        Poly out(p.size() + static_cast<std::size_t>(e), 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] == 0) continue;
            for (int k = 0; k <= e; ++k) out[i + static_cast<std::size_t>(k)] += p[i] * binom_[static_cast<std::size_t>(e)][static_cast<std::size_t>(k)];
        }
        return out;
    }
    static void add_to(Poly& a, const Poly& b, i128 sign) {
        if (a.size() < b.size()) a.resize(b.size(), 0);
        for (std::size_t i = 0; i < b.size(); ++i) a[i] += sign * b[i];
    }

    void push(Frame& f, int s) const {
        const auto& st = D_.steps()[static_cast<std::size_t>(s)];
        f.path.push_back(f.path.back() + st.x);
        f.weight.push_back(f.weight.back() * st.weight);
        int n = static_cast<int>(f.path.size()) - 1;
        for (int i = 0; i + 1 < n; ++i) f.U[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] = u_code(f.path, i, n);
        // Column n: suffix products of (1 - U_{i,n}) for i >= j.
        std::vector<bool> kz(static_cast<std::size_t>(n) + 1, false);
        std::vector<int> ke(static_cast<std::size_t>(n) + 1, 0);
        bool colz = false;
        int cole = 0;
        for (int j = n; j >= 0; --j) {
            if (j <= n - 2) {
                auto u = f.U[static_cast<std::size_t>(j)][static_cast<std::size_t>(n)];
                if (u == U_ONE) colz = true;
                if (u == U_PLAQ) ++cole;
            }
            if (j == n) {
                kz[static_cast<std::size_t>(j)] = false;
                ke[static_cast<std::size_t>(j)] = 0;
            } else {
                const auto& pz = f.Kzero[static_cast<std::size_t>(n - 1)];
                const auto& pe = f.Kexp[static_cast<std::size_t>(n - 1)];
                kz[static_cast<std::size_t>(j)] = pz[static_cast<std::size_t>(j)] || colz;
                ke[static_cast<std::size_t>(j)] = pe[static_cast<std::size_t>(j)] + cole;
            }
        }
        f.Kzero.push_back(kz);
        f.Kexp.push_back(ke);
        Poly Jn;
        if (n <= 1) {
            Jn = {1};
        } else if (opt_.j_recursion) {
            auto K = [&](int j) -> Poly {
                if (kz[static_cast<std::size_t>(j)]) return {};
                return times_power({1}, ke[static_cast<std::size_t>(j)]);
            };
            Jn = K(0);
            add_to(Jn, K(1), -1);
            for (int j = 2; j <= n - 1; ++j) {
                if (kz[static_cast<std::size_t>(j)]) continue;
                add_to(Jn, times_power(f.J[static_cast<std::size_t>(j)], ke[static_cast<std::size_t>(j)]), -1);
            }
        }
        f.J.push_back(std::move(Jn));
    }

    void pop(Frame& f) const {
        f.path.pop_back();
        f.weight.pop_back();
        f.Kzero.pop_back();
        f.Kexp.pop_back();
        f.J.pop_back();
    }

    static std::vector<MonomialSum>& slot(std::map<Point, std::vector<MonomialSum>>& m, const Point& x, int N) {
        auto it = m.find(x);
        if (it == m.end()) it = m.emplace(x, std::vector<MonomialSum>(static_cast<std::size_t>(N) + 1)).first;
        return it->second;
    }

    void visit(Frame& f, Acc& acc) const {
        int n = static_cast<int>(f.path.size()) - 1;
        if (n < 2) return;
        const Point& x = f.path.back();
        auto w = static_cast<i128>(f.weight.back());
        if (opt_.j_recursion) {
            const Poly& J = f.J.back();
            bool any = false;
            for (auto c : J) any = any || c != 0;
            if (any) {
                auto& v = slot(acc.J, x, N_)[static_cast<std::size_t>(n)];
                for (std::size_t p = 0; p < J.size(); ++p) v.add(static_cast<int>(p), 0, J[p] * w);
            }
        }
        auto U = [&](const Edge& e) { return f.U[static_cast<std::size_t>(e.first)][static_cast<std::size_t>(e.second)]; };
        for (const auto& L : infos_[static_cast<std::size_t>(n)]) {
            bool want_pi = std::find(opt_.lace_sizes.begin(), opt_.lace_sizes.end(), L.m) != opt_.lace_sizes.end();
            bool want_bound = std::find(opt_.bound_sizes.begin(), opt_.bound_sizes.end(), L.m) != opt_.bound_sizes.end();
            bool want_66 = std::find(opt_.lace_edge_sizes.begin(), opt_.lace_edge_sizes.end(), L.m) != opt_.lace_edge_sizes.end();
            if (want_pi) {
                int sign = 0, p = 0, q = 0;
                bool zero = false;
                for (const auto& e : L.edges) {
                    auto u = U(e);
                    if (u == U_NONE) {
                        zero = true;
                        break;
                    }
                    if (u == U_ONE) ++sign;
                    else ++p;
                }
                if (!zero) {
                    for (const auto& e : L.compat) {
                        auto u = U(e);
                        if (u == U_ONE) {
                            zero = true;
                            break;
                        }
                        if (u == U_PLAQ) ++q;
                    }
                }
                if (!zero) slot(acc.lace[L.m], x, N_)[static_cast<std::size_t>(n)].add(p, q, (sign % 2 ? -1 : 1) * w);
            }
            if (!want_bound && !want_66) continue;
            std::vector<int> rhs(static_cast<std::size_t>(2 * L.m), 0);
            bool all_ok = true;
            for (int k = 1; k <= 2 * L.m - 1; ++k) {
                rhs[static_cast<std::size_t>(k)] = lace_edge_rhs(f.path, L, k);
                if (rhs[static_cast<std::size_t>(k)] < 0) all_ok = false;
            }
            if (want_66) {
                auto& rep = acc.lace_edge_checks[L.m];
                for (int k = 1; k <= 2 * L.m - 1; ++k) {
                    ++rep.checked;
                    bool lhs_zero = false;
                    int lhs_exp = 0;
                    for (const auto& e : L.compat_by_interval[static_cast<std::size_t>(k)]) {
                        auto u = U(e);
                        if (u == U_ONE) lhs_zero = true;
                        if (u == U_PLAQ) ++lhs_exp;
                    }
                    if (lhs_zero) continue;
                    int r = rhs[static_cast<std::size_t>(k)];
                    if (r >= lhs_exp) continue;
                    bool two_step_return = L.m == 1 && n == 2 && f.path[0] == f.path[2];
                    if (two_step_return) {
                        ++rep.two_step_returns;
                        continue;
                    }
                    ++rep.violations;
                    if (rep.samples.size() < 5) rep.samples.push_back(Walk(f.path).str() + " k=" + std::to_string(k));
                }
            }
            if (want_bound && all_ok) {
                int kap = 0;
                bool zero = false;
                for (const auto& e : L.edges) {
                    Point y = f.path[static_cast<std::size_t>(e.second)] - f.path[static_cast<std::size_t>(e.first)];
                    if (y.is_origin()) continue;
                    if (y.norm_inf() == 1) ++kap;
                    else {
                        zero = true;
                        break;
                    }
                }
                if (!zero) {
                    int q = 0;
                    for (int k = 1; k <= 2 * L.m - 1; ++k) q += rhs[static_cast<std::size_t>(k)];
                    slot(acc.bound[L.m], x, N_)[static_cast<std::size_t>(n)].add(kap, q, w);
                }
            }
        }
    }

    void dfs(Frame& f, int min_visit, int max_depth, Acc& acc) const {
        int n = static_cast<int>(f.path.size()) - 1;
        if (n >= max_depth) return;
        for (int s = 0; s < static_cast<int>(D_.steps().size()); ++s) {
            push(f, s);
            visit(f, acc);
            dfs(f, min_visit, max_depth, acc);
            pop(f);
        }
    }

    const StepDistribution& D_;
    int N_;
    PiOptions opt_;
    std::vector<std::vector<LaceInfo>> infos_;
    std::vector<std::vector<i128>> binom_;
};

}  // namespace detail

inline int pi_cap(const StepDistribution& D) { return D.nearest_neighbour() && D.dim() == 2 ? 8 : (D.steps().size() <= 8 ? 6 : 4); }

inline PiPolynomials pi_polynomials(const StepDistribution& D, int N, const PiOptions& opt) {
    if (N > pi_cap(D)) throw std::invalid_argument("order exceeds the lace-expansion cap");
    for (int m : opt.bound_sizes)
        if (m < 2) throw std::invalid_argument("diagram bounds need m >= 2");
    detail::PiWalker walker(D, N, opt);
    std::vector<std::vector<int>> pre;
    if (N >= 2) pre = walker.prefixes();
    std::vector<detail::PiWalker::Acc> accs(pre.size());
    parallel_for(pre.size(), [&](std::size_t t) { walker.run(pre[t], 2, N, accs[t]); });
    PiPolynomials out;
    out.dim = D.dim();
    out.N = N;
    out.den = D.denominator();
    auto merge = [&](std::map<Point, std::vector<MonomialSum>>& into, const std::map<Point, std::vector<MonomialSum>>& from) {
        for (const auto& [x, v] : from) {
            auto it = into.find(x);
            if (it == into.end()) it = into.emplace(x, std::vector<MonomialSum>(static_cast<std::size_t>(N) + 1)).first;
            for (std::size_t n = 0; n < v.size(); ++n) it->second[n] += v[n];
        }
    };
    for (int m : opt.lace_sizes) out.lace[m];
    for (int m : opt.bound_sizes) out.bound[m];
    for (int m : opt.lace_edge_sizes) out.lace_edge_checks[m];
    for (const auto& a : accs) {
        merge(out.J, a.J);
        for (const auto& [m, mp] : a.lace) merge(out.lace[m], mp);
        for (const auto& [m, mp] : a.bound) merge(out.bound[m], mp);
        for (const auto& [m, rep] : a.lace_edge_checks) {
            auto& r = out.lace_edge_checks[m];
            r.checked += rep.checked;
            r.violations += rep.violations;
            r.two_step_returns += rep.two_step_returns;
            for (const auto& s : rep.samples)
                if (r.samples.size() < 5) r.samples.push_back(s);
        }
    }
    return out;
}

// m = 0 returns the full Pi (J via the recursion); m >= 1 the lace-size-m part.
inline SpatialSeries pi_coeffs(const ModelParams& P, int m, int N) {
    PiOptions opt;
    opt.j_recursion = m == 0;
    if (m > 0) opt.lace_sizes = {m};
    auto poly = pi_polynomials(P.D, N, opt);
    return m == 0 ? poly.Pi(P.kappa) : poly.pi_m(m, P.kappa);
}

inline SpatialSeries diagram_bound_coeffs(const ModelParams& P, int m, int N) {
    PiOptions opt;
    opt.j_recursion = false;
    opt.bound_sizes = {m};
    return pi_polynomials(P.D, N, opt).bound_m(m, P.kappa);
}

// (zD * G)(x) = z sum_y D(y) G(x - y).
inline SpatialSeries step_convolve(const StepDistribution& D, const SpatialSeries& G) {
    SpatialSeries out(G.dim(), G.order());
    for (const auto& [x, s] : G.entries()) {
        if (s.is_zero()) continue;
        Series zs = s.shifted();
        for (const auto& st : D.steps()) out.at(x + st.x) += zs * st.prob;
    }
    out.prune();
    return out;
}

inline SpatialSeries recursion_residual_from(const StepDistribution& D, const SpatialSeries& G, const SpatialSeries& Pi) {
    SpatialSeries rhs = SpatialSeries::delta(G.dim(), G.order());
    rhs += step_convolve(D, G);
    rhs += convolve(Pi, G);
    SpatialSeries r = G - rhs;
    r.prune();
    return r;
}

inline SpatialSeries recursion_residual(const ModelParams& P, int N) {
    return recursion_residual_from(P.D, two_point_coeffs(P, N), pi_coeffs(P, 0, N));
}

}  // namespace asaw
