#pragma once

#include "interaction.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "stepdist.hpp"
#include "unfold.hpp"
#include "walk.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace asaw {

using u128 = unsigned __int128;

enum class WalkFilter { walks, saw, half_space, bridge, polygon };

inline WalkFilter parse_filter(const std::string& s) {
    if (s == "walks") return WalkFilter::walks;
    if (s == "saw") return WalkFilter::saw;
    if (s == "halfspace") return WalkFilter::half_space;
    if (s == "bridges") return WalkFilter::bridge;
    if (s == "polygons") return WalkFilter::polygon;
    throw std::invalid_argument("unknown walk class: " + s);
}

// Hard caps on exhaustive enumeration depth.
inline int enumeration_cap(const StepDistribution& D) {
    if (D.nearest_neighbour()) return D.dim() == 2 ? 14 : 9;
    return D.steps().size() <= 8 ? 7 : 4;
}

// Exact sum_k count_k (1+kappa)^k, with counts weighted by integer step weights.
struct KappaPolynomial {
    std::map<long, u128> terms;

    void add(long exponent, u128 w) { terms[exponent] += w; }
    KappaPolynomial& operator+=(const KappaPolynomial& o) {
        for (const auto& [e, w] : o.terms) terms[e] += w;
        return *this;
    }
    // Value at kappa, divided by den^n.
    Rational evaluate(const Rational& kappa, std::uint64_t den, int n) const {
        Rational acc = 0;
        Rational base = 1 + kappa;
        for (const auto& [e, w] : terms) acc += pow(base, e) * to_rational(w);
        return acc / pow(Rational(static_cast<unsigned long>(den)), n);
    }
    static Rational to_rational(u128 w) {
        BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(w >> 64)));
        BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(w)));
        BigInt out = (hi << 64) + lo;
        return Rational(out);
    }
    bool empty() const { return terms.empty(); }
};

namespace detail {

// Occupancy-grid DFS over self-avoiding walks from o.  Every node reports the
// running pair count (internal pairs plus pairs with the memory), the product of
// integer step weights, and the half-space/bridge status.
class SawEngine {
public:
    struct Options {
        int n_max = 0;
        std::optional<int> torus_side;
        Walk memory;
        bool endpoint_exempt = false;
        bool half_space_only = false;
        bool closures = false;  // report polygon closures at o
        bool self_avoiding = true;
    };

    struct Node {
        int n = 0;
        const std::vector<Point>* path = nullptr;
        long exponent = 0;
        u128 weight = 1;
        bool half_space = true;
        bool bridge = true;
        bool closed = false;
    };

    SawEngine(const StepDistribution& D, Options opt) : D_(D), opt_(std::move(opt)), d_(D.dim()) {
        if (opt_.n_max < 0) throw std::invalid_argument("negative depth");
        if (opt_.torus_side) {
            side_ = *opt_.torus_side;
            if (side_ < 3) throw std::invalid_argument("torus side must be >= 3");
        } else {
            side_ = 2 * (opt_.n_max * D.range_bound() + 2) + 1;
            offset_ = opt_.n_max * D.range_bound() + 2;
        }
        cells_ = 1;
        for (int i = 0; i < d_; ++i) {
            stride_[static_cast<std::size_t>(i)] = cells_;
            cells_ *= side_;
            if (cells_ > (std::int64_t{1} << 28)) throw std::invalid_argument("enumeration box too large");
        }
        for (const auto& s : D.steps()) steps_.push_back(s);
    }

    std::int64_t index(const Point& p) const {
        std::int64_t idx = 0;
        for (int i = 0; i < d_; ++i) {
            std::int64_t x = p[i] + offset_;
            if (opt_.torus_side) {
                x %= side_;
                if (x < 0) x += side_;
            } else if (x < 0 || x >= side_) {
                return -1;
            }
            idx += x * stride_[static_cast<std::size_t>(i)];
        }
        return idx;
    }

    // Step-index prefixes of length `len` that survive pruning.
    std::vector<std::vector<int>> prefixes(int len) {
        std::vector<std::vector<int>> out;
        State st(*this);
        std::vector<int> cur;
        std::function<void(int)> rec = [&](int depth) {
            if (depth == len) {
                out.push_back(cur);
                return;
            }
            for (int s = 0; s < static_cast<int>(steps_.size()); ++s) {
                auto mv = st.try_step(s);
                if (!mv.ok || mv.closes) continue;
                st.push(mv);
                cur.push_back(s);
                if (!st.on_memory_end()) rec(depth + 1);
                cur.pop_back();
                st.pop();
            }
        };
        rec(0);
        return out;
    }

    // Visits nodes with n >= min_visit in the subtree below `prefix`, up to depth max_depth.
    template <class Sink>
    void run(const std::vector<int>& prefix, int min_visit, int max_depth, Sink& sink) {
        State st(*this);
        for (int s : prefix) {
            auto mv = st.try_step(s);
            if (!mv.ok || mv.closes) return;
            st.push(mv);
        }
        dfs(st, min_visit, std::min(max_depth, opt_.n_max), sink);
    }

    const Options& options() const { return opt_; }

private:
    struct Move {
        bool ok = false;
        bool closes = false;
        bool on_memory = false;
        Point v;
        std::int64_t idx = -1;
        long gain = 0;
        std::uint64_t w = 1;
    };

    class State {
    public:
        explicit State(const SawEngine& e) : e_(e), occ_(static_cast<std::size_t>(e.cells_), 0), mem_(static_cast<std::size_t>(e.cells_), 0) {
            Point o = origin(e.d_);
            path_.push_back(o);
            idx_.push_back(e.index(o));
            occ_[static_cast<std::size_t>(idx_.back())] = 1;
            const Walk& m = e.opt_.memory;
            for (int i = 0; i <= m.steps() && !m.empty(); ++i) {
                auto k = e.index(m[i]);
                if (k >= 0 && !m[i].is_origin()) mem_[static_cast<std::size_t>(k)] = 1;
            }
            for (int i = 0; i < m.steps(); ++i) {
                if (unit_axis(m[i + 1] - m[i]) < 0) continue;
                auto a = e.index(m[i]), b = e.index(m[i + 1]);
                if (a >= 0 && b >= 0) mem_edges_.insert(key(a, b));
            }
            exps_.push_back(0);
            weights_.push_back(1);
            min1_.push_back(std::numeric_limits<std::int64_t>::max());
            max1_.push_back(0);
            memend_.push_back(false);
        }

        static std::uint64_t key(std::int64_t a, std::int64_t b) {
            if (a > b) std::swap(a, b);
            return (static_cast<std::uint64_t>(a) << 32) ^ static_cast<std::uint64_t>(b);
        }

        Move try_step(int s) const {
            Move mv;
            const auto& st = e_.steps_[static_cast<std::size_t>(s)];
            const Point& u = path_.back();
            mv.v = u + st.x;
            if (e_.opt_.half_space_only && !e_.opt_.torus_side && mv.v[0] <= 0) return mv;
            mv.idx = e_.index(mv.v);
            if (mv.idx < 0) return mv;
            auto o = occ_[static_cast<std::size_t>(mv.idx)];
            if (o != 0 && e_.opt_.self_avoiding) {
                if (!(e_.opt_.closures && o == 1 && n() + 1 > 2)) return mv;
                mv.closes = true;
            }
            mv.on_memory = mem_[static_cast<std::size_t>(mv.idx)] != 0;
            if (mv.on_memory && !e_.opt_.endpoint_exempt) return mv;
            mv.w = st.weight;
            if (st.axis >= 0 && e_.opt_.self_avoiding) {
                for (int b = 0; b < e_.d_; ++b) {
                    if (b == st.axis) continue;
                    for (int sg = -1; sg <= 1; sg += 2) {
                        Point t = unit_vector(e_.d_, b, sg);
                        auto iu = e_.index(u + t), iv = e_.index(mv.v + t);
                        if (iu < 0 || iv < 0) continue;
                        auto ou = occ_[static_cast<std::size_t>(iu)], ov = occ_[static_cast<std::size_t>(iv)];
                        if (ou && ov && (ou - ov == 1 || ov - ou == 1)) ++mv.gain;
                        if (!mem_edges_.empty() && mem_edges_.count(key(iu, iv))) ++mv.gain;
                    }
                }
            }
            mv.ok = true;
            return mv;
        }

        void push(const Move& mv) {
            path_.push_back(mv.v);
            idx_.push_back(mv.idx);
            if (!mv.closes) occ_[static_cast<std::size_t>(mv.idx)] = static_cast<std::int32_t>(path_.size());
            exps_.push_back(exps_.back() + mv.gain);
            u128 w = weights_.back() * mv.w;
            weights_.push_back(w);
            min1_.push_back(std::min(min1_.back(), mv.v[0]));
            max1_.push_back(std::max(max1_.back(), mv.v[0]));
            memend_.push_back(mv.on_memory);
            closed_.push_back(mv.closes);
        }

        void pop() {
            if (!closed_.back()) occ_[static_cast<std::size_t>(idx_.back())] = 0;
            path_.pop_back();
            idx_.pop_back();
            exps_.pop_back();
            weights_.pop_back();
            min1_.pop_back();
            max1_.pop_back();
            memend_.pop_back();
            closed_.pop_back();
        }

        int n() const { return static_cast<int>(path_.size()) - 1; }
        bool on_memory_end() const { return memend_.back(); }
        bool closed() const { return !closed_.empty() && closed_.back(); }

        Node node() const {
            Node nd;
            nd.n = n();
            nd.path = &path_;
            nd.exponent = exps_.back();
            nd.weight = weights_.back();
            nd.half_space = nd.n == 0 || min1_.back() > 0;
            nd.bridge = nd.half_space && path_.back()[0] == max1_.back();
            nd.closed = closed();
            return nd;
        }

    private:
        const SawEngine& e_;
        std::vector<std::int32_t> occ_;
        std::vector<std::uint8_t> mem_;
        std::unordered_set<std::uint64_t> mem_edges_;
        std::vector<Point> path_;
        std::vector<std::int64_t> idx_;
        std::vector<long> exps_;
        std::vector<u128> weights_;
        std::vector<std::int64_t> min1_, max1_;
        std::vector<bool> memend_, closed_;
    };

    template <class Sink>
    void dfs(State& st, int min_visit, int max_depth, Sink& sink) {
        if (st.n() >= min_visit) sink(st.node());
        if (st.n() >= max_depth || st.on_memory_end() || st.closed()) return;
        for (int s = 0; s < static_cast<int>(steps_.size()); ++s) {
            auto mv = st.try_step(s);
            if (!mv.ok) continue;
            if (mv.closes) {
                if (st.n() + 1 >= min_visit) {
                    st.push(mv);
                    sink(st.node());
                    st.pop();
                }
                continue;
            }
            st.push(mv);
            dfs(st, min_visit, max_depth, sink);
            st.pop();
        }
    }

    const StepDistribution& D_;
    Options opt_;
    int d_;
    std::int64_t side_ = 0;
    std::int64_t offset_ = 0;
    std::int64_t cells_ = 1;
    std::array<std::int64_t, kMaxDim> stride_{};
    std::vector<StepDistribution::Step> steps_;
};

// Root task covers n <= 1; every 2-step prefix is one further task.  Sinks
// come back in task order.
template <class Sink>
std::vector<Sink> run_partitioned(SawEngine& engine, const std::function<Sink()>& make) {
    int n_max = engine.options().n_max;
    std::vector<std::vector<int>> pre;
    if (n_max >= 2) pre = engine.prefixes(2);
    std::vector<Sink> sinks;
    sinks.reserve(pre.size() + 1);
    for (std::size_t i = 0; i <= pre.size(); ++i) sinks.push_back(make());
    parallel_for(pre.size() + 1, [&](std::size_t t) {
        if (t == 0) {
            engine.run({}, 0, 1, sinks[0]);
        } else {
            engine.run(pre[t - 1], 2, n_max, sinks[t]);
        }
    });
    return sinks;
}

}  // namespace detail

struct WalkVisitorOptions {
    Walk memory;
    bool endpoint_exempt = false;
    std::optional<int> torus_side;
};

// Calls visitor(walk) once per walk of length 0..n_max in the class, in
// deterministic depth-first order (step order of D's support).
inline void enumerate_walks(const ModelParams& P, int n_max, WalkFilter filter, const std::function<void(const Walk&)>& visitor) {
    if (n_max > enumeration_cap(P.D)) throw std::invalid_argument("n_max exceeds the enumeration cap");
    if (filter == WalkFilter::walks) {
        std::vector<Point> path{origin(P.dim())};
        std::function<void()> rec = [&] {
            visitor(Walk(path));
            if (static_cast<int>(path.size()) - 1 == n_max) return;
            for (const auto& s : P.D.steps()) {
                path.push_back(path.back() + s.x);
                rec();
                path.pop_back();
            }
        };
        rec();
        return;
    }
    detail::SawEngine::Options opt;
    opt.n_max = n_max;
    opt.half_space_only = filter == WalkFilter::half_space || filter == WalkFilter::bridge;
    opt.closures = filter == WalkFilter::polygon;
    detail::SawEngine eng(P.D, opt);
    auto sink = [&](const detail::SawEngine::Node& nd) {
        if (filter == WalkFilter::polygon && !nd.closed) return;
        if (filter == WalkFilter::bridge && !nd.bridge) return;
        visitor(Walk(*nd.path));
    };
    eng.run({}, 0, n_max, sink);
}

// Parallel variant: one accumulator per 2-step prefix, returned in canonical order.
template <class Acc>
std::vector<Acc> enumerate_partitioned(const ModelParams& P, int n_max, WalkFilter filter,
                                       const std::function<Acc()>& make,
                                       const std::function<void(Acc&, const Walk&)>& visit) {
    if (n_max > enumeration_cap(P.D)) throw std::invalid_argument("n_max exceeds the enumeration cap");
    if (filter == WalkFilter::walks) throw std::invalid_argument("partitioned enumeration needs a self-avoiding class");
    detail::SawEngine::Options opt;
    opt.n_max = n_max;
    opt.half_space_only = filter == WalkFilter::half_space || filter == WalkFilter::bridge;
    opt.closures = filter == WalkFilter::polygon;
    detail::SawEngine eng(P.D, opt);
    struct Wrap {
        Acc acc;
        const std::function<void(Acc&, const Walk&)>* visit;
        WalkFilter filter;
        void operator()(const detail::SawEngine::Node& nd) {
            if (filter == WalkFilter::polygon && !nd.closed) return;
            if (filter == WalkFilter::bridge && !nd.bridge) return;
            (*visit)(acc, Walk(*nd.path));
        }
    };
    auto sinks = detail::run_partitioned<Wrap>(eng, [&] { return Wrap{make(), &visit, filter}; });
    std::vector<Acc> out;
    out.reserve(sinks.size());
    for (auto& s : sinks) out.push_back(std::move(s.acc));
    return out;
}

struct MassTable {
    int n_max = 0;
    std::vector<Rational> c, b, h;
    std::vector<std::map<long, Rational>> h_by_k;  // n -> (k -> h_n^k)
    std::vector<std::uint64_t> saw_count, bridge_count, half_space_count;
};

// Exponent histograms per n, independent of kappa.
struct MassPolynomials {
    std::vector<KappaPolynomial> c, b, h;
    std::vector<std::map<long, KappaPolynomial>> h_by_k;
    std::vector<std::uint64_t> nc, nb, nh;
    bool with_marked = false;

    MassTable evaluate(const Rational& kappa, std::uint64_t den) const {
        MassTable t;
        t.n_max = static_cast<int>(c.size()) - 1;
        for (int n = 0; n <= t.n_max; ++n) {
            auto un = static_cast<std::size_t>(n);
            t.c.push_back(c[un].evaluate(kappa, den, n));
            t.b.push_back(b[un].evaluate(kappa, den, n));
            t.h.push_back(h[un].evaluate(kappa, den, n));
            std::map<long, Rational> hk;
            for (const auto& [k, poly] : h_by_k[un]) hk[k] = poly.evaluate(kappa, den, n);
            t.h_by_k.push_back(std::move(hk));
        }
        t.saw_count = nc;
        t.bridge_count = nb;
        t.half_space_count = nh;
        return t;
    }
};

inline MassPolynomials mass_polynomials(const StepDistribution& D, int n_max, bool with_marked) {
    if (n_max > enumeration_cap(D)) throw std::invalid_argument("n_max exceeds the enumeration cap");
    auto N = static_cast<std::size_t>(n_max) + 1;
    struct Acc {
        std::vector<KappaPolynomial> c, b, h;
        std::vector<std::map<long, KappaPolynomial>> hk;
        std::vector<std::uint64_t> nc, nb, nh;
        bool marked;
        std::size_t N;
        Acc(std::size_t n, bool m) : c(n), b(n), h(n), hk(n), nc(n, 0), nb(n, 0), nh(n, 0), marked(m), N(n) {}
        void operator()(const detail::SawEngine::Node& nd) {
            auto n = static_cast<std::size_t>(nd.n);
            c[n].add(nd.exponent, nd.weight);
            ++nc[n];
            if (nd.half_space) {
                h[n].add(nd.exponent, nd.weight);
                ++nh[n];
                if (marked) {
                    long k = static_cast<long>(marked_unfold(Walk(*nd.path)).marked_union.size());
                    hk[n][k].add(nd.exponent, nd.weight);
                }
            }
            if (nd.bridge) {
                b[n].add(nd.exponent, nd.weight);
                ++nb[n];
            }
        }
    };
    detail::SawEngine::Options opt;
    opt.n_max = n_max;
    detail::SawEngine eng(D, opt);
    auto sinks = detail::run_partitioned<Acc>(eng, [&] { return Acc(N, with_marked); });
    MassPolynomials out;
    out.with_marked = with_marked;
    out.c.resize(N);
    out.b.resize(N);
    out.h.resize(N);
    out.h_by_k.resize(N);
    out.nc.assign(N, 0);
    out.nb.assign(N, 0);
    out.nh.assign(N, 0);
    for (auto& s : sinks) {
        for (std::size_t n = 0; n < N; ++n) {
            out.c[n] += s.c[n];
            out.b[n] += s.b[n];
            out.h[n] += s.h[n];
            for (auto& [k, poly] : s.hk[n]) out.h_by_k[n][k] += poly;
            out.nc[n] += s.nc[n];
            out.nb[n] += s.nb[n];
            out.nh[n] += s.nh[n];
        }
    }
    return out;
}

inline MassTable mass_table(const ModelParams& P, int n_max, bool with_marked = true) {
    return mass_polynomials(P.D, n_max, with_marked).evaluate(P.kappa, P.D.denominator());
}

namespace detail {

// Per-endpoint exponent histograms.
struct PointPolys {
    std::map<Point, std::vector<KappaPolynomial>> m;
    std::size_t N = 0;
    void add(const Point& x, int n, long e, u128 w) {
        auto it = m.find(x);
        if (it == m.end()) it = m.emplace(x, std::vector<KappaPolynomial>(N)).first;
        it->second[static_cast<std::size_t>(n)].add(e, w);
    }
    void merge(const PointPolys& o) {
        for (const auto& [x, v] : o.m) {
            auto it = m.find(x);
            if (it == m.end()) it = m.emplace(x, std::vector<KappaPolynomial>(N)).first;
            for (std::size_t n = 0; n < N; ++n) it->second[n] += v[n];
        }
    }
    SpatialSeries evaluate(int dim, const Rational& kappa, std::uint64_t den) const {
        SpatialSeries s(dim, static_cast<int>(N) - 1);
        for (const auto& [x, v] : m) {
            Series& ser = s.at(x);
            for (std::size_t n = 0; n < N; ++n)
                if (!v[n].empty()) ser[static_cast<int>(n)] = v[n].evaluate(kappa, den, static_cast<int>(n));
        }
        s.prune();
        return s;
    }
};

inline SpatialSeries two_point_impl(const ModelParams& P, int N, const Walk& memory, bool exempt, int min_length) {
    if (N > enumeration_cap(P.D)) throw std::invalid_argument("order exceeds the enumeration cap");
    SawEngine::Options opt;
    opt.n_max = N;
    opt.memory = memory;
    opt.endpoint_exempt = exempt;
    SawEngine eng(P.D, opt);
    struct Acc {
        PointPolys pp;
        int min_length;
        void operator()(const SawEngine::Node& nd) {
            if (nd.n < min_length) return;
            pp.add(nd.path->back(), nd.n, nd.exponent, nd.weight);
        }
    };
    auto sinks = run_partitioned<Acc>(eng, [&] {
        Acc a;
        a.pp.N = static_cast<std::size_t>(N) + 1;
        a.min_length = min_length;
        return a;
    });
    PointPolys all;
    all.N = static_cast<std::size_t>(N) + 1;
    for (const auto& s : sinks) all.merge(s.pp);
    return all.evaluate(P.dim(), P.kappa, P.D.denominator());
}

}  // namespace detail

inline SpatialSeries two_point_coeffs(const ModelParams& P, int N) { return detail::two_point_impl(P, N, Walk(), false, 0); }

inline SpatialSeries memory_two_point_coeffs(const ModelParams& P, const Walk& eta, int N, bool endpoint_exempt, int min_length) {
    return detail::two_point_impl(P, N, make_memory(eta), endpoint_exempt, min_length);
}

inline Series torus_susceptibility(const ModelParams& P, int side, int N) {
    if (side < 3) throw std::invalid_argument("torus side must be >= 3");
    detail::SawEngine::Options opt;
    opt.n_max = N;
    opt.torus_side = side;
    detail::SawEngine eng(P.D, opt);
    struct Acc {
        std::vector<KappaPolynomial> c;
        void operator()(const detail::SawEngine::Node& nd) { c[static_cast<std::size_t>(nd.n)].add(nd.exponent, nd.weight); }
    };
    auto sinks = detail::run_partitioned<Acc>(eng, [&] { return Acc{std::vector<KappaPolynomial>(static_cast<std::size_t>(N) + 1)}; });
    Series out(N);
    for (int n = 0; n <= N; ++n) {
        KappaPolynomial poly;
        for (const auto& s : sinks) poly += s.c[static_cast<std::size_t>(n)];
        out[n] = poly.evaluate(P.kappa, P.D.denominator(), n);
    }
    return out;
}

}  // namespace asaw
