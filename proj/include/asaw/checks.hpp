#pragma once

// Exhaustive property suites shared by the acceptance binary and the CLI.
// Every report is a JSON object with a boolean "passed"; reports contain no
// timing or thread information, so they are byte-identical across thread counts.

#include "analysis.hpp"
#include "enumerate.hpp"
#include "flips.hpp"
#include "greens.hpp"
#include "interaction.hpp"
#include "lace.hpp"
#include "parallel.hpp"
#include "unfold.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace asaw::checks {

using json = nlohmann::json;

inline std::vector<Walk> collect(const ModelParams& P, int n_max, WalkFilter filter) {
    std::vector<Walk> out;
    enumerate_walks(P, n_max, filter, [&](const Walk& w) { out.push_back(w); });
    return out;
}

// Runs f(acc, item) over fixed chunks in parallel; accumulators come back in chunk order.
template <class Acc, class T, class F>
std::vector<Acc> chunked(const std::vector<T>& items, F&& f, std::size_t chunks = 64) {
    chunks = std::max<std::size_t>(1, std::min(chunks, items.size()));
    std::vector<Acc> accs(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        std::size_t lo = items.size() * c / chunks, hi = items.size() * (c + 1) / chunks;
        for (std::size_t i = lo; i < hi; ++i) f(accs[c], items[i]);
    });
    return accs;
}

struct Failures {
    long count = 0;
    std::vector<std::string> samples;
    void add(const std::string& s) {
        ++count;
        if (samples.size() < 5) samples.push_back(s);
    }
    void merge(const Failures& o) {
        count += o.count;
        for (const auto& s : o.samples)
            if (samples.size() < 5) samples.push_back(s);
    }
    json to_json() const { return json{{"count", count}, {"samples", samples}}; }
};

// |greedy_disjoint(A)| >= ceil(alpha |A|).
struct GreedyTally {
    long sets = 0;
    Failures fail;
    void check(const std::vector<Plaquette>& A, const Rational& alpha, const std::string& where) {
        std::set<Plaquette> uniq(A.begin(), A.end());
        ++sets;
        long need = ceil_long(alpha * Rational(static_cast<long>(uniq.size())));
        if (static_cast<long>(greedy_disjoint(A).size()) < need) fail.add(where);
    }
    void merge(const GreedyTally& o) {
        sets += o.sets;
        fail.merge(o.fail);
    }
    json to_json() const { return json{{"sets", sets}, {"failures", fail.to_json()}}; }
};

inline std::string kappa_list(const std::vector<Rational>& ks) {
    std::string s;
    for (const auto& k : ks) s += (s.empty() ? "" : ",") + to_string(k);
    return s;
}

// G - delta - zD*G - Pi*G vanishes identically.
inline json recursion_identity(const StepDistribution& D, int N, const std::vector<Rational>& kappas) {
    PiOptions opt;
    auto poly = pi_polynomials(D, N, opt);
    json rep{{"distribution", D.name()}, {"dim", D.dim()}, {"order", N}, {"cases", json::array()}};
    bool ok = true;
    for (const auto& k : kappas) {
        ModelParams P(k, D);
        auto r = recursion_residual_from(D, two_point_coeffs(P, N), poly.Pi(k));
        bool zero = r.is_zero();
        ok = ok && zero;
        std::vector<std::string> pi_o;
        Series at_o = poly.Pi(k).get(origin(D.dim()));
        for (const auto& c : at_o.coeffs()) pi_o.push_back(to_string(c));
        rep["cases"].push_back({{"kappa", to_string(k)}, {"all_zero", zero}, {"max_abs_residual", to_string(r.max_abs())}, {"Pi_at_origin", pi_o}});
    }
    rep["passed"] = ok;
    return rep;
}

// interaction_product(w) = asaw_weight(w) 1{SAW} over every walk of length <= n_max.
inline json interaction_product_identity(const StepDistribution& D, int n_max, const std::vector<Rational>& kappas) {
    ModelParams P0(0, D);
    auto walks = collect(P0, n_max, WalkFilter::walks);
    struct Acc {
        long checked = 0;
        Failures fail;
    };
    json rep{{"walks", walks.size()}, {"max_n", n_max}, {"kappas", kappa_list(kappas)}};
    Failures fail;
    long checked = 0;
    for (const auto& k : kappas) {
        ModelParams P(k, D);
        auto accs = chunked<Acc>(walks, [&](Acc& a, const Walk& w) {
            ++a.checked;
            Rational lhs = interaction_product(P, w);
            Rational rhs = is_self_avoiding(w) ? asaw_weight(P, w) : Rational(0);
            if (lhs != rhs) a.fail.add(w.str() + " kappa=" + to_string(k));
        });
        for (const auto& a : accs) {
            checked += a.checked;
            fail.merge(a.fail);
        }
    }
    rep["checked"] = checked;
    rep["failures"] = fail.to_json();
    rep["passed"] = fail.count == 0;
    return rep;
}

// b_{n+m} >= b_n b_m for n, m >= 1, n + m <= n_max.
inline json bridge_supermultiplicativity(const StepDistribution& D, int n_max, const std::vector<Rational>& kappas) {
    auto mp = mass_polynomials(D, n_max, false);
    json rep{{"max_n", n_max}, {"cases", json::array()}};
    bool ok = true;
    for (const auto& k : kappas) {
        auto t = mp.evaluate(k, D.denominator());
        Failures fail;
        long checked = 0;
        std::vector<std::string> b;
        for (int n = 0; n <= n_max; ++n) b.push_back(to_string(t.b[static_cast<std::size_t>(n)]));
        for (int n = 1; n < n_max; ++n)
            for (int m = 1; n + m <= n_max; ++m) {
                ++checked;
                if (t.b[static_cast<std::size_t>(n + m)] < t.b[static_cast<std::size_t>(n)] * t.b[static_cast<std::size_t>(m)])
                    fail.add("n=" + std::to_string(n) + " m=" + std::to_string(m));
            }
        ok = ok && fail.count == 0;
        rep["cases"].push_back({{"kappa", to_string(k)}, {"b", b}, {"pairs", checked}, {"failures", fail.to_json()}});
    }
    rep["passed"] = ok;
    return rep;
}

// Plaquettes with base in the bounding box of w widened by one.
inline std::vector<Plaquette> candidate_plaquettes(const Walk& w) {
    int d = w.dim();
    Point lo = w[0], hi = w[0];
    for (const auto& p : w.vertices())
        for (int a = 0; a < d; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
        }
    std::vector<Plaquette> out;
    std::vector<std::int64_t> cur(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) cur[static_cast<std::size_t>(a)] = lo[a] - 1;
    while (true) {
        Point base(d);
        for (int a = 0; a < d; ++a) base[a] = cur[static_cast<std::size_t>(a)];
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) out.push_back(make_plaquette(base, i, j));
        int a = 0;
        while (a < d && ++cur[static_cast<std::size_t>(a)] > hi[a]) {
            cur[static_cast<std::size_t>(a)] = lo[a] - 1;
            ++a;
        }
        if (a == d) break;
    }
    return out;
}

// Undo a single flip by shortcutting the three-edge detour around P.
inline std::optional<Walk> unflip_single(const Plaquette& P, const Walk& f) {
    for (int i = 0; i + 3 <= f.steps(); ++i) {
        if (P.contains(f[i]) && P.contains(f[i + 1]) && P.contains(f[i + 2]) && P.contains(f[i + 3]) && unit_axis(f[i + 3] - f[i]) >= 0) {
            std::vector<Point> vs = f.vertices();
            vs.erase(vs.begin() + i + 1, vs.begin() + i + 3);
            return Walk(std::move(vs));
        }
    }
    return std::nullopt;
}

// Flip lemmas over every SAW of length <= n_max and every nearby plaquette.
inline json flip_suite(const StepDistribution& D, int n_max, const std::vector<Rational>& kappas) {
    ModelParams P0(0, D);
    auto walks = collect(P0, n_max, WalkFilter::saw);
    std::vector<ModelParams> Ps;
    std::vector<Rational> inv_lambda;
    for (const auto& k : kappas) {
        Ps.emplace_back(k, D);
        inv_lambda.push_back(1 / Ps.back().lambda());
    }
    Rational alpha = P0.alpha();
    struct Acc {
        long plaquettes = 0, flippable = 0, pairs = 0, roundtrips = 0;
        Failures endpoint, saw, identity, invert, weight, commute, roundtrip;
        GreedyTally greedy;
    };
    auto accs = chunked<Acc>(walks, [&](Acc& a, const Walk& w) {
        auto cands = candidate_plaquettes(w);
        std::vector<Plaquette> flippable;
        for (const auto& P : cands) {
            ++a.plaquettes;
            Walk f = flip(P, w);
            if (!is_flippable(P, w)) {
                if (f != w) a.identity.add(w.str() + " " + P.str());
                continue;
            }
            ++a.flippable;
            flippable.push_back(P);
            if (f.front() != w.front() || f.back() != w.back() || f.steps() != w.steps() + 2) a.endpoint.add(w.str() + " " + P.str());
            if (!is_self_avoiding(f)) a.saw.add(w.str() + " " + P.str());
            auto back = unflip_single(P, f);
            if (!back || *back != w) a.invert.add(w.str() + " " + P.str());
            for (std::size_t k = 0; k < Ps.size(); ++k)
                if (asaw_weight(Ps[k], f) / asaw_weight(Ps[k], w) < inv_lambda[k]) a.weight.add(w.str() + " " + P.str() + " kappa=" + to_string(Ps[k].kappa));
        }
        for (std::size_t x = 0; x < flippable.size(); ++x)
            for (std::size_t y = x + 1; y < flippable.size(); ++y) {
                const auto &P = flippable[x], &Q = flippable[y];
                if (share_vertex(P, Q)) continue;
                ++a.pairs;
                if (flip(P, flip(Q, w)) != flip(Q, flip(P, w))) a.commute.add(w.str() + " " + P.str() + " " + Q.str());
            }
        // Memory-guided inversion at every split of w.
        for (int m = 1; m < w.steps(); ++m) {
            Walk eta = translate(subwalk(w, 0, m), -w[m]);
            Walk om = normalized(subwalk(w, m, w.steps()));
            auto A = adj_between(eta, om, true);
            a.greedy.check(A, alpha, w.str() + " m=" + std::to_string(m));
            std::size_t s = A.size();
            for (unsigned long mask = 0; mask < (1UL << s); ++mask) {
                std::vector<Plaquette> B;
                for (std::size_t t = 0; t < s; ++t)
                    if (mask >> t & 1UL) B.push_back(A[t]);
                bool disjoint = true;
                for (std::size_t p = 0; p < B.size() && disjoint; ++p)
                    for (std::size_t q = p + 1; q < B.size(); ++q)
                        if (share_vertex(B[p], B[q])) disjoint = false;
                if (!disjoint) continue;
                ++a.roundtrips;
                FlipSet FB(B);
                Walk f = flip_set(FB, om);
                try {
                    auto u = unflip_with_memory(f, eta);
                    if (u.w != om || !(u.B == FB)) a.roundtrip.add(w.str() + " m=" + std::to_string(m));
                } catch (const std::exception&) {
                    a.roundtrip.add(w.str() + " m=" + std::to_string(m) + " (threw)");
                }
            }
        }
    });
    Acc t;
    for (const auto& a : accs) {
        t.plaquettes += a.plaquettes;
        t.flippable += a.flippable;
        t.pairs += a.pairs;
        t.roundtrips += a.roundtrips;
        t.endpoint.merge(a.endpoint);
        t.saw.merge(a.saw);
        t.identity.merge(a.identity);
        t.invert.merge(a.invert);
        t.weight.merge(a.weight);
        t.commute.merge(a.commute);
        t.roundtrip.merge(a.roundtrip);
        t.greedy.merge(a.greedy);
    }
    long bad = t.endpoint.count + t.saw.count + t.identity.count + t.invert.count + t.weight.count + t.commute.count + t.roundtrip.count;
    return json{{"max_n", n_max},
                {"walks", walks.size()},
                {"kappas", kappa_list(kappas)},
                {"plaquettes_tested", t.plaquettes},
                {"flippable", t.flippable},
                {"disjoint_pairs", t.pairs},
                {"memory_roundtrips", t.roundtrips},
                {"endpoint_or_length", t.endpoint.to_json()},
                {"self_avoidance", t.saw.to_json()},
                {"non_flippable_identity", t.identity.to_json()},
                {"inversion", t.invert.to_json()},
                {"weight_ratio", t.weight.to_json()},
                {"commutativity", t.commute.to_json()},
                {"memory_inversion", t.roundtrip.to_json()},
                {"greedy", t.greedy.to_json()},
                {"passed", bad == 0 && t.greedy.fail.count == 0}};
}

// Non-flippable plaquettes of adj(w[0,m], w[m,n]) for w[m,n]: <= k0 (SAW), <= 2 k0 (polygon).
inline json nonflippable_bound(const StepDistribution& D, int n_max) {
    ModelParams P0(0, D);
    long k0 = P0.k0();
    Rational alpha = P0.alpha();
    struct Acc {
        long splits = 0;
        long worst = 0;
        Failures fail;
        GreedyTally greedy;
    };
    json rep{{"max_n", n_max}, {"k0", k0}};
    bool ok = true;
    for (auto filter : {WalkFilter::saw, WalkFilter::polygon}) {
        bool poly = filter == WalkFilter::polygon;
        long bound = poly ? 2 * k0 : k0;
        auto walks = collect(P0, n_max, filter);
        auto accs = chunked<Acc>(walks, [&](Acc& a, const Walk& w) {
            for (int m = 0; m <= w.steps(); ++m) {
                Walk w1 = subwalk(w, 0, m), w2 = subwalk(w, m, w.steps());
                auto A = adj_between(w1, w2, false);
                long bad = 0;
                for (const auto& P : A)
                    if (!is_flippable(P, w2)) ++bad;
                ++a.splits;
                a.worst = std::max(a.worst, bad);
                if (bad > bound) a.fail.add(w.str() + " m=" + std::to_string(m));
                a.greedy.check(A, alpha, w.str() + " m=" + std::to_string(m));
            }
        });
        Acc t;
        for (const auto& a : accs) {
            t.splits += a.splits;
            t.worst = std::max(t.worst, a.worst);
            t.fail.merge(a.fail);
            t.greedy.merge(a.greedy);
        }
        ok = ok && t.fail.count == 0 && t.greedy.fail.count == 0;
        rep[poly ? "polygons" : "saws"] = {{"walks", walks.size()},   {"splits", t.splits},          {"bound", bound},
                                           {"worst", t.worst},        {"failures", t.fail.to_json()}, {"greedy", t.greedy.to_json()}};
    }
    rep["passed"] = ok;
    return rep;
}

// Random plaquette sets in a box; greedy selection reaches ceil(alpha |A|).
inline json greedy_random(int d, int sets, std::uint64_t seed, int box = 10) {
    std::mt19937_64 rng(seed);
    Rational alpha(1, 1 + 8 * (d - 1) * (d - 1));
    std::uniform_int_distribution<int> coord(0, box - 1), axis(0, d - 1), size(1, 120);
    GreedyTally tally;
    for (int s = 0; s < sets; ++s) {
        std::vector<Plaquette> A;
        int m = size(rng);
        for (int k = 0; k < m; ++k) {
            Point b(d);
            for (int a = 0; a < d; ++a) b[a] = coord(rng);
            int i = axis(rng), j = axis(rng);
            if (i == j) j = (i + 1) % d;
            A.push_back(make_plaquette(b, i, j));
        }
        tally.check(A, alpha, "set " + std::to_string(s));
    }
    return json{{"dim", d}, {"seed", seed}, {"random", tally.to_json()}, {"passed", tally.fail.count == 0}};
}

// Lemma-level unfolding suite over half-space walks of length <= n_max.
inline json unfolding_suite(const StepDistribution& D, int n_max, const Rational& delta, const std::vector<Rational>& kappas) {
    ModelParams P0(0, D);
    Rational alpha = P0.alpha();
    long k0 = P0.k0();
    auto walks = collect(P0, n_max, WalkFilter::half_space);
    std::vector<ModelParams> Ps;
    for (const auto& k : kappas) Ps.emplace_back(k, D);
    struct Acc {
        long images = 0;
        Failures refold_classical, refold_images, image_shape, cardinality, weight, marked_flippable, depth;
        GreedyTally greedy;
        std::vector<std::pair<std::string, std::string>> keys;  // (image|length|span, source)
    };
    auto accs = chunked<Acc>(walks, [&](Acc& a, const Walk& w) {
        int n = w.steps();
        auto mv = multivalued_unfold(w, delta, alpha);
        const auto& U = mv.unfold;
        a.greedy.check(U.marked_union, alpha, w.str());
        if (refold(U.unfolded, U.spans, false) != w) a.refold_classical.add(w.str());
        // Spans are distinct positive integers summing to at most n.
        if (U.depth() * (U.depth() + 1) / 2 > std::max(n, 1)) a.depth.add(w.str());
        for (const auto& P : U.marked_union)
            if (!is_flippable(P, U.unfolded)) a.marked_flippable.add(w.str() + " " + P.str());
        long committed = ceil_long(alpha * Rational(mv.k));
        if (BigInt(static_cast<long>(mv.images.size())) != binomial(static_cast<unsigned long>(committed), static_cast<unsigned long>(mv.flips)))
            a.cardinality.add(w.str());
        auto span = classify(w).span;
        for (const auto& img : mv.images) {
            ++a.images;
            auto c = classify(img);
            if (!c.bridge || img.steps() != n + 2 * mv.flips) a.image_shape.add(w.str() + " -> " + img.str());
            try {
                if (refold(img, U.spans) != w) a.refold_images.add(w.str() + " -> " + img.str());
            } catch (const std::exception&) {
                a.refold_images.add(w.str() + " -> " + img.str() + " (threw)");
            }
            for (const auto& P : Ps) {
                Rational rhs = pow(P.one_plus_kappa(), mv.k + static_cast<long>(U.depth()) * k0) * pow(P.lambda(), mv.flips) * asaw_weight(P, img);
                if (asaw_weight(P, w) > rhs) a.weight.add(w.str() + " -> " + img.str() + " kappa=" + to_string(P.kappa));
            }
            a.keys.emplace_back(img.str() + "|" + std::to_string(n) + "|" + std::to_string(span), w.str());
        }
    });
    Acc t;
    std::map<std::string, std::string> seen;
    Failures disjoint;
    std::uint64_t digest = 14695981039346656037ULL;  // FNV-1a over image keys in merge order
    for (auto& a : accs) {
        for (const auto& kv : a.keys)
            for (char ch : kv.first + kv.second) digest = (digest ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
        t.images += a.images;
        t.refold_classical.merge(a.refold_classical);
        t.refold_images.merge(a.refold_images);
        t.image_shape.merge(a.image_shape);
        t.cardinality.merge(a.cardinality);
        t.weight.merge(a.weight);
        t.marked_flippable.merge(a.marked_flippable);
        t.depth.merge(a.depth);
        t.greedy.merge(a.greedy);
        for (auto& [key, src] : a.keys) {
            auto [it, fresh] = seen.emplace(key, src);
            if (!fresh && it->second != src) disjoint.add(key + " from " + it->second + " and " + src);
        }
    }
    long bad = t.refold_classical.count + t.refold_images.count + t.image_shape.count + t.cardinality.count + t.weight.count +
               t.marked_flippable.count + t.depth.count + disjoint.count + t.greedy.fail.count;
    return json{{"max_n", n_max},
                {"delta", to_string(delta)},
                {"kappas", kappa_list(kappas)},
                {"half_space_walks", walks.size()},
                {"images", t.images},
                {"refold_classical", t.refold_classical.to_json()},
                {"refold_images", t.refold_images.to_json()},
                {"image_is_bridge_of_length", t.image_shape.to_json()},
                {"cardinality", t.cardinality.to_json()},
                {"weight_transfer", t.weight.to_json()},
                {"marked_flippable", t.marked_flippable.to_json()},
                {"depth_bound", t.depth.to_json()},
                {"image_disjointness", disjoint.to_json()},
                {"image_digest", digest},
                {"greedy", t.greedy.to_json()},
                {"passed", bad == 0}};
}

// Strictly decreasing positive sequences summing to s.
inline void distinct_compositions(long s, long max_part, std::vector<std::int64_t>& cur, std::vector<std::vector<std::int64_t>>& out) {
    if (s == 0) {
        if (!cur.empty()) out.push_back(cur);
        return;
    }
    for (long p = std::min(s, max_part); p >= 1; --p) {
        cur.push_back(p);
        distinct_compositions(s - p, p - 1, cur, out);
        cur.pop_back();
    }
}

// Classical-unfolding preimages of every bridge of length <= n_max, by inversion over span sequences.
inline json preimage_counts(const StepDistribution& D, int n_max) {
    ModelParams P0(0, D);
    auto bridges = collect(P0, n_max, WalkFilter::bridge);
    struct Acc {
        long total = 0;
        Failures fail;
    };
    std::vector<BigInt> Pn;
    for (int n = 0; n <= n_max; ++n) Pn.push_back(distinct_partitions(n));
    auto accs = chunked<Acc>(bridges, [&](Acc& a, const Walk& b) {
        auto span = classify(b).span;
        std::vector<std::vector<std::int64_t>> seqs;
        std::vector<std::int64_t> cur;
        distinct_compositions(span, span, cur, seqs);
        long count = span == 0 ? 1 : 0;
        for (const auto& s : seqs) {
            try {
                Walk h = refold(b, s, false);
                if (classical_unfold(h).unfolded == b) ++count;
            } catch (const std::exception&) {
            }
        }
        a.total += count;
        if (BigInt(count) > Pn[static_cast<std::size_t>(b.steps())]) a.fail.add(b.str());
        if (count < 1 && b.steps() > 0) a.fail.add(b.str() + " (no preimage)");
    });
    Acc t;
    for (const auto& a : accs) {
        t.total += a.total;
        t.fail.merge(a.fail);
    }
    long hs = 0;
    enumerate_walks(P0, n_max, WalkFilter::half_space, [&](const Walk&) { ++hs; });
    bool ok = t.fail.count == 0 && t.total == hs;
    return json{{"max_n", n_max}, {"bridges", bridges.size()}, {"preimages", t.total}, {"half_space_walks", hs}, {"failures", t.fail.to_json()}, {"passed", ok}};
}

// Split map of the existence proof: images are half-space pairs, reconstruction inverts, images never collide.
inline json split_map_suite(const StepDistribution& D, int n_max, const Rational& delta) {
    ModelParams P0(0, D);
    Rational alpha = P0.alpha();
    auto walks = collect(P0, n_max, WalkFilter::saw);
    struct Acc {
        long images = 0, degenerate = 0;
        Failures halfspace, reconstruct;
        std::vector<std::pair<std::string, std::string>> keys;
    };
    auto accs = chunked<Acc>(walks, [&](Acc& a, const Walk& w) {
        auto s = theorem_split_map(w, delta, alpha);
        if (s.degenerate) ++a.degenerate;
        for (const auto& [e1, e2] : s.images) {
            ++a.images;
            if (!classify(e1).half_space || !classify(e2).half_space) a.halfspace.add(w.str());
            try {
                if (reconstruct_split(e1, e2) != w) a.reconstruct.add(w.str());
            } catch (const std::exception&) {
                a.reconstruct.add(w.str() + " (threw)");
            }
            a.keys.emplace_back(e1.str() + "|" + e2.str(), w.str());
        }
    });
    Acc t;
    std::map<std::string, std::string> seen;
    Failures inj;
    for (auto& a : accs) {
        t.images += a.images;
        t.degenerate += a.degenerate;
        t.halfspace.merge(a.halfspace);
        t.reconstruct.merge(a.reconstruct);
        for (auto& [k, src] : a.keys) {
            auto [it, fresh] = seen.emplace(k, src);
            if (!fresh && it->second != src) inj.add(src + " and " + it->second);
        }
    }
    bool ok = t.halfspace.count == 0 && t.reconstruct.count == 0 && inj.count == 0;
    return json{{"max_n", n_max},
                {"walks", walks.size()},
                {"images", t.images},
                {"degenerate_splits", t.degenerate},
                {"half_space_images", t.halfspace.to_json()},
                {"reconstruction", t.reconstruct.to_json()},
                {"injectivity", inj.to_json()},
                {"passed", ok}};
}

// Memory pool: SAWs ending at o of length <= mem_max plus the rooted 4-step polygons.
inline std::vector<Walk> memory_pool(const StepDistribution& D, int mem_max) {
    ModelParams P0(0, D);
    std::vector<Walk> pool;
    for (const auto& s : collect(P0, mem_max, WalkFilter::saw)) pool.push_back(translate(s, -s.back()));
    for (const auto& p : collect(P0, 4, WalkFilter::polygon))
        if (p.steps() == 4) pool.push_back(p);
    return pool;
}

// z^|w| W(w; eta) <= (1+kappa)^{k0} sum over Phi(w) of z^|w'| W(w') at z = z0, plus image disjointness per eta.
inline json asm_per_walk(const ModelParams& P, int mem_max, int walk_max) {
    auto pool = memory_pool(P.D, mem_max);
    auto walks = collect(ModelParams(0, P.D), walk_max, WalkFilter::saw);
    Rational z = P.z0();
    Rational alpha = P.alpha();
    Rational amp = pow(P.one_plus_kappa(), P.k0());
    std::vector<Rational> zpow(static_cast<std::size_t>(walk_max) + 64, Rational(1));
    for (std::size_t i = 1; i < zpow.size(); ++i) zpow[i] = zpow[i - 1] * z;
    struct Acc {
        long pairs = 0, images = 0;
        Rational worst_ratio = 0;
        Failures fail, disjoint;
        GreedyTally greedy;
    };
    auto accs = chunked<Acc>(pool, [&](Acc& a, const Walk& eta) {
        std::set<Point> blocked;
        for (const auto& v : eta.vertices())
            if (!v.is_origin()) blocked.insert(v);
        std::set<std::string> seen;
        for (const auto& w : walks) {
            bool ok = true;
            for (const auto& v : w.vertices())
                if (blocked.count(v)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            ++a.pairs;
            auto A = adj_between(eta, w, true);
            a.greedy.check(A, alpha, eta.str() + " / " + w.str());
            auto star = committed_subset(A, alpha);
            Rational sum = 0;
            for (unsigned long mask = 0; mask < (1UL << star.size()); ++mask) {
                std::vector<Plaquette> B;
                for (std::size_t t = 0; t < star.size(); ++t)
                    if (mask >> t & 1UL) B.push_back(star[t]);
                Walk img = flip_set(FlipSet(B), w);
                ++a.images;
                if (!seen.insert(img.str()).second) a.disjoint.add(eta.str() + " / " + img.str());
                sum += zpow[static_cast<std::size_t>(img.steps())] * asaw_weight(P, img);
            }
            Rational lhs = zpow[static_cast<std::size_t>(w.steps())] * conditional_weight(P, w, eta);
            Rational rhs = amp * sum;
            if (lhs > rhs) a.fail.add(eta.str() + " / " + w.str());
            Rational ratio = lhs / rhs;
            if (ratio > a.worst_ratio) a.worst_ratio = ratio;
        }
    });
    Acc t;
    for (const auto& a : accs) {
        t.pairs += a.pairs;
        t.images += a.images;
        if (a.worst_ratio > t.worst_ratio) t.worst_ratio = a.worst_ratio;
        t.fail.merge(a.fail);
        t.disjoint.merge(a.disjoint);
        t.greedy.merge(a.greedy);
    }
    return json{{"kappa", to_string(P.kappa)},
                {"z", to_string(z)},
                {"memories", pool.size()},
                {"memory_max", mem_max},
                {"walk_max", walk_max},
                {"pairs", t.pairs},
                {"images", t.images},
                {"worst_ratio", to_string(t.worst_ratio)},
                {"worst_ratio_float", t.worst_ratio.get_d()},
                {"failures", t.fail.to_json()},
                {"image_disjointness", t.disjoint.to_json()},
                {"greedy", t.greedy.to_json()},
                {"passed", t.fail.count == 0 && t.disjoint.count == 0 && t.greedy.fail.count == 0}};
}

// |pi^(m)| <= coefficient-wise diagram bound, plus the per-walk lace-edge bound.
inline json diagram_bounds(const StepDistribution& D, int N, const std::vector<int>& ms, const std::vector<Rational>& kappas) {
    PiOptions opt;
    opt.j_recursion = false;
    opt.lace_sizes = ms;
    opt.bound_sizes = ms;
    opt.lace_edge_sizes = ms;
    auto poly = pi_polynomials(D, N, opt);
    json rep{{"order", N}, {"cases", json::array()}, {"per_walk", json::object()}};
    bool ok = true;
    for (int m : ms) {
        const auto& r = poly.lace_edge_checks.at(m);
        ok = ok && r.violations == 0 && r.two_step_returns == 0;
        rep["per_walk"][std::to_string(m)] = {{"checked", r.checked}, {"violations", r.violations}, {"samples", r.samples}};
        for (const auto& k : kappas) {
            auto pm = poly.pi_m(m, k);
            auto b = poly.bound_m(m, k);
            Failures fail;
            long entries = 0;
            Rational tightest = 0;
            for (const auto& [x, s] : pm.entries())
                for (int n = 0; n <= N; ++n) {
                    if (s[n] == 0) continue;
                    ++entries;
                    Rational bound = b.coeff(x, n);
                    if (abs(s[n]) > bound) fail.add("x=" + x.str() + " n=" + std::to_string(n));
                    else if (bound > 0 && abs(s[n]) / bound > tightest) tightest = abs(s[n]) / bound;
                }
            ok = ok && fail.count == 0;
            rep["cases"].push_back({{"m", m}, {"kappa", to_string(k)}, {"nonzero_coefficients", entries}, {"max_ratio", to_string(tightest)}, {"failures", fail.to_json()}});
        }
    }
    rep["passed"] = ok;
    return rep;
}

inline json hardy_ramanujan(const std::vector<long>& ns) {
    json rep{{"points", json::array()}};
    std::vector<double> dev;
    for (long n : ns) {
        dev.push_back(hardy_ramanujan_deviation(n));
        rep["points"].push_back({{"n", n}, {"deviation", dev.back()}});
    }
    bool decreasing = true;
    for (std::size_t i = 1; i < dev.size(); ++i) decreasing = decreasing && dev[i] < dev[i - 1];
    rep["decreasing"] = decreasing;
    rep["passed"] = decreasing && !dev.empty() && dev.back() <= 0.1;
    return rep;
}

inline json torus_bound(const StepDistribution& D, int side, int N, const std::vector<Rational>& kappas) {
    json rep{{"side", side}, {"order", N}, {"cases", json::array()}};
    bool ok = true;
    for (const auto& k : kappas) {
        ModelParams P(k, D);
        auto r = torus_chi_derivative_check(P, side, N, {P.z0(), Rational(1), Rational(3, 2)});
        json pts = json::array();
        for (const auto& p : r.points)
            pts.push_back({{"z", to_string(p.z)}, {"ratio", p.ratio.get_d()}, {"bound", p.bound.get_d()}, {"holds", p.holds}});
        ok = ok && r.all_hold && r.two_ways_agree;
        rep["cases"].push_back({{"kappa", to_string(k)}, {"points", pts}, {"two_ways_agree", r.two_ways_agree}});
    }
    rep["passed"] = ok;
    return rep;
}

inline json critical_points(const ModelParams& P, int N, double tol = 0.10) {
    auto ce = critical_estimates(P, N);
    double lace = ce.zc_lace.get_d();
    double rel = std::abs(lace - ce.zc_ratio) / ce.zc_ratio;
    bool ok = rel <= tol && lace > 1 && ce.zc_ratio > 1;
    return json{{"kappa", to_string(P.kappa)}, {"order", N},           {"zc_lace", lace},       {"zc_lace_exact", to_string(ce.zc_lace)},
                {"zc_ratio", ce.zc_ratio},    {"relative_gap", rel}, {"bracket_roots", ce.zc_lace_roots}, {"passed", ok}};
}

struct SrwCase {
    StepDistribution D;
    Point x;
    double tol;
};

inline json srw_asymptotics(const std::vector<SrwCase>& cases) {
    json rep{{"cases", json::array()}};
    bool ok = true;
    for (const auto& c : cases) {
        double r = asymptotic_ratio(c.D, c.x);
        bool pass = std::abs(r - 1) <= c.tol;
        ok = ok && pass;
        rep["cases"].push_back({{"distribution", c.D.name()}, {"dim", c.D.dim()}, {"x", c.x.str()}, {"ratio", r}, {"tolerance", c.tol}, {"passed", pass}});
    }
    rep["passed"] = ok;
    return rep;
}

}  // namespace asaw::checks
