#pragma once

#include "flips.hpp"
#include "rational.hpp"
#include "walk.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

namespace asaw {

struct BridgeSplit {
    Walk bridge;
    Walk remainder;  // translated to start at o
};

inline BridgeSplit split_first_bridge(const Walk& w) {
    auto c = classify(w);
    if (!c.half_space) throw std::invalid_argument("walk is not a half-space walk");
    int bp = *c.bridge_point;
    return {subwalk(w, 0, bp), normalized(subwalk(w, bp, w.steps()))};
}

struct UnfoldResult {
    std::vector<Walk> bridges;                      // stage bridges, each starting at o
    std::vector<std::int64_t> spans;                // strictly decreasing
    std::vector<std::vector<Plaquette>> marked;     // per stage, in stage coordinates; last is empty
    std::vector<Plaquette> marked_union;            // translated into the frame of `unfolded`
    Walk unfolded;
    int depth() const { return static_cast<int>(bridges.size()); }
};

namespace detail {

inline UnfoldResult unfold_impl(const Walk& w, bool mark) {
    if (!classify(w).half_space) throw std::invalid_argument("walk is not a half-space walk");
    UnfoldResult r;
    Walk cur = normalized(w);
    Walk acc = Walk::zero_step(w.dim());
    std::vector<Plaquette> uni;
    while (true) {
        auto c = classify(cur);
        int bp = *c.bridge_point;
        Walk bridge = subwalk(cur, 0, bp);
        std::vector<Plaquette> marks;
        bool last = bp == cur.steps();
        if (mark && !last) marks = adj_between(subwalk(cur, bp, cur.steps()), bridge, true);
        Point offset = acc.back();
        for (const auto& P : marks) uni.push_back(translate(P, offset));
        r.bridges.push_back(bridge);
        r.spans.push_back(c.span);
        r.marked.push_back(std::move(marks));
        acc = concat(acc, bridge);
        if (last) break;
        cur = reflect(normalized(subwalk(cur, bp, cur.steps())), 0);
    }
    std::sort(uni.begin(), uni.end());
    r.marked_union = std::move(uni);
    r.unfolded = std::move(acc);
    return r;
}

}  // namespace detail

inline UnfoldResult classical_unfold(const Walk& w) { return detail::unfold_impl(w, false); }
inline UnfoldResult marked_unfold(const Walk& w) { return detail::unfold_impl(w, true); }

// Calls f(subset) for every size-s subset of `items`, lexicographic in index order.
template <class T, class F>
void for_each_subset(const std::vector<T>& items, std::size_t s, F&& f) {
    std::size_t n = items.size();
    if (s > n) return;
    std::vector<std::size_t> idx(s);
    for (std::size_t i = 0; i < s; ++i) idx[i] = i;
    while (true) {
        std::vector<T> pick;
        pick.reserve(s);
        for (auto i : idx) pick.push_back(items[i]);
        f(pick);
        std::size_t k = s;
        while (k > 0 && idx[k - 1] == n - s + (k - 1)) --k;
        if (k == 0) return;
        ++idx[k - 1];
        for (std::size_t j = k; j < s; ++j) idx[j] = idx[j - 1] + 1;
    }
}

struct MultivaluedImage {
    UnfoldResult unfold;
    std::vector<Plaquette> committed;  // adj*, first ceil(alpha k) of the greedy pass
    long k = 0;
    long flips = 0;                    // ceil(delta alpha k)
    std::vector<Walk> images;
};

inline MultivaluedImage multivalued_unfold(const Walk& w, const Rational& delta, const Rational& alpha) {
    if (delta <= 0 || delta >= Rational(1, 2)) throw std::invalid_argument("delta must lie in (0, 1/2)");
    MultivaluedImage out;
    out.unfold = marked_unfold(w);
    out.k = static_cast<long>(out.unfold.marked_union.size());
    out.committed = committed_subset(out.unfold.marked_union, alpha);
    out.flips = ceil_long(delta * alpha * Rational(out.k));
    for_each_subset(out.committed, static_cast<std::size_t>(out.flips), [&](const std::vector<Plaquette>& B) {
        out.images.push_back(flip_set(FlipSet(B), out.unfold.unfolded));
    });
    return out;
}

namespace detail {

inline std::vector<Walk> split_by_spans(const Walk& w, const std::vector<std::int64_t>& spans) {
    if (spans.empty()) throw std::invalid_argument("empty span sequence");
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (spans[i] <= 0) throw std::invalid_argument("spans must be positive");
        if (i && spans[i] >= spans[i - 1]) throw std::invalid_argument("spans must be strictly decreasing");
    }
    auto c = classify(w);
    std::int64_t total = 0;
    for (auto s : spans) total += s;
    if (!c.bridge || c.span != total) throw std::invalid_argument("spans inconsistent with the unfolded bridge");
    Walk z = normalized(w);
    std::vector<Walk> pieces;
    int from = 0;
    std::int64_t cum = 0;
    for (std::size_t j = 0; j < spans.size(); ++j) {
        cum += spans[j];
        int to = z.steps();
        if (j + 1 < spans.size()) {
            to = -1;
            for (int i = 0; i <= z.steps(); ++i)
                if (z[i][0] <= cum) to = i;
        }
        if (to <= from) throw std::invalid_argument("spans inconsistent with the unfolded bridge");
        Walk piece = normalized(subwalk(z, from, to));
        auto pc = classify(piece);
        if (!pc.bridge || pc.span != spans[j]) throw std::invalid_argument("spans inconsistent with the unfolded bridge");
        pieces.push_back(std::move(piece));
        from = to;
    }
    return pieces;
}

}  // namespace detail

// Inverse of the unfolding.  With `unflip` set, every stage but the last is
// first unflipped against the (already reconstructed) remainder, which
// inverts multivalued images as well.
inline Walk refold(const Walk& w_unfolded, const std::vector<std::int64_t>& spans, bool unflip = true) {
    // The zero-step walk is its own unfolding, with the single span 0.
    if (w_unfolded.steps() == 0 && spans == std::vector<std::int64_t>{0}) return w_unfolded;
    auto pieces = detail::split_by_spans(w_unfolded, spans);
    Walk h = pieces.back();
    for (int j = static_cast<int>(pieces.size()) - 2; j >= 0; --j) {
        Walk tail = reflect(h, 0);
        Walk bridge = pieces[static_cast<std::size_t>(j)];
        if (unflip) bridge = unflip_with_memory(bridge, translate(tail, bridge.back())).w;
        h = concat(bridge, tail);
    }
    auto c = classify(h);
    if (!c.half_space) throw std::invalid_argument("spans inconsistent with the unfolded bridge");
    if (classical_unfold(h).spans != spans) throw std::invalid_argument("spans inconsistent with the unfolded bridge");
    return h;
}

struct SplitMap {
    int m = 0;
    bool degenerate = false;           // second part is the zero-step walk
    Walk omega1, omega2;               // omega1 = w[0,m]; omega2 = w[m,n] translated to o
    Walk eta1_tilde;                   // (o,e1) followed by the reversed, translated omega1
    Point shift;                       // x = e1 - w_m
    long k = 0;
    std::vector<Plaquette> committed;  // adj*, in the coordinates of w
    long flips = 0;
    std::vector<std::pair<Walk, Walk>> images;
};

inline SplitMap theorem_split_map(const Walk& w, const Rational& delta, const Rational& alpha) {
    if (!is_self_avoiding(w)) throw std::invalid_argument("walk is not self-avoiding");
    if (!w.front().is_origin()) throw std::invalid_argument("walk must start at the origin");
    SplitMap s;
    int d = w.dim();
    std::int64_t lo = w[0][0];
    for (int i = 0; i <= w.steps(); ++i)
        if (w[i][0] <= lo) {
            lo = w[i][0];
            s.m = i;
        }
    s.degenerate = s.m == w.steps() && w.steps() > 0;
    Walk w1 = subwalk(w, 0, s.m);
    Walk w2abs = subwalk(w, s.m, w.steps());
    s.omega1 = w1;
    s.omega2 = normalized(w2abs);
    Point e1 = unit_vector(d, 0);
    s.shift = e1 - w[s.m];
    s.eta1_tilde = concat(Walk({origin(d), e1}), normalized(reverse(w1)));
    auto A = adj_between(w2abs, w1, true);
    s.k = static_cast<long>(A.size());
    s.committed = committed_subset(A, alpha);
    s.flips = ceil_long(delta * alpha * Rational(s.k));
    for_each_subset(s.committed, static_cast<std::size_t>(s.flips), [&](const std::vector<Plaquette>& B) {
        std::vector<Plaquette> moved;
        for (const auto& P : B) moved.push_back(translate(P, s.shift));
        s.images.emplace_back(flip_set(FlipSet(moved), s.eta1_tilde), s.omega2);
    });
    return s;
}

// Inverse of split_map on its images.
inline Walk reconstruct_split(const Walk& eta1, const Walk& eta2) {
    int d = eta1.dim();
    Point e1 = unit_vector(d, 0);
    if (eta1.steps() < 1 || !eta1[0].is_origin() || eta1[1] != e1) throw std::invalid_argument("not a split-map image");
    auto u = unflip_with_memory(eta1, translate(eta2, e1));
    const Walk& tilde = u.w;
    Point wm = e1 - tilde.back();
    Walk w1 = translate(reverse(subwalk(tilde, 1, tilde.steps())), wm - e1);
    if (!w1.front().is_origin()) throw std::invalid_argument("not a split-map image");
    return concat(w1, eta2);
}

// Partitions of n into distinct parts, exact.
inline BigInt distinct_partitions(long n) {
    if (n < 0) throw std::invalid_argument("n must be nonnegative");
    std::vector<BigInt> dp(static_cast<std::size_t>(n) + 1, BigInt(0));
    dp[0] = 1;
    for (long part = 1; part <= n; ++part)
        for (long s = n; s >= part; --s) dp[static_cast<std::size_t>(s)] += dp[static_cast<std::size_t>(s - part)];
    return dp[static_cast<std::size_t>(n)];
}

}  // namespace asaw
