#pragma once

#include "rational.hpp"
#include "stepdist.hpp"
#include "walk.hpp"

#include <stdexcept>

namespace asaw {

struct ModelParams {
    Rational kappa = 0;
    StepDistribution D = make_nearest_neighbour(2);

    ModelParams() = default;
    ModelParams(Rational k, StepDistribution dist) : kappa(std::move(k)), D(std::move(dist)) {
        if (kappa < 0) throw std::invalid_argument("kappa must be nonnegative");
    }

    int dim() const { return D.dim(); }
    Rational one_plus_kappa() const { return 1 + kappa; }
    long k0() const { return 2L * dim() * (dim() - 1); }
    Rational alpha() const { return Rational(1, 1 + 8 * (dim() - 1) * (dim() - 1)); }
    long inverse_alpha() const { return 1L + 8L * (dim() - 1) * (dim() - 1); }
    // Cost of one flip: p1^{-2} (1+kappa)^{2d-4}.
    Rational lambda() const { return pow(D.p1(), -2) * pow(one_plus_kappa(), 2L * dim() - 4); }
    Rational z0() const { return pow(one_plus_kappa(), -2L * (dim() - 1)); }
};

// A memory is empty, a SAW ending at o, or a polygon rooted at o.
inline Walk make_memory(const Walk& w) {
    if (w.empty()) return w;
    if (!w.back().is_origin()) throw std::invalid_argument("memory must end at the origin");
    if (!is_self_avoiding(w) && !is_polygon(w)) throw std::invalid_argument("memory must be self-avoiding or a polygon");
    return w;
}

// (1+kappa)^{pairs} P_n(w); no self-avoidance indicator.
inline Rational asaw_weight(const ModelParams& P, const Walk& w) {
    Rational a = apriori_weight(P.D, w);
    if (a == 0) return a;
    return pow(P.one_plus_kappa(), adj_pairs(w).pair_count) * a;
}

inline Rational conditional_weight(const ModelParams& P, const Walk& w, const Walk& eta) {
    if (!w.front().is_origin()) throw std::invalid_argument("walk must start at the origin");
    return asaw_weight(P, w) * pow(P.one_plus_kappa(), cross_pairs(eta, w));
}

enum class UKind { none, coincide, plaquette };

inline void check_u_indices(const Walk& w, int i, int j) {
    if (i < 0 || j > w.steps() || j <= i + 1) throw std::out_of_range("need 0 <= i, i+1 < j <= |w|");
}

// Edges (w_i, w_{i+1}) and (w_{j-1}, w_j) must both be lattice edges.
inline UKind u_kind(const Walk& w, int i, int j) {
    check_u_indices(w, i, j);
    if (w[i] == w[j]) return UKind::coincide;
    if (j < i + 3) return UKind::none;
    auto e = UnitEdge::make(w[i], w[i + 1]);
    auto f = UnitEdge::make(w[j - 1], w[j]);
    if (e && f && plaquette_of_edges(*e, *f)) return UKind::plaquette;
    return UKind::none;
}

inline Rational u_ij(const ModelParams& P, const Walk& w, int i, int j) {
    switch (u_kind(w, i, j)) {
        case UKind::coincide: return 1;
        case UKind::plaquette: return -P.kappa;
        default: return 0;
    }
}

inline Rational r_kappa(const ModelParams& P, const Point& x) {
    if (x.is_origin()) return 1;
    if (x.norm_inf() == 1) return P.kappa;
    return 0;
}

inline Rational interaction_product(const ModelParams& P, const Walk& w) {
    if (!w.front().is_origin()) throw std::invalid_argument("walk must start at the origin");
    Rational out = apriori_weight(P.D, w);
    for (int j = 2; j <= w.steps() && out != 0; ++j)
        for (int i = 0; i + 1 < j && out != 0; ++i) out *= 1 - u_ij(P, w, i, j);
    return out;
}

}  // namespace asaw
