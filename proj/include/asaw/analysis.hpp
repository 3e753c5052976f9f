#pragma once

#include "enumerate.hpp"
#include "interaction.hpp"
#include "lace.hpp"
#include "rational.hpp"
#include "series.hpp"
#include "unfold.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

namespace asaw {

inline constexpr int kDyadicBits = 24;

// Largest dyadic kappa in (0, 1] at relative resolution 2^-24 satisfying a monotone predicate.
// pred(0) must hold; returns 0 only if no dyadic down to 2^-400 qualifies.
inline Rational largest_dyadic(const std::function<bool(const Rational&)>& pred) {
    if (pred(Rational(1))) return 1;
    int j = 1;
    while (!pred(dyadic(1, j))) {
        if (++j > 400) return 0;
    }
    // pred(2^-j) holds, pred(2^-(j-1)) fails.
    BigInt lo = BigInt(1) << kDyadicBits, hi = BigInt(1) << (kDyadicBits + 1);
    Rational den = pow(Rational(2), j + kDyadicBits);
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (pred(Rational(mid) / den)) lo = mid;
        else hi = mid;
    }
    Rational r = Rational(lo) / den;
    r.canonicalize();
    return r;
}

// (1+kappa)^{1/alpha} < 1 + z0^2 p1^2 (1+kappa)^{-(2d-4)}.
inline bool asm_condition(const StepDistribution& D, const Rational& kappa) {
    ModelParams P(kappa, D);
    Rational z0 = P.z0();
    Rational rhs = 1 + z0 * z0 * D.p1() * D.p1() * pow(P.one_plus_kappa(), -(2L * D.dim() - 4));
    return pow(P.one_plus_kappa(), P.inverse_alpha()) < rhs;
}

inline constexpr long kExactPowerCap = 1L << 16;

// 2 delta (lambda (1+kappa)^{4(d-1)})^2 (1+kappa)^{1/(delta alpha)} < 1 with delta = 2^-j.
// Large exponents use (1+kappa)^E <= 1/(1 - E kappa), which keeps a true answer certified.
inline bool decay_condition(const StepDistribution& D, const Rational& kappa, int j) {
    ModelParams P(kappa, D);
    Rational lam = P.lambda() * pow(P.one_plus_kappa(), 4L * (D.dim() - 1));
    Rational lead = 2 * dyadic(1, j) * lam * lam;
    BigInt E = BigInt(P.inverse_alpha()) << j;
    if (E <= kExactPowerCap) return lead * pow(P.one_plus_kappa(), E.get_si()) < 1;
    if (kappa == 0) return lead < 1;
    Rational Ek = Rational(E) * kappa;
    if (Ek >= 1) return false;
    return lead / (1 - Ek) < 1;
}

// Largest delta = 2^-j (j >= 2) with the decay bracket < 1 at this kappa.
inline std::optional<int> default_delta_exponent(const StepDistribution& D, const Rational& kappa) {
    for (int j = 2; j <= 400; ++j)
        if (decay_condition(D, kappa, j)) return j;
    return std::nullopt;
}

inline Rational default_delta(const ModelParams& P) {
    auto j = default_delta_exponent(P.D, P.kappa);
    if (!j) throw std::runtime_error("no dyadic delta satisfies the decay bracket");
    return dyadic(1, *j);
}

struct Thresholds {
    Rational kappa_asm;
    Rational delta_default;  // at kappa = 0; also valid up to kappa_decay
    int delta_exponent = 0;
    Rational kappa_decay;
};

inline Thresholds kappa_thresholds(const StepDistribution& D) {
    Thresholds t;
    t.kappa_asm = largest_dyadic([&](const Rational& k) { return asm_condition(D, k); });
    auto j = default_delta_exponent(D, 0);
    if (!j) throw std::runtime_error("no dyadic delta satisfies the decay bracket");
    t.delta_exponent = *j;
    t.delta_default = dyadic(1, *j);
    t.kappa_decay = largest_dyadic([&](const Rational& k) { return decay_condition(D, k, *j); });
    return t;
}

// Sum_{k=1}^{K} of the k-fold convolution power of Pi, truncated at N.
inline SpatialSeries pi_tilde(const SpatialSeries& Pi, int K, int N) {
    if (N > Pi.order()) throw std::invalid_argument("order exceeds the order of Pi");
    SpatialSeries base(Pi.dim(), N);
    for (const auto& [x, s] : Pi.entries()) {
        Series t(N);
        for (int n = 0; n <= N; ++n) t[n] = s[n];
        if (!t.is_zero()) base.at(x) = t;
    }
    SpatialSeries out = base, power = base;
    for (int k = 2; k <= K; ++k) {
        power = convolve(power, base);
        if (power.is_zero()) break;
        out += power;
    }
    out.prune();
    return out;
}

// G - delta - Pi~ - zD * (delta + Pi~) * G.
inline SpatialSeries pi_tilde_residual(const StepDistribution& D, const SpatialSeries& G, const SpatialSeries& PiT) {
    SpatialSeries dp = SpatialSeries::delta(G.dim(), G.order()) + PiT;
    SpatialSeries r = G - SpatialSeries::delta(G.dim(), G.order()) - PiT - step_convolve(D, convolve(dp, G));
    r.prune();
    return r;
}

// 1 - z - z sum_x Pi~_z(x), as a polynomial in z.
inline Series critical_bracket(const SpatialSeries& PiT) {
    Series tot = PiT.total();
    Series f(tot.order() + 1);
    f[0] = 1;
    f[1] = -1;
    for (int n = 0; n <= tot.order(); ++n) f[n + 1] -= tot[n];
    return f;
}

namespace detail {

using Poly = std::vector<Rational>;

inline void trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline Poly poly_rem(Poly a, const Poly& b) {
    trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Rational c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        trim(a);
    }
    return a;
}

inline Rational poly_eval(const Poly& p, const Rational& z) {
    Rational acc = 0;
    for (std::size_t i = p.size(); i-- > 0;) acc = acc * z + p[i];
    return acc;
}

inline int sign_changes(const std::vector<Poly>& chain, const Rational& z) {
    int changes = 0, last = 0;
    for (const auto& p : chain) {
        int s = sgn(poly_eval(p, z));
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

}  // namespace detail

// Distinct real roots of f in (a, b] by a Sturm chain.
inline int count_roots(const Series& f, const Rational& a, const Rational& b) {
    detail::Poly p(f.coeffs().begin(), f.coeffs().end());
    detail::trim(p);
    if (p.size() <= 1) return 0;
    detail::Poly dp;
    for (std::size_t i = 1; i < p.size(); ++i) dp.push_back(p[i] * static_cast<long>(i));
    std::vector<detail::Poly> chain{p, dp};
    while (true) {
        auto r = detail::poly_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(r);
    }
    return detail::sign_changes(chain, a) - detail::sign_changes(chain, b);
}

inline constexpr int kRootBits = 40;

// Bisection on [lo, hi] to width 2^-40; requires a sign change.
inline Rational bisect_root(const Series& f, Rational lo, Rational hi) {
    int slo = sgn(f.evaluate(lo)), shi = sgn(f.evaluate(hi));
    if (slo == 0) return lo;
    if (shi == 0) return hi;
    if (slo == shi) throw std::runtime_error("no sign change on the bracket");
    Rational tol = dyadic(1, kRootBits);
    while (hi - lo > tol) {
        Rational mid = (lo + hi) / 2;
        int s = sgn(f.evaluate(mid));
        if (s == 0) return mid;
        if (s == slo) lo = mid;
        else hi = mid;
    }
    return (lo + hi) / 2;
}

struct LambdaMu {
    Rational lambda_z;
    Rational mu_z;
};

inline LambdaMu lambda_mu(const SpatialSeries& PiT, const Rational& sigma2, const Rational& z) {
    Rational second = 0, total = 0;
    for (const auto& [x, s] : PiT.entries()) {
        Rational v = s.evaluate(z);
        total += v;
        second += Rational(x.norm2sq()) * v;
    }
    LambdaMu out;
    out.lambda_z = 1 / (1 + z * second / sigma2);
    out.mu_z = 1 - out.lambda_z * (1 - z - z * total);
    return out;
}

struct CriticalEstimates {
    std::vector<Rational> c, b;
    Rational mu_bridge_lower;
    int mu_bridge_argmax = 0;
    std::vector<Rational> mu_ratio;  // c_{n+1} / c_n
    double mu_extrapolated = 0;
    double zc_ratio = 0;
    Rational zc_lace;
    int pi_order = 0;
    int zc_lace_roots = 0;  // roots of the bracket in (z0, 2]
};

// Largest m / 2^24 with (m / 2^24)^n <= v.
inline Rational dyadic_root_floor(const Rational& v, int n) {
    BigInt lo = 0, hi = BigInt(1) << kDyadicBits;
    Rational den = pow(Rational(2), kDyadicBits);
    while (pow(Rational(hi) / den, n) <= v) hi *= 2;
    while (hi - lo > 1) {
        BigInt mid = (lo + hi) / 2;
        if (pow(Rational(mid) / den, n) <= v) lo = mid;
        else hi = mid;
    }
    Rational r = Rational(lo) / den;
    r.canonicalize();
    return r;
}

inline CriticalEstimates critical_estimates(const ModelParams& P, int N, int N_pi = -1) {
    if (N < 3) throw std::invalid_argument("order must be >= 3");
    if (N_pi < 0) N_pi = std::min(N, pi_cap(P.D));
    CriticalEstimates ce;
    auto mt = mass_table(P, N, false);
    ce.c = mt.c;
    ce.b = mt.b;
    for (int n = 1; n <= N; ++n) {
        auto q = dyadic_root_floor(mt.b[static_cast<std::size_t>(n)], n);
        if (q > ce.mu_bridge_lower) {
            ce.mu_bridge_lower = q;
            ce.mu_bridge_argmax = n;
        }
    }
    for (int n = 0; n < N; ++n) ce.mu_ratio.push_back(mt.c[static_cast<std::size_t>(n + 1)] / mt.c[static_cast<std::size_t>(n)]);
    auto r = [&](int n) { return Rational(mt.c[static_cast<std::size_t>(n)] / mt.c[static_cast<std::size_t>(n - 1)]).get_d(); };
    // Averaging consecutive same-parity ratios removes the 1/n term and the odd-even oscillation.
    ce.mu_extrapolated = (N * r(N) - (N - 2) * r(N - 2)) / 2;
    ce.zc_ratio = 1 / ce.mu_extrapolated;
    ce.pi_order = N_pi;
    auto Pi = pi_coeffs(P, 0, N_pi);
    auto f = critical_bracket(pi_tilde(Pi, std::max(1, N_pi / 2), N_pi));
    Rational z0 = P.z0();
    ce.zc_lace_roots = count_roots(f, z0, Rational(2));
    ce.zc_lace = bisect_root(f, z0, Rational(2));
    return ce;
}

inline double hardy_ramanujan_deviation(long n) {
    BigInt p = distinct_partitions(n);
    long ex = 0;
    double m = mpz_get_d_2exp(&ex, p.get_mpz_t());
    double logp = std::log(m) + static_cast<double>(ex) * std::numbers::ln2;
    return std::abs(logp / (std::numbers::pi * std::sqrt(n / 3.0)) - 1);
}

struct TorusPoint {
    Rational z;
    Rational ratio;      // chi' / chi^2
    Rational ratio_alt;  // from the series inverse
    Rational bound;      // (1+kappa)^{k0} / z0
    bool holds = false;
};

struct TorusReport {
    Series chi{0};
    std::vector<TorusPoint> points;
    bool all_hold = true;
    bool two_ways_agree = true;
};

inline TorusReport torus_chi_derivative_check(const ModelParams& P, int side, int N, const std::vector<Rational>& z_grid) {
    TorusReport rep;
    rep.chi = torus_susceptibility(P, side, N);
    Series dchi = rep.chi.derivative();
    Rational bound = pow(P.one_plus_kappa(), P.k0()) / P.z0();
    for (const auto& z : z_grid) {
        TorusPoint tp;
        tp.z = z;
        Rational a0 = rep.chi.evaluate(z);
        tp.ratio = dchi.evaluate(z) / (a0 * a0);
        // Taylor coefficients of chi(z + h) to first order, then invert the series in h.
        Rational t0 = 0, t1 = 0;
        for (int n = rep.chi.order(); n >= 0; --n) {
            t1 = t1 * z + t0;
            t0 = t0 * z + rep.chi[n];
        }
        Rational b0 = 1 / t0;
        Rational b1 = -t1 * b0 / t0;
        tp.ratio_alt = -b1;
        tp.bound = bound;
        tp.holds = tp.ratio <= bound;
        rep.all_hold = rep.all_hold && tp.holds;
        rep.two_ways_agree = rep.two_ways_agree && tp.ratio == tp.ratio_alt;
        rep.points.push_back(tp);
    }
    return rep;
}

struct GammaPoint {
    Rational z;
    Rational chi;  // truncated, a lower approximation
    Rational rhs;
    bool holds = false;
};

struct GammaReport {
    Rational zc_upper;
    std::vector<GammaPoint> points;
    bool all_hold = true;  // failures are inconclusive, not refutations
};

// chi(z) >= (1+kappa)^{-k0} z0 / (zc - z) with zc replaced by zc_upper.
inline GammaReport gamma_lower_bound_check(const ModelParams& P, int N, const std::vector<Rational>& z_grid, const Rational& zc_upper) {
    GammaReport rep;
    rep.zc_upper = zc_upper;
    auto mt = mass_table(P, N, false);
    Series chi(N);
    for (int n = 0; n <= N; ++n) chi[n] = mt.c[static_cast<std::size_t>(n)];
    Rational z0 = P.z0();
    for (const auto& z : z_grid) {
        if (z < z0 || z >= zc_upper) continue;
        GammaPoint g;
        g.z = z;
        g.chi = chi.evaluate(z);
        g.rhs = pow(P.one_plus_kappa(), -P.k0()) * z0 / (zc_upper - z);
        g.holds = g.chi >= g.rhs;
        rep.all_hold = rep.all_hold && g.holds;
        rep.points.push_back(g);
    }
    return rep;
}

}  // namespace asaw
