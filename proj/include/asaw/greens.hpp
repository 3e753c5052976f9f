#pragma once

#include "parallel.hpp"
#include "series.hpp"
#include "stepdist.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace asaw {

// [z^n] at x is the n-step transition probability o -> x.
inline SpatialSeries srw_series_coeffs(const StepDistribution& D, int N) {
    if (N < 0) throw std::invalid_argument("order must be >= 0");
    SpatialSeries out(D.dim(), N);
    std::map<Point, Rational> cur{{origin(D.dim()), Rational(1)}};
    for (int n = 0; n <= N; ++n) {
        for (const auto& [x, p] : cur) out.at(x)[n] = p;
        if (n == N) break;
        std::map<Point, Rational> next;
        for (const auto& [x, p] : cur)
            for (const auto& st : D.steps()) next[x + st.x] += p * st.prob;
        cur = std::move(next);
    }
    return out;
}

enum class GreenMethod { automatic, tensor, factorized };

struct GreenEstimate {
    Point x;
    double mu = 0;
    double value = 0;
    int quadrature_order = 0;
    double error_proxy = 0;
    std::string method;
};

namespace detail {

struct GaussLegendre {
    std::vector<double> x, w;  // on [-1, 1]
};

inline GaussLegendre gauss_legendre(int q) {
    GaussLegendre g;
    g.x.resize(static_cast<std::size_t>(q));
    g.w.resize(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= q; ++k) {
                double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (q == 1) p0 = 1;
            dp = q * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        g.x[static_cast<std::size_t>(i)] = z;
        g.w[static_cast<std::size_t>(i)] = 2 / ((1 - z * z) * dp * dp);
    }
    return g;
}

// Pairwise summation keeps the reduction order fixed.
inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}
inline double pairwise_sum(const std::vector<double>& v) { return v.empty() ? 0.0 : pairwise_sum(v, 0, v.size()); }

struct Fourier {
    std::vector<std::vector<double>> y;
    std::vector<double> p;
    int d = 0;
    double at(const std::vector<double>& k) const {
        double s = 0;
        for (std::size_t a = 0; a < p.size(); ++a) {
            double dot = 0;
            for (int i = 0; i < d; ++i) dot += k[static_cast<std::size_t>(i)] * y[a][static_cast<std::size_t>(i)];
            s += p[a] * std::cos(dot);
        }
        return s;
    }
};

// Tensor Gauss-Legendre over [-pi, pi]^d with cube shells halving toward k = 0.
inline double tensor_green(const StepDistribution& D, double mu, const Point& x, int refinement) {
    int d = D.dim();
    Fourier F;
    F.d = d;
    for (const auto& st : D.steps()) {
        std::vector<double> v;
        for (int i = 0; i < d; ++i) v.push_back(static_cast<double>(st.x[i]));
        F.y.push_back(v);
        F.p.push_back(st.prob.get_d());
    }
    double xn = std::sqrt(static_cast<double>(x.norm2sq()));
    int levels = 14 + 2 * refinement;
    // Cells: (level, offset multi-index in {-2..1}^d excluding the inner {-1,0}^d).
    struct Cell {
        double lo[kMaxDim];
        double side;
    };
    std::vector<Cell> cells;
    for (int lv = 0; lv < levels; ++lv) {
        double h = std::numbers::pi / std::ldexp(1.0, lv);  // half-width of this level's cube
        double side = h / 2;
        int total = 1;
        for (int i = 0; i < d; ++i) total *= 4;
        for (int c = 0; c < total; ++c) {
            int r = c;
            bool inner = true;
            Cell cell{};
            cell.side = side;
            for (int i = 0; i < d; ++i) {
                int off = r % 4 - 2;
                r /= 4;
                inner = inner && (off == -1 || off == 0);
                cell.lo[i] = off * side;
            }
            if (!inner) cells.push_back(cell);
        }
    }
    std::vector<double> vals(cells.size(), 0.0);
    parallel_for(cells.size(), [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        int q = 6 + 2 * refinement + static_cast<int>(std::ceil(cell.side * xn * 0.6));
        auto g = gauss_legendre(q);
        std::vector<int> idx(static_cast<std::size_t>(d), 0);
        std::vector<double> k(static_cast<std::size_t>(d));
        std::vector<double> terms;
        while (true) {
            double w = 1, phase = 0;
            for (int i = 0; i < d; ++i) {
                auto j = static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]);
                k[static_cast<std::size_t>(i)] = cell.lo[i] + cell.side * (g.x[j] + 1) / 2;
                w *= g.w[j] * cell.side / 2;
                phase += k[static_cast<std::size_t>(i)] * static_cast<double>(x[i]);
            }
            terms.push_back(w * std::cos(phase) / (1 - mu * F.at(k)));
            int i = 0;
            while (i < d && ++idx[static_cast<std::size_t>(i)] == q) idx[static_cast<std::size_t>(i++)] = 0;
            if (i == d) break;
        }
        vals[ci] = pairwise_sum(terms);
    });
    return pairwise_sum(vals) / std::pow(2 * std::numbers::pi, d);
}

// e^{-s} I_nu(s) via the trapezoid rule on the periodic integral.
inline double scaled_bessel_i(long nu, double s) {
    if (nu < 0) nu = -nu;
    if (s == 0) return nu == 0 ? 1.0 : 0.0;
    int M = static_cast<int>(nu + 40 + 12 * std::sqrt(s));
    double acc = 0;
    for (int j = 0; j < M; ++j) {
        double th = 2 * std::numbers::pi * j / M;
        acc += std::exp(s * (std::cos(th) - 1)) * std::cos(static_cast<double>(nu) * th);
    }
    return acc / M;
}

// C_mu(x) = int_0^inf e^{-t(1-mu)} prod_i Ihat_{x_i}(t mu / d) dt for the nearest-neighbour walk.
inline double nn_green(int d, double mu, const Point& x, int refinement) {
    if (mu == 0) return x.is_origin() ? 1.0 : 0.0;
    const double T = 1e6;
    auto g = gauss_legendre(16 + 8 * refinement);
    std::vector<std::pair<double, double>> panels;
    double a = 0, b = 0.25;
    while (a < T) {
        panels.emplace_back(a, std::min(b, T));
        a = b;
        b *= 1.5;
    }
    std::vector<double> vals(panels.size(), 0.0);
    parallel_for(panels.size(), [&](std::size_t pi) {
        auto [lo, hi] = panels[pi];
        std::vector<double> terms;
        for (std::size_t j = 0; j < g.x.size(); ++j) {
            double t = lo + (hi - lo) * (g.x[j] + 1) / 2;
            double f = std::exp(-t * (1 - mu));
            for (int i = 0; i < d && f != 0; ++i) f *= scaled_bessel_i(static_cast<long>(x[i]), t * mu / d);
            terms.push_back(g.w[j] * (hi - lo) / 2 * f);
        }
        vals[pi] = pairwise_sum(terms);
    });
    double body = pairwise_sum(vals);
    if (mu < 1) return body;  // e^{-T(1-mu)} kills the tail
    // Gaussian tail: prod_i (2 pi t/d)^{-1/2} e^{-d x_i^2/(2t)} beyond T, first order in |x|^2/T.
    double r2 = static_cast<double>(x.norm2sq());
    double c = std::pow(d / (2 * std::numbers::pi), d / 2.0);
    double e = d / 2.0;
    double tail = c * (std::pow(T, 1 - e) / (e - 1) - d * r2 / 2 * std::pow(T, -e) / e);
    return body + tail;
}

// Uniform box {|y|_inf <= L} \ {o}: resum through the lazy walk uniform on the full box.
inline double box_green(int d, int L, double mu, const Point& x, int refinement) {
    double B = std::pow(2.0 * L + 1, d);
    double mup = mu * B / (B - 1 + mu);
    double pref = (B - 1) / (B - 1 + mu);
    int nmax = 400 << refinement;
    long xmax = 0;
    for (int i = 0; i < d; ++i) xmax = std::max<long>(xmax, std::labs(static_cast<long>(x[i])));
    std::vector<double> u{1.0};  // u_n on [-nL, nL], centred
    std::vector<double> terms;
    double pw = 1;
    for (int n = 0; n <= nmax; ++n) {
        long half = static_cast<long>(n) * L;
        double prod = pw;
        for (int i = 0; i < d && prod != 0; ++i) {
            long xi = std::labs(static_cast<long>(x[i]));
            prod *= xi <= half ? u[static_cast<std::size_t>(xi + half)] : 0.0;
        }
        terms.push_back(prod);
        if (n == nmax) break;
        std::vector<double> nu(u.size() + 2 * static_cast<std::size_t>(L), 0.0);
        for (std::size_t k = 0; k < u.size(); ++k)
            for (int j = 0; j <= 2 * L; ++j) nu[k + static_cast<std::size_t>(j)] += u[k] / (2 * L + 1);
        u = std::move(nu);
        pw *= mup;
        if (pw < 1e-300) break;
    }
    double body = pairwise_sum(terms);
    if (mup < 1) return pref * body;  // remaining terms are below mup^{nmax}
    // Local CLT tail: sum_{n > nmax} prod_i e^{-x_i^2/(2 n v)} / sqrt(2 pi n v), v = L(L+1)/3.
    double v = L * (L + 1) / 3.0;
    double r2 = static_cast<double>(x.norm2sq());
    double tail = 0;
    for (long n = nmax + 1; n <= 64L * nmax; ++n) tail += std::pow(2 * std::numbers::pi * n * v, -d / 2.0) * std::exp(-r2 / (2 * n * v));
    double e = d / 2.0;
    tail += std::pow(2 * std::numbers::pi * v, -e) * std::pow(64.0 * nmax + 0.5, 1 - e) / (e - 1);
    return pref * (body + tail);
}

inline bool is_uniform_box(const StepDistribution& D) { return D.name().rfind("spread:", 0) == 0 && D.uniform(); }

}  // namespace detail

// C_mu(x) = (2 pi)^{-d} int e^{-ik.x} / (1 - mu Dhat(k)) dk.
inline GreenEstimate green_quadrature(const StepDistribution& D, double mu, const Point& x, int refinement = 1,
                                      GreenMethod method = GreenMethod::automatic) {
    if (!(mu >= 0 && mu <= 1)) throw std::invalid_argument("mu must lie in [0, 1]");
    if (mu == 1 && D.dim() <= 2) throw std::invalid_argument("mu = 1 needs d >= 3");
    if (x.dim != D.dim()) throw std::invalid_argument("dimension mismatch");
    if (refinement < 1) throw std::invalid_argument("refinement must be >= 1");
    bool factorizable = D.nearest_neighbour() || detail::is_uniform_box(D);
    if (method == GreenMethod::factorized && !factorizable) throw std::invalid_argument("no factorized route for this distribution");
    bool fact = method == GreenMethod::factorized || (method == GreenMethod::automatic && factorizable);
    auto eval = [&](int r) {
        if (!fact) return detail::tensor_green(D, mu, x, r);
        if (D.nearest_neighbour()) return detail::nn_green(D.dim(), mu, x, r);
        return detail::box_green(D.dim(), D.range_bound(), mu, x, r);
    };
    GreenEstimate g;
    g.x = x;
    g.mu = mu;
    g.quadrature_order = refinement;
    g.method = fact ? (D.nearest_neighbour() ? "bessel-laplace" : "box-resummation") : "tensor-gauss-legendre";
    double coarse = eval(refinement - 1 < 1 ? 0 : refinement - 1);
    g.value = eval(refinement);
    g.error_proxy = std::abs(g.value - coarse);
    if (g.value < 0 && -g.value > 10 * g.error_proxy) throw std::runtime_error("quadrature produced a negative value");
    return g;
}

inline double a_constant(int d) { return d * std::tgamma(d / 2.0 - 1) / (2 * std::pow(std::numbers::pi, d / 2.0)); }

inline double bracket_norm(const Point& x) { return std::max(std::sqrt(static_cast<double>(x.norm2sq())), 1.0); }

// C_1(x) sigma^2 [[x]]^{d-2} / a_d.
inline double asymptotic_ratio(const StepDistribution& D, const Point& x, int refinement = 2) {
    int d = D.dim();
    if (d < 3) throw std::invalid_argument("asymptotic ratio needs d >= 3");
    auto g = green_quadrature(D, 1.0, x, refinement);
    return g.value * D.sigma2().get_d() * std::pow(bracket_norm(x), d - 2) / a_constant(d);
}

// (f * f)(t e_1) for f = [[.]]^{-a} on the box [-R, R]^d, grouping the last d - 1 coordinates by |.|^2.
inline std::vector<double> box_self_convolution(int d, double a, int R, const std::vector<int>& ts) {
    if (d < 2) throw std::invalid_argument("need d >= 2");
    auto R2 = static_cast<std::size_t>(R) * static_cast<std::size_t>(R);
    std::vector<double> cnt(R2 + 1, 0.0);
    for (int t = -R; t <= R; ++t) cnt[static_cast<std::size_t>(t * t)] += 1;
    std::vector<double> acc = cnt;
    std::vector<std::size_t> nz1;
    for (std::size_t s = 0; s <= R2; ++s)
        if (cnt[s] != 0) nz1.push_back(s);
    for (int k = 2; k < d; ++k) {
        std::vector<double> next(acc.size() + R2, 0.0);
        for (std::size_t s = 0; s < acc.size(); ++s) {
            if (acc[s] == 0) continue;
            for (auto u : nz1) next[s + u] += acc[s] * cnt[u];
        }
        acc = std::move(next);
    }
    std::vector<double> f(acc.size() + R2 + 1);
    for (std::size_t r2 = 0; r2 < f.size(); ++r2) f[r2] = std::pow(std::max(std::sqrt(static_cast<double>(r2)), 1.0), -a);
    std::vector<double> out(ts.size(), 0.0);
    parallel_for(ts.size(), [&](std::size_t i) {
        int t = ts[i];
        std::vector<double> terms;
        for (int y1 = -R; y1 <= R; ++y1) {
            int z1 = t - y1;
            if (z1 < -R || z1 > R) continue;
            double s = 0;
            for (std::size_t r2 = 0; r2 < acc.size(); ++r2)
                if (acc[r2] != 0) s += acc[r2] * f[static_cast<std::size_t>(y1 * y1) + r2] * f[static_cast<std::size_t>(z1 * z1) + r2];
            terms.push_back(s);
        }
        out[i] = detail::pairwise_sum(terms);
    });
    return out;
}

}  // namespace asaw
