#include <asaw/analysis.hpp>
#include <asaw/checks.hpp>

#include <gtest/gtest.h>

using namespace asaw;

namespace {
Rational dy(long m, int e) { return Rational(m) / pow(Rational(2), e); }
}  // namespace

TEST(Analysis, FrozenThresholdsNearestNeighbour) {
    auto t = kappa_thresholds(make_nearest_neighbour(2));
    EXPECT_EQ(t.kappa_asm, dy(28295709, 32));
    EXPECT_EQ(t.delta_default, Rational(1, 1024));
    EXPECT_EQ(t.delta_exponent, 10);
    EXPECT_EQ(t.kappa_decay, dy(20656765, 38));
}

TEST(Analysis, FrozenThresholdsSpreadOut) {
    auto t = kappa_thresholds(make_spread_out(2, 1));
    EXPECT_EQ(t.kappa_asm, dy(29420389, 34));
    EXPECT_EQ(t.delta_default, Rational(1, 16384));
    EXPECT_EQ(t.kappa_decay, dy(3728169, 40));
}

TEST(Analysis, ThresholdIsSharpAtResolution) {
    auto D = make_nearest_neighbour(2);
    auto t = kappa_thresholds(D);
    EXPECT_TRUE(asm_condition(D, t.kappa_asm));
    EXPECT_FALSE(asm_condition(D, t.kappa_asm * (1 + dy(1, 20))));
    EXPECT_TRUE(decay_condition(D, t.kappa_decay, t.delta_exponent));
    EXPECT_FALSE(decay_condition(D, t.kappa_decay * (1 + dy(1, 20)), t.delta_exponent));
}

TEST(Analysis, PiTildeGeometric) {
    SpatialSeries Pi(2, 4);
    Pi.at(origin(2))[1] = Rational(1, 2);
    auto T = pi_tilde(Pi, 4, 4);
    for (int n = 1; n <= 4; ++n) EXPECT_EQ(T.coeff(origin(2), n), pow(Rational(1, 2), n));
    EXPECT_EQ(T.coeff(origin(2), 0), 0);
}

TEST(Analysis, LambdaMuWithoutLaceTerms) {
    SpatialSeries none(2, 4);
    auto lm = lambda_mu(none, 1, Rational(3, 5));
    EXPECT_EQ(lm.lambda_z, 1);
    EXPECT_EQ(lm.mu_z, Rational(3, 5));
}

TEST(Analysis, PiTildeResidualVanishes) {
    ModelParams P(Rational(1, 10), make_nearest_neighbour(2));
    auto G = two_point_coeffs(P, 8);
    auto PiT = pi_tilde(pi_coeffs(P, 0, 8), 8, 8);
    EXPECT_TRUE(pi_tilde_residual(P.D, G, PiT).is_zero());
}

TEST(Analysis, CriticalBracketWithoutLaceTerms) {
    auto f = critical_bracket(SpatialSeries(2, 3));
    EXPECT_EQ(f[0], 1);
    EXPECT_EQ(f[1], -1);
    EXPECT_EQ(count_roots(f, Rational(1, 2), Rational(2)), 1);
    EXPECT_NEAR(bisect_root(f, Rational(1, 2), Rational(2)).get_d(), 1.0, 1e-9);
}

TEST(Analysis, TorusDerivativeBound) {
    ModelParams P(0, make_nearest_neighbour(2));
    auto r = torus_chi_derivative_check(P, 3, 8, {P.z0(), Rational(3, 2)});
    EXPECT_TRUE(r.all_hold);
    EXPECT_TRUE(r.two_ways_agree);
    EXPECT_EQ(r.points[0].bound, 1);
}

TEST(Analysis, GammaLowerBound) {
    ModelParams P(0, make_nearest_neighbour(2));
    auto r = gamma_lower_bound_check(P, 10, {Rational(1), Rational(6, 5), Rational(3, 2)}, Rational(2));
    EXPECT_EQ(r.points.size(), 3u);
    EXPECT_TRUE(r.all_hold);
}

TEST(Analysis, CriticalEstimates) {
    ModelParams P(0, make_nearest_neighbour(2));
    auto ce = critical_estimates(P, 10);
    EXPECT_GT(ce.mu_bridge_lower, 0);
    EXPECT_LT(ce.mu_bridge_lower.get_d(), 1.0);
    EXPECT_NEAR(ce.zc_ratio, 4 / 2.6381585, 0.05);
    EXPECT_EQ(ce.zc_lace_roots, 1);
    EXPECT_NEAR(ce.zc_lace.get_d(), ce.zc_ratio, 0.1);
}

TEST(Analysis, HardyRamanujanDeviationShrinks) {
    EXPECT_GT(hardy_ramanujan_deviation(100), hardy_ramanujan_deviation(1000));
    EXPECT_LT(hardy_ramanujan_deviation(10000), 0.1);
}
