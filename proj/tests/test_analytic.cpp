#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "support/cases.hpp"
#include "wormhole/analytic.hpp"

using namespace wormhole;
using namespace wormhole::analytic;

namespace {

// Extended-precision evaluation of the generic profile.
std::complex<long double> profile_ld(long double t, long double gamma, long double g)
{
    const long double kappa = 1.0L - gamma;
    return gamma + kappa * kappa / std::complex<long double>(kappa, g * std::exp(kappa * t));
}

// Five-point derivative of G(t).
std::complex<double> derivative(double t, const ModelParams& p, double h)
{
    return (-cal_g(t + 2 * h, p) + 8.0 * cal_g(t + h, p) - 8.0 * cal_g(t - h, p) + cal_g(t - 2 * h, p)) / (12.0 * h);
}

} // namespace

TEST(CalG, GenericAtZero)
{
    const auto p = ModelParams::make(0.5, 0.01);
    const auto v = cal_g(0.0, p);
    const auto ref = profile_ld(0.0L, 0.5L, 0.01L);
    EXPECT_NEAR(v.real(), static_cast<double>(ref.real()), 1e-15);
    EXPECT_NEAR(v.imag(), static_cast<double>(ref.imag()), 1e-15);
    EXPECT_NEAR(v.real(), 0.99980, 1e-5);
    EXPECT_NEAR(v.imag(), -0.009996, 1e-6);
}

TEST(CalG, GenericMatchesExtendedPrecision)
{
    props::Cases cases(21);
    for (int i = 0; i < 300; ++i) {
        const double gamma = cases.uniform(0.0, 3.0);
        const double g = cases.signed_magnitude(1e-4, 0.1);
        const double t = cases.uniform(0.0, 40.0);
        const auto p = ModelParams::make(gamma, g);
        if (p.is_critical())
            continue;
        const auto ref = profile_ld(t, gamma, g);
        EXPECT_LT(std::abs(cal_g(t, p) - std::complex<double>(ref)), 1e-12) << "case " << i;
    }
}

TEST(CalG, LongTimeLimitIsGamma)
{
    const auto p = ModelParams::make(0.5, 0.01);
    EXPECT_LT(std::abs(cal_g(200.0, p) - 0.5), 1e-12);
    const auto far = cal_g(1e6, p);
    EXPECT_EQ(far.real(), 0.5);
    EXPECT_EQ(far.imag(), 0.0);
}

TEST(CalG, CriticalAtZero)
{
    const auto p = ModelParams::make(1.0, 0.01);
    EXPECT_DOUBLE_EQ(cal_g(0.0, p).imag(), -0.01);
    EXPECT_DOUBLE_EQ(cal_g(0.0, p).real(), 1.0);
    EXPECT_NEAR(cal_g(30.0, p).imag(), -0.01 / (1.0 + 1e-4 * 900.0), 1e-16);
}

TEST(CalG, NegativeTimeRejected)
{
    const auto p = ModelParams::make(0.5, 0.01);
    EXPECT_THROW(cal_g(-1e-9, p), DomainError);
    EXPECT_THROW(cal_g(std::numeric_limits<double>::quiet_NaN(), p), DomainError);
    EXPECT_THROW(response_diag(-1.0, p), DomainError);
    EXPECT_THROW(response_offdiag(1.0, -1.0, p), DomainError);
}

TEST(CalG, SatisfiesReducedEvolution)
{
    props::Cases cases(22);
    for (int i = 0; i < 100; ++i) {
        const double gamma = cases.uniform(0.0, 2.0);
        const auto p = ModelParams::make(gamma, cases.signed_magnitude(1e-3, 0.1));
        const double t = cases.uniform(0.1, 20.0);
        const auto g = cal_g(t, p);
        const auto residual = derivative(t, p, 1e-3) + (g - gamma) * (1.0 - g);
        EXPECT_LT(std::abs(residual), 1e-10) << "case " << i << " gamma " << gamma;
    }
}

TEST(ResponseDiag, PastDissipativeTransition)
{
    EXPECT_NEAR(response_diag(0.0, ModelParams::make(1.1, 0.01)), -0.0001 / 0.0101, 1e-16);
}

TEST(ResponseDiag, PeakValue)
{
    const auto p = ModelParams::make(0.1, 0.01);
    const auto peak = kmax_and_tstar(p);
    EXPECT_NEAR(response_diag(peak.t_star, p), -0.45, 1e-14);
}

TEST(ResponseDiag, ZeroCoupling)
{
    EXPECT_EQ(response_diag(0.0, ModelParams::make(0.3, 0.0)), 0.0);
    EXPECT_EQ(response_diag(7.0, ModelParams::make(1.0, 0.0)), 0.0);
}

TEST(ResponseDiag, EqualsImaginaryPart)
{
    props::Cases cases(23);
    for (int i = 0; i < 300; ++i) {
        const auto p = ModelParams::make(cases.uniform(0.0, 3.0), cases.signed_magnitude(1e-5, 0.5));
        const double t = cases.uniform(0.0, 60.0);
        EXPECT_NEAR(response_diag(t, p), cal_g(t, p).imag(), 1e-13) << "case " << i;
    }
}

TEST(ResponseDiag, BoundedByOne)
{
    props::Cases cases(24);
    for (int i = 0; i < 1000; ++i) {
        const auto p = ModelParams::make(cases.uniform(0.0, 5.0), cases.uniform(-std::numbers::pi, std::numbers::pi));
        const double t = cases.uniform(0.0, 1e4);
        EXPECT_LE(std::abs(response_diag(t, p)), 1.0) << "case " << i;
    }
}

TEST(ResponseDiag, OddInCoupling)
{
    props::Cases cases(25);
    for (int i = 0; i < 300; ++i) {
        const double gamma = cases.uniform(0.0, 3.0);
        const double g = cases.uniform(0.0, 1.0);
        const double t = cases.uniform(0.0, 50.0);
        EXPECT_EQ(response_diag(t, ModelParams::make(gamma, -g)), -response_diag(t, ModelParams::make(gamma, g)));
    }
}

TEST(ResponseDiag, MonotoneAboveTransition)
{
    for (double gamma : {1.05, 1.1, 1.5, 3.0}) {
        const auto p = ModelParams::make(gamma, 0.01);
        double prev = std::abs(response_diag(0.0, p));
        for (int i = 1; i <= 5000; ++i) {
            const double cur = std::abs(response_diag(0.01 * i, p));
            ASSERT_LE(cur, prev) << "gamma " << gamma << " step " << i;
            prev = cur;
        }
    }
}

TEST(ResponseDiag, LargeTimesStayFinite)
{
    for (double gamma : {0.0, 0.5, 1.5}) {
        const double k = response_diag(1e7, ModelParams::make(gamma, 0.01));
        EXPECT_TRUE(std::isfinite(k));
        EXPECT_LT(std::abs(k), 1e-300);
    }
}

TEST(ResponseDiag, CriticalFormIsNotTheLimitOfTheGenericForm)
{
    // Valid only for |g| << |1 - gamma|: near gamma = 1 the generic form collapses to 0.
    const double critical = response_diag(5.0, ModelParams::make(1.0, 0.01));
    const double below = response_diag(5.0, ModelParams::make(1.0 - 1e-6, 0.01));
    EXPECT_NEAR(critical, -0.01 / (1.0 + 1e-4 * 25.0), 1e-16);
    EXPECT_LT(std::abs(below), 1e-9);
}

TEST(ResponseOffdiag, DiagonalReducesToDiag)
{
    const auto p = ModelParams::make(0.3, 0.02);
    for (double t : {0.0, 1.0, 7.5})
        EXPECT_EQ(response_offdiag(t, t, p), response_diag(t, p));
}

TEST(ResponseOffdiag, HalfDecayDistance)
{
    const auto p = ModelParams::make(0.1, 0.01);
    const double delta = 2.0 * std::log(2.0) / p.decay_rate();
    EXPECT_NEAR(response_offdiag(5.0, 5.0 + delta, p), 0.5 * response_diag(5.0, p), 1e-15);
    EXPECT_NEAR(response_offdiag(5.0 + delta, 5.0, p), 0.5 * response_diag(5.0, p), 1e-15);
}

TEST(ResponseOffdiag, FarSeparationVanishes)
{
    const auto p = ModelParams::make(0.1, 0.01);
    EXPECT_EQ(response_offdiag(1.0, 2000.0, p), 0.0);
}

TEST(Wightman, DecayDecomposition)
{
    const auto p = ModelParams::make(0.3, 0.01);
    const auto v = wightman(2.0, 6.0, p);
    const auto ref = std::exp(-1.3 * 2.0) * cal_g(2.0, p);
    EXPECT_LT(std::abs(v - ref), 1e-16);
    EXPECT_EQ(wightman(6.0, 2.0, p), v);
}

TEST(Peak, ClassicalRegimeExample)
{
    const auto peak = kmax_and_tstar(ModelParams::make(0.4, 0.01));
    EXPECT_NEAR(peak.k_max, 0.3, 1e-15);
    EXPECT_NEAR(peak.t_star, std::log(60.0) / 0.6, 1e-12);
    EXPECT_NEAR(peak.t_star, 6.82391, 1e-5);
}

TEST(Peak, QuantumRegimeExampleMatchesGridMax)
{
    const auto p = ModelParams::make(0.1, 0.01);
    const auto peak = kmax_and_tstar(p);
    EXPECT_NEAR(peak.k_max, 0.45, 1e-15);
    EXPECT_NEAR(peak.t_star, std::log(90.0) / 0.9, 1e-12);
    EXPECT_NEAR(peak.t_star, 4.9998, 1e-4);
    double best = 0.0, arg = 0.0;
    for (int i = 0; i <= 30000; ++i) {
        const double t = i * 1e-3;
        if (std::abs(response_diag(t, p)) > best) {
            best = std::abs(response_diag(t, p));
            arg = t;
        }
    }
    EXPECT_NEAR(best, peak.k_max, 1e-6);
    EXPECT_NEAR(arg, peak.t_star, 1e-3);
}

TEST(Peak, DissipativeSitsAtZero)
{
    const auto peak = kmax_and_tstar(ModelParams::make(1.1, 0.01));
    EXPECT_NEAR(peak.k_max, 0.009901, 1e-6);
    EXPECT_EQ(peak.t_star, 0.0);
}

TEST(Peak, StrongCouplingSitsAtZero)
{
    const auto p = ModelParams::make(0.9, 0.2);
    const auto peak = kmax_and_tstar(p);
    EXPECT_EQ(peak.t_star, 0.0);
    EXPECT_DOUBLE_EQ(peak.k_max, std::abs(response_diag(0.0, p)));
}

TEST(Peak, CriticalSitsAtZero)
{
    const auto peak = kmax_and_tstar(ModelParams::make(1.0, 0.01));
    EXPECT_DOUBLE_EQ(peak.k_max, 0.01);
    EXPECT_EQ(peak.t_star, 0.0);
}

TEST(Peak, ZeroCouplingRejected)
{
    EXPECT_THROW(kmax_and_tstar(ModelParams::make(0.5, 0.0)), DomainError);
}

TEST(Peak, GridMaxAgreesForRandomParams)
{
    props::Cases cases(26);
    for (int i = 0; i < 40; ++i) {
        const auto p = ModelParams::make(cases.uniform(0.0, 0.95), cases.signed_magnitude(1e-4, 0.02));
        const auto peak = kmax_and_tstar(p);
        const double dt = 3.0 * peak.t_star / 20000.0;
        double best = 0.0;
        for (int j = 0; j <= 20000; ++j)
            best = std::max(best, std::abs(response_diag(j * dt, p)));
        EXPECT_LE(best, peak.k_max + 1e-14) << "case " << i;
        // Second-order peak: the grid misses by at most kappa^3 dt^2 / 8.
        const double kappa = p.lyapunov();
        EXPECT_GE(best, peak.k_max - kappa * kappa * kappa * dt * dt / 8.0 - 1e-14) << "case " << i;
    }
}

TEST(SampleProfile, ValuesAndBranch)
{
    const auto grid = TimeGrid::make(10.0, 0.5);
    const auto generic = sample_profile(ModelParams::make(0.3, 0.01), grid);
    EXPECT_EQ(generic.branch, Branch::generic);
    ASSERT_EQ(generic.values.size(), grid.size());
    EXPECT_EQ(generic.values[4], cal_g(2.0, ModelParams::make(0.3, 0.01)));
    EXPECT_EQ(sample_profile(ModelParams::make(1.0, 0.01), grid).branch, Branch::critical);
}

TEST(SampleProfile, SinglePeakAndBounded)
{
    props::Cases cases(27);
    for (int i = 0; i < 30; ++i) {
        const auto p = ModelParams::make(cases.uniform(0.0, 0.9), cases.uniform(1e-4, 0.05));
        const auto prof = sample_profile(p, TimeGrid::make(3.0 * kmax_and_tstar(p).t_star + 5.0, 0.01));
        int turns = 0;
        for (std::size_t j = 0; j < prof.values.size(); ++j) {
            EXPECT_LE(std::abs(prof.values[j]), 1.0 + 1e-12);
            if (j >= 2) {
                const double d1 = prof.response(j - 1) - prof.response(j - 2);
                const double d2 = prof.response(j) - prof.response(j - 1);
                if (d1 * d2 < 0.0)
                    ++turns;
            }
        }
        EXPECT_EQ(turns, 1) << "case " << i;
    }
}
