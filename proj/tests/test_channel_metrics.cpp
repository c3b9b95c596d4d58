#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <numbers>

#include "support/cases.hpp"
#include "wormhole/channel_metrics.hpp"

using namespace wormhole;
using namespace wormhole::metrics;

namespace {

Eigen::Matrix4d to_eigen(const Matrix4& m)
{
    Eigen::Matrix4d out;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return out;
}

Eigen::Vector4d eigen_spectrum(const Matrix4& m)
{
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(to_eigen(m)).eigenvalues();
}

double eigen_entropy(const Eigen::VectorXd& ev)
{
    double s = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev(i) > 1e-300)
            s -= ev(i) * std::log(ev(i));
    return s;
}

} // namespace

TEST(DensityFromK, HalfResponse)
{
    const auto st = density_from_k(0.5);
    EXPECT_DOUBLE_EQ(st.rho[0][0], 0.3125);
    EXPECT_DOUBLE_EQ(st.rho[1][1], 0.1875);
    EXPECT_DOUBLE_EQ(st.rho[2][2], 0.1875);
    EXPECT_DOUBLE_EQ(st.rho[3][3], 0.3125);
    EXPECT_DOUBLE_EQ(st.rho[0][3], 0.25);
    EXPECT_DOUBLE_EQ(st.rho[3][0], 0.25);
    EXPECT_EQ(st.k_value, 0.5);
}

TEST(DensityFromK, NoSignalIsMaximallyMixed)
{
    const auto st = density_from_k(0.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            EXPECT_EQ(st.rho[i][j], i == j ? 0.25 : 0.0);
}

TEST(DensityFromK, PerfectTeleportationIsBellProjector)
{
    const auto st = density_from_k(1.0);
    const Eigen::Vector4d phi(std::sqrt(0.5), 0.0, 0.0, std::sqrt(0.5));
    EXPECT_LT((to_eigen(st.rho) - phi * phi.transpose()).norm(), 1e-15);
}

TEST(DensityFromK, RejectsOutOfRange)
{
    EXPECT_THROW(density_from_k(1.0 + 1e-9), DomainError);
    EXPECT_THROW(density_from_k(-1.1), DomainError);
    EXPECT_NO_THROW(density_from_k(-1.0));
}

TEST(DensityFromK, StateInvariants)
{
    props::Cases cases(41);
    for (int n = 0; n < 200; ++n) {
        const auto st = density_from_k(cases.uniform(-1.0, 1.0));
        const auto& r = st.rho;
        EXPECT_NEAR(r[0][0] + r[1][1] + r[2][2] + r[3][3], 1.0, 1e-12);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                EXPECT_EQ(r[i][j], r[j][i]);
                const bool allowed = i == j || (i == 0 && j == 3) || (i == 3 && j == 0);
                if (!allowed) {
                    EXPECT_EQ(r[i][j], 0.0);
                }
            }
        EXPECT_GE(eigen_spectrum(r).minCoeff(), -1e-12);
        // Marginals are maximally mixed.
        EXPECT_NEAR(r[0][0] + r[1][1], 0.5, 1e-15);
        EXPECT_NEAR(r[0][0] + r[2][2], 0.5, 1e-15);
    }
}

TEST(Eigenvalues, JacobiAgreesWithEigen)
{
    props::Cases cases(42);
    for (int n = 0; n < 200; ++n) {
        Matrix4 m{};
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
                m[i][j] = m[j][i] = cases.uniform(-1.0, 1.0);
        const auto ours = symmetric_eigenvalues(m);
        const auto ref = eigen_spectrum(m);
        for (int i = 0; i < 4; ++i)
            EXPECT_NEAR(ours[static_cast<std::size_t>(i)], ref(i), 1e-12) << "case " << n;
    }
}

TEST(PartialTranspose, ClosedFormSpectrum)
{
    props::Cases cases(43);
    for (int n = 0; n < 200; ++n) {
        const double k = cases.uniform(-1.0, 1.0);
        const auto st = density_from_k(k);
        const auto closed = pt_spectrum_closed_form(k);
        const auto ref = eigen_spectrum(partial_transpose_a(st.rho));
        const auto ours = symmetric_eigenvalues(partial_transpose_a(st.rho));
        for (int i = 0; i < 4; ++i) {
            EXPECT_NEAR(closed[static_cast<std::size_t>(i)], ref(i), 1e-12);
            EXPECT_NEAR(ours[static_cast<std::size_t>(i)], ref(i), 1e-12);
        }
    }
}

TEST(PartialTranspose, EitherSubsystemGivesSameSpectrum)
{
    for (double k : {-0.8, -0.2, 0.0, 0.41, 0.9}) {
        const auto st = density_from_k(k);
        const auto a = symmetric_eigenvalues(partial_transpose_a(st.rho));
        const auto r = symmetric_eigenvalues(partial_transpose_r(st.rho));
        for (std::size_t i = 0; i < 4; ++i)
            EXPECT_NEAR(a[i], r[i], 1e-15);
    }
}

TEST(Negativity, Examples)
{
    EXPECT_NEAR(negativity(density_from_k(0.5)), 0.0625, 1e-15);
    EXPECT_NEAR(negativity(density_from_k(std::numbers::sqrt2 - 1.0)), 0.0, 1e-15);
    EXPECT_NEAR(negativity(density_from_k(1.0)), 0.5, 1e-15);
}

TEST(Negativity, TraceNormDefinition)
{
    props::Cases cases(44);
    for (int n = 0; n < 200; ++n) {
        const double k = cases.uniform(-1.0, 1.0);
        const auto st = density_from_k(k);
        const double trace_norm = eigen_spectrum(partial_transpose_a(st.rho)).cwiseAbs().sum();
        EXPECT_NEAR(negativity(st), 0.5 * (trace_norm - 1.0), 1e-12);
        EXPECT_NEAR(negativity(st), std::max(0.0, (k * k + 2.0 * std::abs(k) - 1.0) / 4.0), 1e-12);
    }
}

TEST(Negativity, ThresholdBracket)
{
    double first_positive = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double k = i * 1e-3;
        if (negativity(density_from_k(k)) > 0.0) {
            first_positive = k;
            break;
        }
    }
    EXPECT_GT(first_positive, kQuantumThreshold);
    EXPECT_LE(first_positive - 1e-3, kQuantumThreshold);
}

TEST(MutualInformation, Examples)
{
    EXPECT_NEAR(mutual_information(density_from_k(1.0)), 2.0 * std::numbers::ln2, 1e-12);
    EXPECT_NEAR(mutual_information(density_from_k(0.0)), 0.0, 1e-15);
    EXPECT_NEAR(mutual_information(density_from_k(0.5)), 0.2616, 1e-4);
}

TEST(MutualInformation, MatchesDirectEntropy)
{
    props::Cases cases(45);
    for (int n = 0; n < 200; ++n) {
        const double k = cases.uniform(-1.0, 1.0);
        const auto st = density_from_k(k);
        const double s_ar = eigen_entropy(eigen_spectrum(st.rho));
        EXPECT_NEAR(mutual_information(st), 2.0 * std::numbers::ln2 - s_ar, 1e-12);
    }
}

TEST(MutualInformation, EvenAndIncreasing)
{
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        const double k = i * 1e-3;
        const double mi = mutual_information(density_from_k(k));
        EXPECT_EQ(mi, mutual_information(density_from_k(-k)));
        EXPECT_GT(mi, prev) << "k " << k;
        prev = mi;
    }
}

TEST(Negativity, EvenInK)
{
    for (int i = 0; i <= 100; ++i) {
        const double k = i * 1e-2;
        EXPECT_EQ(negativity(density_from_k(k)), negativity(density_from_k(-k)));
    }
}

TEST(Entropy, ZeroWeightsContributeNothing)
{
    const std::array<double, 4> pure{0.0, 0.0, 0.0, 1.0};
    EXPECT_EQ(entropy(pure), 0.0);
    const std::array<double, 2> coin{0.5, 0.5};
    EXPECT_NEAR(entropy(coin), std::numbers::ln2, 1e-16);
}

TEST(Classify, Examples)
{
    const auto p = ModelParams::make(0.1, 0.01);
    EXPECT_EQ(classify(0.45, p), Regime::quantum);
    EXPECT_EQ(classify(0.30, p), Regime::classical);
    EXPECT_EQ(classify(0.0099, p), Regime::no_signal);
}

TEST(Classify, BoundariesAndFactor)
{
    const auto p = ModelParams::make(0.1, 0.01);
    EXPECT_EQ(classify(kQuantumThreshold, p), Regime::classical);
    EXPECT_EQ(classify(0.02, p), Regime::no_signal);
    EXPECT_EQ(classify(0.0201, p), Regime::classical);
    EXPECT_EQ(classify(0.0201, p, 3.0), Regime::no_signal);
    EXPECT_EQ(classify(0.0, ModelParams::make(0.1, 0.0), 0.0), Regime::no_signal);
}

TEST(Classify, RejectsOutOfRange)
{
    const auto p = ModelParams::make(0.1, 0.01);
    EXPECT_THROW(classify(-0.1, p), DomainError);
    EXPECT_THROW(classify(1.5, p), DomainError);
}

TEST(Classify, QuantumIffNegativityPositive)
{
    props::Cases cases(46);
    const auto p = ModelParams::make(0.1, 0.001);
    for (int n = 0; n < 500; ++n) {
        const double k = cases.uniform(0.0, 1.0);
        EXPECT_EQ(classify(k, p) == Regime::quantum, negativity(density_from_k(k)) > 0.0) << "k " << k;
    }
}
