#include "gratinguq/wavefield.hpp"

#include <cmath>
#include <gtest/gtest.h>
#include <numbers>

#include "gratinguq/error.hpp"

namespace gratinguq {
namespace {

constexpr double pi = std::numbers::pi;

TEST(PlaneWave, Components)
{
    auto const a = make_plane_wave(1.0, 0.0);
    EXPECT_DOUBLE_EQ(a.alpha, 0.0);
    EXPECT_DOUBLE_EQ(a.beta, 1.0);
    auto const b = make_plane_wave(2.0, pi / 6);
    EXPECT_NEAR(b.alpha, 1.0, 1e-15);
    EXPECT_NEAR(b.beta, std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(b.alpha * b.alpha + b.beta * b.beta, 4.0, 1e-12);
    EXPECT_THROW(make_plane_wave(1.0, pi / 2), std::invalid_argument);
    EXPECT_THROW(make_plane_wave(1.0, -pi / 2), std::invalid_argument);
    EXPECT_THROW(make_plane_wave(0.0, 0.1), std::invalid_argument);
}

TEST(Modes, WoodAnomalyAtNormalIncidence)
{
    try
    {
        make_modes(make_plane_wave(1.0, 0.0), 2 * pi, 2);
        FAIL() << "expected WoodAnomaly";
    }
    catch (WoodAnomaly const& e)
    {
        EXPECT_EQ(std::abs(e.mode()), 1);
        EXPECT_DOUBLE_EQ(e.kappa(), 1.0);
        EXPECT_DOUBLE_EQ(e.theta(), 0.0);
    }
    // Just outside the exclusion band is accepted
    EXPECT_NO_THROW(make_modes(make_plane_wave(1.0 + 2e-3, 0.0), 2 * pi, 2));
    EXPECT_THROW(make_modes(make_plane_wave(1.0 + 5e-4, 0.0), 2 * pi, 2), WoodAnomaly);
}

TEST(Modes, ObliqueExample)
{
    ModeSet const m = make_modes(make_plane_wave(1.0, pi / 12), 2 * pi, 2);
    ASSERT_EQ(m.size(), 5u);
    EXPECT_NEAR(m.alpha_n[m.index(0)], 0.2588190451, 1e-10);
    EXPECT_NEAR(m.beta_n[m.index(0)].real(), 0.9659258263, 1e-10);
    EXPECT_EQ(m.beta_n[m.index(0)].imag(), 0.0);
    cplx const b1 = m.beta_n[m.index(1)];
    EXPECT_EQ(b1.real(), 0.0);
    EXPECT_NEAR(b1.imag(), 0.7646, 1e-4);
    // Independent value: sqrt((1 + sin(pi/12))^2 - 1)
    double const a1 = 1.0 + std::sin(pi / 12);
    EXPECT_NEAR(b1.imag(), std::sqrt(a1 * a1 - 1.0), 1e-14);
    EXPECT_EQ(m.mode(m.index(-2)), -2);
}

TEST(Modes, LatticeInvariants)
{
    for (double kappa : {1.0, 2.0, 3.0, 6.0})
        for (double theta : {-pi / 4, -pi / 8, pi / 12, pi / 8, pi / 4})
        {
            auto const pw = make_plane_wave(kappa, theta);
            ModeSet const m = make_modes(pw, 2 * pi, 8);
            std::size_t expected = 0;
            for (int n = -8; n <= 8; ++n)
            {
                std::size_t const i = m.index(n);
                EXPECT_DOUBLE_EQ(m.alpha_n[i], pw.alpha + n);
                cplx const b = m.beta_n[i];
                EXPECT_GE(b.real(), 0.0);
                EXPECT_GE(b.imag(), 0.0);
                cplx const resid = b * b - (kappa * kappa - m.alpha_n[i] * m.alpha_n[i]);
                EXPECT_LT(std::abs(resid), 1e-10 * std::max(kappa * kappa, m.alpha_n[i] * m.alpha_n[i]));
                bool const prop = std::abs(m.alpha_n[i]) < kappa;
                EXPECT_EQ(m.propagating(i), prop);
                if (prop)
                {
                    ++expected;
                    EXPECT_EQ(b.imag(), 0.0);
                    EXPECT_LE(b.real(), kappa);
                }
                else
                {
                    EXPECT_EQ(b.real(), 0.0);
                    EXPECT_GT(b.imag(), 0.0);
                }
            }
            EXPECT_EQ(m.propagating_count(), expected);
        }
}

TEST(Incident, Values)
{
    auto const pw = make_plane_wave(1.0, 0.0);
    EXPECT_NEAR(std::abs(incident_field(pw, 0.0, 0.0) - cplx(1.0)), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(incident_field(pw, 0.3, 2 * pi) - cplx(1.0)), 0.0, 1e-14);
    auto const pw2 = make_plane_wave(3.0, 0.4);
    for (double x : {0.1, 2.0})
        for (double y : {-1.0, 0.5, 7.0})
        {
            cplx const u = incident_field(pw2, x, y);
            EXPECT_NEAR(std::abs(u), 1.0, 1e-14);
            EXPECT_NEAR(std::arg(u * std::exp(cplx(0, -(pw2.alpha * x - pw2.beta * y)))), 0.0,
                        1e-12);
        }
}

TEST(Green, QuasiPeriodicAndTranslationInvariant)
{
    ModeSet const m = make_modes(make_plane_wave(2.0, pi / 8), 2 * pi, 8);
    double const alpha = m.wave.alpha;
    cplx const g = green_quasiperiodic(m, 0.7, 1.5, 0.2, 0.4);
    cplx const g_shift = green_quasiperiodic(m, 0.7 + 2 * pi, 1.5, 0.2, 0.4);
    EXPECT_LT(std::abs(g_shift - std::exp(cplx(0, alpha * 2 * pi)) * g), 1e-12);
    cplx const g_trans = green_quasiperiodic(m, 0.7 + 0.9, 1.5, 0.2 + 0.9, 0.4);
    EXPECT_LT(std::abs(g_trans - g), 1e-12);
    // Depends on |y - t| only
    EXPECT_LT(std::abs(green_quasiperiodic(m, 0.7, 0.4 - 1.1, 0.2, 0.4) - g), 1e-12);
    EXPECT_THROW(green_quasiperiodic(m, 0.7, 0.45, 0.2, 0.4), std::invalid_argument);
}

TEST(Green, HelmholtzResidual)
{
    double const kappa = 2.0;
    ModeSet const m = make_modes(make_plane_wave(kappa, pi / 8), 2 * pi, 8);
    double const x = 1.1, y = 1.0, s = 0.3, t = 0.0, h = 1e-3;
    auto G = [&](double xx, double yy) { return green_quasiperiodic(m, xx, yy, s, t); };
    cplx const lap
        = (G(x + h, y) + G(x - h, y) + G(x, y + h) + G(x, y - h) - 4.0 * G(x, y)) / (h * h);
    cplx const resid = lap + kappa * kappa * G(x, y);
    EXPECT_LT(std::abs(resid), 1e-4 * kappa * kappa * std::abs(G(x, y)));
}

TEST(Green, TailRefinementStable)
{
    // At |y - t| = 1 the tail needs ~22 modes, more than N = 8; the internal
    // extension must match a hand-summed long series
    ModeSet const m = make_modes(make_plane_wave(1.5, pi / 12), 2 * pi, 8);
    double const dy = 1.0, dx = 0.4;
    cplx ref = 0.0;
    for (int n = -200; n <= 200; ++n)
    {
        double const an = m.wave.alpha + n;
        cplx const bn = vertical_wavenumber(1.5, an);
        ref += cplx(0, 1.0 / (4 * pi)) / bn * std::exp(cplx(0, 1) * (an * dx + bn * dy));
    }
    EXPECT_LT(std::abs(green_quasiperiodic(m, dx, dy, 0.0, 0.0) - ref), 1e-11);
    // Too close for 4N modes to reach the tail bound
    EXPECT_THROW(green_quasiperiodic(m, dx, 0.15, 0.0, 0.0), NumericalError);
}

}  // namespace
}  // namespace gratinguq
