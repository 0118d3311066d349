#include "gratinguq/inverse.hpp"

#include <cmath>
#include <gtest/gtest.h>
#include <numbers>
#include <random>

#include "gratinguq/error.hpp"
#include "gratinguq/presets.hpp"

namespace gratinguq {
namespace {

constexpr double pi = std::numbers::pi;

Measurement measure(ProfileCoeffs const& f, double kappa, double theta, double y0,
                    double tau = 0.0, std::uint64_t seed = 0)
{
    RayleighCoeffs const rc = solve_forward(f, make_plane_wave(kappa, theta), 32, 4 * 65);
    auto rng = make_stream(seed);
    return synthesize_measurement(rc, y0, 256, tau, rng);
}

std::vector<TraceData> traces_at(ProfileCoeffs const& f, double kappa, int N,
                                 double y0 = 2.2, double tau = 0.0)
{
    std::vector<TraceData> out;
    std::uint64_t seed = 0;
    for (double th : default_angles())
        out.push_back(make_trace(measure(f, kappa, th, y0, tau, ++seed), N, 1e-6));
    return out;
}

// Traces carrying the forward solver's own amplitudes: no measurement height,
// so no evanescent content is lost to the gamma damping
std::vector<TraceData> exact_traces(ProfileCoeffs const& f, double kappa, int N = 32)
{
    std::vector<TraceData> out;
    for (double th : default_angles())
    {
        RayleighCoeffs const rc
            = solve_forward(f, make_plane_wave(kappa, th), N, 4 * (2 * N + 1));
        TraceData t;
        t.modes = rc.modes;
        t.psi = rc.psi;
        t.regularized.assign(rc.psi.size(), false);
        out.push_back(std::move(t));
    }
    return out;
}

LandweberConfig config(int k_max)
{
    LandweberConfig c;
    c.k_max = k_max;
    c.angles = default_angles();
    return c;
}

TEST(RayleighCoefficients, SinglePlaneWave)
{
    ModeSet const modes = make_modes(make_plane_wave(2.0, pi / 8), 2 * pi, 8);
    Measurement m;
    m.kappa = 2.0;
    m.theta = pi / 8;
    m.values.resize(64);
    for (std::size_t j = 0; j < 64; ++j)
        m.values[j] = std::polar(1.0, modes.alpha_n[modes.index(0)] * m.grid().x(j));
    auto const u = rayleigh_coefficients(m, modes);
    for (std::size_t i = 0; i < u.size(); ++i)
        EXPECT_LT(std::abs(u[i] - (i == modes.index(0) ? cplx(1.0) : cplx(0.0))), 1e-14);
}

TEST(RayleighCoefficients, Linearity)
{
    Measurement const a = measure(example1_profile(), 2.0, pi / 8, 2.2);
    Measurement b = measure(ProfileCoeffs({1.0, 0.1, 0.0}), 2.0, pi / 8, 2.2);
    ModeSet const modes = make_modes(make_plane_wave(2.0, pi / 8), 2 * pi, 8);
    Measurement sum = a;
    for (std::size_t j = 0; j < sum.values.size(); ++j)
        sum.values[j] += 2.0 * b.values[j];
    auto const ua = rayleigh_coefficients(a, modes);
    auto const ub = rayleigh_coefficients(b, modes);
    auto const us = rayleigh_coefficients(sum, modes);
    for (std::size_t i = 0; i < modes.size(); ++i)
        EXPECT_LT(std::abs(us[i] - (ua[i] + 2.0 * ub[i])), 1e-14);
}

TEST(RayleighCoefficients, Errors)
{
    ModeSet const modes = make_modes(make_plane_wave(2.0, pi / 8), 2 * pi, 8);
    Measurement m;
    m.kappa = 2.0;
    m.theta = pi / 8;
    m.values.assign(32, cplx(1.0));
    EXPECT_THROW(rayleigh_coefficients(m, modes), std::invalid_argument);
    m.values.assign(64, cplx(1.0));
    m.kappa = 3.0;
    EXPECT_THROW(rayleigh_coefficients(m, modes), std::invalid_argument);
}

TEST(RegularizedPsi, PropagatingKeepsModulus)
{
    ModeSet const modes = make_modes(make_plane_wave(3.0, pi / 8), 2 * pi, 8);
    std::vector<cplx> u(modes.size(), cplx(0.3, -0.4));
    auto const psi = regularized_psi(u, modes, 2.2, 1e-6);
    for (std::size_t i = 0; i < modes.size(); ++i)
        if (modes.propagating(i))
            EXPECT_NEAR(std::abs(psi[i]), 0.5, 1e-15);
}

TEST(RegularizedPsi, EvanescentLimits)
{
    ModeSet const modes = make_modes(make_plane_wave(1.0, pi / 12), 2 * pi, 8);
    std::size_t const i = modes.index(6);
    double const r = modes.beta_n[i].imag();
    ASSERT_FALSE(modes.propagating(i));
    std::vector<cplx> u(modes.size(), cplx(1.0));
    // Strong decay: amplification capped at 1/gamma
    double const y0 = 10.0;
    auto const capped = regularized_psi(u, modes, y0, 1e-6);
    EXPECT_NEAR(std::abs(capped[i]), std::exp(-r * y0) / 1e-6, 1e-6 * std::exp(-r * y0) / 1e-6);
    // Negligible gamma: plain inverse of the decay
    auto const raw = regularized_psi(u, modes, 1.0, 1e-30);
    EXPECT_NEAR(std::abs(raw[i]), std::exp(r * 1.0), 1e-12 * std::exp(r));
    EXPECT_THROW(regularized_psi(u, modes, 1.0, 0.0), std::invalid_argument);
}

TEST(MakeTrace, FlagsEvanescentEntries)
{
    TraceData const t = make_trace(measure(example1_profile(), 2.0, pi / 8, 2.2), 8, 1e-6);
    ASSERT_EQ(t.psi.size(), 17u);
    for (std::size_t i = 0; i < t.psi.size(); ++i)
        EXPECT_EQ(t.regularized[i], !t.modes.propagating(i));
    EXPECT_EQ(t.gamma, 1e-6);
    EXPECT_EQ(t.y0, 2.2);
}

TEST(Objective, ZeroPsiGivesPeriod)
{
    TraceData t = make_trace(measure(example1_profile(), 2.0, pi / 8, 2.2), 8, 1e-6);
    std::fill(t.psi.begin(), t.psi.end(), cplx(0.0));
    EXPECT_NEAR(objective(example1_profile(), t, 256), 2 * pi, 1e-12);
}

TEST(Objective, SmallAtTruthAndShrinksWithN)
{
    // Limited by the forward residual, which falls ~10x per 8 extra modes;
    // 1e-10 per angle needs N = 40
    ProfileCoeffs const f = example1_profile();
    double j24 = 0.0, j32 = 0.0;
    for (auto const& t : exact_traces(f, 2.0, 24))
        j24 += objective(f, t, 256);
    for (auto const& t : exact_traces(f, 2.0, 32))
        j32 += objective(f, t, 256);
    EXPECT_LT(j32, 0.1 * j24);
    for (auto const& t : exact_traces(f, 2.0, 40))
    {
        double const j = objective(f, t, 256);
        EXPECT_LT(j, 1e-10);
        EXPECT_GE(j, 0.0);
        // Away from the truth the objective is much larger
        EXPECT_GT(objective(ProfileCoeffs({1.5, 0.3, 0.0, 0.2, 0.0}), t, 256), 1e6 * j);
    }
}

TEST(Objective, MeasuredTracesLoseEvanescentContent)
{
    // Measured at y0 = 2.2 the damped evanescent amplitudes are gone, so the
    // truth no longer zeroes the objective; extra modes add nothing
    ProfileCoeffs const f = example1_profile();
    double j8 = 0.0, j32 = 0.0, off = 0.0;
    for (auto const& t : traces_at(f, 2.0, 8))
        j8 += objective(f, t, 256);
    for (auto const& t : traces_at(f, 2.0, 32))
        j32 += objective(f, t, 256);
    for (auto const& t : traces_at(f, 2.0, 8))
        off += objective(ProfileCoeffs({1.5, 0.3, 0.0, 0.2, 0.0}), t, 256);
    EXPECT_GT(j8, 1e-3);
    EXPECT_NEAR(j8, j32, 1e-6 * j8);
    EXPECT_LT(j8, 2 * pi * 5);
}

TEST(Objective, QuadratureConverged)
{
    ProfileCoeffs const f = example1_profile();
    for (int k : {1, 2, 4, 6})
    {
        ProfileCoeffs const c = f.extended(std::max(k, f.order()));
        for (auto const& t : traces_at(f, k, 8))
            EXPECT_NEAR(objective(c, t, 256), objective(c, t, 512), 1e-8) << "k=" << k;
    }
}

// Central differences of the objective vector; returns the largest entry-wise
// error relative to |DJ| (floored at 1e-6 of the row maximum so entries that
// vanish by symmetry do not divide by zero)
double jacobian_fd_error(ProfileCoeffs const& c, std::vector<TraceData> const& traces)
{
    StageOperator const op(traces, c.order(), 256);
    Eigen::MatrixXd const DJ = op.evaluate(c).DJ;
    double worst = 0.0;
    double const h = 1e-6;
    for (std::size_t p = 0; p < c.size(); ++p)
    {
        ProfileCoeffs cp = c, cm = c;
        cp[p] += h;
        cm[p] -= h;
        Eigen::VectorXd const fd = (op.evaluate(cp, false).J - op.evaluate(cm, false).J) / (2 * h);
        for (Eigen::Index l = 0; l < DJ.rows(); ++l)
        {
            double const scale
                = std::max(std::abs(DJ(l, p)), 1e-6 * DJ.row(l).cwiseAbs().maxCoeff());
            worst = std::max(worst, std::abs(fd(l) - DJ(l, p)) / scale);
        }
    }
    return worst;
}

TEST(Jacobian, MatchesFiniteDifferencesAtStageTwo)
{
    auto const traces = traces_at(example1_profile(), 2.0, 8);
    EXPECT_LT(jacobian_fd_error(example1_profile(), traces), 1e-6);
    EXPECT_LT(jacobian_fd_error(ProfileCoeffs({1.45, 0.25, -0.05, 0.15, 0.05}), traces), 1e-6);
}

TEST(Jacobian, RandomisedAroundExample)
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> U(-0.1, 0.1);
    for (int k : {1, 2, 4})
    {
        auto const traces = traces_at(example1_profile(), k, 8);
        for (int trial = 0; trial < 5; ++trial)
        {
            ProfileCoeffs c = example1_profile().extended(std::max(k, 2));
            c = ProfileCoeffs(std::vector<double>(c.coeffs().begin(),
                                                  c.coeffs().begin() + 2 * k + 1));
            for (std::size_t p = 0; p < c.size(); ++p)
                c[p] += U(rng);
            EXPECT_LT(jacobian_fd_error(c, traces), 1e-5) << "k=" << k;
        }
    }
}

TEST(Jacobian, ParityKillsSineDerivatives)
{
    // Even profile, normal incidence off anomaly: the data are even in x, so
    // at an even (flat) iterate the sine sensitivities vanish
    double const kappa = 1.5;
    Measurement const m = measure(example1_profile(), kappa, 0.0, 2.2);
    std::vector<TraceData> const t{make_trace(m, 8, 1e-6)};
    Eigen::MatrixXd const DJ = jacobian(ProfileCoeffs::constant(1.4, 3), t, 256);
    for (int p = 1; p <= 3; ++p)
    {
        EXPECT_LT(std::abs(DJ(0, 2 * p)), 1e-10) << "p=" << p;
    }
    EXPECT_GT(std::abs(DJ(0, 0)), 1e-3);
}

TEST(Jacobian, VanishesAtNoiselessMinimiser)
{
    ProfileCoeffs const f = example1_profile();
    Eigen::MatrixXd const DJ = jacobian(f, exact_traces(f, 2.0), 256);
    for (Eigen::Index l = 0; l < DJ.rows(); ++l)
        EXPECT_LT(DJ.row(l).norm(), 1e-6);
}

TEST(Landweber, ZeroIterationsReturnsStart)
{
    auto cfg = config(1);
    cfg.T = 0;
    ProfileCoeffs const c0 = ProfileCoeffs::constant(2.2, 1);
    LandweberResult const r = landweber_run(c0, traces_at(example1_profile(), 1.0, 8), cfg, 1);
    EXPECT_EQ(r.coeffs, c0);
    EXPECT_EQ(r.objective_history.size(), 1u);
}

TEST(Landweber, StationaryAtMinimiser)
{
    auto cfg = config(2);
    cfg.T = 5;
    ProfileCoeffs const f = example1_profile();
    LandweberResult const r = landweber_run(f, exact_traces(f, 2.0), cfg, 2);
    for (std::size_t p = 0; p < f.size(); ++p)
        EXPECT_LT(std::abs(r.coeffs[p] - f[p]), 5 * 1e-8);
}

TEST(Landweber, ObjectiveMostlyDecreasesAtStageOne)
{
    auto cfg = config(1);
    ProfileCoeffs const f = example1_profile();
    LandweberResult const r = landweber_run(ProfileCoeffs::constant(2.2, 1),
                                            traces_at(f, 1.0, 8, 2.2, 1e-3), cfg, 1);
    auto const& h = r.objective_history;
    ASSERT_EQ(h.size(), static_cast<std::size_t>(cfg.T) + 1);
    std::size_t down = 0;
    for (std::size_t t = 1; t < h.size(); ++t)
        down += h[t] <= h[t - 1];
    EXPECT_GE(static_cast<double>(down) / (h.size() - 1), 0.9);
    EXPECT_LT(h.back(), 0.1 * h.front());
}

TEST(Landweber, DivergenceGuard)
{
    auto cfg = config(1);
    cfg.eta0 = 50.0;
    cfg.T = 50;
    EXPECT_THROW(landweber_run(ProfileCoeffs::constant(2.2, 1),
                               traces_at(example1_profile(), 1.0, 8), cfg, 1),
                 Diverged);
}

TEST(Landweber, Errors)
{
    auto cfg = config(2);
    auto const traces = traces_at(example1_profile(), 2.0, 8);
    EXPECT_THROW(landweber_run(ProfileCoeffs::constant(2.2, 1), traces, cfg, 2),
                 std::invalid_argument);
    EXPECT_THROW(landweber_run(ProfileCoeffs::constant(2.2, 0), traces, cfg, 0),
                 std::invalid_argument);
}

TEST(LandweberConfig, Validation)
{
    auto cfg = config(2);
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_DOUBLE_EQ(cfg.eta(2), 0.00025);
    auto bad = cfg;
    bad.quad_points = 200;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.angles = {pi / 2};
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.T = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.gamma = 0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

MeasurementSet noiseless_set(ProfileCoeffs const& f, int k_max, double y0)
{
    MeasurementSet set(k_max, default_angles());
    for (int k = 1; k <= k_max; ++k)
        for (std::size_t l = 0; l < set.angles().size(); ++l)
            set.insert(k, l, measure(f, k, set.angles()[l], y0));
    return set;
}

TEST(MeasurementSet, MissingEntryNamed)
{
    MeasurementSet set(2, default_angles());
    EXPECT_FALSE(set.contains(2, 3));
    try
    {
        set.at(2, 3);
        FAIL();
    }
    catch (std::out_of_range const& e)
    {
        EXPECT_NE(std::string(e.what()).find("k=2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("theta[3]"), std::string::npos);
    }
    EXPECT_THROW(set.at(3, 0), std::out_of_range);
    EXPECT_THROW(MeasurementSet(0, default_angles()), std::invalid_argument);
}

TEST(Continuation, NoiselessDeterministicExample)
{
    ProfileCoeffs const f = example1_profile();
    MeasurementSet const set = noiseless_set(f, 2, 2.2);
    auto const cfg = config(2);
    Reconstruction const r = continuation_reconstruct(set, cfg, 2.2);
    EXPECT_LE(deviation_rms(r.coeffs, f), 1e-2);
    ASSERT_EQ(r.stage_coeffs.size(), 2u);
    EXPECT_EQ(r.stage_coeffs[0].size(), 3u);
    EXPECT_EQ(r.stage_coeffs[1].size(), 5u);
    EXPECT_EQ(r.coeffs, r.stage_coeffs[1]);
    for (auto const& h : r.stage_history)
        EXPECT_EQ(h.size(), static_cast<std::size_t>(cfg.T) + 1);

    // Stage two starts from the zero-padded stage-one result
    std::vector<TraceData> t2;
    for (std::size_t l = 0; l < cfg.angles.size(); ++l)
        t2.push_back(make_trace(set.at(2, l), cfg.N, cfg.gamma));
    LandweberResult const again = landweber_run(r.stage_coeffs[0].extended(2), t2, cfg, 2);
    EXPECT_EQ(again.coeffs, r.stage_coeffs[1]);
}

TEST(Continuation, RejectsInconsistentData)
{
    ProfileCoeffs const f = example1_profile();
    MeasurementSet set = noiseless_set(f, 1, 2.2);
    auto cfg = config(1);
    EXPECT_THROW(continuation_reconstruct(set, cfg, 2.5), std::invalid_argument);
    set.insert(1, 2, measure(f, 1.0, pi / 5, 2.2));
    EXPECT_THROW(continuation_reconstruct(set, cfg, 2.2), std::invalid_argument);
    MeasurementSet partial(1, default_angles());
    partial.insert(1, 0, measure(f, 1.0, default_angles()[0], 2.2));
    EXPECT_THROW(continuation_reconstruct(partial, cfg, 2.2), std::out_of_range);
    EXPECT_THROW(continuation_reconstruct(noiseless_set(f, 1, 2.2), config(2), 2.2),
                 std::invalid_argument);
}

TEST(Deviation, RmsOfDifference)
{
    ProfileCoeffs const a({1.0, 0.3, 0.0});
    ProfileCoeffs const b({1.0, 0.0, 0.0});
    EXPECT_NEAR(deviation_rms(a, b), 0.3 / std::sqrt(2.0), 1e-14);
    EXPECT_EQ(deviation_rms(a, a), 0.0);
}

}  // namespace
}  // namespace gratinguq
