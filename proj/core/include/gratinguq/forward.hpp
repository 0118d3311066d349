#pragma once

#include <vector>

#include "gratinguq/rng.hpp"
#include "gratinguq/surface.hpp"
#include "gratinguq/wavefield.hpp"

namespace gratinguq {

//---------------------------------------------------------------------------//
/*!
 * Rayleigh amplitudes psi_n of the scattered field, referenced to y = 0:
 *
 *   u(x, y) = sum_n psi_n exp(i alpha_n x + i beta_n y),  y > max f.
 *
 * For a perfectly conducting surface the efficiencies of the propagating
 * orders sum to one; energy_defect records how far the solve is from that.
 */
struct RayleighCoeffs
{
    ModeSet modes;
    std::vector<cplx> psi;
    double residual_rms = 0.0;
    double energy_defect = 0.0;
    double condition = 0.0;
    double surface_max = 0.0;  // max f on a 1024-point grid
};

/// Forward solver settings. The forward truncation is independent of (and
/// much larger than) the inversion's N: the Rayleigh series converges slowly
/// near the surface troughs.
struct ForwardOptions
{
    int N = 32;
    int colloc_factor = 4;  // Q_colloc = colloc_factor * (2N + 1)
    double max_condition = 1e12;
    double wood_eps = kDefaultWoodEps;

    int collocation_points() const { return colloc_factor * (2 * N + 1); }
};

/*!
 * Least-squares collocation of the Dirichlet condition u + u^i = 0 on the
 * surface in the truncated Rayleigh basis. Throws IllConditioned when the
 * (height-referenced, column-normalised) collocation matrix has condition
 * number above max_condition, WoodAnomaly from the mode lattice.
 */
RayleighCoeffs solve_forward(ProfileCoeffs const& surface, PlaneWave const& pw,
                             int N, int q_colloc,
                             double max_condition = 1e12,
                             double wood_eps = kDefaultWoodEps);

RayleighCoeffs solve_forward(SurfaceSample const& sample, PlaneWave const& pw,
                             ForwardOptions const& options = {});

//! e_n = (Re beta_n / beta) |psi_n|^2, zero for evanescent orders
std::vector<double> reflection_efficiencies(RayleighCoeffs const& rc);

//---------------------------------------------------------------------------//
/*!
 * Sampled scattered field u(x_j, y0) on Q uniform points of one period.
 */
struct Measurement
{
    double kappa = 1.0;
    double theta = 0.0;
    double y0 = 0.0;
    double period = kTwoPi;
    double tau = 0.0;
    std::vector<cplx> values;

    UniformGrid grid() const { return {values.size(), period}; }
};

/*!
 * Evaluate the Rayleigh field at height y0 and apply multiplicative noise
 * u_j (1 + tau * r_j), r_j uniform on [-1, 1], one draw per grid point.
 */
Measurement synthesize_measurement(RayleighCoeffs const& rc, double y0, int Q,
                                   double tau, RandomStream& rng);

}  // namespace gratinguq
