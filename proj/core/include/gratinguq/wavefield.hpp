#pragma once

#include <complex>
#include <vector>

#include "gratinguq/grid.hpp"

namespace gratinguq {

using cplx = std::complex<double>;

inline constexpr double kDefaultWoodEps = 1e-3;

/// Incident plane wave exp(i alpha x - i beta y) with alpha = kappa sin(theta),
/// beta = kappa cos(theta).
struct PlaneWave
{
    double kappa = 1.0;
    double theta = 0.0;
    double alpha = 0.0;
    double beta = 1.0;
};

PlaneWave make_plane_wave(double kappa, double theta);

//---------------------------------------------------------------------------//
/*!
 * Rayleigh mode lattice for n = -N..N.
 *
 * alpha_n = alpha + 2 pi n / Lambda. beta_n = sqrt(kappa^2 - alpha_n^2) on the
 * branch Re >= 0, Im >= 0: positive real for propagating modes, positive
 * imaginary for evanescent ones. Construction rejects Wood anomalies.
 */
struct ModeSet
{
    int order = 0;
    PlaneWave wave;
    double period = kTwoPi;
    std::vector<double> alpha_n;
    std::vector<cplx> beta_n;

    std::size_t size() const { return alpha_n.size(); }
    //! Storage index of mode n
    std::size_t index(int n) const { return static_cast<std::size_t>(n + order); }
    int mode(std::size_t index) const { return static_cast<int>(index) - order; }
    bool propagating(std::size_t index) const
    {
        return std::abs(alpha_n[index]) < wave.kappa;
    }
    std::size_t propagating_count() const;
};

ModeSet make_modes(PlaneWave const& pw, double period, int N,
                   double wood_eps = kDefaultWoodEps);

//! Vertical wavenumber on the outgoing/decaying branch
cplx vertical_wavenumber(double kappa, double alpha_n);

cplx incident_field(PlaneWave const& pw, double x, double y);

//---------------------------------------------------------------------------//
/*!
 * Quasi-periodic Green's function
 *
 *   G(x, y; s, t) = i/(2 Lambda) sum_n (1/beta_n) exp(i alpha_n (x - s)
 *                                                   + i beta_n |y - t|)
 *
 * Summed over |n| <= N, with N raised internally (up to 4N) until the first
 * omitted evanescent term is below 1e-12. Only valid off the source line,
 * |y - t| >= g_min.
 */
cplx green_quasiperiodic(ModeSet const& modes, double x, double y, double s,
                         double t, double g_min = 0.1);

}  // namespace gratinguq
