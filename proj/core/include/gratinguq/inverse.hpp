#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <vector>

#include "gratinguq/forward.hpp"
#include "gratinguq/surface.hpp"
#include "gratinguq/wavefield.hpp"

namespace gratinguq {

//---------------------------------------------------------------------------//
/*!
 * Regularised surface amplitudes psi_n for one (wavenumber, angle) pair,
 * extracted from a measured trace. regularized[i] marks evanescent entries
 * that went through the gamma-damped formula.
 */
struct TraceData
{
    ModeSet modes;
    std::vector<cplx> psi;
    std::vector<bool> regularized;
    double gamma = 0.0;
    double y0 = 0.0;
};

/// Iteration settings shared by every continuation stage.
struct LandweberConfig
{
    double eta0 = 1e-3;  // eta_k = eta0 / k^2
    int T = 1000;
    int N = 8;
    int quad_points = 256;
    int k_max = 2;
    std::vector<double> angles;
    double gamma = 1e-6;
    double divergence_factor = 10.0;
    double wood_eps = kDefaultWoodEps;

    double eta(int k) const { return eta0 / (static_cast<double>(k) * k); }
    void validate() const;
};

//! Default incidence angles {-pi/4, -pi/8, pi/12, pi/8, pi/4}
std::vector<double> default_angles();

//---------------------------------------------------------------------------//
// DATA EXTRACTION
//---------------------------------------------------------------------------//

//! u_n = (1/Q) sum_j u(x_j) exp(-i alpha_n x_j), n = -N..N
std::vector<cplx> rayleigh_coefficients(Measurement const& m, ModeSet const& modes);

/*!
 * psi_n = u_n exp(-i beta_n y0) for propagating modes and
 * u_n exp(i beta_n y0) / (exp(2 i beta_n y0) + gamma) for evanescent ones.
 */
std::vector<cplx> regularized_psi(std::span<cplx const> u_n, ModeSet const& modes,
                                  double y0, double gamma);

TraceData make_trace(Measurement const& m, int N, double gamma,
                     double wood_eps = kDefaultWoodEps);

//---------------------------------------------------------------------------//
// OBJECTIVE AND JACOBIAN
//---------------------------------------------------------------------------//

struct StageEvaluation
{
    Eigen::VectorXd J;   // per-angle objectives J_l
    Eigen::MatrixXd DJ;  // L x (2k + 1)
};

/*!
 * Objective vector J(c) and its Jacobian for one continuation stage.
 *
 * With F_l = sum_n psi_{n,l} e^{i alpha_n x + i beta_n f} + e^{i alpha x - i beta f},
 * J_l = ||F_l||^2 over one period, and dJ_l/dc_p = 2 Re int conj(F_l) dF_l/df b_p.
 * The x-dependent phases and basis functions are tabulated once on the
 * quadrature grid; each evaluation then costs one exponential per
 * (point, mode, angle).
 */
class StageOperator
{
  public:
    StageOperator(std::span<TraceData const> traces, int order, int quad_points);

    int order() const { return order_; }
    std::size_t angle_count() const { return angles_.size(); }

    StageEvaluation evaluate(ProfileCoeffs const& c, bool with_jacobian = true) const;

  private:
    struct AngleTable
    {
        double beta = 0.0;
        std::vector<cplx> beta_n;
        std::vector<cplx> weighted_phase;  // psi_n e^{i alpha_n x_j}, row-major [j][n]
        std::vector<cplx> incident_phase;  // e^{i alpha x_j}
    };

    int order_;
    int quad_points_;
    double period_;
    std::vector<AngleTable> angles_;
    Eigen::MatrixXd basis_;  // quad_points x (2 order + 1)
};

double objective(ProfileCoeffs const& c, TraceData const& trace, int quad_points);

Eigen::MatrixXd jacobian(ProfileCoeffs const& c, std::span<TraceData const> traces,
                         int quad_points);

//---------------------------------------------------------------------------//
// ITERATION
//---------------------------------------------------------------------------//

struct LandweberResult
{
    ProfileCoeffs coeffs;
    std::vector<double> objective_history;  // sum_l J_l before each step, then final
};

/*!
 * T steps of c <- c - eta_k DJ(c)^T J(c) at stage k.
 * Throws Diverged when the objective sum exceeds divergence_factor times
 * its initial value.
 */
LandweberResult landweber_run(ProfileCoeffs const& c0, std::span<TraceData const> traces,
                              LandweberConfig const& cfg, int k);

/// Measurements indexed by integer wavenumber k = 1..k_max and angle index.
class MeasurementSet
{
  public:
    MeasurementSet(int k_max, std::vector<double> angles);

    int k_max() const { return k_max_; }
    std::vector<double> const& angles() const { return angles_; }

    void insert(int k, std::size_t l, Measurement m);
    bool contains(int k, std::size_t l) const;
    //! Throws std::out_of_range naming the missing (k, theta_l)
    Measurement const& at(int k, std::size_t l) const;

  private:
    std::size_t slot(int k, std::size_t l) const;

    int k_max_;
    std::vector<double> angles_;
    std::vector<std::optional<Measurement>> data_;
};

struct Reconstruction
{
    ProfileCoeffs coeffs;
    std::vector<ProfileCoeffs> stage_coeffs;        // result after each stage
    std::vector<std::vector<double>> stage_history;  // objective sums per stage
};

/*!
 * Frequency continuation: start from the flat profile c_0 = y0, then for
 * k = 1..k_max pad with two zero coefficients, extract traces at wavenumber k
 * for every angle and run Landweber. Returns the stage-k_max profile.
 */
Reconstruction continuation_reconstruct(MeasurementSet const& measurements,
                                        LandweberConfig const& cfg, double y0);

//! RMS of a - b over a uniform grid
double deviation_rms(ProfileCoeffs const& a, ProfileCoeffs const& b,
                     std::size_t points = 512);

}  // namespace gratinguq
