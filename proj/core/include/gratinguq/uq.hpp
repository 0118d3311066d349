#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gratinguq/forward.hpp"
#include "gratinguq/inverse.hpp"
#include "gratinguq/surface.hpp"

namespace gratinguq {

//---------------------------------------------------------------------------//
// STATISTICS
//---------------------------------------------------------------------------//

//! Coefficient-wise arithmetic mean
ProfileCoeffs mean_profile(std::span<ProfileCoeffs const> samples);

//! s_f(x_j) = sqrt((1/M) sum_m (f_m(x_j) - fbar(x_j))^2)
std::vector<double> std_profile(std::span<ProfileCoeffs const> samples,
                                ProfileCoeffs const& mean, UniformGrid const& grid);

//! C_ij = (1/M) sum_m <f_m - fbar, phi_i><f_m - fbar, phi_j>, symmetrised
Eigen::MatrixXd empirical_covariance(std::span<ProfileCoeffs const> samples,
                                     ProfileCoeffs const& mean, KLBasis const& basis,
                                     UniformGrid const& grid);

/*!
 * Collapse a descending spectrum onto KL frequencies.
 *
 * The leading eigenvalue is the frequency-0 singlet. After it, sin/cos pairs
 * share one eigenvalue in the model; sampling noise splits them, so
 * neighbours closer than rel_tol (relative to the larger) are averaged.
 */
std::vector<double> paired_spectrum(std::span<double const> descending,
                                    double rel_tol = 0.1);

struct RecoveredStatistics
{
    double l = 0.0;
    double sigma = 0.0;
};

/*!
 * Invert lambda_j = sqrt(pi) sigma^2 l exp(-(2 pi j / Lambda)^2 l^2 / 4) from
 * the frequency-0 and frequency-1 eigenvalues. For Lambda = 2 pi this is
 * l' = sqrt(4 ln(lambda_0 / lambda_1)), sigma' = sqrt(lambda_0 / (sqrt(pi) l')).
 * Throws OrderViolation unless lambda_0 > lambda_1 > 0.
 */
RecoveredStatistics recover_statistics(double lambda0, double lambda1,
                                       double period = kTwoPi);

//! Same inversion from any two frequencies i < j
RecoveredStatistics recover_statistics_from(int i, double lambda_i, int j,
                                            double lambda_j, double period = kTwoPi);

//---------------------------------------------------------------------------//
// ENSEMBLE
//---------------------------------------------------------------------------//

/// Everything needed to simulate and invert one Monte Carlo sample.
struct EnsembleProblem
{
    CovarianceSpec covariance;
    ProfileCoeffs deterministic;
    double kl_tol = 1e-4;
    LandweberConfig inversion;
    ForwardOptions forward;
    double y0_standoff = 0.3;
    int Q = 256;
    double tau = 1e-3;
    std::size_t stats_points = 512;

    void validate() const;
};

//! Measurement height: max f + standoff, rounded up to one decimal
double measurement_height(double surface_max, double standoff);

struct SampleContext
{
    int index = 0;
    std::uint64_t seed = 0;
};

using Reconstructor
    = std::function<ProfileCoeffs(SurfaceSample const&, SampleContext const&)>;

//! Full pipeline: forward solves, noisy traces, frequency continuation
Reconstructor pipeline_reconstructor(EnsembleProblem const& problem);

//! Ground-truth stub: returns the sampled surface itself
Reconstructor ground_truth_reconstructor();

/// Synthetic data of one sample for every (k, theta_l).
struct SampleData
{
    double y0 = 0.0;
    MeasurementSet measurements;
    std::vector<std::vector<double>> efficiencies;  // [k-1][l] sum of e_n
};

SampleData synthesize_sample_data(EnsembleProblem const& problem,
                                  SurfaceSample const& sample, std::uint64_t seed);

struct EnsembleOptions
{
    int workers = 1;
    Reconstructor reconstructor;  // empty: pipeline_reconstructor(problem)
    std::function<std::uint64_t(std::uint64_t master, int m)> seeder;  // empty: sample_seed
    double max_failure_fraction = 0.05;
};

struct EnsembleResult
{
    int M = 0;
    int failures = 0;
    std::vector<std::string> failure_messages;
    ProfileCoeffs mean_coeffs;
    UniformGrid grid;
    std::vector<double> std_grid;
    Eigen::MatrixXd covariance;
    std::vector<double> eigenvalues;         // descending
    std::vector<double> paired_eigenvalues;  // per KL frequency
    std::optional<RecoveredStatistics> recovered;
    std::string recovery_error;
    double mean_error = 0.0;             // RMS over the grid of fbar - f~
    double mean_std = 0.0;               // grid mean of s_f
    double mean_sample_deviation = 0.0;  // mean over m of RMS(f_m - f~)
    std::vector<ProfileCoeffs> samples;  // successful reconstructions, by index
    std::vector<int> sample_indices;
};

/*!
 * Monte Carlo driver. Sample m uses seed seeder(master_seed, m); workers pull
 * indices from a shared counter and write into per-index slots, aggregation
 * then runs in index order, so the result does not depend on worker count.
 * Failed samples are dropped and counted; more than max_failure_fraction
 * failures throws NumericalError.
 */
EnsembleResult run_ensemble(EnsembleProblem const& problem, int M,
                            std::uint64_t master_seed, EnsembleOptions options = {});

}  // namespace gratinguq
