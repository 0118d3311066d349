#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gratinguq/io.hpp"
#include "gratinguq/uq.hpp"

namespace gratinguq::cli {

/*!
 * Experiment description read from a JSON file. Every field is optional in
 * the file; absent fields keep the defaults below, unknown keys are rejected.
 *
 * \code{.json}
 * {
 *   "surface":   {"preset": "example1", "sigma": 0.0667, "l": 1.0,
 *                 "lambda_period": 6.283185307179586, "kl_tol": 1e-4},
 *   "inversion": {"k_max": 2, "angles": [...], "N": 8, "gamma": 1e-6,
 *                 "eta0": 1e-3, "T": 1000, "quad_points": 256},
 *   "data":      {"y0_standoff": 0.3, "Q": 256, "tau": 1e-3},
 *   "forward":   {"N": 32, "colloc_factor": 4},
 *   "mc":        {"M": 100, "master_seed": 1}
 * }
 * \endcode
 *
 * "surface.coeffs" (odd-length Fourier vector) replaces "preset".
 */
struct ExperimentConfig
{
    struct Surface
    {
        std::string preset = "example1";
        std::optional<std::vector<double>> coeffs;
        double sigma = 1.0 / 15.0;
        double l = 1.0;
        double lambda_period = kTwoPi;
        double kl_tol = 1e-4;
    } surface;

    struct Inversion
    {
        int k_max = 2;
        std::vector<double> angles = default_angles();
        int N = 8;
        double gamma = 1e-6;
        double eta0 = 1e-3;
        int T = 1000;
        int quad_points = 256;
    } inversion;

    struct Data
    {
        double y0_standoff = 0.3;
        int Q = 256;
        double tau = 1e-3;
    } data;

    struct Forward
    {
        int N = 32;
        int colloc_factor = 4;
    } forward;

    struct MonteCarlo
    {
        int M = 100;
        std::uint64_t master_seed = 1;
    } mc;

    ProfileCoeffs profile() const;
    CovarianceSpec covariance() const;
    LandweberConfig landweber() const;
    EnsembleProblem problem() const;

    //! Throws ConfigError describing the first invalid field
    void validate() const;

    friend bool operator==(ExperimentConfig const&, ExperimentConfig const&);
};

json config_to_json(ExperimentConfig const& c);
//! Throws ConfigError on unknown keys, wrong types or invalid values
ExperimentConfig config_from_json(json const& j);
ExperimentConfig load_config(std::filesystem::path const& path);

}  // namespace gratinguq::cli
