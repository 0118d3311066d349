#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "gratinguq/error.hpp"
#include "gratinguq_cli/config.hpp"

namespace gratinguq::cli {

namespace fs = std::filesystem;

//! Exit codes shared by every command
enum ExitCode : int
{
    kExitOk = 0,
    kExitConfig = 2,
    kExitNumerical = 3,
    kExitIo = 4,
};

//! Thrown for bad command-line usage (unknown plot kind, missing flag, ...)
class UsageError : public Error
{
  public:
    using Error::Error;
};

std::string sample_file_name(int m);
std::string measurement_file_name(int k, std::size_t l);

/*!
 * Write `count` surface realisations to out/sample_NNNN.json plus
 * out/manifest.json. Realisation m is the one the ensemble driver draws for
 * sample index m under the same master seed.
 */
std::vector<fs::path> cmd_sample(ExperimentConfig const& cfg, int count,
                                 fs::path const& out);

/*!
 * Forward-solve one realisation for every (k, theta_l) and write
 * out/measurement_k{k}_l{l}.json plus out/efficiencies.json.
 */
std::vector<fs::path> cmd_forward(ExperimentConfig const& cfg, fs::path const& sample,
                                  fs::path const& out, bool noiseless);

//! Continuation inversion of a measurement directory into out/reconstruction.json
fs::path cmd_invert(ExperimentConfig const& cfg, fs::path const& measurements,
                    fs::path const& out);

//! Full Monte Carlo run into out/ensemble.json
fs::path cmd_mccuq(ExperimentConfig const& cfg, int workers, fs::path const& out);

//! Plot-ready CSV: kind is eigenvalues, profile, stages or objective
fs::path cmd_plotdata(ExperimentConfig const& cfg, fs::path const& result,
                      std::string const& kind, fs::path const& out);

std::vector<std::string> plot_kinds();

//! Parse argv, dispatch, and map exceptions to exit codes
int run_cli(int argc, char const* const* argv);

}  // namespace gratinguq::cli
