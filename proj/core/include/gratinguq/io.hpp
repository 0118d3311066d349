#pragma once

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>

#include "gratinguq/forward.hpp"
#include "gratinguq/inverse.hpp"
#include "gratinguq/surface.hpp"
#include "gratinguq/uq.hpp"

namespace gratinguq {

using nlohmann::json;

//---------------------------------------------------------------------------//
// Schemas. All parse functions throw IoError on missing or mistyped fields.
//---------------------------------------------------------------------------//

//! {coeffs: [...], lambda_period}
json profile_to_json(ProfileCoeffs const& c);
ProfileCoeffs profile_from_json(json const& j);

//! {kappa, theta, y0, lambda_period, tau, grid: [x_j], re: [...], im: [...]}
json measurement_to_json(Measurement const& m);
Measurement measurement_from_json(json const& j);

/*!
 * Surface realisation: the KL draw (exact reload) plus its values on a
 * uniform grid.
 *
 * {sample_id, seed, lambda_period, deterministic, kl_eigenvalues, xi0, xi_s,
 *  xi_c, coeffs, grid: {x: [...], f: [...]}}
 */
json sample_to_json(SurfaceSample const& s, int sample_id, std::uint64_t seed,
                    std::size_t grid_points = 512);
SurfaceSample sample_from_json(json const& j);

//! {sample_id, k_max, coeffs, per_stage_objective, deviation_rms, stage_coeffs}
json reconstruction_to_json(Reconstruction const& r, int sample_id,
                            std::optional<double> deviation);

struct StoredReconstruction
{
    int sample_id = 0;
    int k_max = 0;
    ProfileCoeffs coeffs;
    std::vector<ProfileCoeffs> stage_coeffs;
    std::vector<std::vector<double>> per_stage_objective;
    std::optional<double> deviation_rms;
};
StoredReconstruction reconstruction_from_json(json const& j);

/*!
 * {M, failures, lambda_period, mean_coeffs, std_grid, covariance (row-major),
 *  dimension, eigenvalues, paired_eigenvalues, sigma_rec, l_rec,
 *  recovery_error, mean_error, mean_std, mean_sample_deviation}
 * sigma_rec and l_rec are null when recovery failed.
 */
json ensemble_to_json(EnsembleResult const& r);
EnsembleResult ensemble_from_json(json const& j);

//---------------------------------------------------------------------------//
// FILES
//---------------------------------------------------------------------------//

json read_json(std::filesystem::path const& path);
//! Pretty-printed, newline terminated; creates parent directories
void write_json(std::filesystem::path const& path, json const& j);
void write_text(std::filesystem::path const& path, std::string const& text);

}  // namespace gratinguq
