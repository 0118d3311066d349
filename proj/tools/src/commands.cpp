#include "gratinguq_cli/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <locale>
#include <sstream>

#include "gratinguq/presets.hpp"

namespace gratinguq::cli {
namespace {

constexpr std::size_t kPlotPoints = 512;

std::string num(double v)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

/// Minimal CSV table: header row, ',' delimiter, 17 significant digits.
class Csv
{
  public:
    explicit Csv(std::vector<std::string> header) : columns_(header.size())
    {
        row(header);
    }

    void add(std::vector<std::optional<double>> const& values)
    {
        std::vector<std::string> cells;
        for (auto const& v : values)
            cells.push_back(v ? num(*v) : std::string{});
        row(cells);
    }

    std::string str() const { return os_.str(); }

  private:
    void row(std::vector<std::string> const& cells)
    {
        if (cells.size() != columns_)
            throw std::logic_error("csv: row width mismatch");
        for (std::size_t i = 0; i < cells.size(); ++i)
            os_ << (i ? "," : "") << cells[i];
        os_ << '\n';
    }

    std::size_t columns_;
    std::ostringstream os_;
};

std::uint64_t surface_seed(std::uint64_t sample)
{
    return derive_seed(sample, {static_cast<std::uint64_t>(StreamPurpose::surface)});
}

}  // namespace

//---------------------------------------------------------------------------//
std::string sample_file_name(int m)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "sample_%04d.json", m);
    return buf;
}

std::string measurement_file_name(int k, std::size_t l)
{
    return "measurement_k" + std::to_string(k) + "_l" + std::to_string(l) + ".json";
}

std::vector<std::string> plot_kinds()
{
    return {"eigenvalues", "profile", "stages", "objective"};
}

//---------------------------------------------------------------------------//
std::vector<fs::path> cmd_sample(ExperimentConfig const& cfg, int count, fs::path const& out)
{
    if (count < 0)
        throw UsageError("sample: --count must be non-negative");
    KLBasis const basis = build_basis(cfg.covariance(), cfg.surface.kl_tol);
    ProfileCoeffs const det = cfg.profile();

    std::vector<fs::path> files;
    json manifest = {{"count", count},
                     {"master_seed", cfg.mc.master_seed},
                     {"config", config_to_json(cfg)},
                     {"files", json::array()}};
    for (int m = 0; m < count; ++m)
    {
        std::uint64_t const seed = sample_seed(cfg.mc.master_seed, m);
        auto rng = make_stream(surface_seed(seed));
        SurfaceSample const s = sample_surface(det, basis, rng);
        fs::path const path = out / sample_file_name(m);
        write_json(path, sample_to_json(s, m, seed));
        manifest["files"].push_back(path.filename().string());
        files.push_back(path);
    }
    write_json(out / "manifest.json", manifest);
    return files;
}

std::vector<fs::path> cmd_forward(ExperimentConfig const& cfg, fs::path const& sample_path,
                                  fs::path const& out, bool noiseless)
{
    json const sj = read_json(sample_path);
    SurfaceSample const sample = sample_from_json(sj);
    std::uint64_t const seed = sj.value("seed", std::uint64_t{0});

    EnsembleProblem problem = cfg.problem();
    if (noiseless)
        problem.tau = 0.0;

    std::optional<SampleData> synthesized;
    try
    {
        synthesized = synthesize_sample_data(problem, sample, seed);
    }
    catch (WoodAnomaly const& e)
    {
        // Name the offending (k, theta_l) pair, not just the numbers
        auto const& angles = problem.inversion.angles;
        auto const l = std::find(angles.begin(), angles.end(), e.theta()) - angles.begin();
        throw NumericalError("forward: measurement (k=" + num(e.kappa()) + ", theta["
                             + std::to_string(l) + "]): " + e.what());
    }

    SampleData const& data = *synthesized;
    std::vector<fs::path> files;
    json eff = {{"y0", data.y0}, {"sample_id", sj.value("sample_id", 0)},
                {"tau", problem.tau}, {"entries", json::array()}};
    auto const& angles = problem.inversion.angles;
    for (int k = 1; k <= problem.inversion.k_max; ++k)
    {
        for (std::size_t l = 0; l < angles.size(); ++l)
        {
            fs::path const path = out / measurement_file_name(k, l);
            write_json(path, measurement_to_json(data.measurements.at(k, l)));
            files.push_back(path);
            double const sum = data.efficiencies[k - 1][l];
            eff["entries"].push_back({{"k", k},
                                      {"l", l},
                                      {"theta", angles[l]},
                                      {"efficiency_sum", sum},
                                      {"energy_defect", sum - 1.0}});
        }
    }
    write_json(out / "efficiencies.json", eff);
    return files;
}

fs::path cmd_invert(ExperimentConfig const& cfg, fs::path const& dir, fs::path const& out)
{
    LandweberConfig const lw = cfg.landweber();
    MeasurementSet set(lw.k_max, lw.angles);
    for (int k = 1; k <= lw.k_max; ++k)
    {
        for (std::size_t l = 0; l < lw.angles.size(); ++l)
        {
            fs::path const path = dir / measurement_file_name(k, l);
            if (!fs::exists(path))
                throw IoError("invert: missing measurement for k=" + std::to_string(k)
                              + ", theta[" + std::to_string(l) + "]=" + num(lw.angles[l])
                              + " (expected " + path.string() + ")");
            set.insert(k, l, measurement_from_json(read_json(path)));
        }
    }

    double const y0 = set.at(1, 0).y0;
    Reconstruction const rec = continuation_reconstruct(set, lw, y0);
    ProfileCoeffs const truth = cfg.profile();
    int const order = std::max(truth.order(), rec.coeffs.order());
    double const dev = deviation_rms(rec.coeffs.extended(order), truth.extended(order));

    json j = reconstruction_to_json(rec, 0, dev);
    j["y0"] = y0;
    j["config"] = config_to_json(cfg);
    fs::path const path = out / "reconstruction.json";
    write_json(path, j);
    return path;
}

fs::path cmd_mccuq(ExperimentConfig const& cfg, int workers, fs::path const& out)
{
    EnsembleOptions opt;
    opt.workers = std::max(1, workers);
    EnsembleResult const res = run_ensemble(cfg.problem(), cfg.mc.M, cfg.mc.master_seed, opt);
    json j = ensemble_to_json(res);
    j["master_seed"] = cfg.mc.master_seed;
    j["config"] = config_to_json(cfg);
    fs::path const path = out / "ensemble.json";
    write_json(path, j);
    return path;
}

//---------------------------------------------------------------------------//
fs::path cmd_plotdata(ExperimentConfig const& cfg, fs::path const& result,
                      std::string const& kind, fs::path const& out)
{
    auto const kinds = plot_kinds();
    if (std::find(kinds.begin(), kinds.end(), kind) == kinds.end())
        throw UsageError("plotdata: unknown kind '" + kind
                         + "' (expected eigenvalues, profile, stages or objective)");
    if (kind != "eigenvalues" && result.empty())
        throw UsageError("plotdata: --result is required for kind '" + kind + "'");

    json const rj = result.empty() ? json::object() : read_json(result);
    bool const is_ensemble = rj.contains("mean_coeffs");
    bool const is_reconstruction = rj.contains("per_stage_objective");
    ProfileCoeffs const truth = cfg.profile();
    UniformGrid const grid{kPlotPoints, truth.period()};

    std::string text;
    if (kind == "eigenvalues")
    {
        if (!result.empty() && !is_ensemble)
            throw UsageError("plotdata: eigenvalues need an ensemble result");
        KLBasis const basis = build_basis(cfg.covariance(), cfg.surface.kl_tol);
        std::vector<double> est;
        if (is_ensemble)
            est = ensemble_from_json(rj).paired_eigenvalues;
        std::size_t const rows
            = std::max(basis.eigenvalues.size(), est.size());
        Csv csv({"j", "closed_form", "estimated"});
        for (std::size_t j = 0; j < rows; ++j)
            csv.add({static_cast<double>(j),
                     kl_eigenvalue_closed_form(static_cast<int>(j), cfg.covariance()),
                     j < est.size() ? std::optional<double>(est[j]) : std::nullopt});
        text = csv.str();
    }
    else if (kind == "profile")
    {
        if (is_ensemble)
        {
            EnsembleResult const r = ensemble_from_json(rj);
            if (r.std_grid.size() != kPlotPoints)
                throw IoError("plotdata: ensemble std grid has "
                              + std::to_string(r.std_grid.size()) + " points, expected "
                              + std::to_string(kPlotPoints));
            Csv csv({"x", "truth", "mean", "std"});
            for (std::size_t j = 0; j < kPlotPoints; ++j)
            {
                double const x = grid.x(j);
                csv.add({x, evaluate_profile(truth, x), evaluate_profile(r.mean_coeffs, x),
                         r.std_grid[j]});
            }
            text = csv.str();
        }
        else if (is_reconstruction)
        {
            StoredReconstruction const r = reconstruction_from_json(rj);
            Csv csv({"x", "truth", "reconstruction"});
            for (std::size_t j = 0; j < kPlotPoints; ++j)
            {
                double const x = grid.x(j);
                csv.add({x, evaluate_profile(truth, x), evaluate_profile(r.coeffs, x)});
            }
            text = csv.str();
        }
        else
        {
            throw UsageError("plotdata: profile needs an ensemble or reconstruction result");
        }
    }
    else
    {
        if (!is_reconstruction)
            throw UsageError("plotdata: '" + kind + "' needs a reconstruction result");
        StoredReconstruction const r = reconstruction_from_json(rj);
        if (kind == "stages")
        {
            std::vector<std::string> header{"x", "truth"};
            for (std::size_t s = 0; s < r.stage_coeffs.size(); ++s)
                header.push_back("stage_" + std::to_string(s + 1));
            Csv csv(header);
            for (std::size_t j = 0; j < kPlotPoints; ++j)
            {
                double const x = grid.x(j);
                std::vector<std::optional<double>> row{x, evaluate_profile(truth, x)};
                for (auto const& c : r.stage_coeffs)
                    row.emplace_back(evaluate_profile(c, x));
                csv.add(row);
            }
            text = csv.str();
        }
        else
        {
            std::vector<std::string> header{"iteration"};
            std::size_t rows = 0;
            for (std::size_t s = 0; s < r.per_stage_objective.size(); ++s)
            {
                header.push_back("stage_" + std::to_string(s + 1));
                rows = std::max(rows, r.per_stage_objective[s].size());
            }
            Csv csv(header);
            for (std::size_t t = 0; t < rows; ++t)
            {
                std::vector<std::optional<double>> row{static_cast<double>(t)};
                for (auto const& h : r.per_stage_objective)
                    row.push_back(t < h.size() ? std::optional<double>(h[t]) : std::nullopt);
                csv.add(row);
            }
            text = csv.str();
        }
    }

    fs::path const path = out / (kind + ".csv");
    write_text(path, text);
    return path;
}

}  // namespace gratinguq::cli
