#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "gratinguq_cli/commands.hpp"

namespace gratinguq::cli {
namespace {

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
};

void add_common(CLI::App& cmd, Common& c, bool with_seed = true)
{
    cmd.add_option("--config", c.config, "Experiment configuration (JSON)");
    if (with_seed)
        cmd.add_option("--seed", c.seed, "Master seed, overrides mc.master_seed");
    cmd.add_option("--out", c.out, "Output directory")->capture_default_str();
}

ExperimentConfig resolve(Common const& c, json const* fallback = nullptr)
{
    ExperimentConfig cfg;
    if (!c.config.empty())
        cfg = load_config(c.config);
    else if (fallback && fallback->contains("config"))
        cfg = config_from_json(fallback->at("config"));
    if (c.seed)
        cfg.mc.master_seed = *c.seed;
    return cfg;
}

}  // namespace

int run_cli(int argc, char const* const* argv)
{
    CLI::App app{"Random periodic grating scattering and Monte Carlo uncertainty "
                 "quantification of the surface statistics"};
    app.name("gratinguq");
    app.require_subcommand(1);

    Common common;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    int count = 1;
    bool noiseless = false;
    std::string sample, measurements, result, kind;

    auto* sample_cmd = app.add_subcommand("sample", "Draw surface realisations");
    add_common(*sample_cmd, common);
    sample_cmd->add_option("--count", count, "Number of realisations")->capture_default_str();

    auto* forward_cmd
        = app.add_subcommand("forward", "Synthesize measurements for one realisation");
    add_common(*forward_cmd, common, false);
    forward_cmd->add_option("--sample", sample, "Surface sample file")->required();
    forward_cmd->add_flag("--noiseless", noiseless, "Set tau = 0");

    auto* invert_cmd = app.add_subcommand("invert", "Reconstruct one profile");
    add_common(*invert_cmd, common, false);
    invert_cmd->add_option("--measurements", measurements, "Measurement directory")
        ->required();

    auto* mccuq_cmd = app.add_subcommand("mccuq", "Monte Carlo ensemble and statistics");
    add_common(*mccuq_cmd, common);
    mccuq_cmd->add_option("--workers", workers, "Worker threads")->capture_default_str();

    auto* plot_cmd = app.add_subcommand("plotdata", "Export plot-ready CSV");
    add_common(*plot_cmd, common, false);
    plot_cmd->add_option("--result", result, "Ensemble or reconstruction result file");
    plot_cmd->add_option("--kind", kind, "eigenvalues | profile | stages | objective")
        ->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try
    {
        fs::path const out = common.out;
        if (*sample_cmd)
        {
            auto const files = cmd_sample(resolve(common), count, out);
            std::cout << "wrote " << files.size() << " samples to " << out.string() << '\n';
        }
        else if (*forward_cmd)
        {
            auto const files = cmd_forward(resolve(common), sample, out, noiseless);
            std::cout << "wrote " << files.size() << " measurements to " << out.string()
                      << '\n';
        }
        else if (*invert_cmd)
        {
            auto const path = cmd_invert(resolve(common), measurements, out);
            std::cout << "wrote " << path.string() << '\n';
        }
        else if (*mccuq_cmd)
        {
            auto const path = cmd_mccuq(resolve(common), workers, out);
            std::cout << "wrote " << path.string() << '\n';
        }
        else if (*plot_cmd)
        {
            json fallback;
            if (!result.empty() && common.config.empty())
                fallback = read_json(result);
            auto const path = cmd_plotdata(resolve(common, &fallback), result, kind, out);
            std::cout << "wrote " << path.string() << '\n';
        }
        return kExitOk;
    }
    catch (UsageError const& e)
    {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (std::invalid_argument const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    catch (NumericalError const& e)
    {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    }
    catch (IoError const& e)
    {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
    catch (fs::filesystem_error const& e)
    {
        std::cerr << "i/o error: " << e.what() << '\n';
        return kExitIo;
    }
}

}  // namespace gratinguq::cli
