#include "gratinguq_cli/config.hpp"

#include <set>

#include "gratinguq/error.hpp"
#include "gratinguq/presets.hpp"

namespace gratinguq::cli {
namespace {

void reject_unknown(json const& obj, std::string const& section,
                    std::set<std::string> const& known)
{
    if (!obj.is_object())
        throw ConfigError("config: '" + section + "' must be an object");
    for (auto const& [key, value] : obj.items())
        if (!known.count(key))
            throw ConfigError("config: unknown key '" + section + "." + key + "'");
}

template<class T>
void read(json const& obj, char const* key, T& dst, std::string const& section)
{
    if (!obj.contains(key))
        return;
    try
    {
        dst = obj.at(key).get<T>();
    }
    catch (json::exception const&)
    {
        throw ConfigError("config: '" + section + "." + key + "' has the wrong type");
    }
}

}  // namespace

//---------------------------------------------------------------------------//
bool operator==(ExperimentConfig const& a, ExperimentConfig const& b)
{
    return config_to_json(a) == config_to_json(b);
}

ProfileCoeffs ExperimentConfig::profile() const
{
    if (surface.coeffs)
    {
        if (surface.coeffs->size() % 2 != 1)
            throw ConfigError("config: surface.coeffs must have odd length");
        return ProfileCoeffs(*surface.coeffs, surface.lambda_period);
    }
    if (surface.lambda_period != kTwoPi)
        throw ConfigError("config: presets are defined on period 2 pi; use surface.coeffs "
                          "for other periods");
    return preset_profile(surface.preset);
}

CovarianceSpec ExperimentConfig::covariance() const
{
    return {surface.sigma, surface.l, surface.lambda_period};
}

LandweberConfig ExperimentConfig::landweber() const
{
    LandweberConfig c;
    c.eta0 = inversion.eta0;
    c.T = inversion.T;
    c.N = inversion.N;
    c.quad_points = inversion.quad_points;
    c.k_max = inversion.k_max;
    c.angles = inversion.angles;
    c.gamma = inversion.gamma;
    return c;
}

EnsembleProblem ExperimentConfig::problem() const
{
    EnsembleProblem p;
    p.covariance = covariance();
    p.deterministic = profile();
    p.kl_tol = surface.kl_tol;
    p.inversion = landweber();
    p.forward.N = forward.N;
    p.forward.colloc_factor = forward.colloc_factor;
    p.y0_standoff = data.y0_standoff;
    p.Q = data.Q;
    p.tau = data.tau;
    return p;
}

void ExperimentConfig::validate() const
{
    if (mc.M < 0)
        throw ConfigError("config: mc.M must be non-negative");
    try
    {
        problem().validate();
        build_basis(covariance(), surface.kl_tol);
    }
    catch (std::invalid_argument const& e)
    {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

//---------------------------------------------------------------------------//
json config_to_json(ExperimentConfig const& c)
{
    json surface = {{"sigma", c.surface.sigma},
                    {"l", c.surface.l},
                    {"lambda_period", c.surface.lambda_period},
                    {"kl_tol", c.surface.kl_tol}};
    if (c.surface.coeffs)
        surface["coeffs"] = *c.surface.coeffs;
    else
        surface["preset"] = c.surface.preset;
    return {{"surface", surface},
            {"inversion",
             {{"k_max", c.inversion.k_max},
              {"angles", c.inversion.angles},
              {"N", c.inversion.N},
              {"gamma", c.inversion.gamma},
              {"eta0", c.inversion.eta0},
              {"T", c.inversion.T},
              {"quad_points", c.inversion.quad_points}}},
            {"data",
             {{"y0_standoff", c.data.y0_standoff}, {"Q", c.data.Q}, {"tau", c.data.tau}}},
            {"forward", {{"N", c.forward.N}, {"colloc_factor", c.forward.colloc_factor}}},
            {"mc", {{"M", c.mc.M}, {"master_seed", c.mc.master_seed}}}};
}

ExperimentConfig config_from_json(json const& j)
{
    ExperimentConfig c;
    reject_unknown(j, "config", {"surface", "inversion", "data", "forward", "mc"});

    if (j.contains("surface"))
    {
        json const& s = j["surface"];
        reject_unknown(s, "surface",
                       {"preset", "coeffs", "sigma", "l", "lambda_period", "kl_tol"});
        if (s.contains("preset") && s.contains("coeffs"))
            throw ConfigError("config: give either surface.preset or surface.coeffs, not both");
        read(s, "preset", c.surface.preset, "surface");
        if (s.contains("coeffs"))
        {
            std::vector<double> coeffs;
            read(s, "coeffs", coeffs, "surface");
            c.surface.coeffs = std::move(coeffs);
        }
        read(s, "sigma", c.surface.sigma, "surface");
        read(s, "l", c.surface.l, "surface");
        read(s, "lambda_period", c.surface.lambda_period, "surface");
        read(s, "kl_tol", c.surface.kl_tol, "surface");
    }
    if (j.contains("inversion"))
    {
        json const& s = j["inversion"];
        reject_unknown(s, "inversion",
                       {"k_max", "angles", "N", "gamma", "eta0", "T", "quad_points"});
        read(s, "k_max", c.inversion.k_max, "inversion");
        read(s, "angles", c.inversion.angles, "inversion");
        read(s, "N", c.inversion.N, "inversion");
        read(s, "gamma", c.inversion.gamma, "inversion");
        read(s, "eta0", c.inversion.eta0, "inversion");
        read(s, "T", c.inversion.T, "inversion");
        read(s, "quad_points", c.inversion.quad_points, "inversion");
    }
    if (j.contains("data"))
    {
        json const& s = j["data"];
        reject_unknown(s, "data", {"y0_standoff", "Q", "tau"});
        read(s, "y0_standoff", c.data.y0_standoff, "data");
        read(s, "Q", c.data.Q, "data");
        read(s, "tau", c.data.tau, "data");
    }
    if (j.contains("forward"))
    {
        json const& s = j["forward"];
        reject_unknown(s, "forward", {"N", "colloc_factor"});
        read(s, "N", c.forward.N, "forward");
        read(s, "colloc_factor", c.forward.colloc_factor, "forward");
    }
    if (j.contains("mc"))
    {
        json const& s = j["mc"];
        reject_unknown(s, "mc", {"M", "master_seed"});
        read(s, "M", c.mc.M, "mc");
        read(s, "master_seed", c.mc.master_seed, "mc");
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(std::filesystem::path const& path)
{
    return config_from_json(read_json(path));
}

}  // namespace gratinguq::cli
