#include "gratinguq/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gratinguq/error.hpp"

namespace gratinguq {
namespace {

template<class F>
auto parse(char const* what, F&& f)
{
    try
    {
        return f();
    }
    catch (json::exception const& e)
    {
        throw IoError(std::string("malformed ") + what + ": " + e.what());
    }
    catch (std::invalid_argument const& e)
    {
        throw IoError(std::string("invalid ") + what + ": " + e.what());
    }
}

json optional_number(std::optional<double> v)
{
    return v ? json(*v) : json(nullptr);
}

}  // namespace

//---------------------------------------------------------------------------//
json profile_to_json(ProfileCoeffs const& c)
{
    return {{"coeffs", std::vector<double>(c.coeffs().begin(), c.coeffs().end())},
            {"lambda_period", c.period()}};
}

ProfileCoeffs profile_from_json(json const& j)
{
    return parse("profile", [&] {
        return ProfileCoeffs(j.at("coeffs").get<std::vector<double>>(),
                             j.value("lambda_period", kTwoPi));
    });
}

json measurement_to_json(Measurement const& m)
{
    std::vector<double> re, im;
    re.reserve(m.values.size());
    im.reserve(m.values.size());
    for (auto const& v : m.values)
    {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return {{"kappa", m.kappa}, {"theta", m.theta},        {"y0", m.y0},
            {"lambda_period", m.period}, {"tau", m.tau}, {"grid", m.grid().points()},
            {"re", re},         {"im", im}};
}

Measurement measurement_from_json(json const& j)
{
    return parse("measurement", [&] {
        Measurement m;
        m.kappa = j.at("kappa").get<double>();
        m.theta = j.at("theta").get<double>();
        m.y0 = j.at("y0").get<double>();
        m.period = j.at("lambda_period").get<double>();
        m.tau = j.at("tau").get<double>();
        auto const grid = j.at("grid").get<std::vector<double>>();
        std::size_t const q = grid.size();
        auto const re = j.at("re").get<std::vector<double>>();
        auto const im = j.at("im").get<std::vector<double>>();
        if (re.size() != q || im.size() != q)
            throw std::invalid_argument("re/im length differs from grid size");
        UniformGrid const expected{q, m.period};
        for (std::size_t i = 0; i < q; ++i)
            if (std::abs(grid[i] - expected.x(i)) > 1e-12 * m.period)
                throw std::invalid_argument("grid is not uniform on [0, lambda_period)");
        m.values.resize(q);
        for (std::size_t i = 0; i < q; ++i)
            m.values[i] = {re[i], im[i]};
        return m;
    });
}

//---------------------------------------------------------------------------//
json sample_to_json(SurfaceSample const& s, int sample_id, std::uint64_t seed,
                    std::size_t grid_points)
{
    UniformGrid const grid{grid_points, s.basis.period};
    std::vector<double> x = grid.points(), f(grid_points);
    for (std::size_t i = 0; i < grid_points; ++i)
        f[i] = s.evaluate(x[i]);
    return {{"sample_id", sample_id},
            {"seed", seed},
            {"lambda_period", s.basis.period},
            {"deterministic", profile_to_json(s.deterministic)},
            {"kl_eigenvalues", s.basis.eigenvalues},
            {"xi0", s.xi0},
            {"xi_s", s.xi_s},
            {"xi_c", s.xi_c},
            {"coeffs", profile_to_json(s.coeffs())},
            {"grid", {{"x", x}, {"f", f}}}};
}

SurfaceSample sample_from_json(json const& j)
{
    return parse("surface sample", [&] {
        SurfaceSample s;
        s.deterministic = profile_from_json(j.at("deterministic"));
        s.basis.period = j.at("lambda_period").get<double>();
        s.basis.eigenvalues = j.at("kl_eigenvalues").get<std::vector<double>>();
        if (s.basis.eigenvalues.empty())
            throw std::invalid_argument("empty KL spectrum");
        s.basis.order = static_cast<int>(s.basis.eigenvalues.size()) - 1;
        s.xi0 = j.at("xi0").get<double>();
        s.xi_s = j.at("xi_s").get<std::vector<double>>();
        s.xi_c = j.at("xi_c").get<std::vector<double>>();
        if (s.xi_s.size() != static_cast<std::size_t>(s.basis.order)
            || s.xi_c.size() != s.xi_s.size())
            throw std::invalid_argument("KL coordinate count does not match spectrum");
        return s;
    });
}

//---------------------------------------------------------------------------//
json reconstruction_to_json(Reconstruction const& r, int sample_id,
                            std::optional<double> deviation)
{
    json stages = json::array();
    for (auto const& c : r.stage_coeffs)
        stages.push_back(std::vector<double>(c.coeffs().begin(), c.coeffs().end()));
    return {{"sample_id", sample_id},
            {"k_max", r.coeffs.order()},
            {"lambda_period", r.coeffs.period()},
            {"coeffs", std::vector<double>(r.coeffs.coeffs().begin(), r.coeffs.coeffs().end())},
            {"per_stage_objective", r.stage_history},
            {"deviation_rms", optional_number(deviation)},
            {"stage_coeffs", stages}};
}

StoredReconstruction reconstruction_from_json(json const& j)
{
    return parse("reconstruction", [&] {
        StoredReconstruction r;
        double const period = j.value("lambda_period", kTwoPi);
        r.sample_id = j.at("sample_id").get<int>();
        r.k_max = j.at("k_max").get<int>();
        r.coeffs = ProfileCoeffs(j.at("coeffs").get<std::vector<double>>(), period);
        for (auto const& c : j.value("stage_coeffs", json::array()))
            r.stage_coeffs.emplace_back(c.get<std::vector<double>>(), period);
        r.per_stage_objective
            = j.at("per_stage_objective").get<std::vector<std::vector<double>>>();
        if (!j.at("deviation_rms").is_null())
            r.deviation_rms = j.at("deviation_rms").get<double>();
        return r;
    });
}

//---------------------------------------------------------------------------//
json ensemble_to_json(EnsembleResult const& r)
{
    auto const n = r.covariance.rows();
    std::vector<double> cov;
    cov.reserve(static_cast<std::size_t>(n * n));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            cov.push_back(r.covariance(i, k));
    return {{"M", r.M},
            {"failures", r.failures},
            {"failure_messages", r.failure_messages},
            {"lambda_period", r.grid.period},
            {"mean_coeffs", std::vector<double>(r.mean_coeffs.coeffs().begin(),
                                                r.mean_coeffs.coeffs().end())},
            {"std_grid", r.std_grid},
            {"dimension", n},
            {"covariance", cov},
            {"eigenvalues", r.eigenvalues},
            {"paired_eigenvalues", r.paired_eigenvalues},
            {"sigma_rec", r.recovered ? json(r.recovered->sigma) : json(nullptr)},
            {"l_rec", r.recovered ? json(r.recovered->l) : json(nullptr)},
            {"recovery_error", r.recovery_error},
            {"mean_error", r.mean_error},
            {"mean_std", r.mean_std},
            {"mean_sample_deviation", r.mean_sample_deviation}};
}

EnsembleResult ensemble_from_json(json const& j)
{
    return parse("ensemble result", [&] {
        EnsembleResult r;
        r.M = j.at("M").get<int>();
        r.failures = j.at("failures").get<int>();
        r.failure_messages = j.value("failure_messages", std::vector<std::string>{});
        double const period = j.value("lambda_period", kTwoPi);
        r.mean_coeffs = ProfileCoeffs(j.at("mean_coeffs").get<std::vector<double>>(), period);
        r.std_grid = j.at("std_grid").get<std::vector<double>>();
        r.grid = UniformGrid{r.std_grid.size(), period};
        auto const n = j.at("dimension").get<Eigen::Index>();
        auto const cov = j.at("covariance").get<std::vector<double>>();
        if (static_cast<Eigen::Index>(cov.size()) != n * n)
            throw std::invalid_argument("covariance size does not match dimension");
        r.covariance.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index k = 0; k < n; ++k)
                r.covariance(i, k) = cov[static_cast<std::size_t>(i * n + k)];
        r.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
        r.paired_eigenvalues = j.value("paired_eigenvalues", std::vector<double>{});
        if (!j.at("sigma_rec").is_null() && !j.at("l_rec").is_null())
            r.recovered = RecoveredStatistics{j.at("l_rec").get<double>(),
                                              j.at("sigma_rec").get<double>()};
        r.recovery_error = j.value("recovery_error", std::string{});
        r.mean_error = j.value("mean_error", 0.0);
        r.mean_std = j.value("mean_std", 0.0);
        r.mean_sample_deviation = j.value("mean_sample_deviation", 0.0);
        return r;
    });
}

//---------------------------------------------------------------------------//
json read_json(std::filesystem::path const& path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    try
    {
        return json::parse(in);
    }
    catch (json::parse_error const& e)
    {
        throw IoError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

void write_text(std::filesystem::path const& path, std::string const& text)
{
    std::error_code ec;
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path(), ec);
    if (ec)
        throw IoError("cannot create directory for '" + path.string() + "': " + ec.message());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out)
        throw IoError("write to '" + path.string() + "' failed");
}

void write_json(std::filesystem::path const& path, json const& j)
{
    write_text(path, j.dump(2) + "\n");
}

}  // namespace gratinguq
