#include "gratinguq/uq.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

#include "gratinguq/error.hpp"
#include "gratinguq/rng.hpp"
#include "gratinguq/symmetric_eigen.hpp"

namespace gratinguq {
namespace {

int max_order(std::span<ProfileCoeffs const> samples)
{
    int order = 0;
    for (auto const& s : samples)
        order = std::max(order, s.order());
    return order;
}

}  // namespace

//---------------------------------------------------------------------------//
ProfileCoeffs mean_profile(std::span<ProfileCoeffs const> samples)
{
    if (samples.empty())
        throw std::invalid_argument("mean_profile: no samples");
    int const order = max_order(samples);
    double const period = samples.front().period();
    std::vector<double> acc(2 * static_cast<std::size_t>(order) + 1, 0.0);
    for (auto const& s : samples)
    {
        if (std::abs(s.period() - period) > 1e-12 * period)
            throw std::invalid_argument("mean_profile: samples with different periods");
        for (std::size_t i = 0; i < s.size(); ++i)
            acc[i] += s[i];
    }
    for (auto& a : acc)
        a /= static_cast<double>(samples.size());
    return ProfileCoeffs(std::move(acc), period);
}

std::vector<double> std_profile(std::span<ProfileCoeffs const> samples,
                                ProfileCoeffs const& mean, UniformGrid const& grid)
{
    if (samples.size() < 2)
        throw std::invalid_argument("std_profile: need at least two samples");
    GridFunction const fbar = evaluate_profile(mean, grid);
    std::vector<double> var(grid.size, 0.0);
    for (auto const& s : samples)
    {
        GridFunction const f = evaluate_profile(s, grid);
        for (std::size_t j = 0; j < grid.size; ++j)
        {
            double const d = f.values[j] - fbar.values[j];
            var[j] += d * d;
        }
    }
    for (auto& v : var)
        v = std::sqrt(v / static_cast<double>(samples.size()));
    return var;
}

Eigen::MatrixXd empirical_covariance(std::span<ProfileCoeffs const> samples,
                                     ProfileCoeffs const& mean, KLBasis const& basis,
                                     UniformGrid const& grid)
{
    if (samples.empty())
        throw std::invalid_argument("empirical_covariance: no samples");
    GridFunction const fbar = evaluate_profile(mean, grid);
    auto const dim = static_cast<Eigen::Index>(basis.dimension());
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(dim, dim);
    for (auto const& s : samples)
    {
        auto const v = project_onto_basis(evaluate_profile(s, grid), fbar, basis);
        Eigen::Map<Eigen::VectorXd const> vm(v.data(), dim);
        C.noalias() += vm * vm.transpose();
    }
    C /= static_cast<double>(samples.size());
    Eigen::MatrixXd const Ct = C.transpose();
    return 0.5 * (C + Ct);
}

std::vector<double> paired_spectrum(std::span<double const> descending, double rel_tol)
{
    std::vector<double> out;
    if (descending.empty())
        return out;
    out.push_back(descending[0]);
    std::size_t i = 1;
    while (i < descending.size())
    {
        double const a = descending[i];
        if (i + 1 < descending.size())
        {
            double const b = descending[i + 1];
            double const scale = std::max(std::abs(a), std::abs(b));
            if (scale == 0.0 || std::abs(a - b) < rel_tol * scale)
            {
                out.push_back(0.5 * (a + b));
                i += 2;
                continue;
            }
        }
        out.push_back(a);
        ++i;
    }
    return out;
}

RecoveredStatistics recover_statistics_from(int i, double lambda_i, int j,
                                            double lambda_j, double period)
{
    if (i < 0 || j <= i)
        throw std::invalid_argument("recover_statistics: need frequencies 0 <= i < j");
    if (!(period > 0.0))
        throw std::invalid_argument("recover_statistics: period must be positive");
    if (!(lambda_j > 0.0) || !(lambda_i > lambda_j))
        throw OrderViolation("recover_statistics: need lambda_i > lambda_j > 0, got "
                             + std::to_string(lambda_i) + ", "
                             + std::to_string(lambda_j));
    double const wi = kTwoPi * i / period;
    double const wj = kTwoPi * j / period;
    RecoveredStatistics r;
    r.l = std::sqrt(4.0 * std::log(lambda_i / lambda_j) / (wj * wj - wi * wi));
    r.sigma = std::sqrt(lambda_i * std::exp(wi * wi * r.l * r.l / 4.0)
                        / (std::sqrt(std::numbers::pi) * r.l));
    return r;
}

RecoveredStatistics recover_statistics(double lambda0, double lambda1, double period)
{
    return recover_statistics_from(0, lambda0, 1, lambda1, period);
}

//---------------------------------------------------------------------------//
void EnsembleProblem::validate() const
{
    covariance.validate();
    inversion.validate();
    if (std::abs(deterministic.period() - covariance.period) > 1e-12 * covariance.period)
        throw std::invalid_argument("ensemble: profile period differs from covariance period");
    if (!(kl_tol > 0.0 && kl_tol < 1.0))
        throw std::invalid_argument("ensemble: kl_tol must lie in (0, 1)");
    if (forward.N < inversion.N)
        throw std::invalid_argument("ensemble: forward N must be >= inversion N");
    if (forward.colloc_factor < 1)
        throw std::invalid_argument("ensemble: colloc_factor must be >= 1");
    if (!(y0_standoff > 0.0))
        throw std::invalid_argument("ensemble: y0 standoff must be positive");
    if (!is_power_of_two(Q) || Q < 4 * inversion.N + 4)
        throw std::invalid_argument("ensemble: Q must be a power of two >= 4N+4");
    if (!(tau >= 0.0))
        throw std::invalid_argument("ensemble: tau must be non-negative");
    if (stats_points < 16)
        throw std::invalid_argument("ensemble: stats grid too small");
}

double measurement_height(double surface_max, double standoff)
{
    // Tolerance keeps 1.9 + 0.3 at 2.2 rather than 2.3
    return std::ceil((surface_max + standoff) * 10.0 - 1e-9) / 10.0;
}

SampleData synthesize_sample_data(EnsembleProblem const& problem,
                                  SurfaceSample const& sample, std::uint64_t seed)
{
    LandweberConfig const& cfg = problem.inversion;
    SampleData out{measurement_height(sample.max_height(), problem.y0_standoff),
                   MeasurementSet(cfg.k_max, cfg.angles),
                   {}};
    out.efficiencies.resize(cfg.k_max);
    for (int k = 1; k <= cfg.k_max; ++k)
    {
        for (std::size_t l = 0; l < cfg.angles.size(); ++l)
        {
            auto const pw = make_plane_wave(k, cfg.angles[l]);
            RayleighCoeffs const rc = solve_forward(sample, pw, problem.forward);
            double e = 0.0;
            for (double en : reflection_efficiencies(rc))
                e += en;
            out.efficiencies[k - 1].push_back(e);
            auto noise = make_stream(derive_seed(
                seed, {static_cast<std::uint64_t>(StreamPurpose::noise),
                       static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(l)}));
            out.measurements.insert(
                k, l, synthesize_measurement(rc, out.y0, problem.Q, problem.tau, noise));
        }
    }
    return out;
}

Reconstructor pipeline_reconstructor(EnsembleProblem const& problem)
{
    return [problem](SurfaceSample const& sample, SampleContext const& ctx) {
        SampleData const data = synthesize_sample_data(problem, sample, ctx.seed);
        return continuation_reconstruct(data.measurements, problem.inversion, data.y0)
            .coeffs;
    };
}

Reconstructor ground_truth_reconstructor()
{
    return [](SurfaceSample const& sample, SampleContext const&) { return sample.coeffs(); };
}

//---------------------------------------------------------------------------//
EnsembleResult run_ensemble(EnsembleProblem const& problem, int M,
                            std::uint64_t master_seed, EnsembleOptions options)
{
    if (M < 2)
        throw std::invalid_argument("run_ensemble: need M >= 2");
    problem.validate();
    KLBasis const basis = build_basis(problem.covariance, problem.kl_tol);
    Reconstructor const reconstruct = options.reconstructor
                                          ? options.reconstructor
                                          : pipeline_reconstructor(problem);
    auto const seeder = options.seeder ? options.seeder
                                       : [](std::uint64_t s, int m) {
                                             return sample_seed(s, static_cast<std::uint64_t>(m));
                                         };

    struct Slot
    {
        std::optional<ProfileCoeffs> coeffs;
        std::string error;
    };
    std::vector<Slot> slots(M);
    std::atomic<int> next{0};
    std::exception_ptr fatal;
    std::mutex fatal_mutex;

    auto work = [&] {
        for (int m = next++; m < M; m = next++)
        {
            try
            {
                SampleContext const ctx{m, seeder(master_seed, m)};
                auto rng = make_stream(derive_seed(
                    ctx.seed, {static_cast<std::uint64_t>(StreamPurpose::surface)}));
                SurfaceSample const sample
                    = sample_surface(problem.deterministic, basis, rng);
                slots[m].coeffs = reconstruct(sample, ctx);
            }
            catch (NumericalError const& e)
            {
                slots[m].error = "sample " + std::to_string(m) + ": " + e.what();
            }
            catch (...)
            {
                std::lock_guard lock(fatal_mutex);
                if (!fatal)
                    fatal = std::current_exception();
                next = M;
            }
        }
    };

    int const workers = std::clamp(options.workers, 1, M);
    if (workers == 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (fatal)
        std::rethrow_exception(fatal);

    EnsembleResult res;
    res.M = M;
    for (int m = 0; m < M; ++m)
    {
        if (slots[m].coeffs)
        {
            res.samples.push_back(std::move(*slots[m].coeffs));
            res.sample_indices.push_back(m);
        }
        else
        {
            ++res.failures;
            res.failure_messages.push_back(slots[m].error);
        }
    }
    if (res.failures > options.max_failure_fraction * M || res.samples.size() < 2)
    {
        std::string msg = "run_ensemble: " + std::to_string(res.failures) + " of "
                          + std::to_string(M) + " samples failed";
        if (!res.failure_messages.empty())
            msg += " (first: " + res.failure_messages.front() + ")";
        throw NumericalError(msg);
    }

    // Common order so every sample lives in the same coefficient space
    int const order = max_order(res.samples);
    for (auto& s : res.samples)
        s = s.extended(order);

    res.grid = UniformGrid{problem.stats_points, problem.covariance.period};
    res.mean_coeffs = mean_profile(res.samples);
    res.std_grid = std_profile(res.samples, res.mean_coeffs, res.grid);
    res.covariance = empirical_covariance(res.samples, res.mean_coeffs, basis, res.grid);
    res.eigenvalues = symmetric_eigenvalues(res.covariance);
    res.paired_eigenvalues = paired_spectrum(res.eigenvalues);

    ProfileCoeffs const truth = problem.deterministic.extended(
        std::max(order, problem.deterministic.order()));
    res.mean_error = deviation_rms(res.mean_coeffs.extended(truth.order()), truth,
                                   problem.stats_points);
    double s = 0.0;
    for (double v : res.std_grid)
        s += v;
    res.mean_std = s / static_cast<double>(res.std_grid.size());
    double dev = 0.0;
    for (auto const& f : res.samples)
        dev += deviation_rms(f.extended(truth.order()), truth, problem.stats_points);
    res.mean_sample_deviation = dev / static_cast<double>(res.samples.size());

    // lambda_1: the first paired level strictly below the singlet lambda_0
    auto const& pe = res.paired_eigenvalues;
    auto const below = std::find_if(pe.begin() + (pe.empty() ? 0 : 1), pe.end(),
                                    [&](double v) { return v < pe.front(); });
    if (below == pe.end())
    {
        res.recovery_error = "no eigenvalue level below the leading one";
    }
    else
    {
        try
        {
            res.recovered = recover_statistics(pe.front(), *below,
                                               problem.covariance.period);
        }
        catch (OrderViolation const& e)
        {
            res.recovery_error = e.what();
        }
    }
    return res;
}

}  // namespace gratinguq
