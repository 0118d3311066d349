#include "gratinguq/inverse.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gratinguq/error.hpp"

namespace gratinguq {
namespace {

bool close(double a, double b, double tol = 1e-12)
{
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

}  // namespace

//---------------------------------------------------------------------------//
void LandweberConfig::validate() const
{
    if (!(eta0 > 0.0))
        throw std::invalid_argument("landweber: eta0 must be positive");
    if (T < 1)
        throw std::invalid_argument("landweber: T must be >= 1");
    if (N < 1)
        throw std::invalid_argument("landweber: N must be >= 1");
    if (k_max < 1)
        throw std::invalid_argument("landweber: k_max must be >= 1");
    if (!is_power_of_two(quad_points) || quad_points < 4 * k_max)
        throw std::invalid_argument("landweber: quad_points must be a power of two >= 4 k_max");
    if (angles.empty())
        throw std::invalid_argument("landweber: at least one incidence angle is required");
    for (double th : angles)
        if (!(std::abs(th) < std::numbers::pi / 2))
            throw std::invalid_argument("landweber: angles must lie in (-pi/2, pi/2)");
    if (!(gamma > 0.0))
        throw std::invalid_argument("landweber: gamma must be positive");
    if (!(divergence_factor > 1.0))
        throw std::invalid_argument("landweber: divergence factor must exceed 1");
}

std::vector<double> default_angles()
{
    constexpr double pi = std::numbers::pi;
    return {-pi / 4, -pi / 8, pi / 12, pi / 8, pi / 4};
}

//---------------------------------------------------------------------------//
std::vector<cplx> rayleigh_coefficients(Measurement const& m, ModeSet const& modes)
{
    std::size_t const Q = m.values.size();
    if (Q < 4 * static_cast<std::size_t>(modes.order) + 4)
        throw std::invalid_argument("rayleigh_coefficients: grid too coarse, need Q >= 4N+4");
    if (!close(m.period, modes.period) || !close(m.kappa, modes.wave.kappa)
        || !close(m.theta, modes.wave.theta))
        throw std::invalid_argument("rayleigh_coefficients: measurement and mode set disagree");

    UniformGrid const grid = m.grid();
    std::vector<cplx> u(modes.size(), cplx(0.0));
    for (std::size_t i = 0; i < modes.size(); ++i)
    {
        cplx acc = 0.0;
        for (std::size_t j = 0; j < Q; ++j)
            acc += m.values[j] * std::exp(cplx(0.0, -modes.alpha_n[i] * grid.x(j)));
        u[i] = acc / static_cast<double>(Q);
    }
    return u;
}

std::vector<cplx> regularized_psi(std::span<cplx const> u_n, ModeSet const& modes,
                                  double y0, double gamma)
{
    if (!(gamma > 0.0))
        throw std::invalid_argument("regularized_psi: gamma must be positive");
    if (u_n.size() != modes.size())
        throw std::invalid_argument("regularized_psi: size mismatch");

    cplx const I(0.0, 1.0);
    std::vector<cplx> psi(u_n.size());
    for (std::size_t i = 0; i < u_n.size(); ++i)
    {
        cplx const b = modes.beta_n[i];
        if (modes.propagating(i))
            psi[i] = u_n[i] * std::exp(-I * b * y0);
        else
            psi[i] = u_n[i] * std::exp(I * b * y0) / (std::exp(2.0 * I * b * y0) + gamma);
    }
    return psi;
}

TraceData make_trace(Measurement const& m, int N, double gamma, double wood_eps)
{
    TraceData t;
    t.modes = make_modes(make_plane_wave(m.kappa, m.theta), m.period, N, wood_eps);
    auto const u = rayleigh_coefficients(m, t.modes);
    t.psi = regularized_psi(u, t.modes, m.y0, gamma);
    t.regularized.resize(t.modes.size());
    for (std::size_t i = 0; i < t.modes.size(); ++i)
        t.regularized[i] = !t.modes.propagating(i);
    t.gamma = gamma;
    t.y0 = m.y0;
    return t;
}

//---------------------------------------------------------------------------//
StageOperator::StageOperator(std::span<TraceData const> traces, int order,
                             int quad_points)
    : order_(order), quad_points_(quad_points)
{
    if (traces.empty())
        throw std::invalid_argument("StageOperator: no traces");
    if (order < 0 || quad_points < 1)
        throw std::invalid_argument("StageOperator: bad order or quadrature size");
    period_ = traces.front().modes.period;

    UniformGrid const grid{static_cast<std::size_t>(quad_points), period_};
    double const w = kTwoPi / period_;
    std::size_t const ncoef = 2 * static_cast<std::size_t>(order) + 1;
    basis_.resize(quad_points, ncoef);
    for (int j = 0; j < quad_points; ++j)
    {
        double const x = grid.x(j);
        basis_(j, 0) = 1.0;
        for (int p = 1; p <= order; ++p)
        {
            basis_(j, 2 * p - 1) = std::cos(w * p * x);
            basis_(j, 2 * p) = std::sin(w * p * x);
        }
    }

    angles_.reserve(traces.size());
    for (auto const& t : traces)
    {
        if (!close(t.modes.period, period_))
            throw std::invalid_argument("StageOperator: traces with different periods");
        ModeSet const& m = t.modes;
        AngleTable a;
        a.beta = m.wave.beta;
        a.beta_n = m.beta_n;
        std::size_t const nm = m.size();
        a.weighted_phase.resize(static_cast<std::size_t>(quad_points) * nm);
        a.incident_phase.resize(quad_points);
        for (int j = 0; j < quad_points; ++j)
        {
            double const x = grid.x(j);
            for (std::size_t i = 0; i < nm; ++i)
                a.weighted_phase[j * nm + i]
                    = t.psi[i] * std::polar(1.0, m.alpha_n[i] * x);
            a.incident_phase[j] = std::polar(1.0, m.wave.alpha * x);
        }
        angles_.push_back(std::move(a));
    }
}

StageEvaluation StageOperator::evaluate(ProfileCoeffs const& c, bool with_jacobian) const
{
    if (c.order() != order_)
        throw std::invalid_argument("StageOperator: coefficient order "
                                    + std::to_string(c.order()) + " != stage order "
                                    + std::to_string(order_));
    std::size_t const ncoef = c.size();
    Eigen::Map<Eigen::VectorXd const> cv(c.coeffs().data(), ncoef);
    Eigen::VectorXd const f = basis_ * cv;

    std::size_t const L = angles_.size();
    StageEvaluation out;
    out.J = Eigen::VectorXd::Zero(L);
    if (with_jacobian)
        out.DJ = Eigen::MatrixXd::Zero(L, ncoef);

    cplx const I(0.0, 1.0);
    double const h = period_ / quad_points_;
    Eigen::VectorXd g(quad_points_);
    for (std::size_t l = 0; l < L; ++l)
    {
        AngleTable const& a = angles_[l];
        std::size_t const nm = a.beta_n.size();
        double J = 0.0;
        for (int j = 0; j < quad_points_; ++j)
        {
            double const fj = f(j);
            cplx const* wrow = a.weighted_phase.data() + j * nm;
            cplx F = 0.0;
            cplx G = 0.0;
            for (std::size_t i = 0; i < nm; ++i)
            {
                cplx const b = a.beta_n[i];
                // e^{i beta_n f}: a phase for propagating, a decay for evanescent
                cplx const e = b.imag() == 0.0 ? std::polar(1.0, b.real() * fj)
                                               : cplx(std::exp(-b.imag() * fj), 0.0);
                cplx const term = wrow[i] * e;
                F += term;
                G += I * b * term;
            }
            cplx const inc = a.incident_phase[j] * std::polar(1.0, -a.beta * fj);
            F += inc;
            G -= I * a.beta * inc;
            J += std::norm(F);
            g(j) = 2.0 * (std::conj(F) * G).real();
        }
        out.J(l) = J * h;
        if (with_jacobian)
            out.DJ.row(l) = h * (g.transpose() * basis_);
    }
    return out;
}

double objective(ProfileCoeffs const& c, TraceData const& trace, int quad_points)
{
    StageOperator const op(std::span<TraceData const>(&trace, 1), c.order(), quad_points);
    return op.evaluate(c, false).J(0);
}

Eigen::MatrixXd jacobian(ProfileCoeffs const& c, std::span<TraceData const> traces,
                         int quad_points)
{
    StageOperator const op(traces, c.order(), quad_points);
    return op.evaluate(c, true).DJ;
}

//---------------------------------------------------------------------------//
LandweberResult landweber_run(ProfileCoeffs const& c0, std::span<TraceData const> traces,
                              LandweberConfig const& cfg, int k)
{
    if (cfg.T < 0)
        throw std::invalid_argument("landweber_run: T must be non-negative");
    if (k < 1)
        throw std::invalid_argument("landweber_run: stage must be >= 1");
    if (c0.order() != k)
        throw std::invalid_argument("landweber_run: initial profile must have 2k+1 coefficients");

    StageOperator const op(traces, k, cfg.quad_points);
    double const eta = cfg.eta(k);

    LandweberResult res{c0, {}};
    res.objective_history.reserve(cfg.T + 1);
    Eigen::Map<Eigen::VectorXd> cv(res.coeffs.coeffs().data(), res.coeffs.size());
    double initial = 0.0;
    auto record = [&](double sum, int t) {
        if (res.objective_history.empty())
            initial = sum;
        res.objective_history.push_back(sum);
        // Absolute floor: a near-exact start must not trip the guard on roundoff
        if (!std::isfinite(sum) || (sum > cfg.divergence_factor * initial && sum > 1e-12))
            throw Diverged("landweber diverged at stage k=" + std::to_string(k)
                           + ", iteration " + std::to_string(t) + ": objective "
                           + std::to_string(sum) + " vs initial "
                           + std::to_string(initial));
    };

    for (int t = 0; t < cfg.T; ++t)
    {
        StageEvaluation const ev = op.evaluate(res.coeffs, true);
        record(ev.J.sum(), t);
        cv.noalias() -= eta * (ev.DJ.transpose() * ev.J);
    }
    record(op.evaluate(res.coeffs, false).J.sum(), cfg.T);
    return res;
}

//---------------------------------------------------------------------------//
MeasurementSet::MeasurementSet(int k_max, std::vector<double> angles)
    : k_max_(k_max), angles_(std::move(angles))
{
    if (k_max < 1 || angles_.empty())
        throw std::invalid_argument("MeasurementSet: need k_max >= 1 and at least one angle");
    data_.resize(static_cast<std::size_t>(k_max) * angles_.size());
}

std::size_t MeasurementSet::slot(int k, std::size_t l) const
{
    if (k < 1 || k > k_max_ || l >= angles_.size())
        throw std::out_of_range("MeasurementSet: (k=" + std::to_string(k) + ", l="
                                + std::to_string(l) + ") outside the configured set");
    return static_cast<std::size_t>(k - 1) * angles_.size() + l;
}

void MeasurementSet::insert(int k, std::size_t l, Measurement m)
{
    data_[slot(k, l)] = std::move(m);
}

bool MeasurementSet::contains(int k, std::size_t l) const
{
    return data_[slot(k, l)].has_value();
}

Measurement const& MeasurementSet::at(int k, std::size_t l) const
{
    auto const& m = data_[slot(k, l)];
    if (!m)
        throw std::out_of_range("missing measurement for k=" + std::to_string(k)
                                + ", theta[" + std::to_string(l)
                                + "]=" + std::to_string(angles_[l]));
    return *m;
}

//---------------------------------------------------------------------------//
Reconstruction continuation_reconstruct(MeasurementSet const& measurements,
                                        LandweberConfig const& cfg, double y0)
{
    cfg.validate();
    if (measurements.k_max() < cfg.k_max || measurements.angles().size() != cfg.angles.size())
        throw std::invalid_argument("continuation_reconstruct: measurement set does not "
                                    "cover the configured stages");

    double const period = measurements.at(1, 0).period;
    Reconstruction rec;
    rec.coeffs = ProfileCoeffs::constant(y0, 0, period);

    for (int k = 1; k <= cfg.k_max; ++k)
    {
        std::vector<TraceData> traces;
        traces.reserve(cfg.angles.size());
        for (std::size_t l = 0; l < cfg.angles.size(); ++l)
        {
            Measurement const& m = measurements.at(k, l);
            if (!close(m.kappa, k) || !close(m.theta, cfg.angles[l]) || !close(m.y0, y0)
                || !close(m.period, period))
                throw std::invalid_argument(
                    "continuation_reconstruct: measurement (k=" + std::to_string(k)
                    + ", l=" + std::to_string(l) + ") has inconsistent kappa/theta/y0/period");
            traces.push_back(make_trace(m, cfg.N, cfg.gamma, cfg.wood_eps));
        }

        ProfileCoeffs start = rec.coeffs.extended(k);
        LandweberResult stage = landweber_run(start, traces, cfg, k);
        rec.coeffs = std::move(stage.coeffs);
        rec.stage_coeffs.push_back(rec.coeffs);
        rec.stage_history.push_back(std::move(stage.objective_history));
    }
    return rec;
}

double deviation_rms(ProfileCoeffs const& a, ProfileCoeffs const& b, std::size_t points)
{
    if (!close(a.period(), b.period()))
        throw std::invalid_argument("deviation_rms: profiles have different periods");
    UniformGrid const grid{points, a.period()};
    double acc = 0.0;
    for (std::size_t j = 0; j < points; ++j)
    {
        double const d = evaluate_profile(a, grid.x(j)) - evaluate_profile(b, grid.x(j));
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(points));
}

}  // namespace gratinguq
