#include "gratinguq/forward.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gratinguq/error.hpp"

namespace gratinguq {

RayleighCoeffs solve_forward(ProfileCoeffs const& surface, PlaneWave const& pw,
                             int N, int q_colloc, double max_condition,
                             double wood_eps)
{
    if (q_colloc < 2 * (2 * N + 1))
        throw std::invalid_argument("solve_forward: need Q_colloc >= 2(2N+1)");

    RayleighCoeffs rc;
    rc.modes = make_modes(pw, surface.period(), N, wood_eps);
    ModeSet const& modes = rc.modes;
    std::size_t const nm = modes.size();
    UniformGrid const grid{static_cast<std::size_t>(q_colloc), surface.period()};

    // Unknowns are amplitudes referenced to the mean height h, which keeps
    // the evanescent columns O(1); they are shifted back to y = 0 at the end.
    double const h = surface[0];
    Eigen::MatrixXcd A(q_colloc, nm);
    Eigen::VectorXcd rhs(q_colloc);
    for (int q = 0; q < q_colloc; ++q)
    {
        double const x = grid.x(q);
        double const f = evaluate_profile(surface, x);
        for (std::size_t i = 0; i < nm; ++i)
            A(q, i) = std::exp(cplx(0.0, modes.alpha_n[i] * x)
                               + cplx(0.0, 1.0) * modes.beta_n[i] * (f - h));
        rhs(q) = -std::exp(cplx(0.0, pw.alpha * x - pw.beta * f));
    }

    Eigen::VectorXd scale = A.colwise().norm().transpose();
    Eigen::MatrixXcd As = A * scale.cwiseInverse().asDiagonal();
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
    auto const& sv = svd.singularValues();
    rc.condition = sv(sv.size() - 1) > 0.0
                       ? sv(0) / sv(sv.size() - 1)
                       : std::numeric_limits<double>::infinity();
    if (!(rc.condition <= max_condition))
        throw IllConditioned("solve_forward: collocation condition number "
                             + std::to_string(rc.condition) + " exceeds "
                             + std::to_string(max_condition));

    Eigen::VectorXcd a = svd.solve(rhs);
    a = a.cwiseQuotient(scale.cast<cplx>());
    Eigen::VectorXcd r = A * a - rhs;
    rc.residual_rms = std::sqrt(r.squaredNorm() / q_colloc);

    rc.psi.resize(nm);
    for (std::size_t i = 0; i < nm; ++i)
        rc.psi[i] = a(i) * std::exp(cplx(0.0, -1.0) * modes.beta_n[i] * h);

    double total = 0.0;
    for (double e : reflection_efficiencies(rc))
        total += e;
    rc.energy_defect = total - 1.0;

    UniformGrid const fine{1024, surface.period()};
    rc.surface_max = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < fine.size; ++j)
        rc.surface_max = std::max(rc.surface_max, evaluate_profile(surface, fine.x(j)));
    return rc;
}

RayleighCoeffs solve_forward(SurfaceSample const& sample, PlaneWave const& pw,
                             ForwardOptions const& options)
{
    return solve_forward(sample.coeffs(), pw, options.N,
                         options.collocation_points(), options.max_condition,
                         options.wood_eps);
}

std::vector<double> reflection_efficiencies(RayleighCoeffs const& rc)
{
    ModeSet const& m = rc.modes;
    std::vector<double> e(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m.propagating(i))
            e[i] = m.beta_n[i].real() / m.wave.beta * std::norm(rc.psi[i]);
    return e;
}

Measurement synthesize_measurement(RayleighCoeffs const& rc, double y0, int Q,
                                   double tau, RandomStream& rng)
{
    ModeSet const& modes = rc.modes;
    if (!is_power_of_two(Q) || Q < 4 * modes.order + 4)
        throw std::invalid_argument("synthesize_measurement: Q must be a power of two >= 4N+4");
    if (!(y0 > rc.surface_max))
        throw std::invalid_argument("synthesize_measurement: y0 = " + std::to_string(y0)
                                    + " is not above the surface (max "
                                    + std::to_string(rc.surface_max) + ")");
    if (!(tau >= 0.0))
        throw std::invalid_argument("synthesize_measurement: tau must be non-negative");

    Measurement m;
    m.kappa = modes.wave.kappa;
    m.theta = modes.wave.theta;
    m.y0 = y0;
    m.period = modes.period;
    m.tau = tau;
    m.values.assign(Q, cplx(0.0));

    std::vector<cplx> amp(modes.size());
    for (std::size_t i = 0; i < modes.size(); ++i)
        amp[i] = rc.psi[i] * std::exp(cplx(0.0, 1.0) * modes.beta_n[i] * y0);

    UniformGrid const grid = m.grid();
    for (int j = 0; j < Q; ++j)
    {
        double const x = grid.x(j);
        cplx u = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i)
            u += amp[i] * std::exp(cplx(0.0, modes.alpha_n[i] * x));
        m.values[j] = u;
    }

    if (tau > 0.0)
    {
        std::uniform_real_distribution<double> uniform(-1.0, 1.0);
        for (auto& v : m.values)
            v *= 1.0 + tau * uniform(rng);
    }
    return m;
}

}  // namespace gratinguq
