#include "gratinguq/wavefield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gratinguq/error.hpp"

namespace gratinguq {

WoodAnomaly::WoodAnomaly(int mode, double kappa, double theta)
    : NumericalError("Wood anomaly: mode " + std::to_string(mode)
                     + " grazes at kappa=" + std::to_string(kappa)
                     + ", theta=" + std::to_string(theta))
    , mode_(mode)
    , kappa_(kappa)
    , theta_(theta)
{
}

PlaneWave make_plane_wave(double kappa, double theta)
{
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("plane wave: kappa must be positive");
    if (!(std::abs(theta) < std::numbers::pi / 2))
        throw std::invalid_argument("plane wave: theta must lie in (-pi/2, pi/2)");
    return PlaneWave{kappa, theta, kappa * std::sin(theta), kappa * std::cos(theta)};
}

cplx vertical_wavenumber(double kappa, double alpha_n)
{
    double const a = std::abs(alpha_n);
    // (kappa - |a|)(kappa + |a|) avoids cancellation near the light cone
    double const d = (kappa - a) * (kappa + a);
    if (a < kappa)
        return {std::sqrt(d), 0.0};
    return {0.0, std::sqrt(-d)};
}

std::size_t ModeSet::propagating_count() const
{
    std::size_t count = 0;
    for (std::size_t i = 0; i < size(); ++i)
        count += propagating(i) ? 1 : 0;
    return count;
}

ModeSet make_modes(PlaneWave const& pw, double period, int N, double wood_eps)
{
    if (N < 1)
        throw std::invalid_argument("make_modes: N must be >= 1");
    if (!(wood_eps > 0.0))
        throw std::invalid_argument("make_modes: wood_eps must be positive");
    if (!(period > 0.0))
        throw std::invalid_argument("make_modes: period must be positive");

    ModeSet m;
    m.order = N;
    m.wave = pw;
    m.period = period;
    m.alpha_n.resize(2 * N + 1);
    m.beta_n.resize(2 * N + 1);
    for (int n = -N; n <= N; ++n)
    {
        double const an = pw.alpha + kTwoPi * n / period;
        if (std::abs(std::abs(an) - pw.kappa) <= wood_eps)
            throw WoodAnomaly(n, pw.kappa, pw.theta);
        m.alpha_n[m.index(n)] = an;
        m.beta_n[m.index(n)] = vertical_wavenumber(pw.kappa, an);
    }
    return m;
}

cplx incident_field(PlaneWave const& pw, double x, double y)
{
    return std::exp(cplx(0.0, pw.alpha * x - pw.beta * y));
}

cplx green_quasiperiodic(ModeSet const& modes, double x, double y, double s,
                         double t, double g_min)
{
    double const dy = std::abs(y - t);
    if (dy < g_min)
        throw std::invalid_argument("green_quasiperiodic: field point within g_min of "
                                    "the source line");

    constexpr double tail_tol = 1e-12;
    double const period = modes.period;
    double const kappa = modes.wave.kappa;
    double const pref = 1.0 / (2.0 * period);
    auto term = [&](int n) {
        double const an = modes.wave.alpha + kTwoPi * n / period;
        cplx const bn = vertical_wavenumber(kappa, an);
        return cplx(0.0, pref) / bn * std::exp(cplx(0.0, 1.0) * (an * (x - s) + bn * dy));
    };
    auto omitted_bound = [&](int n_next) {
        // Largest of the two first omitted terms, +-n_next
        double bound = 0.0;
        for (int n : {n_next, -n_next})
        {
            double const an = modes.wave.alpha + kTwoPi * n / period;
            cplx const bn = vertical_wavenumber(kappa, an);
            if (bn.imag() <= 0.0)
                return std::numeric_limits<double>::infinity();
            bound = std::max(bound, pref / std::abs(bn) * std::exp(-bn.imag() * dy));
        }
        return bound;
    };

    int n_max = modes.order;
    int const n_cap = 4 * modes.order;
    while (omitted_bound(n_max + 1) >= tail_tol)
    {
        if (++n_max > n_cap)
            throw NumericalError("green_quasiperiodic: truncation tail above 1e-12 at 4N");
    }

    cplx sum = 0.0;
    for (int n = -n_max; n <= n_max; ++n)
        sum += term(n);
    return sum;
}

}  // namespace gratinguq
