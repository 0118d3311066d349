#include "gratinguq/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "gratinguq/error.hpp"

#ifdef GRATINGUQ_HAVE_QUADMATH
#include <quadmath.h>
#endif

namespace gratinguq {
namespace {

#ifdef GRATINGUQ_HAVE_QUADMATH
__extension__ typedef __float128 wide;
wide wide_exp(wide x) { return expq(x); }
wide wide_cos(wide x) { return cosq(x); }
wide wide_sin(wide x) { return sinq(x); }
wide wide_pi() { return 4 * atanq(wide(1)); }
#else
typedef long double wide;
wide wide_exp(wide x) { return std::exp(x); }
wide wide_cos(wide x) { return std::cos(x); }
wide wide_sin(wide x) { return std::sin(x); }
wide wide_pi() { return std::numbers::pi_v<long double>; }
#endif

double kl_ratio(int j, CovarianceSpec const& spec)
{
    double const w = kTwoPi * j / spec.period;
    return std::exp(-w * w * spec.l * spec.l / 4.0);
}

}  // namespace

//---------------------------------------------------------------------------//
void CovarianceSpec::validate() const
{
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("covariance: period must be positive");
    if (!(sigma >= 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("covariance: sigma must be non-negative");
    if (!(l > 0.0))
        throw std::invalid_argument("covariance: correlation length must be positive");
    if (l > period / 4.0)
        throw std::invalid_argument("covariance: correlation length exceeds period/4 ("
                                    + std::to_string(l) + " > "
                                    + std::to_string(period / 4.0) + ")");
}

double CovarianceSpec::covariance(double tau) const
{
    return sigma * sigma * std::exp(-tau * tau / (l * l));
}

//---------------------------------------------------------------------------//
ProfileCoeffs::ProfileCoeffs() : coeffs_(1, 0.0), period_(kTwoPi) {}

ProfileCoeffs::ProfileCoeffs(std::vector<double> coeffs, double period)
    : coeffs_(std::move(coeffs)), period_(period)
{
    if (coeffs_.size() % 2 != 1)
        throw std::invalid_argument("profile coefficients must have odd length, got "
                                    + std::to_string(coeffs_.size()));
    if (!(period_ > 0.0))
        throw std::invalid_argument("profile period must be positive");
}

ProfileCoeffs ProfileCoeffs::constant(double c0, int order, double period)
{
    std::vector<double> c(2 * static_cast<std::size_t>(order) + 1, 0.0);
    c[0] = c0;
    return ProfileCoeffs(std::move(c), period);
}

ProfileCoeffs ProfileCoeffs::extended(int order) const
{
    if (order < this->order())
        throw std::invalid_argument("cannot shrink profile coefficients");
    std::vector<double> c(coeffs_);
    c.resize(2 * static_cast<std::size_t>(order) + 1, 0.0);
    return ProfileCoeffs(std::move(c), period_);
}

double evaluate_profile(ProfileCoeffs const& coeffs, double x)
{
    double const w = kTwoPi / coeffs.period();
    double f = coeffs[0];
    for (int p = 1; p <= coeffs.order(); ++p)
    {
        double const arg = w * p * x;
        f += coeffs[2 * p - 1] * std::cos(arg) + coeffs[2 * p] * std::sin(arg);
    }
    return f;
}

GridFunction evaluate_profile(ProfileCoeffs const& coeffs, UniformGrid const& grid)
{
    if (std::abs(grid.period - coeffs.period()) > 1e-12 * coeffs.period())
        throw std::invalid_argument("grid period does not match profile period");
    GridFunction out{grid, std::vector<double>(grid.size)};
    for (std::size_t j = 0; j < grid.size; ++j)
        out.values[j] = evaluate_profile(coeffs, grid.x(j));
    return out;
}

//---------------------------------------------------------------------------//
double KLBasis::function(std::size_t i, double x) const
{
    if (i == 0)
        return std::sqrt(1.0 / period);
    int const j = frequency_of(i);
    double const arg = kTwoPi * j * x / period;
    double const s = std::sqrt(2.0 / period);
    return (i % 2 == 1) ? s * std::sin(arg) : s * std::cos(arg);
}

//---------------------------------------------------------------------------//
double SurfaceSample::evaluate(double x) const
{
    double const lp = basis.period;
    double f = evaluate_profile(deterministic, x)
               + std::sqrt(basis.eigenvalues[0]) * xi0 * std::sqrt(1.0 / lp);
    double const s = std::sqrt(2.0 / lp);
    for (int j = 1; j <= basis.order; ++j)
    {
        double const arg = kTwoPi * j * x / lp;
        f += std::sqrt(basis.eigenvalues[j]) * s
             * (xi_s[j - 1] * std::sin(arg) + xi_c[j - 1] * std::cos(arg));
    }
    return f;
}

ProfileCoeffs SurfaceSample::coeffs() const
{
    int const order = std::max(deterministic.order(), basis.order);
    ProfileCoeffs c = deterministic.extended(order);
    double const lp = basis.period;
    c[0] += std::sqrt(basis.eigenvalues[0]) * xi0 * std::sqrt(1.0 / lp);
    double const s = std::sqrt(2.0 / lp);
    for (int j = 1; j <= basis.order; ++j)
    {
        double const a = std::sqrt(basis.eigenvalues[j]) * s;
        c[2 * j - 1] += a * xi_c[j - 1];
        c[2 * j] += a * xi_s[j - 1];
    }
    return c;
}

double SurfaceSample::max_height(std::size_t points) const
{
    UniformGrid const grid{points, basis.period};
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < points; ++j)
        m = std::max(m, evaluate(grid.x(j)));
    return m;
}

double SurfaceSample::min_height(std::size_t points) const
{
    UniformGrid const grid{points, basis.period};
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < points; ++j)
        m = std::min(m, evaluate(grid.x(j)));
    return m;
}

//---------------------------------------------------------------------------//
double kl_eigenvalue_closed_form(int j, CovarianceSpec const& spec)
{
    spec.validate();
    if (j < 0)
        throw std::invalid_argument("KL frequency must be non-negative");
    return std::sqrt(std::numbers::pi) * spec.sigma * spec.sigma * spec.l
           * kl_ratio(j, spec);
}

double kl_eigenvalue_quadrature(int j, CovarianceSpec const& spec, int n_quad)
{
    spec.validate();
    if (n_quad < 256)
        throw std::invalid_argument("kl_eigenvalue_quadrature needs n_quad >= 256");
    if (j < 0)
        throw std::invalid_argument("KL frequency must be non-negative");
    double const s2 = spec.sigma * spec.sigma;
    if (s2 == 0.0)
        return 0.0;

    // Summed in extended precision: for j ~ 10 the coefficient is ~1e-25 of
    // sigma^2, far below the rounding of the individual terms in double.
    // Gaussians and the cosine advance by multiplicative recurrences on the
    // grid, so each call costs two transcendental evaluations.
    wide const lp = spec.period;
    wide const ll = wide(spec.l) * spec.l;
    wide const ws2 = wide(spec.sigma) * spec.sigma;
    wide const h = lp / n_quad;

    // g[i] = sigma^2 exp(-(i h)^2 / l^2), extended on demand
    std::vector<wide> g{ws2};
    wide step = wide_exp(-h * h / ll);
    wide const step_ratio = step * step;
    auto gauss = [&](std::size_t i) {
        while (g.size() <= i)
        {
            g.push_back(g.back() * step);
            step *= step_ratio;
        }
        return g[i];
    };

    // Periodised covariance: sum images tau + m*Lambda until they drop
    // below 1e-14 relative to sigma^2.
    auto periodised = [&](int q) {
        wide sum = gauss(q);
        for (int m = 1;; ++m)
        {
            wide const up = gauss(static_cast<std::size_t>(q + m * n_quad));
            wide const down = gauss(static_cast<std::size_t>(std::abs(q - m * n_quad)));
            sum += up + down;
            if (up + down < wide(1e-14) * ws2)
                break;
        }
        return sum;
    };

    wide const w = 2 * wide_pi() * j / n_quad;
    wide const c1 = wide_cos(w), s1 = wide_sin(w);
    wide c = 1, s = 0;
    wide acc = 0;
    for (int q = 0; q < n_quad; ++q)
    {
        acc += periodised(q) * c;
        wide const cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
    }
    return static_cast<double>(acc * h);
}

KLBasis build_basis(CovarianceSpec const& spec, double tol)
{
    spec.validate();
    if (!(tol > 0.0 && tol < 1.0))
        throw std::invalid_argument("KL truncation tolerance must lie in (0, 1)");

    int order = 0;
    while (kl_ratio(order + 1, spec) >= tol)
    {
        ++order;
        if (order > kMaxKLOrder)
            throw std::invalid_argument(
                "covariance too rough: KL truncation would exceed order "
                + std::to_string(kMaxKLOrder));
    }

    KLBasis basis;
    basis.order = order;
    basis.period = spec.period;
    basis.eigenvalues.resize(order + 1);
    for (int j = 0; j <= order; ++j)
        basis.eigenvalues[j] = kl_eigenvalue_closed_form(j, spec);
    return basis;
}

SurfaceSample sample_surface(ProfileCoeffs const& deterministic,
                             KLBasis const& basis,
                             RandomStream& rng)
{
    if (std::abs(deterministic.period() - basis.period) > 1e-12 * basis.period)
        throw std::invalid_argument("sample_surface: profile and basis periods differ");

    std::normal_distribution<double> normal(0.0, 1.0);
    SurfaceSample s;
    s.deterministic = deterministic;
    s.basis = basis;
    s.xi_s.resize(basis.order);
    s.xi_c.resize(basis.order);

    for (int attempt = 0; attempt <= kMaxSurfaceRedraws; ++attempt)
    {
        s.xi0 = normal(rng);
        for (int j = 0; j < basis.order; ++j)
        {
            s.xi_s[j] = normal(rng);
            s.xi_c[j] = normal(rng);
        }
        if (s.min_height() > 0.0)
            return s;
    }
    throw NumericalError("sample_surface: surface not positive after "
                         + std::to_string(kMaxSurfaceRedraws) + " redraws");
}

std::vector<double> project_onto_basis(GridFunction const& sample_values,
                                       GridFunction const& mean_values,
                                       KLBasis const& basis)
{
    UniformGrid const& grid = sample_values.grid;
    if (!(grid == mean_values.grid) || sample_values.values.size() != grid.size
        || mean_values.values.size() != grid.size)
        throw std::invalid_argument("project_onto_basis: grid mismatch");
    if (std::abs(grid.period - basis.period) > 1e-12 * basis.period)
        throw std::invalid_argument("project_onto_basis: grid period differs from basis");
    if (grid.size < 8 * static_cast<std::size_t>(basis.order + 1))
        throw std::invalid_argument("project_onto_basis: grid too coarse for basis");

    std::size_t const dim = basis.dimension();
    std::vector<double> out(dim, 0.0);
    double const h = grid.spacing();
    for (std::size_t q = 0; q < grid.size; ++q)
    {
        double const d = sample_values.values[q] - mean_values.values[q];
        if (d == 0.0)
            continue;
        double const x = grid.x(q);
        for (std::size_t i = 0; i < dim; ++i)
            out[i] += d * basis.function(i, x);
    }
    for (auto& v : out)
        v *= h;
    return out;
}

}  // namespace gratinguq
