#pragma once

#include <span>
#include <vector>

#include "gratinguq/grid.hpp"
#include "gratinguq/rng.hpp"

namespace gratinguq {

//---------------------------------------------------------------------------//
/*!
 * Gaussian covariance c(x - y) = sigma^2 exp(-|x - y|^2 / l^2) of a
 * stationary random surface with period Lambda.
 *
 * sigma = 0 is accepted and describes a deterministic surface. The model
 * needs l << Lambda, enforced as l <= Lambda / 4.
 */
struct CovarianceSpec
{
    double sigma = 0.0;
    double l = 1.0;
    double period = kTwoPi;

    void validate() const;
    double covariance(double tau) const;
};

//---------------------------------------------------------------------------//
/*!
 * Finite real Fourier series on period Lambda:
 *
 *   f(x) = c_0 + sum_{p=1}^{k} c_{2p-1} cos(2 pi p x / Lambda)
 *                             + c_{2p}   sin(2 pi p x / Lambda)
 *
 * The coefficient vector always has odd length 2k + 1.
 */
class ProfileCoeffs
{
  public:
    ProfileCoeffs();
    explicit ProfileCoeffs(std::vector<double> coeffs, double period = kTwoPi);

    static ProfileCoeffs constant(double c0, int order, double period = kTwoPi);

    int order() const { return static_cast<int>(coeffs_.size() / 2); }
    std::size_t size() const { return coeffs_.size(); }
    double period() const { return period_; }

    double operator[](std::size_t i) const { return coeffs_[i]; }
    double& operator[](std::size_t i) { return coeffs_[i]; }
    std::span<double const> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }

    //! Zero-padded (or identical) copy with the given order
    ProfileCoeffs extended(int order) const;

    friend bool operator==(ProfileCoeffs const&, ProfileCoeffs const&) = default;

  private:
    std::vector<double> coeffs_;
    double period_;
};

double evaluate_profile(ProfileCoeffs const& coeffs, double x);

//! Evaluate on every point of a uniform grid (the grid period must match)
GridFunction evaluate_profile(ProfileCoeffs const& coeffs, UniformGrid const& grid);

//---------------------------------------------------------------------------//
/*!
 * Truncated Karhunen-Loeve basis of the periodised Gaussian covariance.
 *
 * eigenvalues[j] belongs to frequency j. Frequency 0 has the single
 * eigenfunction sqrt(1/Lambda); each j >= 1 carries the pair
 * sqrt(2/Lambda) sin(2 pi j x / Lambda), sqrt(2/Lambda) cos(2 pi j x / Lambda).
 * Index i of the 2J + 1 functions is ordered (const, sin_1, cos_1, sin_2, ...).
 */
struct KLBasis
{
    int order = 0;
    std::vector<double> eigenvalues;
    double period = kTwoPi;

    std::size_t dimension() const { return 2 * static_cast<std::size_t>(order) + 1; }
    double function(std::size_t i, double x) const;
    //! Frequency j owning basis function i
    static int frequency_of(std::size_t i) { return static_cast<int>((i + 1) / 2); }
};

//---------------------------------------------------------------------------//
/*!
 * One realisation f(omega; x) = f~(x) + truncated KL draw.
 */
struct SurfaceSample
{
    ProfileCoeffs deterministic;
    double xi0 = 0.0;
    std::vector<double> xi_s;  // xi_{j,s}, j = 1..J
    std::vector<double> xi_c;  // xi_{j,c}, j = 1..J
    KLBasis basis;

    double evaluate(double x) const;
    //! Exact Fourier representation of the realisation
    ProfileCoeffs coeffs() const;
    double max_height(std::size_t points = 1024) const;
    double min_height(std::size_t points = 1024) const;
};

//---------------------------------------------------------------------------//
// OPERATIONS
//---------------------------------------------------------------------------//

//! sqrt(pi) sigma^2 l exp(-(2 pi j / Lambda)^2 l^2 / 4)
double kl_eigenvalue_closed_form(int j, CovarianceSpec const& spec);

//! Fourier coefficient of the periodised covariance by trapezoidal quadrature
double kl_eigenvalue_quadrature(int j, CovarianceSpec const& spec, int n_quad);

//! Smallest J with lambda_{J+1} / lambda_0 < tol; throws past J = 64
KLBasis build_basis(CovarianceSpec const& spec, double tol);

inline constexpr int kMaxKLOrder = 64;
inline constexpr int kMaxSurfaceRedraws = 100;

//! Draw a realisation, redrawing while min f <= 0
SurfaceSample sample_surface(ProfileCoeffs const& deterministic,
                             KLBasis const& basis,
                             RandomStream& rng);

//! Inner products <sample - mean, phi_i> for i = 0..2J by trapezoidal rule
std::vector<double> project_onto_basis(GridFunction const& sample_values,
                                       GridFunction const& mean_values,
                                       KLBasis const& basis);

}  // namespace gratinguq
