#pragma once

#include <stdexcept>
#include <string>

namespace gratinguq {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error
{
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public Error
{
  public:
    using Error::Error;
};

/// Missing, unreadable or malformed files.
class IoError : public Error
{
  public:
    using Error::Error;
};

/// Base for failures of the numerical pipeline.
class NumericalError : public Error
{
  public:
    using Error::Error;
};

/// Some Rayleigh mode sits on the light cone: beta_n ~ 0.
class WoodAnomaly : public NumericalError
{
  public:
    WoodAnomaly(int mode, double kappa, double theta);

    int mode() const noexcept { return mode_; }
    double kappa() const noexcept { return kappa_; }
    double theta() const noexcept { return theta_; }

  private:
    int mode_;
    double kappa_;
    double theta_;
};

/// Landweber objective grew past the divergence guard.
class Diverged : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

/// Collocation system too ill-conditioned for a trustworthy solve.
class IllConditioned : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

/// Eigenvalue pair does not satisfy lambda_0 > lambda_1 > 0.
class OrderViolation : public NumericalError
{
  public:
    using NumericalError::NumericalError;
};

}  // namespace gratinguq
