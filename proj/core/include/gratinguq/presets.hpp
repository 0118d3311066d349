#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "gratinguq/surface.hpp"

namespace gratinguq {

//! 1.5 + 0.2 cos x + 0.2 cos 2x
ProfileCoeffs example1_profile();

//! 1.2 + 0.05 exp(cos 2x) + 0.04 exp(cos 3x), Fourier series cut at frequency 12
ProfileCoeffs example2_profile();

inline constexpr int kExample2Order = 12;

//! Fourier coefficients of a 2 pi periodic function by an n-point trapezoid sum
template<class F>
ProfileCoeffs fourier_coefficients(F&& f, int order, int n);

//! Look up "example1" / "example2"; throws ConfigError otherwise
ProfileCoeffs preset_profile(std::string_view name);

std::vector<std::string> preset_names();

//---------------------------------------------------------------------------//
template<class F>
ProfileCoeffs fourier_coefficients(F&& f, int order, int n)
{
    std::vector<double> c(2 * static_cast<std::size_t>(order) + 1, 0.0);
    UniformGrid const grid{static_cast<std::size_t>(n), kTwoPi};
    for (int j = 0; j < n; ++j)
    {
        double const x = grid.x(j);
        double const v = f(x);
        c[0] += v;
        for (int p = 1; p <= order; ++p)
        {
            c[2 * p - 1] += 2.0 * v * std::cos(p * x);
            c[2 * p] += 2.0 * v * std::sin(p * x);
        }
    }
    for (auto& v : c)
        v /= n;
    return ProfileCoeffs(std::move(c));
}

}  // namespace gratinguq
