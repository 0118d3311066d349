#include "gratinguq/presets.hpp"

#include <cmath>

#include "gratinguq/error.hpp"

namespace gratinguq {

ProfileCoeffs example1_profile()
{
    return ProfileCoeffs({1.5, 0.2, 0.0, 0.2, 0.0});
}

ProfileCoeffs example2_profile()
{
    // 256 points resolve the series to roundoff. The profile is even, so the
    // sine coefficients are exactly zero; drop the ~1e-17 quadrature noise.
    auto f = [](double x) {
        return 1.2 + 0.05 * std::exp(std::cos(2 * x)) + 0.04 * std::exp(std::cos(3 * x));
    };
    ProfileCoeffs c = fourier_coefficients(f, kExample2Order, 256);
    for (int p = 1; p <= kExample2Order; ++p)
        c[2 * p] = 0.0;
    return c;
}

ProfileCoeffs preset_profile(std::string_view name)
{
    if (name == "example1")
        return example1_profile();
    if (name == "example2")
        return example2_profile();
    throw ConfigError("unknown surface preset '" + std::string(name)
                      + "' (expected example1 or example2)");
}

std::vector<std::string> preset_names()
{
    return {"example1", "example2"};
}

}  // namespace gratinguq
