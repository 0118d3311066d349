#pragma once

#include <cstddef>
#include <numbers>
#include <vector>

namespace gratinguq {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Uniform grid x_j = j * period / size, j = 0..size-1, on one period.
struct UniformGrid
{
    std::size_t size = 0;
    double period = kTwoPi;

    double spacing() const { return period / static_cast<double>(size); }
    double x(std::size_t j) const { return static_cast<double>(j) * spacing(); }
    std::vector<double> points() const;

    friend bool operator==(UniformGrid const&, UniformGrid const&) = default;
};

/// Real samples of a periodic function on a uniform grid.
struct GridFunction
{
    UniformGrid grid;
    std::vector<double> values;
};

inline std::vector<double> UniformGrid::points() const
{
    std::vector<double> out(size);
    for (std::size_t j = 0; j < size; ++j)
        out[j] = x(j);
    return out;
}

inline bool is_power_of_two(long n)
{
    return n > 0 && (n & (n - 1)) == 0;
}

}  // namespace gratinguq
