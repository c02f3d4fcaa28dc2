#pragma once

// Published reference values for the built-in example61 model.

#include <array>

namespace fif::reference {

struct Radii {
  int k;
  double upper;  // rho of the upper matrix
  double lower;  // rho of the lower matrix
};

inline constexpr std::array<Radii, 6> kExample61Radii{{
    {1, 1.95688, 1.05567},
    {2, 1.68984, 1.33590},
    {4, 1.53627, 1.49577},
    {5, 1.52277, 1.50926},
    {7, 1.51675, 1.51525},
    {8, 1.51625, 1.51575},
}};

inline constexpr double kExample61RhoS = 1.516;
inline constexpr double kExample61Dimension = 1.379;
inline constexpr double kRadiusTolerance = 5e-4;

}  // namespace fif::reference
