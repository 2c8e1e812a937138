#pragma once

#include <Eigen/Dense>

namespace cvmdi {

// Extended precision for all covariance algebra. Entries reach 1e5 shot-noise
// units while the quantities of interest (symplectic eigenvalues near one)
// sit ten orders of magnitude lower, so double rounding alone costs ~1e-8 bits
// in the entropies.
using Real = long double;

using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

enum class Quadrature { X, P };

}  // namespace cvmdi
