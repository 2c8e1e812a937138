#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include "cvmdi/gaussian_state.hpp"
#include "cvmdi/types.hpp"

namespace cvmdi {

/// Reduced two-mode covariance
///   [ a I2      c sz ]
///   [ c sz      b I2 ]      sz = diag(1, -1)
/// `c` is the x-quadrature correlation; the p correlation is -c.
struct TwoModeCov {
  Real a = 1;
  Real b = 1;
  Real c = 0;

  /// a^2 + b^2 - 2c^2
  Real sum_invariant() const;
  /// ab - c^2, evaluated with a fused multiply-add so that it keeps its
  /// digits when ab and c^2 agree to ten places.
  Real det_invariant() const;

  GaussianState to_state() const;
};

/// Symplectic eigenvalues, descending, with the rounding tolerance of the
/// matrix they came from.
struct SymplecticSpectrum {
  std::vector<Real> eigenvalues;
  Real tolerance = 1e-9L;

  std::size_t size() const { return eigenvalues.size(); }
  Real operator[](std::size_t i) const { return eigenvalues[i]; }
};

/// Tolerance below one tolerated on symplectic eigenvalues before a state is
/// declared unphysical.
inline constexpr Real kPhysicalityTolerance = 1e-9L;

/// Tolerance actually applied to `state`: kPhysicalityTolerance, raised to
/// 16 eps m^2 when the largest entry m is big enough for rounding of the
/// entries alone to move eigenvalues near one by more than that (about
/// 1.7e-8 at m = 1e5 in long double).
Real physicality_tolerance(const GaussianState& state);

/// Moduli of the eigenvalues of Omega*cov, one per +/- pair, descending.
/// Computed on the similar antisymmetric matrix L^T Omega L (cov = L L^T)
/// through a Hermitian eigensolver.
SymplecticSpectrum symplectic_eigenvalues(const GaussianState& state);

/// Closed form for the two-mode spectrum:
///   lambda^2 = [A +- sqrt(A^2 - 4B^2)] / 2.
/// Uses A^2 - 4B^2 = (a-b)^2 ((a-b)^2 + 4B) and lambda2 = B / lambda1 so
/// neither root suffers cancellation at a, b ~ 1e5.
std::pair<Real, Real> two_mode_symplectic(const TwoModeCov& tm);

/// G(x) = (x+1) log2(x+1) - x log2(x), with G(0) = 0. Evaluated through
/// log1p on both branches; the relative error stays at the level of the
/// working precision for every x >= 0.
Real g_func(Real x);

/// Entropy contribution of one symplectic eigenvalue: G((lambda - 1) / 2),
/// with lambda in [1 - tolerance, 1) treated as 1.
Real mode_entropy(Real lambda, Real tolerance = kPhysicalityTolerance);

/// Sum of mode_entropy over the symplectic spectrum, at the spectrum's
/// tolerance.
Real von_neumann_entropy(const GaussianState& state);
Real von_neumann_entropy(const SymplecticSpectrum& spectrum);

/// Smallest symplectic eigenvalue >= 1 - tolerance; the one-argument form
/// uses physicality_tolerance(state).
bool is_physical(const GaussianState& state);
bool is_physical(const GaussianState& state, Real tolerance);

/// Throws NumericError naming `stage` when the state violates the
/// uncertainty principle.
void require_physical(const GaussianState& state, std::string_view stage);

}  // namespace cvmdi
