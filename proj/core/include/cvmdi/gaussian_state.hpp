#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cvmdi/types.hpp"

namespace cvmdi {

/// Multimode Gaussian state in shot-noise units (vacuum variance 1).
///
/// Quadratures are interleaved: (x1, p1, x2, p2, ...), so the 2x2 block at
/// (2i, 2j) couples modes i and j. The state is an immutable value; every
/// transformation below returns a new state.
class GaussianState {
 public:
  /// Zero-mode state; the neutral element of tensor().
  GaussianState() = default;

  /// Takes a covariance matrix and mean vector. Throws InvalidArgument when
  /// the dimensions disagree or the covariance is not symmetric to 1e-12
  /// relative to its largest entry.
  GaussianState(Matrix cov, Vector mean);

  /// Zero-mean state with the given covariance.
  explicit GaussianState(Matrix cov);

  static GaussianState vacuum(std::size_t modes);

  std::size_t modes() const { return static_cast<std::size_t>(cov_.rows() / 2); }
  const Matrix& cov() const { return cov_; }
  const Vector& mean() const { return mean_; }

  /// 2x2 covariance block between modes i and j.
  Matrix block(std::size_t i, std::size_t j) const;

 private:
  Matrix cov_ = Matrix(0, 0);
  Vector mean_ = Vector(0);
};

/// Two-mode squeezed vacuum of marginal variance v (>= 1).
GaussianState epr_state(Real v);

/// Single-mode thermal state cov = v * I2 (v >= 1).
GaussianState thermal_state(Real v);

/// Mixes modes i and j on a beamsplitter of transmissivity t:
///   i' =  sqrt(t) i + sqrt(1-t) j
///   j' = -sqrt(1-t) i + sqrt(t) j
GaussianState apply_beamsplitter(const GaussianState& state, std::size_t i,
                                 std::size_t j, Real t);

/// Direct sum; modes of b follow those of a.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Keeps the listed modes, in the listed order.
GaussianState partial_trace(const GaussianState& state,
                            std::span<const std::size_t> keep);
GaussianState partial_trace(const GaussianState& state,
                            std::initializer_list<std::size_t> keep);

/// Conditional state of the remaining modes after an ideal homodyne
/// measurement of one quadrature of `measured`. The projector inverse
/// (X g X)^+ with X = diag(1, 0) reduces to a division by the measured
/// quadrature's variance.
GaussianState homodyne_condition(const GaussianState& state,
                                 std::size_t measured, Quadrature quadrature);

/// Conditional state after heterodyne detection of `measured`:
/// g_A - s (g_B + I)^-1 s^T.
GaussianState heterodyne_condition(const GaussianState& state,
                                   std::size_t measured);

/// Linear classical feedforward cov <- M cov M^T, mean <- M mean. Rows of M
/// define the output quadratures (even count); columns match the input.
GaussianState linear_feedforward(const GaussianState& state, const Matrix& map);

}  // namespace cvmdi
