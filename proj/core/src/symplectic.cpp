#include "cvmdi/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "cvmdi/errors.hpp"

namespace cvmdi {
namespace {

constexpr Real kLn2 = std::numbers::ln2_v<Real>;
constexpr Real kPairTolerance = 1e-8L;

std::string describe(const Matrix& m) {
  std::ostringstream out;
  out.precision(17);
  out << m;
  return out.str();
}

}  // namespace

Real TwoModeCov::sum_invariant() const {
  const Real d = a - b;
  return d * d + 2 * det_invariant();
}

Real TwoModeCov::det_invariant() const {
  // ab - c^2 with c^2 split into an exact hi + lo pair.
  const Real c2 = c * c;
  const Real c2_lo = std::fma(c, c, -c2);
  return std::fma(a, b, -c2) - c2_lo;
}

GaussianState TwoModeCov::to_state() const {
  Matrix cov = Matrix::Zero(4, 4);
  cov(0, 0) = cov(1, 1) = a;
  cov(2, 2) = cov(3, 3) = b;
  cov(0, 2) = cov(2, 0) = c;
  cov(1, 3) = cov(3, 1) = -c;
  return GaussianState(std::move(cov));
}

Real physicality_tolerance(const GaussianState& state) {
  if (state.modes() == 0) return kPhysicalityTolerance;
  const Real m = state.cov().cwiseAbs().maxCoeff();
  const Real rounding = 16 * std::numeric_limits<Real>::epsilon() * m * m;
  return std::max(kPhysicalityTolerance, rounding);
}

SymplecticSpectrum symplectic_eigenvalues(const GaussianState& state) {
  const Eigen::Index dim = state.cov().rows();
  SymplecticSpectrum out;
  if (dim == 0) return out;
  out.tolerance = physicality_tolerance(state);

  Eigen::LLT<Matrix> llt(state.cov());
  if (llt.info() != Eigen::Success) {
    throw NumericError("symplectic_eigenvalues: covariance is not positive "
                       "definite:\n" + describe(state.cov()));
  }
  const Matrix lower = llt.matrixL();

  // K = L^T Omega L is real antisymmetric and similar to Omega cov up to
  // transposition; i K is Hermitian with eigenvalues +-lambda_k.
  Matrix omega_l(dim, dim);
  for (Eigen::Index m = 0; m < dim; m += 2) {
    omega_l.row(m) = lower.row(m + 1);
    omega_l.row(m + 1) = -lower.row(m);
  }
  const Matrix k = lower.transpose() * omega_l;
  using Complex = std::complex<Real>;
  using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const ComplexMatrix hermitian = k.cast<Complex>() * Complex(0, 1);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian,
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symplectic_eigenvalues: eigensolver failed on:\n" +
                       describe(state.cov()));
  }
  // Ascending: -lambda_max ... -lambda_min, lambda_min ... lambda_max.
  const auto& ev = solver.eigenvalues();
  const Eigen::Index n = dim / 2;
  out.eigenvalues.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k_idx = 0; k_idx < n; ++k_idx) {
    const Real pos = ev(dim - 1 - k_idx);
    const Real neg = -ev(k_idx);
    if (std::abs(pos - neg) > kPairTolerance * std::max<Real>(pos, 1)) {
      throw NumericError("symplectic_eigenvalues: unpaired spectrum for:\n" +
                         describe(state.cov()));
    }
    out.eigenvalues.push_back((pos + neg) / 2);
  }
  return out;
}

std::pair<Real, Real> two_mode_symplectic(const TwoModeCov& tm) {
  const Real det = tm.det_invariant();
  if (!(tm.a > 0) || !(tm.b > 0) || !(det > 0)) {
    throw NumericError("two_mode_symplectic: unphysical (a, b, c) = (" +
                       std::to_string(static_cast<double>(tm.a)) + ", " +
                       std::to_string(static_cast<double>(tm.b)) + ", " +
                       std::to_string(static_cast<double>(tm.c)) + ")");
  }
  const Real d = tm.a - tm.b;
  const Real d2 = d * d;
  const Real sum = d2 + 2 * det;
  const Real root = std::abs(d) * std::sqrt(d2 + 4 * det);
  const Real l1 = std::sqrt((sum + root) / 2);
  const Real l2 = det / l1;
  return {l1, l2};
}

Real g_func(Real x) {
  if (!(x >= 0)) {
    throw InvalidParameter("g_func: argument must be non-negative");
  }
  if (x == 0) return 0;
  if (x < 1) {
    return ((x + 1) * std::log1p(x) - x * std::log(x)) / kLn2;
  }
  // (x+1) log(x+1) - x log x = log(x+1) + x log(1 + 1/x)
  return (std::log1p(x) + x * std::log1p(1 / x)) / kLn2;
}

Real mode_entropy(Real lambda, Real tolerance) {
  if (lambda < 1 - tolerance) {
    throw NumericError("symplectic eigenvalue " +
                       std::to_string(static_cast<double>(lambda)) +
                       " below the vacuum limit");
  }
  return g_func(std::max<Real>((lambda - 1) / 2, 0));
}

Real von_neumann_entropy(const SymplecticSpectrum& spectrum) {
  Real s = 0;
  for (Real lambda : spectrum.eigenvalues) {
    s += mode_entropy(lambda, spectrum.tolerance);
  }
  return s;
}

Real von_neumann_entropy(const GaussianState& state) {
  return von_neumann_entropy(symplectic_eigenvalues(state));
}

bool is_physical(const GaussianState& state) {
  return is_physical(state, physicality_tolerance(state));
}

bool is_physical(const GaussianState& state, Real tolerance) {
  if (state.modes() == 0) return true;
  try {
    const auto spectrum = symplectic_eigenvalues(state);
    return spectrum.eigenvalues.back() >= 1 - tolerance;
  } catch (const NumericError&) {
    return false;
  }
}

void require_physical(const GaussianState& state, std::string_view stage) {
  if (!is_physical(state)) {
    throw NumericError("unphysical covariance after stage '" +
                       std::string(stage) + "':\n" + describe(state.cov()));
  }
}

}  // namespace cvmdi
