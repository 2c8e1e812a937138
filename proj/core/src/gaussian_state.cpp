#include "cvmdi/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvmdi/errors.hpp"

namespace cvmdi {
namespace {

void require_mode(const GaussianState& state, std::size_t mode,
                  const char* what) {
  if (mode >= state.modes()) {
    throw InvalidArgument(std::string(what) + ": mode index " +
                          std::to_string(mode) + " out of range for " +
                          std::to_string(state.modes()) + "-mode state");
  }
}

std::vector<Eigen::Index> kept_rows(std::size_t modes, std::size_t dropped) {
  std::vector<Eigen::Index> rows;
  rows.reserve(2 * modes);
  for (std::size_t m = 0; m < modes; ++m) {
    if (m == dropped) continue;
    rows.push_back(static_cast<Eigen::Index>(2 * m));
    rows.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return rows;
}

}  // namespace

GaussianState::GaussianState(Matrix cov, Vector mean)
    : cov_(std::move(cov)), mean_(std::move(mean)) {
  if (cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0) {
    throw InvalidArgument("covariance must be square with even dimension");
  }
  if (mean_.size() != cov_.rows()) {
    throw InvalidArgument("mean vector length does not match covariance");
  }
  if (cov_.size() > 0) {
    const Real scale = std::max<Real>(cov_.cwiseAbs().maxCoeff(), 1);
    const Real asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-12L * scale) {
      throw InvalidArgument("covariance matrix is not symmetric");
    }
    // Remove round-off asymmetry so downstream factorizations see an exactly
    // symmetric matrix.
    cov_ = (cov_ + cov_.transpose()) / 2;
  }
}

GaussianState::GaussianState(Matrix cov)
    : GaussianState(cov, Vector::Zero(cov.rows())) {}

GaussianState GaussianState::vacuum(std::size_t modes) {
  const auto dim = static_cast<Eigen::Index>(2 * modes);
  return GaussianState(Matrix::Identity(dim, dim));
}

Matrix GaussianState::block(std::size_t i, std::size_t j) const {
  require_mode(*this, i, "block");
  require_mode(*this, j, "block");
  return cov_.block(static_cast<Eigen::Index>(2 * i),
                    static_cast<Eigen::Index>(2 * j), 2, 2);
}

GaussianState epr_state(Real v) {
  if (!(v >= 1)) {
    throw InvalidParameter("EPR variance must be >= 1, got " +
                           std::to_string(static_cast<double>(v)));
  }
  // sqrt(v^2 - 1) = sqrt((v-1)(v+1)) keeps digits when v is close to 1.
  const Real c = std::sqrt((v - 1) * (v + 1));
  Matrix cov = Matrix::Zero(4, 4);
  cov.diagonal().setConstant(v);
  cov(0, 2) = cov(2, 0) = c;
  cov(1, 3) = cov(3, 1) = -c;
  return GaussianState(std::move(cov));
}

GaussianState thermal_state(Real v) {
  if (!(v >= 1)) {
    throw InvalidParameter("thermal variance must be >= 1, got " +
                           std::to_string(static_cast<double>(v)));
  }
  return GaussianState(Matrix::Identity(2, 2) * v);
}

GaussianState apply_beamsplitter(const GaussianState& state, std::size_t i,
                                 std::size_t j, Real t) {
  if (!(t >= 0 && t <= 1)) {
    throw InvalidParameter("beamsplitter transmissivity must lie in [0, 1]");
  }
  require_mode(state, i, "apply_beamsplitter");
  require_mode(state, j, "apply_beamsplitter");
  if (i == j) {
    throw InvalidArgument("apply_beamsplitter: modes must be distinct");
  }
  const Real st = std::sqrt(t);
  const Real sr = std::sqrt(1 - t);

  // S acts only on rows/columns of modes i and j; apply it as a pair of row
  // rotations followed by the same column rotations.
  Matrix cov = state.cov();
  Vector mean = state.mean();
  for (int q = 0; q < 2; ++q) {
    const auto ri = static_cast<Eigen::Index>(2 * i + q);
    const auto rj = static_cast<Eigen::Index>(2 * j + q);
    const auto row_i = cov.row(ri).eval();
    const auto row_j = cov.row(rj).eval();
    cov.row(ri) = st * row_i + sr * row_j;
    cov.row(rj) = -sr * row_i + st * row_j;
    const Real mi = mean(ri);
    const Real mj = mean(rj);
    mean(ri) = st * mi + sr * mj;
    mean(rj) = -sr * mi + st * mj;
  }
  for (int q = 0; q < 2; ++q) {
    const auto ci = static_cast<Eigen::Index>(2 * i + q);
    const auto cj = static_cast<Eigen::Index>(2 * j + q);
    const auto col_i = cov.col(ci).eval();
    const auto col_j = cov.col(cj).eval();
    cov.col(ci) = st * col_i + sr * col_j;
    cov.col(cj) = -sr * col_i + st * col_j;
  }
  return GaussianState(std::move(cov), std::move(mean));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const Eigen::Index na = a.cov().rows();
  const Eigen::Index nb = b.cov().rows();
  Matrix cov = Matrix::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  Vector mean(na + nb);
  mean << a.mean(), b.mean();
  return GaussianState(std::move(cov), std::move(mean));
}

GaussianState partial_trace(const GaussianState& state,
                            std::span<const std::size_t> keep) {
  std::vector<Eigen::Index> rows;
  rows.reserve(2 * keep.size());
  std::vector<bool> seen(state.modes(), false);
  for (std::size_t m : keep) {
    require_mode(state, m, "partial_trace");
    if (seen[m]) {
      throw InvalidArgument("partial_trace: mode " + std::to_string(m) +
                            " listed twice");
    }
    seen[m] = true;
    rows.push_back(static_cast<Eigen::Index>(2 * m));
    rows.push_back(static_cast<Eigen::Index>(2 * m + 1));
  }
  return GaussianState(state.cov()(rows, rows), state.mean()(rows));
}

GaussianState partial_trace(const GaussianState& state,
                            std::initializer_list<std::size_t> keep) {
  return partial_trace(state, std::span<const std::size_t>(keep.begin(), keep.size()));
}

GaussianState homodyne_condition(const GaussianState& state,
                                 std::size_t measured, Quadrature quadrature) {
  if (state.modes() < 2) {
    throw InvalidArgument("homodyne_condition needs at least two modes");
  }
  require_mode(state, measured, "homodyne_condition");
  const auto rows = kept_rows(state.modes(), measured);
  const auto q = static_cast<Eigen::Index>(
      2 * measured + (quadrature == Quadrature::X ? 0 : 1));
  const Real variance = state.cov()(q, q);
  if (!(variance > 0)) {
    throw NumericError("homodyne_condition: measured quadrature variance is "
                       "not positive");
  }
  const Vector sigma = state.cov()(rows, q);
  Matrix cov = state.cov()(rows, rows) - sigma * sigma.transpose() / variance;
  return GaussianState(std::move(cov), state.mean()(rows));
}

GaussianState heterodyne_condition(const GaussianState& state,
                                   std::size_t measured) {
  if (state.modes() < 2) {
    throw InvalidArgument("heterodyne_condition needs at least two modes");
  }
  require_mode(state, measured, "heterodyne_condition");
  const auto rows = kept_rows(state.modes(), measured);
  const auto m = static_cast<Eigen::Index>(2 * measured);
  const Matrix shifted =
      state.cov().block(m, m, 2, 2) + Matrix::Identity(2, 2);
  const Real det = shifted(0, 0) * shifted(1, 1) - shifted(0, 1) * shifted(1, 0);
  if (!(det > 0) || !(shifted(0, 0) > 0)) {
    throw NumericError("heterodyne_condition: singular measured block");
  }
  Matrix inverse(2, 2);
  inverse << shifted(1, 1), -shifted(0, 1), -shifted(1, 0), shifted(0, 0);
  inverse /= det;
  const Matrix sigma = state.cov()(rows, Eigen::seqN(m, 2));
  Matrix cov = state.cov()(rows, rows) - sigma * inverse * sigma.transpose();
  return GaussianState(std::move(cov), state.mean()(rows));
}

GaussianState linear_feedforward(const GaussianState& state, const Matrix& map) {
  if (map.cols() != state.cov().rows()) {
    throw InvalidArgument("linear_feedforward: map has " +
                          std::to_string(map.cols()) + " columns, state has " +
                          std::to_string(state.cov().rows()) + " quadratures");
  }
  if (map.rows() % 2 != 0 || map.rows() == 0) {
    throw InvalidArgument("linear_feedforward: map must have an even, "
                          "non-zero number of rows");
  }
  return GaussianState(map * state.cov() * map.transpose(), map * state.mean());
}

}  // namespace cvmdi
