#include "cvmdi/mdi_circuit.hpp"

#include <cmath>
#include <string>

#include "cvmdi/errors.hpp"
#include "cvmdi/key_rate.hpp"

namespace cvmdi {
namespace {

// Relay-stage slots.
constexpr std::size_t kA3 = 0;
constexpr std::size_t kAlicePath = 1;  // A2 -> A1 -> C -> C2
constexpr std::size_t kB3 = 2;
constexpr std::size_t kBobPath = 3;  // B2 -> B1 -> D -> D2

// Couples `path` to a fresh thermal mode of variance `variance` on a
// beamsplitter of transmissivity t.
GaussianState attach_thermal(const GaussianState& state, std::size_t path,
                             Real variance, Real t) {
  const GaussianState widened = tensor(state, thermal_state(variance));
  return apply_beamsplitter(widened, path, widened.modes() - 1, t);
}

// Lossless channel: the cloner's added variance (1 - t) W = t eps tends to eps
// as t -> 1, so the excess noise survives as classical Gaussian noise.
GaussianState add_excess_noise(const GaussianState& state, std::size_t path,
                               Real eps) {
  Matrix cov = state.cov();
  cov(2 * path, 2 * path) += eps;
  cov(2 * path + 1, 2 * path + 1) += eps;
  return GaussianState(std::move(cov), state.mean());
}

}  // namespace

Real channel_transmittance(double length_km, double alpha_db_per_km) {
  if (!(length_km >= 0) || !(alpha_db_per_km >= 0)) {
    throw InvalidParameter("channel length and loss must be >= 0");
  }
  return std::pow(10.0L, -static_cast<Real>(alpha_db_per_km) * length_km / 10);
}

std::optional<Real> cloner_variance(Real t, Real eps) {
  if (!(t > 0)) {
    throw InvalidParameter("cloner: transmittance must be > 0");
  }
  if (!(eps >= 0)) {
    throw InvalidParameter("cloner: excess noise must be >= 0");
  }
  if (t >= 1) return std::nullopt;
  return 1 + t * eps / (1 - t);
}

std::optional<Real> detector_ancilla_variance(Real eta, Real v_el) {
  if (!(eta > 0 && eta <= 1) || !(v_el >= 0)) {
    throw InvalidParameter("detector: need eta in (0, 1] and v_el >= 0");
  }
  if (eta >= 1) {
    if (v_el > 0) {
      throw InvalidParameter("detector: electronic noise requires eta < 1");
    }
    return std::nullopt;
  }
  return 1 + v_el / (1 - eta);
}

MdiCircuit::MdiCircuit(const ProtocolParams& params) {
  params.validate();
  GaussianState state =
      tensor(epr_state(params.v_a), epr_state(params.v_b));  // A3 A2 B3 B2

  const Real t1 = params.t1();
  const Real t2 = params.t2();
  if (auto w1 = cloner_variance(t1, params.eps1)) {
    state = attach_thermal(state, kAlicePath, *w1, t1);
  } else if (params.eps1 > 0) {
    state = add_excess_noise(state, kAlicePath, params.eps1);
  }
  if (auto w2 = cloner_variance(t2, params.eps2)) {
    state = attach_thermal(state, kBobPath, *w2, t2);
  } else if (params.eps2 > 0) {
    state = add_excess_noise(state, kBobPath, params.eps2);
  }

  // 50:50 mixing: C = (A1 - B1)/sqrt2 lands on the Alice path,
  // D = (A1 + B1)/sqrt2 on the Bob path.
  state = apply_beamsplitter(state, kBobPath, kAlicePath, 0.5L);

  if (auto v = detector_ancilla_variance(params.eta, params.v_el)) {
    state = attach_thermal(state, kAlicePath, *v, params.eta);
    state = attach_thermal(state, kBobPath, *v, params.eta);
  }
  require_physical(state, "relay");
  relay_ = std::move(state);
}

Matrix MdiCircuit::feedforward_map(Real gain) const {
  Matrix map = Matrix::Zero(4, relay_.cov().cols());
  map(0, 2 * kA3) = 1;
  map(1, 2 * kA3 + 1) = 1;
  map(2, 2 * kB3) = 1;
  map(2, 2 * kAlicePath) = gain;
  map(3, 2 * kB3 + 1) = 1;
  map(3, 2 * kBobPath + 1) = gain;
  return map;
}

GaussianState MdiCircuit::alice_bob(Real gain) const {
  return linear_feedforward(relay_, feedforward_map(gain));
}

GaussianState add_trusted_noise(const GaussianState& alice_bob,
                                const AddedNoiseParams& noise) {
  noise.validate();
  if (alice_bob.modes() != 2) {
    throw InvalidArgument("add_trusted_noise expects the (A3, B4) state");
  }
  // A3 B4 N1 N2 -> A3 B5 N1 N3
  const GaussianState widened = tensor(alice_bob, epr_state(noise.n_r));
  return apply_beamsplitter(widened, 1, 3, noise.t_r);
}

GaussianState build_mdi_state(const ProtocolParams& params,
                              const std::optional<AddedNoiseParams>& noise) {
  const MdiCircuit circuit(params);
  const Real gain = params.gain ? static_cast<Real>(*params.gain)
                                : optimal_gain(params, noise);
  GaussianState kept = circuit.alice_bob(gain);
  if (noise) kept = add_trusted_noise(kept, *noise);
  require_physical(kept, noise ? "added noise" : "feedforward");
  return kept;
}

TwoModeCov extract_two_mode(const GaussianState& state) {
  if (state.modes() < 2) {
    throw InvalidArgument("extract_two_mode needs at least two modes");
  }
  const Matrix m = state.cov().topLeftCorner(4, 4);
  const Real scale = m.cwiseAbs().maxCoeff();
  const Real tol = 1e-8L * scale;
  const TwoModeCov tm{m(0, 0), m(2, 2), m(0, 2)};
  const Matrix expected = tm.to_state().cov();
  const Real deviation = (m - expected).cwiseAbs().maxCoeff();
  if (deviation > tol) {
    throw StructuralError("extract_two_mode: covariance departs from the "
                          "a I / b I / c sz form by " +
                          std::to_string(static_cast<double>(deviation)));
  }
  return tm;
}

}  // namespace cvmdi
