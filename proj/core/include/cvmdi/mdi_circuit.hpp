#pragma once

#include <optional>

#include "cvmdi/gaussian_state.hpp"
#include "cvmdi/protocol_params.hpp"
#include "cvmdi/symplectic.hpp"

namespace cvmdi {

/// Fiber transmittance 10^(-alpha L / 10).
Real channel_transmittance(double length_km, double alpha_db_per_km);

/// Variance W of the thermal mode injected by an entangling cloner on a
/// channel of transmittance t with input-referred excess noise eps:
///   W = 1 + t eps / (1 - t),
/// so the channel output is t (V + (1 - t)/t + eps). Returns nullopt for
/// t >= 1, where no mode is inserted; the circuit then adds eps to the line
/// mode directly (the t -> 1 limit of the cloner).
std::optional<Real> cloner_variance(Real t, Real eps);

/// Thermal ancilla variance 1 + v_el / (1 - eta) modeling a detector of
/// efficiency eta; nullopt for eta = 1 (no ancilla).
std::optional<Real> detector_ancilla_variance(Real eta, Real v_el);

/// The entanglement-based circuit up to Charlie's detectors, cached so that
/// Bob's displacement gain can be varied cheaply.
///
/// Relay-stage mode layout: A3, C2, B3, D2, followed by the environment
/// modes actually inserted (E1, E2, F0, I0 in that order, each only when its
/// stage is non-trivial).
class MdiCircuit {
 public:
  explicit MdiCircuit(const ProtocolParams& params);

  const GaussianState& relay_state() const { return relay_; }

  /// Feedforward map selecting (A3, B4) with
  ///   B4x = B3x + g C2x,   B4p = B3p + g D2p.
  Matrix feedforward_map(Real gain) const;

  /// Kept Alice-Bob state (A3, B4) at the given gain.
  GaussianState alice_bob(Real gain) const;

 private:
  GaussianState relay_;
};

/// Bob's trusted added noise applied to a kept (A3, B4) state; returns
/// (A3, B5, N1, N3).
GaussianState add_trusted_noise(const GaussianState& alice_bob,
                                const AddedNoiseParams& noise);

/// Assembles the whole circuit. The gain is params.gain when set, otherwise
/// optimal_gain(params, noise). Returns (A3, B4) without noise and
/// (A3, B5, N1, N3) with it. Physicality is checked after the relay stage
/// and on the result.
GaussianState build_mdi_state(const ProtocolParams& params,
                              const std::optional<AddedNoiseParams>& noise = {});

/// Reads (a, b, c) from modes 0 and 1 of `state`. Throws StructuralError when
/// the 4x4 block departs from the a I2 / b I2 / c sz form by more than
/// 1e-8 of its largest entry.
TwoModeCov extract_two_mode(const GaussianState& state);

}  // namespace cvmdi
