#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "cvmdi/types.hpp"

namespace cvmdi {

enum class Protocol { Squeezed, SqueezedModified, Coherent };

std::string_view to_string(Protocol protocol);
/// Accepts "squeezed", "squeezed-modified", "coherent".
std::optional<Protocol> parse_protocol(std::string_view name);

/// Full experiment configuration. Variances and noises are in shot-noise
/// units, lengths in km, fiber loss in dB/km.
struct ProtocolParams {
  double v_a = 1e5;
  double v_b = 1e5;
  double l_ac = 0;
  double l_bc = 0;
  double alpha = 0.2;
  double eps1 = 0.002;
  double eps2 = 0.002;
  double eta = 1;
  double v_el = 0;
  double beta = 1;
  std::optional<double> gain;  // unset: optimized per point
  Protocol protocol = Protocol::Squeezed;

  /// Channel transmittances T1 (Alice-Charlie) and T2 (Bob-Charlie).
  Real t1() const;
  Real t2() const;

  /// Throws InvalidParameter naming the first offending field.
  void validate() const;
};

/// Trusted noise on Bob's side: B4 mixed with half of an EPR(n_r) pair on a
/// beamsplitter of transmissivity t_r.
struct AddedNoiseParams {
  double t_r = 1;
  double n_r = 1;

  /// chi_N = (1 - T_R) N_R / T_R
  Real chi_n() const;
  void validate() const;

  /// Canonical realization of a target chi_N: T_R = 1/2, N_R = chi_N when
  /// chi_N >= 1; otherwise N_R = 1 (vacuum ancilla) and T_R = 1/(1 + chi_N).
  static AddedNoiseParams from_chi_n(double chi_n);
};

}  // namespace cvmdi
