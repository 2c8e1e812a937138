#pragma once

#include <optional>
#include <vector>

#include "cvmdi/gaussian_state.hpp"
#include "cvmdi/mdi_circuit.hpp"
#include "cvmdi/optimize.hpp"
#include "cvmdi/protocol_params.hpp"
#include "cvmdi/symplectic.hpp"

namespace cvmdi {

/// Holevo information chi(B:E) for reverse reconciliation together with the
/// symplectic eigenvalues it was computed from.
struct HolevoBound {
  Real value = 0;
  std::vector<Real> lambdas;
  bool clamped = false;
};

/// Values within this distance below zero are clamped to 0 and flagged;
/// anything more negative is a NumericError.
inline constexpr Real kHolevoClampTolerance = 1e-9L;

/// One evaluated operating point, in bits per channel use.
struct KeyRateReport {
  Protocol protocol = Protocol::Squeezed;
  double mutual_info = 0;
  double holevo = 0;
  double key_rate = 0;
  std::vector<double> lambdas;
  double gain_used = 0;
  TwoModeCov reduced;  // Alice's mode and Bob's measured mode
  double chi_n = 0;
  bool holevo_clamped = false;
};

/// 1/2 log2(ab / (ab - c^2)): homodyne on both sides.
Real mutual_information_homodyne(const TwoModeCov& tm);

/// log2((a+1)(b+1) / ((a+1)(b+1) - c^2)): heterodyne on both sides.
Real mutual_information_heterodyne(const TwoModeCov& tm);

/// G((l1-1)/2) + G((l2-1)/2) - G((l3-1)/2), l3^2 = a (a - c^2/b).
HolevoBound holevo_rr_squeezed(const TwoModeCov& tm);

/// As above with heterodyne conditioning, l3 = a - c^2/(b+1).
HolevoBound holevo_rr_coherent(const TwoModeCov& tm);

/// 1/2 log2(a (b + chi) / (B + a chi)): homodyne mutual information after
/// Bob's trusted noise of variance chi_N, from the pre-noise (A3, B4) form.
Real mutual_information_modified(const TwoModeCov& tm, Real chi_n);

/// Trusted-noise variant in closed form, from the pre-noise (A3, B4) form
/// and chi_N = (1 - T_R) N_R / T_R (the only combination that matters).
/// lambda1,2 are those of (A3, B4), which Eve purifies. The conditional
/// state of (A3, N1, N3) given x of B5 has lambda5 = 1 and
///   lambda3^2 + lambda4^2 = (aB + b + chi A) / (b + chi),
///   lambda3^2 lambda4^2   = B (a + chi B) / (b + chi).
HolevoBound holevo_rr_modified(const TwoModeCov& tm, Real chi_n);

/// Generic-engine form on the (A3, B5, N1, N3) state: lambda1,2 are the
/// non-trivial symplectic eigenvalues of the whole state (equal to those of
/// (A3, B4), since the noise EPR pair is pure), lambda3..5 those of
/// (A3, N1, N3) conditioned on x of B5.
HolevoBound holevo_rr_modified(const GaussianState& a3_b5_n1_n3);

/// Generic-engine Holevo bound on an (A3, B4) state:
/// S(A3 B4) - S(A3 | B4 measured), using symplectic_eigenvalues and
/// homodyne_condition / heterodyne_condition.
Real holevo_generic_homodyne(const GaussianState& a3_b4);
Real holevo_generic_heterodyne(const GaussianState& a3_b4);

/// Key rate at an explicit gain on a prebuilt circuit. `noise` only matters
/// for the modified protocol (absent means no added noise).
KeyRateReport evaluate_key_rate(const MdiCircuit& circuit,
                                const ProtocolParams& params,
                                const std::optional<AddedNoiseParams>& noise,
                                Real gain);

/// K = beta I(A:B) - chi(B:E), optimizing the gain when params.gain is unset.
KeyRateReport key_rate(const ProtocolParams& params,
                       const std::optional<AddedNoiseParams>& noise = {});

/// Initial gain bracket [0, 4 sqrt(2 / (eta T2))].
Real gain_bracket(const ProtocolParams& params);

/// Gain maximizing K: scan plus golden-section on the bracket (tolerance
/// 1e-6 in g). If the maximum sits on the upper edge, the bracket is widened
/// four-fold once; a second edge hit is a NumericError.
Maximum optimal_gain_search(const MdiCircuit& circuit,
                            const ProtocolParams& params,
                            const std::optional<AddedNoiseParams>& noise);
Real optimal_gain(const ProtocolParams& params,
                  const std::optional<AddedNoiseParams>& noise = {});

}  // namespace cvmdi
