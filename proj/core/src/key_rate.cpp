#include "cvmdi/key_rate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cvmdi/errors.hpp"

namespace cvmdi {
namespace {

constexpr Real kLn2 = std::numbers::ln2_v<Real>;
constexpr int kGainScanPoints = 41;
constexpr Real kGainTolerance = 1e-6L;

HolevoBound finish(Real raw, std::vector<Real> lambdas) {
  HolevoBound out;
  out.lambdas = std::move(lambdas);
  if (raw < -kHolevoClampTolerance) {
    throw NumericError("Holevo bound is negative (" +
                       std::to_string(static_cast<double>(raw)) + ")");
  }
  if (raw < 0) {
    out.value = 0;
    out.clamped = true;
  } else {
    out.value = raw;
  }
  return out;
}

void require_positive_det(const TwoModeCov& tm, Real det, const char* what) {
  if (!(det > 0) || !(tm.a > 0) || !(tm.b > 0)) {
    throw NumericError(std::string(what) + ": ab - c^2 is not positive");
  }
}

}  // namespace

// Both information formulas divide by B-based denominators rather than
// taking log1p(-c^2/...), which is ill-conditioned when c^2 -> ab.

Real mutual_information_homodyne(const TwoModeCov& tm) {
  const Real det = tm.det_invariant();
  require_positive_det(tm, det, "mutual_information_homodyne");
  return std::log2(tm.a * tm.b / det) / 2;
}

Real mutual_information_heterodyne(const TwoModeCov& tm) {
  const Real det = tm.det_invariant();
  require_positive_det(tm, det, "mutual_information_heterodyne");
  // (a+1)(b+1) - c^2 = B + a + b + 1
  return std::log2((tm.a + 1) * (tm.b + 1) / (det + tm.a + tm.b + 1));
}

Real mutual_information_modified(const TwoModeCov& tm, Real chi_n) {
  const Real det = tm.det_invariant();
  require_positive_det(tm, det, "mutual_information_modified");
  if (!(chi_n >= 0)) throw InvalidParameter("chi_N must be >= 0");
  // a (b + chi) - c^2 = B + a chi
  return std::log2(tm.a * (tm.b + chi_n) / (det + tm.a * chi_n)) / 2;
}

HolevoBound holevo_rr_squeezed(const TwoModeCov& tm) {
  const auto [l1, l2] = two_mode_symplectic(tm);
  // a (a - c^2/b) = a B / b
  const Real l3 = std::sqrt(tm.a * tm.det_invariant() / tm.b);
  const Real raw = mode_entropy(l1) + mode_entropy(l2) - mode_entropy(l3);
  return finish(raw, {l1, l2, l3});
}

HolevoBound holevo_rr_coherent(const TwoModeCov& tm) {
  const auto [l1, l2] = two_mode_symplectic(tm);
  // a - c^2/(b+1) = (B + a) / (b + 1)
  const Real l3 = (tm.det_invariant() + tm.a) / (tm.b + 1);
  const Real raw = mode_entropy(l1) + mode_entropy(l2) - mode_entropy(l3);
  return finish(raw, {l1, l2, l3});
}

HolevoBound holevo_rr_modified(const TwoModeCov& tm, Real chi_n) {
  if (!(chi_n >= 0)) throw InvalidParameter("chi_N must be >= 0");
  const auto [l1, l2] = two_mode_symplectic(tm);
  const Real a = tm.a;
  const Real b = tm.b;
  const Real det = tm.det_invariant();
  Real l3 = 0;
  Real l4 = 1;
  if (chi_n == 0) {
    l3 = std::sqrt(a * det / b);
  } else {
    // l3^2 + l4^2 = (aB + b + chi A) / (b + chi)
    // l3^2 l4^2   = B (a + chi B) / (b + chi)
    // (b + chi)^2 disc = (aB - b + chi (a-b)^2)^2
    //                    + 4 chi (a-b) (B^2 - B + b (a-b) + chi B (a-b))
    const Real d = a - b;
    const Real lead = a * det - b + chi_n * d * d;
    const Real num = std::max<Real>(
        lead * lead +
            4 * chi_n * d * (det * det - det + b * d + chi_n * det * d),
        0);
    const Real sum = a * det + b + chi_n * tm.sum_invariant();
    const Real l3_sq = (sum + std::sqrt(num)) / (2 * (b + chi_n));
    const Real prod = det * (a + chi_n * det) / (b + chi_n);
    l3 = std::sqrt(l3_sq);
    l4 = std::sqrt(prod / l3_sq);
  }
  const Real raw = mode_entropy(l1) + mode_entropy(l2) - mode_entropy(l3) -
                   mode_entropy(l4);
  return finish(raw, {l1, l2, l3, l4, 1});
}

HolevoBound holevo_rr_modified(const GaussianState& a3_b5_n1_n3) {
  if (a3_b5_n1_n3.modes() != 4) {
    throw InvalidArgument("holevo_rr_modified expects (A3, B5, N1, N3)");
  }
  const SymplecticSpectrum joint = symplectic_eigenvalues(a3_b5_n1_n3);
  const SymplecticSpectrum conditional = symplectic_eigenvalues(
      homodyne_condition(a3_b5_n1_n3, 1, Quadrature::X));
  std::vector<Real> lambdas{joint[0], joint[1]};
  Real raw = mode_entropy(joint[0], joint.tolerance) +
             mode_entropy(joint[1], joint.tolerance);
  for (Real l : conditional.eigenvalues) {
    raw -= mode_entropy(l, conditional.tolerance);
    lambdas.push_back(l);
  }
  return finish(raw, std::move(lambdas));
}

Real holevo_generic_homodyne(const GaussianState& a3_b4) {
  return von_neumann_entropy(a3_b4) -
         von_neumann_entropy(homodyne_condition(a3_b4, 1, Quadrature::X));
}

Real holevo_generic_heterodyne(const GaussianState& a3_b4) {
  return von_neumann_entropy(a3_b4) -
         von_neumann_entropy(heterodyne_condition(a3_b4, 1));
}

namespace {

struct Evaluation {
  KeyRateReport report;
  Real key = 0;
};

Evaluation evaluate(const MdiCircuit& circuit, const ProtocolParams& params,
                    const std::optional<AddedNoiseParams>& noise, Real gain) {
  KeyRateReport report;
  report.protocol = params.protocol;
  report.gain_used = static_cast<double>(gain);

  const GaussianState alice_bob = circuit.alice_bob(gain);
  const TwoModeCov tm = extract_two_mode(alice_bob);

  Real mutual = 0;
  HolevoBound holevo;
  switch (params.protocol) {
    case Protocol::Squeezed:
      report.reduced = tm;
      mutual = mutual_information_homodyne(tm);
      holevo = holevo_rr_squeezed(tm);
      break;
    case Protocol::Coherent:
      report.reduced = tm;
      mutual = mutual_information_heterodyne(tm);
      holevo = holevo_rr_coherent(tm);
      break;
    case Protocol::SqueezedModified: {
      const AddedNoiseParams added = noise.value_or(AddedNoiseParams{});
      const Real chi = added.chi_n();
      const Real t = added.t_r;
      // (A3, B5) of the realization: b' = T b + (1-T) N_R, c' = sqrt(T) c.
      report.reduced = {tm.a, t * tm.b + (1 - t) * added.n_r,
                        std::sqrt(t) * tm.c};
      report.chi_n = static_cast<double>(chi);
      mutual = mutual_information_modified(tm, chi);
      holevo = holevo_rr_modified(tm, chi);
      break;
    }
  }

  const Real key = params.beta * mutual - holevo.value;
  report.mutual_info = static_cast<double>(mutual);
  report.holevo = static_cast<double>(holevo.value);
  report.holevo_clamped = holevo.clamped;
  report.key_rate = static_cast<double>(key);
  for (Real l : holevo.lambdas) report.lambdas.push_back(static_cast<double>(l));
  return {std::move(report), key};
}

}  // namespace

KeyRateReport evaluate_key_rate(const MdiCircuit& circuit,
                                const ProtocolParams& params,
                                const std::optional<AddedNoiseParams>& noise,
                                Real gain) {
  return evaluate(circuit, params, noise, gain).report;
}

Real gain_bracket(const ProtocolParams& params) {
  return 4 * std::sqrt(2 / (static_cast<Real>(params.eta) * params.t2()));
}

Maximum optimal_gain_search(const MdiCircuit& circuit,
                            const ProtocolParams& params,
                            const std::optional<AddedNoiseParams>& noise) {
  const auto objective = [&](Real g) {
    return evaluate(circuit, params, noise, g).key;
  };
  Real hi = gain_bracket(params);
  for (int attempt = 0; attempt < 2; ++attempt) {
    const Maximum m =
        scan_then_golden(objective, 0, hi, kGainScanPoints, kGainTolerance);
    if (m.argmax < hi - kGainTolerance) return m;
    hi *= 4;
  }
  throw NumericError("optimal_gain: key rate still increasing at g = " +
                     std::to_string(static_cast<double>(hi / 4)));
}

Real optimal_gain(const ProtocolParams& params,
                  const std::optional<AddedNoiseParams>& noise) {
  const MdiCircuit circuit(params);
  return optimal_gain_search(circuit, params, noise).argmax;
}

KeyRateReport key_rate(const ProtocolParams& params,
                       const std::optional<AddedNoiseParams>& noise) {
  if (noise) noise->validate();
  const MdiCircuit circuit(params);
  const Real gain = params.gain ? static_cast<Real>(*params.gain)
                                : optimal_gain_search(circuit, params, noise).argmax;
  return evaluate_key_rate(circuit, params, noise, gain);
}

}  // namespace cvmdi
