#include "cvmdi/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "cvmdi/errors.hpp"
#include "cvmdi/mdi_circuit.hpp"
#include "cvmdi/optimize.hpp"

namespace cvmdi {
namespace {

constexpr int kChiGeometricNodes = 25;
constexpr double kChiGridFloor = 0.01;

std::vector<double> chi_grid() {
  std::vector<double> nodes{0.0};
  const double ratio =
      std::pow(kChiNUpper / kChiGridFloor, 1.0 / (kChiGeometricNodes - 1));
  for (int i = 0; i < kChiGeometricNodes; ++i) {
    nodes.push_back(kChiGridFloor * std::pow(ratio, i));
  }
  nodes.back() = kChiNUpper;
  return nodes;
}

// K with gain optimized (or fixed by params.gain) at a given chi_N.
struct ChiEvaluator {
  const MdiCircuit& circuit;
  const ProtocolParams& params;

  KeyRateReport report(double chi_n) const {
    const std::optional<AddedNoiseParams> noise =
        AddedNoiseParams::from_chi_n(chi_n);
    const Real gain = params.gain ? static_cast<Real>(*params.gain)
                                  : optimal_gain_search(circuit, params, noise).argmax;
    return evaluate_key_rate(circuit, params, noise, gain);
  }
  Real key(double chi_n) const {
    const std::optional<AddedNoiseParams> noise =
        AddedNoiseParams::from_chi_n(chi_n);
    if (params.gain) {
      return evaluate_key_rate(circuit, params, noise, *params.gain).key_rate;
    }
    return optimal_gain_search(circuit, params, noise).value;
  }
};

ProtocolParams at_length(const ProtocolParams& base, DistanceMode mode,
                         double length) {
  ProtocolParams p = base;
  p.l_ac = length;
  if (mode == DistanceMode::Symmetric) p.l_bc = length;
  return p;
}

}  // namespace

NoiseOptimum optimize_added_noise(const ProtocolParams& params_in) {
  ProtocolParams params = params_in;
  params.protocol = Protocol::SqueezedModified;
  const MdiCircuit circuit(params);
  const ChiEvaluator eval{circuit, params};

  NoiseOptimum out;
  const std::vector<double> nodes = chi_grid();
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double k = static_cast<double>(eval.key(nodes[i]));
    out.grid.emplace_back(nodes[i], k);
    if (k > out.grid[best].second) best = i;
  }

  const double lo = nodes[best == 0 ? 0 : best - 1];
  const double hi = nodes[std::min(best + 1, nodes.size() - 1)];
  const Maximum refined = golden_section_maximize(
      [&](Real chi) { return eval.key(static_cast<double>(chi)); }, lo, hi,
      kChiNTolerance);

  double chi_star = static_cast<double>(refined.argmax);
  if (out.grid[best].second > static_cast<double>(refined.value)) {
    chi_star = nodes[best];
    out.grid_fallback = true;
  }
  out.chi_n = chi_star;
  out.report = eval.report(chi_star);
  return out;
}

KeyRateReport evaluate_point(const ProtocolParams& params,
                             const NoiseSetting& noise) {
  if (params.protocol != Protocol::SqueezedModified) return key_rate(params);
  switch (noise.policy) {
    case NoisePolicy::None:
      return key_rate(params, AddedNoiseParams{});
    case NoisePolicy::Fixed:
      return key_rate(params, noise.fixed);
    case NoisePolicy::Optimized:
      return optimize_added_noise(params).report;
  }
  return key_rate(params);
}

MaxDistanceResult max_distance(const ProtocolParams& base,
                               const MaxDistanceOptions& options) {
  if (!(options.tol_km > 0) || !(options.scan_step_km > 0) ||
      !(options.scan_limit_km > 0) || !(options.key_floor >= 0)) {
    throw InvalidParameter(
        "max_distance: tolerance, step and limit must be > 0, key_floor >= 0");
  }
  base.validate();

  const auto positive_at = [&](double length) {
    return evaluate_point(at_length(base, options.mode, length), options.noise)
               .key_rate > options.key_floor;
  };
  const auto total_at = [&](double length) {
    const ProtocolParams p = at_length(base, options.mode, length);
    return p.l_ac + p.l_bc;
  };

  MaxDistanceResult out;
  if (!positive_at(0)) {
    out.zero_at_origin = true;
    return out;
  }

  double last_positive = 0;
  double first_nonpositive = -1;
  for (double length = options.scan_step_km;
       length <= options.scan_limit_km + 1e-9;
       length += options.scan_step_km) {
    if (positive_at(length)) {
      last_positive = length;
    } else {
      first_nonpositive = length;
      break;
    }
  }
  if (first_nonpositive < 0) {
    out.distance_km = last_positive;
    out.total_km = total_at(last_positive);
    out.hit_scan_limit = true;
    return out;
  }

  const Real l_star = bisect_last_positive(
      [&](Real length) { return positive_at(static_cast<double>(length)); },
      last_positive, first_nonpositive, options.tol_km);
  out.distance_km = static_cast<double>(l_star);
  out.total_km = total_at(out.distance_km);
  return out;
}

std::string_view to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::DistanceSymmetric:
      return "distance-symmetric";
    case SweepVariable::LacFixedLbc:
      return "L_AC-with-fixed-L_BC";
    case SweepVariable::ChiN:
      return "chi_N";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  if (!(step > 0)) throw InvalidParameter("sweep: step must be > 0");
  if (!(start <= stop)) throw InvalidParameter("sweep: start must be <= stop");
  if (!(start >= 0)) throw InvalidParameter("sweep: start must be >= 0");
  base.validate();
}

std::vector<double> SweepSpec::grid() const {
  validate();
  std::vector<double> nodes;
  // Index-based nodes avoid accumulating the step's rounding error.
  const auto count =
      static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  nodes.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) nodes.push_back(start + step * i);
  return nodes;
}

SweepResult sweep(const SweepSpec& spec) {
  SweepResult out;
  out.spec = spec;
  for (double x : spec.grid()) {
    SweepRow row;
    row.x = x;
    try {
      ProtocolParams p = spec.base;
      NoiseSetting noise = spec.noise;
      switch (spec.variable) {
        case SweepVariable::DistanceSymmetric:
          p.l_ac = p.l_bc = x;
          break;
        case SweepVariable::LacFixedLbc:
          p.l_ac = x;
          break;
        case SweepVariable::ChiN:
          p.protocol = Protocol::SqueezedModified;
          noise = NoiseSetting::fixed_chi_n(x);
          break;
      }
      row.report = evaluate_point(p, noise);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string_view to_string(Geometry geometry) {
  switch (geometry) {
    case Geometry::Symmetric:
      return "symmetric";
    case Geometry::Asymmetric:
      return "asymmetric";
    case Geometry::MostAsymmetric:
      return "most-asymmetric";
  }
  return "unknown";
}

std::optional<Geometry> parse_geometry(std::string_view name) {
  if (name == "symmetric") return Geometry::Symmetric;
  if (name == "asymmetric") return Geometry::Asymmetric;
  if (name == "most-asymmetric") return Geometry::MostAsymmetric;
  return std::nullopt;
}

DetectorModel perfect_detector() { return {"perfect", 1.0, 0.0}; }
DetectorModel practical_detector() { return {"practical", 0.9, 0.015}; }

std::optional<DetectorModel> detector_preset(std::string_view name) {
  if (name == "perfect") return perfect_detector();
  if (name == "practical") return practical_detector();
  return std::nullopt;
}

std::vector<CompareRow> compare_protocols(const CompareSpec& spec) {
  std::vector<double> l_bc_nodes;
  switch (spec.geometry) {
    case Geometry::Symmetric:
      l_bc_nodes = {0.0};  // unused: L_BC tracks L_AC
      break;
    case Geometry::Asymmetric:
      l_bc_nodes = spec.l_bc_grid;
      break;
    case Geometry::MostAsymmetric:
      l_bc_nodes = {0.0};
      break;
  }
  if (l_bc_nodes.empty()) {
    throw InvalidParameter("compare_protocols: empty L_BC grid");
  }

  std::vector<CompareRow> rows;
  for (double l_bc : l_bc_nodes) {
    for (Protocol protocol : spec.protocols) {
      for (const DetectorModel& detector : spec.detectors) {
        ProtocolParams p = spec.base;
        p.protocol = protocol;
        p.eta = detector.eta;
        p.v_el = detector.v_el;
        p.l_bc = l_bc;
        MaxDistanceOptions options;
        options.mode = spec.geometry == Geometry::Symmetric
                           ? DistanceMode::Symmetric
                           : DistanceMode::FixedLbc;
        options.noise = protocol == Protocol::SqueezedModified
                            ? NoiseSetting::optimized()
                            : NoiseSetting::none();
        options.tol_km = spec.tol_km;
        CompareRow row;
        row.geometry = spec.geometry;
        if (spec.geometry != Geometry::Symmetric) row.l_bc = l_bc;
        row.protocol = protocol;
        row.detector = detector.name;
        row.result = max_distance(p, options);
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

}  // namespace cvmdi
