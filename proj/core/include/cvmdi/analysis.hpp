#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cvmdi/key_rate.hpp"
#include "cvmdi/protocol_params.hpp"

namespace cvmdi {

inline constexpr std::string_view kVersion = "1.0.0";

// ---------------------------------------------------------------------------
// Trusted-noise handling

enum class NoisePolicy { None, Fixed, Optimized };

struct NoiseSetting {
  NoisePolicy policy = NoisePolicy::None;
  AddedNoiseParams fixed;  // used when policy == Fixed

  static NoiseSetting none() { return {}; }
  static NoiseSetting optimized() { return {NoisePolicy::Optimized, {}}; }
  static NoiseSetting fixed_chi_n(double chi_n) {
    return {NoisePolicy::Fixed, AddedNoiseParams::from_chi_n(chi_n)};
  }
};

/// Search range and tolerance for chi_N.
inline constexpr double kChiNUpper = 50.0;
inline constexpr double kChiNTolerance = 1e-4;

struct NoiseOptimum {
  double chi_n = 0;
  KeyRateReport report;
  std::vector<std::pair<double, double>> grid;  // (chi_N, K) verification grid
  bool grid_fallback = false;  // golden-section lost to the grid
};

/// Maximizes K over chi_N in [0, 50] for the modified protocol at the
/// geometry in `params` (the protocol field is overridden). A 26-node grid
/// (0 plus geometric nodes from 0.01 to 50) locates the basin, golden-section
/// refines it to 1e-4, and the better of the two is returned.
NoiseOptimum optimize_added_noise(const ProtocolParams& params);

/// K at one operating point under the given noise policy. Noise is applied
/// only for the modified protocol.
KeyRateReport evaluate_point(const ProtocolParams& params,
                             const NoiseSetting& noise);

// ---------------------------------------------------------------------------
// Maximal transmission distance

inline constexpr double kKeyFloor = 1e-12;

enum class DistanceMode {
  Symmetric,  // L_AC = L_BC = L; total L_AB = 2L
  FixedLbc,   // L_AC = L, L_BC from the base parameters
};

struct MaxDistanceOptions {
  DistanceMode mode = DistanceMode::Symmetric;
  NoiseSetting noise;
  double tol_km = 0.05;
  double scan_step_km = 1.0;
  double scan_limit_km = 1000.0;
  // K counts as positive only above this floor; below it the entropy
  // difference is dominated by rounding.
  double key_floor = kKeyFloor;
};

struct MaxDistanceResult {
  double distance_km = 0;  // the scanned length L
  double total_km = 0;     // L_AC + L_BC at L
  bool zero_at_origin = false;
  bool hit_scan_limit = false;
};

/// Largest L with K(L) > key_floor: forward scan in scan_step_km increments, then
/// bisection down to tol_km. K <= 0 at L = 0 yields a zero result with
/// zero_at_origin set.
MaxDistanceResult max_distance(const ProtocolParams& base,
                               const MaxDistanceOptions& options);

// ---------------------------------------------------------------------------
// Sweeps

enum class SweepVariable { DistanceSymmetric, LacFixedLbc, ChiN };

std::string_view to_string(SweepVariable variable);

struct SweepSpec {
  SweepVariable variable = SweepVariable::DistanceSymmetric;
  double start = 0;
  double stop = 0;
  double step = 1;
  ProtocolParams base;
  NoiseSetting noise;

  void validate() const;
  std::vector<double> grid() const;
};

struct SweepRow {
  double x = 0;
  std::optional<KeyRateReport> report;
  std::string error;  // non-empty when the point failed
};

struct SweepResult {
  SweepSpec spec;
  std::string tool_version = std::string(kVersion);
  std::vector<SweepRow> rows;
};

/// One report per grid node, x ascending. Gain (and chi_N under the
/// Optimized policy) are re-optimized per node; failing nodes become error
/// rows.
SweepResult sweep(const SweepSpec& spec);

// ---------------------------------------------------------------------------
// Protocol comparison

enum class Geometry { Symmetric, Asymmetric, MostAsymmetric };

std::string_view to_string(Geometry geometry);
std::optional<Geometry> parse_geometry(std::string_view name);

struct DetectorModel {
  std::string name;
  double eta = 1;
  double v_el = 0;
};

DetectorModel perfect_detector();
DetectorModel practical_detector();  // eta = 0.9, v_el = 0.015
std::optional<DetectorModel> detector_preset(std::string_view name);

struct CompareSpec {
  Geometry geometry = Geometry::Symmetric;
  std::vector<double> l_bc_grid{0.0};  // Asymmetric only
  ProtocolParams base;
  std::vector<DetectorModel> detectors{perfect_detector(), practical_detector()};
  std::vector<Protocol> protocols{Protocol::Coherent, Protocol::Squeezed,
                                  Protocol::SqueezedModified};
  double tol_km = 0.05;
};

struct CompareRow {
  Geometry geometry = Geometry::Symmetric;
  std::optional<double> l_bc;  // unset in the symmetric geometry
  Protocol protocol = Protocol::Squeezed;
  std::string detector;
  MaxDistanceResult result;
};

/// Maximal distances for every protocol x detector pair (and every L_BC
/// node in the asymmetric geometry). The modified protocol always uses the
/// Optimized noise policy.
std::vector<CompareRow> compare_protocols(const CompareSpec& spec);

}  // namespace cvmdi
