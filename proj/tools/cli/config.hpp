#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cvmdi/analysis.hpp"

namespace cvmdi::cli {

using Json = nlohmann::ordered_json;

enum class OutputFormat { Csv, Json };

struct SweepGrid {
  SweepVariable variable = SweepVariable::DistanceSymmetric;
  double start = 0;
  double stop = 0;
  double step = 1;
};

/// Fully resolved run configuration (defaults, then file, then flags).
struct RunConfig {
  ProtocolParams params;
  Geometry geometry = Geometry::Symmetric;
  std::string detector = "perfect";  // preset name, or "custom"
  std::string variance = "ideal";    // preset name, or "custom"
  std::optional<double> chi_n;       // unset: optimized (modified protocol only)
  std::optional<SweepGrid> sweep;
  std::vector<double> l_bc_grid;     // compare, asymmetric geometry
  double tol_km = 0.05;
  OutputFormat format = OutputFormat::Csv;
  std::string out;                   // empty: standard output
  int precision = 9;
};

/// Keys accepted in a config file (and produced by flag overrides):
///   protocol, geometry, detector, eta, v_el, variance, v_a, v_b, l_ac, l_bc,
///   alpha, eps1, eps2, beta, gain, chi_n, sweep{variable,start,stop,step},
///   l_bc_grid, tol_km, format, out, precision.
/// Unknown keys and wrongly typed values throw InvalidParameter naming the key.
Json load_config_file(const std::string& path);

/// Overlays `overrides` on `base` key by key (nested objects merge).
Json merge_config(Json base, const Json& overrides);

/// Validates every field and applies presets and geometry rules.
RunConfig resolve_config(const Json& layered);

/// The resolved configuration as recorded in output provenance.
Json to_json(const RunConfig& config);

}  // namespace cvmdi::cli
