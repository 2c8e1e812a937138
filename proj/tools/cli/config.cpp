#include "cli/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "cvmdi/errors.hpp"

namespace cvmdi::cli {
namespace {

constexpr std::array<std::string_view, 22> kTopKeys{
    "protocol", "geometry", "detector",  "eta",    "v_el",   "variance",
    "v_a",      "v_b",      "l_ac",      "l_bc",   "alpha",  "eps1",
    "eps2",     "beta",     "gain",      "chi_n",  "sweep",  "l_bc_grid",
    "tol_km",   "format",   "out",       "precision"};
constexpr std::array<std::string_view, 4> kSweepKeys{"variable", "start",
                                                      "stop", "step"};

constexpr double kIdealVariance = 1e5;
constexpr double kRealisticVariance = 5.04;

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw InvalidParameter(key + ": " + what);
}

template <std::size_t N>
void reject_unknown(const Json& object, const std::array<std::string_view, N>& known,
                    const std::string& prefix) {
  for (const auto& item : object.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      fail(prefix + item.key(), "unknown key");
    }
  }
}

double number(const Json& j, const std::string& key) {
  if (!j.is_number()) fail(key, "expected a number");
  return j.get<double>();
}

std::string text(const Json& j, const std::string& key) {
  if (!j.is_string()) fail(key, "expected a string");
  return j.get<std::string>();
}

// number, or the literal "optimize" (returns nullopt)
std::optional<double> number_or_optimize(const Json& j, const std::string& key) {
  if (j.is_string() && j.get<std::string>() == "optimize") return std::nullopt;
  if (!j.is_number()) fail(key, "expected a number or \"optimize\"");
  return j.get<double>();
}

bool has(const Json& j, const char* key) { return j.contains(key); }

std::optional<SweepVariable> parse_sweep_variable(std::string_view name) {
  for (SweepVariable v : {SweepVariable::DistanceSymmetric,
                          SweepVariable::LacFixedLbc, SweepVariable::ChiN}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

}  // namespace

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config", "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  Json j;
  try {
    j = Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    fail("config", std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) fail("config", "top level must be an object");
  reject_unknown(j, kTopKeys, "");
  if (has(j, "sweep")) {
    if (!j["sweep"].is_object()) fail("sweep", "expected an object");
    reject_unknown(j["sweep"], kSweepKeys, "sweep.");
  }
  return j;
}

Json merge_config(Json base, const Json& overrides) {
  for (const auto& item : overrides.items()) {
    if (item.value().is_object() && base.contains(item.key()) &&
        base[item.key()].is_object()) {
      base[item.key()] = merge_config(base[item.key()], item.value());
    } else {
      base[item.key()] = item.value();
    }
  }
  return base;
}

RunConfig resolve_config(const Json& j) {
  if (!j.is_object()) fail("config", "top level must be an object");
  reject_unknown(j, kTopKeys, "");
  RunConfig c;
  ProtocolParams& p = c.params;

  if (has(j, "protocol")) {
    const std::string name = text(j["protocol"], "protocol");
    const auto parsed = parse_protocol(name);
    if (!parsed) fail("protocol", "unknown protocol '" + name + "'");
    p.protocol = *parsed;
  }
  if (has(j, "geometry")) {
    const std::string name = text(j["geometry"], "geometry");
    const auto parsed = parse_geometry(name);
    if (!parsed) fail("geometry", "unknown geometry '" + name + "'");
    c.geometry = *parsed;
  }

  if (has(j, "detector")) c.detector = text(j["detector"], "detector");
  if (c.detector == "custom") {
    if (!has(j, "eta") || !has(j, "v_el")) {
      fail("detector", "custom needs explicit eta and v_el");
    }
  } else {
    const auto preset = detector_preset(c.detector);
    if (!preset) fail("detector", "unknown preset '" + c.detector + "'");
    p.eta = preset->eta;
    p.v_el = preset->v_el;
  }
  if (has(j, "eta") || has(j, "v_el")) {
    if (has(j, "eta")) p.eta = number(j["eta"], "eta");
    if (has(j, "v_el")) p.v_el = number(j["v_el"], "v_el");
    const auto preset = detector_preset(c.detector);
    if (!preset || p.eta != preset->eta || p.v_el != preset->v_el) {
      c.detector = "custom";
    }
  }

  if (has(j, "variance")) {
    const Json& v = j["variance"];
    if (v.is_string()) {
      c.variance = v.get<std::string>();
      if (c.variance == "ideal") {
        p.v_a = p.v_b = kIdealVariance;
      } else if (c.variance == "realistic") {
        p.v_a = p.v_b = kRealisticVariance;
      } else if (c.variance == "custom" && has(j, "v_a") && has(j, "v_b")) {
      } else {
        fail("variance",
             "expected ideal, realistic, a number, or custom with v_a and v_b");
      }
    } else {
      p.v_a = p.v_b = number(v, "variance");
      c.variance = "custom";
    }
  } else {
    p.v_a = p.v_b = kIdealVariance;
  }
  if (has(j, "v_a") || has(j, "v_b")) {
    if (has(j, "v_a")) p.v_a = number(j["v_a"], "v_a");
    if (has(j, "v_b")) p.v_b = number(j["v_b"], "v_b");
    const bool ideal = p.v_a == kIdealVariance && p.v_b == kIdealVariance;
    const bool realistic = p.v_a == kRealisticVariance && p.v_b == kRealisticVariance;
    if (!(c.variance == "ideal" && ideal) && !(c.variance == "realistic" && realistic)) {
      c.variance = "custom";
    }
  }

  if (has(j, "alpha")) p.alpha = number(j["alpha"], "alpha");
  if (has(j, "eps1")) p.eps1 = number(j["eps1"], "eps1");
  if (has(j, "eps2")) p.eps2 = number(j["eps2"], "eps2");
  if (has(j, "beta")) p.beta = number(j["beta"], "beta");
  if (has(j, "gain")) p.gain = number_or_optimize(j["gain"], "gain");

  if (has(j, "l_ac")) p.l_ac = number(j["l_ac"], "l_ac");
  const bool explicit_lbc = has(j, "l_bc");
  if (explicit_lbc) p.l_bc = number(j["l_bc"], "l_bc");
  switch (c.geometry) {
    case Geometry::Symmetric:
      if (explicit_lbc && p.l_bc != p.l_ac) {
        fail("l_bc", "must equal l_ac in the symmetric geometry");
      }
      p.l_bc = p.l_ac;
      break;
    case Geometry::MostAsymmetric:
      if (explicit_lbc && p.l_bc != 0) {
        fail("l_bc", "must be 0 in the most-asymmetric geometry");
      }
      p.l_bc = 0;
      break;
    case Geometry::Asymmetric:
      break;
  }

  if (has(j, "chi_n")) {
    c.chi_n = number_or_optimize(j["chi_n"], "chi_n");
    if (p.protocol != Protocol::SqueezedModified) {
      fail("chi_n", "only applies to the squeezed-modified protocol");
    }
    if (c.chi_n && !(*c.chi_n >= 0 && *c.chi_n <= kChiNUpper)) {
      fail("chi_n", "must lie in [0, 50]");
    }
  }

  if (has(j, "sweep")) {
    const Json& s = j["sweep"];
    if (!s.is_object()) fail("sweep", "expected an object");
    reject_unknown(s, kSweepKeys, "sweep.");
    SweepGrid g;
    g.variable = c.geometry == Geometry::Symmetric
                     ? SweepVariable::DistanceSymmetric
                     : SweepVariable::LacFixedLbc;
    if (has(s, "variable")) {
      const std::string name = text(s["variable"], "sweep.variable");
      const auto parsed = parse_sweep_variable(name);
      if (!parsed) fail("sweep.variable", "unknown variable '" + name + "'");
      g.variable = *parsed;
    }
    if (!has(s, "start") || !has(s, "stop")) {
      fail("sweep", "start and stop are required");
    }
    g.start = number(s["start"], "sweep.start");
    g.stop = number(s["stop"], "sweep.stop");
    if (has(s, "step")) g.step = number(s["step"], "sweep.step");
    if (!(g.step > 0)) fail("sweep.step", "must be > 0");
    if (!(g.start >= 0)) fail("sweep.start", "must be >= 0");
    if (!(g.stop >= g.start)) fail("sweep", "empty grid (stop < start)");
    if (g.variable == SweepVariable::DistanceSymmetric &&
        c.geometry != Geometry::Symmetric) {
      fail("sweep.variable", "distance-symmetric needs the symmetric geometry");
    }
    if (g.variable == SweepVariable::LacFixedLbc &&
        c.geometry == Geometry::Symmetric) {
      fail("sweep.variable", "L_AC-with-fixed-L_BC needs an asymmetric geometry");
    }
    if (g.variable == SweepVariable::ChiN) {
      if (p.protocol != Protocol::SqueezedModified) {
        fail("sweep.variable", "chi_N sweeps need the squeezed-modified protocol");
      }
      if (g.stop > kChiNUpper) fail("sweep.stop", "chi_N must be <= 50");
    }
    c.sweep = g;
  }

  if (has(j, "l_bc_grid")) {
    const Json& grid = j["l_bc_grid"];
    if (!grid.is_array() || grid.empty()) {
      fail("l_bc_grid", "expected a non-empty array of lengths");
    }
    for (const Json& v : grid) {
      const double l = number(v, "l_bc_grid");
      if (!(std::isfinite(l) && l >= 0)) fail("l_bc_grid", "lengths must be >= 0");
      c.l_bc_grid.push_back(l);
    }
    if (c.geometry != Geometry::Asymmetric) {
      fail("l_bc_grid", "only applies to the asymmetric geometry");
    }
  } else {
    c.l_bc_grid = {p.l_bc};
  }

  if (has(j, "tol_km")) {
    c.tol_km = number(j["tol_km"], "tol_km");
    if (!(c.tol_km > 0)) fail("tol_km", "must be > 0");
  }
  if (has(j, "format")) {
    const std::string f = text(j["format"], "format");
    if (f == "csv") {
      c.format = OutputFormat::Csv;
    } else if (f == "json") {
      c.format = OutputFormat::Json;
    } else {
      fail("format", "expected csv or json");
    }
  }
  if (has(j, "out")) c.out = text(j["out"], "out");
  if (c.out == "-") c.out.clear();
  if (has(j, "precision")) {
    const Json& v = j["precision"];
    if (!v.is_number_integer()) fail("precision", "expected an integer");
    c.precision = v.get<int>();
    if (c.precision < 1 || c.precision > 17) fail("precision", "must lie in [1, 17]");
  }

  try {
    p.validate();
  } catch (const InvalidParameter& e) {
    // Map the library's field names onto config keys.
    std::string message = e.what();
    static const std::array<std::pair<std::string_view, std::string_view>, 4>
        names{{{"V_A", "v_a"}, {"V_B", "v_b"}, {"L_AC", "l_ac"}, {"L_BC", "l_bc"}}};
    for (const auto& [from, to] : names) {
      if (message.rfind(from, 0) == 0) {
        message = std::string(to) + message.substr(from.size());
      }
    }
    throw InvalidParameter(message);
  }
  return c;
}

Json to_json(const RunConfig& c) {
  const ProtocolParams& p = c.params;
  Json j;
  j["protocol"] = std::string(to_string(p.protocol));
  j["geometry"] = std::string(to_string(c.geometry));
  j["detector"] = c.detector;
  j["eta"] = p.eta;
  j["v_el"] = p.v_el;
  j["variance"] = c.variance;
  j["v_a"] = p.v_a;
  j["v_b"] = p.v_b;
  j["l_ac"] = p.l_ac;
  j["l_bc"] = p.l_bc;
  j["alpha"] = p.alpha;
  j["eps1"] = p.eps1;
  j["eps2"] = p.eps2;
  j["beta"] = p.beta;
  j["gain"] = p.gain ? Json(*p.gain) : Json("optimize");
  if (p.protocol == Protocol::SqueezedModified) {
    j["chi_n"] = c.chi_n ? Json(*c.chi_n) : Json("optimize");
  }
  if (c.sweep) {
    j["sweep"] = {{"variable", std::string(to_string(c.sweep->variable))},
                  {"start", c.sweep->start},
                  {"stop", c.sweep->stop},
                  {"step", c.sweep->step}};
  }
  if (c.geometry == Geometry::Asymmetric) j["l_bc_grid"] = c.l_bc_grid;
  j["tol_km"] = c.tol_km;
  j["format"] = c.format == OutputFormat::Csv ? "csv" : "json";
  j["out"] = c.out.empty() ? "-" : c.out;
  j["precision"] = c.precision;
  return j;
}

}  // namespace cvmdi::cli
