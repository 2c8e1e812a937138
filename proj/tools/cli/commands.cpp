#include "cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"

#include "cvmdi/errors.hpp"

namespace cvmdi::cli {
namespace {

const std::vector<std::string> kReportColumns{
    "I_AB[bits/use]", "chi_BE[bits/use]", "K[bits/use]", "lambda1[snu]",
    "lambda2[snu]",   "lambda3[snu]",     "lambda4[snu]", "lambda5[snu]",
    "gain",           "chi_N[snu]",       "flags"};

NoiseSetting noise_of(const RunConfig& c) {
  if (c.params.protocol != Protocol::SqueezedModified) return NoiseSetting::none();
  return c.chi_n ? NoiseSetting::fixed_chi_n(*c.chi_n) : NoiseSetting::optimized();
}

void append_report(std::vector<Cell>& row, const KeyRateReport& r) {
  row.emplace_back(r.mutual_info);
  row.emplace_back(r.holevo);
  row.emplace_back(r.key_rate);
  for (std::size_t i = 0; i < 5; ++i) {
    if (i < r.lambdas.size()) {
      row.emplace_back(r.lambdas[i]);
    } else {
      row.emplace_back(std::monostate{});
    }
  }
  row.emplace_back(r.gain_used);
  if (r.protocol == Protocol::SqueezedModified) {
    row.emplace_back(r.chi_n);
  } else {
    row.emplace_back(std::monostate{});
  }
  row.emplace_back(std::string(r.holevo_clamped ? "holevo_clamped" : ""));
}

std::string distance_flags(const MaxDistanceResult& r) {
  if (r.zero_at_origin) return "zero_at_origin";
  if (r.hit_scan_limit) return "hit_scan_limit";
  return "";
}

Provenance provenance(const char* command, const RunConfig& c) {
  return {command, to_json(c), Json::object()};
}

}  // namespace

CommandOutput run_keyrate(const RunConfig& c) {
  CommandOutput out{{}, provenance("keyrate", c)};
  out.table.columns = {"L_AC[km]", "L_BC[km]"};
  out.table.columns.insert(out.table.columns.end(), kReportColumns.begin(),
                           kReportColumns.end());
  const KeyRateReport r = evaluate_point(c.params, noise_of(c));
  std::vector<Cell> row{c.params.l_ac, c.params.l_bc};
  append_report(row, r);
  out.table.rows.push_back(std::move(row));
  return out;
}

CommandOutput run_optnoise(const RunConfig& c) {
  if (c.params.protocol != Protocol::SqueezedModified) {
    throw InvalidParameter("protocol: optnoise needs squeezed-modified");
  }
  CommandOutput out{{}, provenance("optnoise", c)};
  out.table.columns = {"L_AC[km]", "L_BC[km]"};
  out.table.columns.insert(out.table.columns.end(), kReportColumns.begin(),
                           kReportColumns.end());
  const NoiseOptimum opt = optimize_added_noise(c.params);
  std::vector<Cell> row{c.params.l_ac, c.params.l_bc};
  append_report(row, opt.report);
  if (opt.grid_fallback) {
    std::string& flags = std::get<std::string>(row.back());
    flags += flags.empty() ? "grid_fallback" : ";grid_fallback";
  }
  out.table.rows.push_back(std::move(row));
  Json grid = Json::array();
  for (const auto& [chi, k] : opt.grid) {
    grid.push_back({{"chi_N", chi}, {"K", k}});
  }
  out.provenance.extra["chi_n_grid"] = std::move(grid);
  return out;
}

CommandOutput run_sweep(const RunConfig& c) {
  if (!c.sweep) throw InvalidParameter("sweep: no grid given (start/stop/step)");
  SweepSpec spec;
  spec.variable = c.sweep->variable;
  spec.start = c.sweep->start;
  spec.stop = c.sweep->stop;
  spec.step = c.sweep->step;
  spec.base = c.params;
  spec.noise = noise_of(c);

  CommandOutput out{{}, provenance("sweep", c)};
  out.table.columns = {spec.variable == SweepVariable::ChiN ? "x[snu]" : "x[km]"};
  out.table.columns.insert(out.table.columns.end(), kReportColumns.begin(),
                           kReportColumns.end());
  const SweepResult result = sweep(spec);
  for (const SweepRow& sr : result.rows) {
    std::vector<Cell> row{sr.x};
    if (sr.report) {
      append_report(row, *sr.report);
    } else {
      row.resize(kReportColumns.size(), std::monostate{});
      row.emplace_back("error: " + sr.error);
    }
    out.table.rows.push_back(std::move(row));
  }
  out.provenance.extra["sweep_variable"] = std::string(to_string(spec.variable));
  return out;
}

CommandOutput run_maxdist(const RunConfig& c) {
  MaxDistanceOptions options;
  options.mode = c.geometry == Geometry::Symmetric ? DistanceMode::Symmetric
                                                   : DistanceMode::FixedLbc;
  options.noise = noise_of(c);
  options.tol_km = c.tol_km;
  const MaxDistanceResult r = max_distance(c.params, options);

  CommandOutput out{{}, provenance("maxdist", c)};
  out.table.columns = {"protocol", "detector", "L_BC[km]", "L[km]", "L_AB[km]",
                       "flags"};
  Cell l_bc = std::monostate{};
  if (c.geometry != Geometry::Symmetric) l_bc = c.params.l_bc;
  out.table.rows.push_back({std::string(to_string(c.params.protocol)),
                            c.detector, l_bc, r.distance_km, r.total_km,
                            distance_flags(r)});
  return out;
}

CommandOutput run_compare(const RunConfig& c) {
  CompareSpec spec;
  spec.geometry = c.geometry;
  spec.l_bc_grid = c.l_bc_grid;
  spec.base = c.params;
  spec.tol_km = c.tol_km;
  const std::vector<CompareRow> rows = compare_protocols(spec);

  // Per (L_BC, detector) group: distances of the baseline protocols.
  std::map<std::pair<double, std::string>, std::map<Protocol, double>> totals;
  for (const CompareRow& r : rows) {
    totals[{r.l_bc.value_or(-1), r.detector}][r.protocol] = r.result.total_km;
  }

  CommandOutput out{{}, provenance("compare", c)};
  out.table.columns = {"geometry", "L_BC[km]", "protocol", "detector", "L[km]",
                       "L_AB[km]", "L_AB_minus_coherent[km]",
                       "L_AB_minus_squeezed[km]", "flags"};
  for (const CompareRow& r : rows) {
    const auto& group = totals[{r.l_bc.value_or(-1), r.detector}];
    const auto delta = [&](Protocol base) -> Cell {
      const auto it = group.find(base);
      if (it == group.end() || base == r.protocol) return std::monostate{};
      return r.result.total_km - it->second;
    };
    Cell l_bc = std::monostate{};
    if (r.l_bc) l_bc = *r.l_bc;
    out.table.rows.push_back({std::string(to_string(r.geometry)), l_bc,
                              std::string(to_string(r.protocol)), r.detector,
                              r.result.distance_km, r.result.total_km,
                              delta(Protocol::Coherent), delta(Protocol::Squeezed),
                              distance_flags(r.result)});
  }
  return out;
}

namespace {

struct Flags {
  std::string config;
  std::optional<std::string> protocol, geometry, detector, variance, chi_n, gain,
      format, out, sweep_variable;
  std::optional<double> lac, lbc, tol_km, from, to, step;
  std::optional<int> precision;
  std::vector<double> lbc_grid;
};

void add_common_options(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--protocol", f.protocol,
                  "squeezed | squeezed-modified | coherent");
  cmd->add_option("--geometry", f.geometry,
                  "symmetric | asymmetric | most-asymmetric");
  cmd->add_option("--detector", f.detector, "perfect | practical");
  cmd->add_option("--variance", f.variance, "ideal | realistic | <V>");
  cmd->add_option("--lac", f.lac, "L_AC in km (symmetric: both channels)");
  cmd->add_option("--lbc", f.lbc, "L_BC in km");
  cmd->add_option("--chi-n", f.chi_n, "added noise chi_N, or 'optimize'");
  cmd->add_option("--gain", f.gain, "feedforward gain, or 'optimize'");
  cmd->add_option("--format", f.format, "csv | json");
  cmd->add_option("--out", f.out, "output file ('-' for standard output)");
  cmd->add_option("--tol-km", f.tol_km, "distance tolerance in km");
  cmd->add_option("--precision", f.precision, "significant digits (default 9)");
}

// A flag value that is numeric becomes a JSON number, otherwise a string.
Json number_or_text(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (!s.empty() && end == s.c_str() + s.size()) return v;
  return s;
}

Json flag_overrides(const Flags& f) {
  Json j = Json::object();
  if (f.protocol) j["protocol"] = *f.protocol;
  if (f.geometry) j["geometry"] = *f.geometry;
  if (f.detector) j["detector"] = *f.detector;
  if (f.variance) j["variance"] = number_or_text(*f.variance);
  if (f.lac) j["l_ac"] = *f.lac;
  if (f.lbc) j["l_bc"] = *f.lbc;
  if (f.chi_n) j["chi_n"] = number_or_text(*f.chi_n);
  if (f.gain) j["gain"] = number_or_text(*f.gain);
  if (f.format) j["format"] = *f.format;
  if (f.out) j["out"] = *f.out;
  if (f.tol_km) j["tol_km"] = *f.tol_km;
  if (f.precision) j["precision"] = *f.precision;
  if (!f.lbc_grid.empty()) j["l_bc_grid"] = f.lbc_grid;
  Json sweep = Json::object();
  if (f.sweep_variable) sweep["variable"] = *f.sweep_variable;
  if (f.from) sweep["start"] = *f.from;
  if (f.to) sweep["stop"] = *f.to;
  if (f.step) sweep["step"] = *f.step;
  if (!sweep.empty()) j["sweep"] = std::move(sweep);
  return j;
}

void emit(const CommandOutput& result, const RunConfig& c, std::ostream& os) {
  if (c.format == OutputFormat::Csv) {
    write_csv(os, result.table, result.provenance, c.precision);
  } else {
    os << to_json(result.table, result.provenance, c.precision).dump(2) << '\n';
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Secret key rates and distances for CV-MDI QKD", "cvmdi"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Flags f;
  std::map<CLI::App*, std::string> names;
  for (const char* name : {"keyrate", "sweep", "maxdist", "optnoise", "compare"}) {
    CLI::App* cmd = nullptr;
    if (std::string(name) == "keyrate") {
      cmd = app.add_subcommand(name, "key rate at one operating point");
    } else if (std::string(name) == "sweep") {
      cmd = app.add_subcommand(name, "key rate over a grid of L or chi_N");
      cmd->add_option("--sweep-var", f.sweep_variable,
                      "distance-symmetric | L_AC-with-fixed-L_BC | chi_N");
      cmd->add_option("--from", f.from, "grid start");
      cmd->add_option("--to", f.to, "grid stop (inclusive)");
      cmd->add_option("--step", f.step, "grid step");
    } else if (std::string(name) == "maxdist") {
      cmd = app.add_subcommand(name, "maximal transmission distance");
    } else if (std::string(name) == "optnoise") {
      cmd = app.add_subcommand(name, "optimal trusted added noise chi_N");
    } else {
      cmd = app.add_subcommand(name, "maximal distances of all protocols");
      cmd->add_option("--lbc-grid", f.lbc_grid,
                      "L_BC values (asymmetric geometry)")
          ->delimiter(',');
    }
    add_common_options(cmd, f);
    names[cmd] = name;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  const std::string command = names.at(app.get_subcommands().front());
  try {
    Json layered = Json::object();
    if (command == "optnoise") layered["protocol"] = "squeezed-modified";
    if (!f.config.empty()) layered = merge_config(layered, load_config_file(f.config));
    layered = merge_config(layered, flag_overrides(f));
    const RunConfig config = resolve_config(layered);

    CommandOutput result;
    if (command == "keyrate") {
      result = run_keyrate(config);
    } else if (command == "sweep") {
      result = run_sweep(config);
    } else if (command == "maxdist") {
      result = run_maxdist(config);
    } else if (command == "optnoise") {
      result = run_optnoise(config);
    } else {
      result = run_compare(config);
    }

    if (config.out.empty()) {
      emit(result, config, out);
    } else {
      std::ofstream file(config.out, std::ios::binary);
      if (!file) throw InvalidParameter("out: cannot write " + config.out);
      emit(result, config, file);
    }
    return kExitOk;
  } catch (const InvalidParameter& e) {
    err << "cvmdi: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidArgument& e) {
    err << "cvmdi: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "cvmdi: numeric error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

}  // namespace cvmdi::cli
