#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"

namespace cvmdi::cli {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "cvmdi");
  std::ostringstream out;
  std::ostringstream err;
  Result r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path path = fs::temp_directory_path() / ("cvmdi_cli_test_" + name);
  std::ofstream(path) << content;
  return path;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string cell; std::getline(in, cell, ',');) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

// Value of `column` in the first data row of a CSV report.
std::string csv_cell(const std::string& csv, const std::string& column) {
  const auto rows = lines(csv);
  const auto header = split(rows.at(1));
  const auto data = split(rows.at(2));
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == column) return data.at(i);
  }
  ADD_FAILURE() << "no column " << column;
  return {};
}

TEST(Cli, KeyrateRowMatchesLibrary) {
  const fs::path config = write_temp("noiseless.json", R"({"eps1": 0, "eps2": 0})");
  const Result r = run({"keyrate", "--config", config.string(), "--lac", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  ProtocolParams p;
  p.eps1 = p.eps2 = 0;
  const KeyRateReport expected = key_rate(p);
  EXPECT_EQ(std::stod(csv_cell(r.out, "chi_BE[bits/use]")),
            round_significant(expected.holevo, 9));
  EXPECT_EQ(std::stod(csv_cell(r.out, "K[bits/use]")),
            round_significant(expected.key_rate, 9));
  EXPECT_EQ(std::stod(csv_cell(r.out, "I_AB[bits/use]")),
            round_significant(expected.mutual_info, 9));
  EXPECT_EQ(csv_cell(r.out, "flags"), "");
}

TEST(Cli, CsvLayout) {
  const Result r = run({"keyrate", "--lac", "5"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(r.out.find('\r'), std::string::npos);
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].rfind("# cvmdi 1.0.0 keyrate config=", 0), 0u);
  EXPECT_EQ(rows[1],
            "L_AC[km],L_BC[km],I_AB[bits/use],chi_BE[bits/use],K[bits/use],"
            "lambda1[snu],lambda2[snu],lambda3[snu],lambda4[snu],lambda5[snu],"
            "gain,chi_N[snu],flags");
  const std::string k = csv_cell(r.out, "K[bits/use]");
  // Nine significant digits.
  std::string digits;
  for (char ch : k) {
    if (std::isdigit(static_cast<unsigned char>(ch))) digits += ch;
    if (ch == 'e') break;
  }
  while (!digits.empty() && digits.front() == '0') digits.erase(0, 1);
  EXPECT_LE(digits.size(), 9u) << k;
  EXPECT_GE(digits.size(), 8u) << k;
}

TEST(Cli, PracticalPresetIsEchoedInMetadata) {
  const Result r = run({"keyrate", "--detector", "practical", "--lac", "2",
                     "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["metadata"]["config"]["eta"].get<double>(), 0.9);
  EXPECT_EQ(j["metadata"]["config"]["v_el"].get<double>(), 0.015);
  EXPECT_EQ(j["metadata"]["config"]["detector"], "practical");
  EXPECT_EQ(j["metadata"]["version"], "1.0.0");
}

TEST(Cli, NegativeLengthIsConfigError) {
  const Result r = run({"keyrate", "--geometry", "asymmetric", "--lac", "-1"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("l_ac"), std::string::npos) << r.err;
}

TEST(Cli, UnknownConfigKeyIsRejected) {
  const fs::path config = write_temp("unknown.json", R"({"lac": 3})");
  const Result r = run({"keyrate", "--config", config.string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("lac"), std::string::npos) << r.err;

  const fs::path nested =
      write_temp("unknown_sweep.json", R"({"sweep": {"start": 0, "stop": 1, "by": 1}})");
  EXPECT_EQ(run({"sweep", "--config", nested.string()}).code, kExitConfig);
}

TEST(Cli, OutOfRangeFieldsFailBeforeComputation) {
  EXPECT_EQ(run({"keyrate", "--variance", "0.5"}).code, kExitConfig);
  EXPECT_EQ(run({"keyrate", "--detector", "great"}).code, kExitConfig);
  EXPECT_EQ(run({"keyrate", "--precision", "30"}).code, kExitConfig);
  EXPECT_EQ(run({"keyrate", "--lac", "2", "--lbc", "3"}).code, kExitConfig);
  EXPECT_EQ(run({"keyrate", "--protocol", "squeezed", "--chi-n", "1"}).code,
            kExitConfig);
  EXPECT_EQ(run({"keyrate", "--protocol", "squeezed-modified", "--chi-n", "60"}).code,
            kExitConfig);
  EXPECT_EQ(run({"keyrate", "--bogus"}).code, kExitConfig);
  EXPECT_EQ(run({}).code, kExitConfig);
}

TEST(Cli, PrecisionLossIsNumericError) {
  // At V = 1e150 the relay covariance loses physicality to rounding.
  const Result r = run({"keyrate", "--variance", "1e150", "--lac", "5"});
  EXPECT_EQ(r.code, kExitNumeric);
  EXPECT_NE(r.err.find("numeric error"), std::string::npos) << r.err;
}

TEST(Cli, EmptySweepGridIsConfigError) {
  const Result r = run({"sweep", "--from", "5", "--to", "1", "--step", "1"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("empty grid"), std::string::npos) << r.err;
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path config =
      write_temp("precedence.json", R"({"geometry": "asymmetric", "l_ac": 3, "l_bc": 1})");
  const Result from_file = run({"keyrate", "--config", config.string()});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  EXPECT_EQ(csv_cell(from_file.out, "L_AC[km]"), "3");
  const Result overridden = run({"keyrate", "--config", config.string(), "--lac", "4"});
  ASSERT_EQ(overridden.code, kExitOk) << overridden.err;
  EXPECT_EQ(csv_cell(overridden.out, "L_AC[km]"), "4");
  EXPECT_EQ(csv_cell(overridden.out, "L_BC[km]"), "1");
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"sweep", "--protocol", "squeezed-modified",
                                      "--from", "0", "--to", "6", "--step", "3"};
  const Result a = run(args);
  const Result b = run(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, JsonRoundTripsCsvValues) {
  const std::vector<std::string> base{"sweep", "--from", "0", "--to", "4",
                                      "--step", "2"};
  std::vector<std::string> json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const Result csv = run(base);
  const Result json = run(json_args);
  ASSERT_EQ(csv.code, kExitOk) << csv.err;
  ASSERT_EQ(json.code, kExitOk) << json.err;

  const Json j = Json::parse(json.out);
  const auto rows = lines(csv.out);
  const auto header = split(rows[1]);
  ASSERT_EQ(j["rows"].size(), rows.size() - 2);
  for (std::size_t r = 0; r < j["rows"].size(); ++r) {
    const auto cells = split(rows[r + 2]);
    for (std::size_t c = 0; c < header.size(); ++c) {
      const Json& value = j["rows"][r][header[c]];
      if (value.is_number()) {
        EXPECT_EQ(value.get<double>(), std::stod(cells[c]))
            << header[c] << " row " << r;
      } else if (value.is_null()) {
        EXPECT_TRUE(cells[c].empty());
      }
    }
  }

  // Serializing and re-reading the JSON changes nothing.
  EXPECT_EQ(Json::parse(j.dump()), j);

  // The embedded configuration resolves to itself.
  const RunConfig again = resolve_config(j["metadata"]["config"]);
  EXPECT_EQ(to_json(again), j["metadata"]["config"]);
}

TEST(Cli, MaxdistCoherentMostAsymmetricPracticalIsZero) {
  const Result r = run({"maxdist", "--protocol", "coherent", "--geometry",
                     "most-asymmetric", "--detector", "practical", "--variance",
                     "realistic"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_EQ(csv_cell(r.out, "L_AB[km]"), "0");
  EXPECT_EQ(csv_cell(r.out, "flags"), "zero_at_origin");
}

TEST(Cli, MaxdistToleranceIsRespected) {
  const Result coarse = run({"maxdist", "--tol-km", "0.5"});
  const Result fine = run({"maxdist", "--tol-km", "0.01"});
  ASSERT_EQ(coarse.code, kExitOk) << coarse.err;
  ASSERT_EQ(fine.code, kExitOk) << fine.err;
  EXPECT_NEAR(std::stod(csv_cell(coarse.out, "L[km]")),
              std::stod(csv_cell(fine.out, "L[km]")), 0.5);
}

TEST(Cli, CompareListsBothDetectorsPerProtocol) {
  const Result r = run({"compare", "--geometry", "asymmetric", "--lbc-grid", "2,4",
                     "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["rows"].size(), 12u);
  std::map<std::string, int> per_protocol;
  for (const Json& row : j["rows"]) {
    per_protocol[row["protocol"].get<std::string>() + "/" +
                 row["detector"].get<std::string>()]++;
  }
  EXPECT_EQ(per_protocol.size(), 6u);
  for (const auto& [key, count] : per_protocol) EXPECT_EQ(count, 2) << key;
  EXPECT_EQ(j["metadata"]["config"]["l_bc_grid"], Json::array({2.0, 4.0}));
  EXPECT_EQ(j["metadata"]["command"], "compare");
}

TEST(Cli, OptnoiseRecordsVerificationGrid) {
  const Result r = run({"optnoise", "--lac", "7", "--format", "json"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["metadata"]["chi_n_grid"].size(), 26u);
  EXPECT_GT(j["rows"][0]["chi_N[snu]"].get<double>(), 0);
}

TEST(Cli, WritesToOutputFile) {
  const fs::path path = fs::temp_directory_path() / "cvmdi_cli_test_out.csv";
  fs::remove(path);
  const Result r = run({"keyrate", "--out", path.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_EQ(lines(content.str()).size(), 3u);
}

TEST(Cli, ShippedConfigsResolve) {
  for (const auto& entry : fs::directory_iterator(CVMDI_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(resolve_config(load_config_file(entry.path().string())))
        << entry.path();
  }
}

TEST(Cli, VersionFlag) {
  const Result r = run({"--version"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("1.0.0"), std::string::npos);
}

}  // namespace
}  // namespace cvmdi::cli
