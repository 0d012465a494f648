#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "ergolim/errors.hpp"
#include "ergolim/experiment.hpp"
#include "test_support.hpp"

using namespace ergolim;
using namespace ergolim::testing;

namespace {

Json chain_config(const std::vector<std::string>& analyses) {
  Json j;
  j["operator"] = Json{{"inline", Json::array({Json::array({0.9, 0.1}),
                                               Json::array({0.2, 0.8})})},
                       {"markov", true}};
  j["analysis"] = analyses;
  return j;
}

struct EnvGuard {
  EnvGuard(const char* name, const char* value) : name_(name) {
    setenv(name, value, 1);
  }
  ~EnvGuard() { unsetenv(name_); }
  const char* name_;
};

}  // namespace

TEST_CASE("parse_config: canonical analysis order and validation") {
  Json j = chain_config({"iterate", "gram", "project"});
  const ExperimentConfig config = parse_config(j);
  REQUIRE(config.analyses.size() == 3);
  CHECK(config.analyses[0] == "gram");
  CHECK(config.analyses[1] == "project");
  CHECK(config.analyses[2] == "iterate");
  CHECK(config.tolerance == 1e-12);
  CHECK(config.max_iterations == 10000);

  CHECK_THROWS_AS(parse_config(chain_config({"frobnicate"})), InvalidInput);

  Json no_operator;
  no_operator["analysis"] = Json::array();
  CHECK_THROWS_AS(parse_config(no_operator), InvalidInput);

  Json both = chain_config({});
  both["operator"]["gallery"] = Json{{"kind", "intro_hat"}};
  CHECK_THROWS_AS(parse_config(both), InvalidInput);

  Json bad_tol = chain_config({"gram"});
  bad_tol["tolerance"] = -1.0;
  CHECK_THROWS_AS(parse_config(bad_tol), InvalidInput);

  Json not_square = chain_config({});
  not_square["operator"] = Json{{"inline", Json::array({Json::array({1.0, 2.0})})}};
  CHECK_THROWS_AS(parse_config(not_square), InvalidInput);
}

TEST_CASE("run: two-state chain passes gram/project/iterate with exit 0") {
  const ExperimentConfig config = parse_config(chain_config({"gram", "project", "iterate"}));
  const RunArtifact artifact = run(config);
  CHECK(artifact.exit_code == 0);
  CHECK(artifact.all_passed);
  CHECK(artifact.document["verdicts"]["iterate"] == "pass");

  const Json& entries = artifact.document["results"]["iterate"]["entries"];
  CHECK(entries[0][0].get<int>() == 1);
  CHECK(entries[0][1].get<double>() == doctest::Approx(28.0 / 30.0).epsilon(1e-10));
  CHECK(entries[1][1].get<double>() == doctest::Approx(0.7 * 28.0 / 30.0).epsilon(1e-10));
}

TEST_CASE("run: oscillating 2-cycle exits with code 2") {
  Json j;
  j["operator"] = Json{{"inline", Json::array({Json::array({0.0, 1.0}),
                                               Json::array({1.0, 0.0})})},
                       {"markov", true}};
  j["analysis"] = Json::array({"iterate"});
  j["max_iterations"] = 64;
  const RunArtifact artifact = run(parse_config(j));
  CHECK(artifact.exit_code == 2);
  CHECK(artifact.document["results"]["iterate"]["verdict"] == "oscillating");

  // The cyclic analysis on the same operator passes.
  j["analysis"] = Json::array({"cyclic"});
  const RunArtifact cyclic = run(parse_config(j));
  CHECK(cyclic.exit_code == 0);
  CHECK(cyclic.document["results"]["cyclic"]["k_used"].get<int>() == 2);
}

TEST_CASE("run: trivial 1x1 operator") {
  Json j;
  j["operator"] = Json{{"inline", Json::array({Json::array({1.0})})}, {"markov", true}};
  j["analysis"] = Json::array({"gram", "project", "iterate"});
  const RunArtifact artifact = run(parse_config(j));
  CHECK(artifact.exit_code == 0);
  CHECK(artifact.document["results"]["iterate"]["entries"][0][1].get<double>() <= 1e-14);
}

TEST_CASE("run: empty analysis list echoes the config only") {
  const RunArtifact artifact = run(parse_config(chain_config({})));
  CHECK(artifact.exit_code == 0);
  CHECK(artifact.document["results"].empty());
  CHECK(artifact.document["verdicts"].empty());
  CHECK(artifact.document["config"]["tolerance"].get<double>() == 1e-12);
}

TEST_CASE("run: gallery operator via config with oracle comparison") {
  Json j;
  j["operator"] = Json{{"gallery", Json{{"kind", "stochastic_random"}, {"n", 5},
                                        {"seed", 31}}}};
  j["analysis"] = Json::array({"gram", "project", "iterate", "oracle", "diagnose"});
  const RunArtifact artifact = run(parse_config(j));
  CHECK(artifact.exit_code == 0);
  CHECK(artifact.document["results"]["oracle"]["gram_vs_contour"].get<double>() <= 1e-8);
  CHECK(artifact.document["results"]["diagnose"]["markov_checks"]["passed"] == true);
}

TEST_CASE("run: intro gallery reproduces the worked G and A") {
  Json j;
  j["operator"] = Json{{"gallery", Json{{"kind", "intro_hat"}}}};
  j["analysis"] = Json::array({"gram", "project", "iterate", "cesaro"});
  const RunArtifact artifact = run(parse_config(j));
  CHECK(artifact.exit_code == 0);
  const Json& g = artifact.document["results"]["gram"]["G"];
  CHECK(g[0][0].get<double>() == 1.0);
  CHECK(g[0][1].get<double>() == 0.0);
  CHECK(g[1][0].get<double>() == 1.0);
  CHECK(g[1][1].get<double>() == 1.0);
  const Json& a = artifact.document["results"]["gram"]["A"];
  CHECK(a[0][0].get<double>() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a[1][0].get<double>() == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("run: seed fallback through ERGOLIM_SEED") {
  Json j;
  j["operator"] = Json{{"gallery", Json{{"kind", "stochastic_random"}, {"n", 4}}}};
  j["analysis"] = Json::array();
  {
    EnvGuard guard("ERGOLIM_SEED", "777");
    const RunArtifact artifact = run(parse_config(j));
    CHECK(artifact.document["config"]["seed"].get<std::uint64_t>() == 777);
    CHECK(artifact.document["config"]["operator"]["gallery"]["seed"].get<std::uint64_t>() ==
          777);
  }
  // Explicit config seed wins over the environment.
  j["seed"] = 555;
  {
    EnvGuard guard("ERGOLIM_SEED", "777");
    const RunArtifact artifact = run(parse_config(j));
    CHECK(artifact.document["config"]["seed"].get<std::uint64_t>() == 555);
  }
}

TEST_CASE("emit: deterministic JSON bytes and exact CSV header") {
  EnvGuard guard("SOURCE_DATE_EPOCH", "1700000000");
  Json j = chain_config({"gram", "project", "iterate"});
  j["output_path"] = "emit_test";
  j["output_format"] = "json";
  const ExperimentConfig config = parse_config(j);

  const RunArtifact first = run(config);
  const RunArtifact second = run(config);
  CHECK(dump_deterministic(first.document) == dump_deterministic(second.document));

  const auto written = emit(first, config);
  REQUIRE(written.size() == 1);
  CHECK(written[0] == "emit_test.json");
  std::ifstream in(written[0]);
  REQUIRE(in.good());
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  CHECK(content == dump_deterministic(first.document));

  // Round trip: parsing the emitted JSON reproduces the document.
  const Json parsed = Json::parse(content);
  CHECK(parsed == first.document);

  Json csv_cfg = j;
  csv_cfg["output_format"] = "csv";
  csv_cfg["output_path"] = "emit_test_csv";
  const ExperimentConfig csv_config = parse_config(csv_cfg);
  const auto csv_written = emit(run(csv_config), csv_config);
  REQUIRE(csv_written.size() == 1);
  std::ifstream csv_in(csv_written[0]);
  std::string header;
  std::getline(csv_in, header);
  CHECK(header == "m,deviation,fitted_rate");
  std::string row1;
  std::getline(csv_in, row1);
  CHECK(row1.substr(0, 2) == "1,");
  CHECK(row1.find("0.93333333333333") != std::string::npos);
}

TEST_CASE("format_double: 17 significant digits round-trip") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(28.0 / 30.0) == "0.93333333333333335");
  const double value = 0.12345678901234567;
  CHECK(std::stod(format_double(value)) == value);
  CHECK_THROWS_AS(format_double(std::numeric_limits<double>::quiet_NaN()), Error);
}

TEST_CASE("load_config: unreadable and malformed files raise input errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), InvalidInput);
  std::ofstream out("malformed.json");
  out << "{not json";
  out.close();
  CHECK_THROWS_AS(load_config("malformed.json"), InvalidInput);
}
