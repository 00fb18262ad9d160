#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

using nlohmann::json;

struct CliResult {
  int exit_code = -1;
  std::string stdout_text;
};

std::string binary_path() {
  const char* bin = std::getenv("SLSIM_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "SLSIM_BIN must point at the slsim binary");
  return bin;
}

CliResult run_cli(const std::string& args) {
  const std::string command = binary_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    result.stdout_text.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::filesystem::path temp_dir() {
  const auto dir =
      std::filesystem::temp_directory_path() / "slsim_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_file(const std::string& name, const std::string& text) {
  const auto path = temp_dir() / name;
  std::ofstream out(path);
  out << text;
  return path.string();
}

std::string table_config(double horizon, std::uint64_t seed) {
  json doc = {
      {"workload",
       {{"arrival", {{"kind", "exponential"}, {"rate", 0.9}}},
        {"warm_service",
         {{"kind", "exponential"}, {"rate", 1.0 / 1.991}}},
        {"cold_service",
         {{"kind", "exponential"}, {"rate", 1.0 / 2.244}}}}},
      {"platform", {{"expiration_threshold", 600.0}}},
      {"simulation",
       {{"horizon", horizon}, {"skip_initial", 100.0}, {"seed", seed}}},
  };
  return doc.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("run emits a report as JSON with exit 0") {
  const std::string config = write_file("run.json", table_config(20000, 7));
  const CliResult result = run_cli("run " + config);
  REQUIRE(result.exit_code == 0);
  const json doc = json::parse(result.stdout_text);
  CHECK(doc.contains("cold_start_probability"));
  CHECK(doc.contains("avg_server_count"));
  CHECK(doc.contains("instance_count_histogram"));
  CHECK_FALSE(doc.contains("meta"));
  CHECK(doc["rejection_probability"] == 0.0);
}

TEST_CASE("same seed twice gives byte-identical output") {
  const std::string config = write_file("stable.json", table_config(5000, 3));
  const CliResult a = run_cli("run " + config + " --seed 42");
  const CliResult b = run_cli("run " + config + " --seed 42");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.stdout_text == b.stdout_text);
  const CliResult c = run_cli("run " + config + " --seed 43");
  CHECK(c.stdout_text != a.stdout_text);
}

TEST_CASE("missing workload.arrival exits 2 and names the field") {
  json doc = json::parse(table_config(1000, 1));
  doc["workload"].erase("arrival");
  const std::string config = write_file("bad.json", doc.dump());
  const std::string command = binary_path() + " run " + config +
                              " 2>" + (temp_dir() / "stderr.txt").string();
  const int status = std::system(command.c_str());
  CHECK(WEXITSTATUS(status) == 2);
  const std::string err = read_file((temp_dir() / "stderr.txt").string());
  CHECK(err.find("workload.arrival") != std::string::npos);
}

TEST_CASE("unreadable config exits 2") {
  const CliResult result = run_cli("run /nonexistent/config.json");
  CHECK(result.exit_code == 2);
}

TEST_CASE("bad usage exits 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("run").exit_code == 2);
}

TEST_CASE("meta flag adds version and timestamp without touching report") {
  const std::string config = write_file("meta.json", table_config(2000, 9));
  const CliResult with_meta = run_cli("run " + config + " --meta");
  REQUIRE(with_meta.exit_code == 0);
  const json doc = json::parse(with_meta.stdout_text);
  REQUIRE(doc.contains("meta"));
  CHECK(doc["meta"].contains("version"));
  CHECK(doc["meta"].contains("generated_at"));
}

TEST_CASE("emit-trace and emit-requests write the side files") {
  const std::string config = write_file("trace.json", table_config(2000, 5));
  const auto trace_path = (temp_dir() / "events.csv").string();
  const auto requests_path = (temp_dir() / "requests.csv").string();
  const CliResult result = run_cli("run " + config + " --emit-trace " +
                                   trace_path + " --emit-requests " +
                                   requests_path);
  REQUIRE(result.exit_code == 0);
  const std::string trace = read_file(trace_path);
  CHECK(trace.find("arrival-cold") != std::string::npos);
  CHECK(trace.find("departure") != std::string::npos);
  const std::string requests = read_file(requests_path);
  CHECK(requests.rfind("start_time,response_time,is_cold,instance_id\n", 0) ==
        0);

  // The exported log feeds straight back into trace-metrics.
  const CliResult metrics = run_cli("trace-metrics " + requests_path);
  REQUIRE(metrics.exit_code == 0);
  const json doc = json::parse(metrics.stdout_text);
  CHECK(doc.contains("cold_start_probability"));
  CHECK(doc.contains("wasted_capacity"));
  CHECK(doc["warm_pool_count_series"].is_array());
}

TEST_CASE("transient run reports the snapshot expiration") {
  json doc = json::parse(table_config(1.0, 1));
  doc["workload"]["arrival"] = {{"kind", "deterministic"}, {"value", 1e9}};
  doc["simulation"]["skip_initial"] = 0.0;
  doc["simulation"]["grid_step"] = 0.05;
  doc["initial_state"] = {
      {"instances", {{{"state", "idle"}, {"time_in_state", 599.75}}}}};
  const std::string config = write_file("transient.json", doc.dump());
  const auto series_path = (temp_dir() / "series.csv").string();
  const CliResult result =
      run_cli("transient " + config + " --out " + series_path);
  REQUIRE(result.exit_code == 0);
  const json report = json::parse(result.stdout_text);
  CHECK(report["avg_server_count"] == doctest::Approx(0.25).epsilon(1e-6));

  // Instance count drops from 1 to 0 at the pending expiration (t = 0.25).
  const std::string series = read_file(series_path);
  CHECK(series.rfind("t,metric,mean,ci_low,ci_high\n", 0) == 0);
  CHECK(series.find("\n0.2,instance_count,1,") != std::string::npos);
  CHECK(series.find("\n0.25,instance_count,0,") != std::string::npos);
}

TEST_CASE("sweep writes one CSV row per grid point") {
  json doc = json::parse(table_config(2000, 11));
  doc["sweep"] = {
      {"axes",
       {{{"path", "platform.expiration_threshold"},
         {"values", {120.0, 600.0, 1200.0}}}}}};
  const std::string config = write_file("sweep.json", doc.dump());
  const auto out_path = (temp_dir() / "sweep.csv").string();
  const CliResult result = run_cli("sweep " + config + " --out " + out_path);
  REQUIRE(result.exit_code == 0);
  const std::string csv = read_file(out_path);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
  CHECK(csv.rfind("platform.expiration_threshold,", 0) == 0);
}

TEST_CASE("cost with zero prices reports zero rates") {
  json doc = json::parse(table_config(2000, 13));
  doc["cost"] = {{"price_per_request", 0.0}};
  const std::string config = write_file("cost.json", doc.dump());
  const CliResult result = run_cli("cost " + config);
  REQUIRE(result.exit_code == 0);
  const json rates = json::parse(result.stdout_text);
  CHECK(rates["developer_cost_rate"] == 0.0);
  CHECK(rates["provider_cost_rate"] == 0.0);
}

TEST_CASE("cost without a cost section exits 2") {
  const std::string config = write_file("nocost.json", table_config(2000, 13));
  CHECK(run_cli("cost " + config).exit_code == 2);
}

TEST_SUITE_END();
