#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kScenarios = fs::path(CACPERF_SOURCE_DIR) / "scenarios";

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("cacperf-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run cacperf(const std::string& args) {
  const auto out = scratch() / "stdout.txt";
  const auto err = scratch() / "stderr.txt";
  const std::string cmd = std::string(CACPERF_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string scenario(const char* name) { return (kScenarios / name).string(); }

fs::path write_temp(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("validate") {
  const auto ok = cacperf("validate --config " + scenario("default.json"));
  CHECK(ok.code == 0);
  CHECK(nlohmann::json::parse(ok.out)["capacity"] == 20);

  const auto bad = write_temp("order.json", R"({"capacity": 9, "classes": [
    {"arrival_rate": 1, "service_rate": 1, "bandwidth": 1, "admission_threshold": 4},
    {"arrival_rate": 1, "service_rate": 1, "bandwidth": 1, "admission_threshold": 2},
    {"arrival_rate": 1, "service_rate": 1, "bandwidth": 1, "admission_threshold": 1}]})");
  const auto r = cacperf("validate --config " + bad.string());
  CHECK(r.code == 2);
  CHECK(r.err.find("non-decreasing") != std::string::npos);

  CHECK(cacperf("validate --config " + write_temp("broken.json", "{\"capacity\": ").string()).code == 3);
  CHECK(cacperf("validate --config " + (scratch() / "absent.json").string()).code == 5);
  CHECK(cacperf("validate").code == 2);
  CHECK(cacperf("frobnicate --config x").code == 2);
}

TEST_CASE("solve") {
  const auto r = cacperf("solve --config " + scenario("erlang.json") + " --mode ctmc");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["per_class"][0]["blocking"].get<double>() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(j["mode"] == "ctmc");
  CHECK(j["tool"] == "cacperf");
  CHECK(j.contains("version"));
  CHECK(j["config"]["capacity"] == 2);
  CHECK(j["solver_residual"].get<double>() <= 1e-9);
  CHECK(j["validity_flag"] == true);

  auto unequal = nlohmann::json::parse(slurp(kScenarios / "default.json"));
  unequal["classes"][1]["arrival_rate"] = 2.5;
  const auto path = write_temp("unequal.json", unequal.dump());
  const auto rec = cacperf("solve --config " + path.string() + " --mode recurrence");
  REQUIRE(rec.code == 0);
  CHECK(nlohmann::json::parse(rec.out)["variant"] == "general");

  CHECK(cacperf("solve --config " + scenario("default.json") + " --mode erlangb").code == 4);
  CHECK(cacperf("solve --config " + scenario("default.json") + " --mode kr").code == 4);
  CHECK(cacperf("solve --config " + scenario("complete-sharing.json") + " --mode kr").code == 0);
  CHECK(cacperf("solve --config " + scenario("default.json") + " --mode nonsense").code == 4);
  CHECK(cacperf("solve --config " + scenario("default.json") + " --out /nonexistent-dir/x.json").code == 5);
}

TEST_CASE("simulate") {
  const auto zero = cacperf("simulate --config " + scenario("zero-traffic.json"));
  REQUIRE(zero.code == 0);
  CHECK(nlohmann::json::parse(zero.out)["degenerate"] == true);

  const auto out = scratch() / "sim.json";
  const auto r = cacperf("simulate --config " + scenario("default.json") + " --seed 5 --out " + out.string());
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  for (const auto& c : j["per_class"]) {
    CHECK(c.contains("ci_half_width"));
    CHECK(c["ci_half_width"].is_number());
  }

  CHECK(cacperf("simulate --config " + scenario("complete-sharing.json")).code == 2);
  CHECK(cacperf("simulate --config " + scenario("complete-sharing.json") + " --default-sim").code == 0);

  const auto trace = scratch() / "trace.csv";
  const auto td = cacperf("simulate --config " + scenario("trace-driven.json") + " --trace-out " + trace.string());
  CHECK(td.code == 0);
  CHECK(slurp(trace).rfind("time,class\n", 0) == 0);
}

TEST_CASE("sweep") {
  const auto out = scratch() / "sweep.csv";
  const auto svg = scratch() / "sweep.svg";
  const auto r = cacperf("sweep --config " + scenario("default.json") +
                         " --class 1 --lambda-from 0.5 --lambda-to 1.5 --steps 3 --modes ctmc --out " + out.string() +
                         " --plot " + svg.string());
  REQUIRE(r.code == 0);
  const auto rows = lines(slurp(out));
  REQUIRE(rows.size() == 13);
  CHECK(rows[0] == "lambda,class,mode,blocking,ci_low,ci_high");
  int overall = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto f = split(rows[k]);
    REQUIRE(f.size() == 6);
    CHECK(f[2] == "ctmc");
    CHECK(f[4].empty());
    CHECK(f[5].empty());
    overall += f[1] == "overall";
  }
  CHECK(overall == 3);
  CHECK(split(rows[1])[1] == "1");
  CHECK(split(rows[4])[1] == "overall");

  const auto plot = slurp(svg);
  CHECK(plot.find("<svg") != std::string::npos);
  CHECK(plot.find("lambda(class 1)") != std::string::npos);
  CHECK(plot.find("blocking probability") != std::string::npos);
  std::size_t polylines = 0;
  for (auto pos = plot.find("<polyline"); pos != std::string::npos; pos = plot.find("<polyline", pos + 1)) ++polylines;
  CHECK(polylines == 4);

  CHECK(cacperf("sweep --config " + scenario("default.json") + " --class 4").code == 2);
  CHECK(cacperf("sweep --config " + scenario("default.json") + " --steps 4").code == 2);
  CHECK(cacperf("sweep --config " + scenario("default.json") + " --modes ctmc,kr").code == 4);
  CHECK(cacperf("sweep --config " + scenario("default.json") + " --out /nonexistent-dir/s.csv").code == 5);
}

TEST_CASE("sweep with simulation rows carries intervals") {
  const auto r = cacperf("sweep --config " + scenario("erlang.json") +
                         " --lambda-from 0.5 --lambda-to 1 --steps 2 --modes sim,ctmc");
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 1 + 2 * 2 * 2);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const auto f = split(rows[k]);
    CHECK(f[2] == (k % 2 == 1 ? "ctmc" : "sim"));
    CHECK(f[4].empty() == (f[2] == "ctmc"));
  }
}

TEST_CASE("compare") {
  CHECK(cacperf("compare --config " + scenario("default.json") + " --tolerance 0.02").code == 0);
  const auto out = scratch() / "cmp.json";
  CHECK(cacperf("compare --config " + scenario("default.json") + " --tolerance 0 --out " + out.string()).code == 1);
  CHECK(nlohmann::json::parse(slurp(out)).contains("max_deviation"));
  CHECK(cacperf("compare --config " + scenario("complete-sharing.json")).code == 2);
}

TEST_CASE("outputs are byte-identical across runs") {
  for (const std::string args : {"solve --config " + scenario("default.json"),
                                 "simulate --config " + scenario("default.json") + " --seed 11",
                                 "sweep --config " + scenario("default.json") + " --lambda-from 1 --lambda-to 2 --steps 4 --modes ctmc,sim",
                                 "compare --config " + scenario("erlang.json")}) {
    CAPTURE(args);
    const auto a = cacperf(args);
    const auto b = cacperf(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
}
