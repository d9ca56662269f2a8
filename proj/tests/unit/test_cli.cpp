#include "casimir/cli.hpp"
#include "casimir/errors.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace casimir;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "casimir");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

std::vector<std::string> fields(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string f; std::getline(is, f, ',');) v.push_back(f);
  return v;
}

bool parse_number(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end != s.c_str() && *end == '\0';
}

// Header lines must match exactly; numeric fields to 1e-9 relative.
void compare_golden(const std::string& got, const std::string& want) {
  const auto g = lines(got), w = lines(want);
  REQUIRE(g.size() == w.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (w[i].rfind("#", 0) == 0) {
      CHECK(g[i] == w[i]);
      continue;
    }
    const auto gf = fields(g[i]), wf = fields(w[i]);
    REQUIRE(gf.size() == wf.size());
    for (std::size_t j = 0; j < gf.size(); ++j) {
      double a = 0.0, b = 0.0;
      if (parse_number(gf[j], a) && parse_number(wf[j], b) && std::isfinite(b)) {
        INFO("line " << i << " field " << j);
        CHECK(std::fabs(a - b) <= 1e-9 * std::fabs(b) + 1e-300);
      } else {
        CHECK(gf[j] == wf[j]);
      }
    }
  }
}

struct Golden {
  const char* name;
  std::vector<std::string> args;
};

const std::vector<std::string> kCommon = {"--no-timestamp", "--threads", "2"};

std::vector<Golden> golden_specs() {
  return {
      {"fig1a_plane_plane", {"plane-plane", "--material", "drude", "--gamma-d", "1e-2", "--wp-d", "400", "--tau-grid", "log:1e-2:1e1:4"}},
      {"fig1b_sphere_drude", {"entropy-vs-temperature", "--geometry", "sphere-sphere", "--ratio-dR", "20", "--material", "drude", "--gamma-d", "1e-2", "--wp-d", "400", "--tau-grid", "log:1e-2:1e2:5"}},
      {"fig2_mie", {"mie-table", "--sigma-R", "125663.70614359173", "--wp-R", "20", "--kR-grid", "log:1e-8:1:5"}},
      {"fig3_channels_entropy", {"channels", "--material", "drude", "--gamma-d", "1e2", "--wp-d", "400", "--tau-grid", "log:1e-1:1e2:4"}},
      {"fig4_channels_free_energy", {"channels", "--material", "drude", "--gamma-d", "10", "--wp-d", "400", "--observable", "free-energy", "--tau-grid", "log:1e-1:1e2:4"}},
      {"fig5_distance_pec", {"entropy-vs-distance", "--material", "pec", "--tauR", "1", "--dR-grid", "2.75,5,10", "--modes", "dipole,srt,full", "--lmax", "20"}},
      {"fig6_distance_drude", {"entropy-vs-distance", "--material", "drude", "--wp-R", "20", "--wp-over-2pi-gamma", "4e4", "--tauR", "1", "--dR-grid", "5,10", "--modes", "dipole,srt", "--lmax", "20"}},
      {"lpair_channels", {"channels", "--ratio-dR", "2.75", "--lmax", "10", "--mode", "srt", "--lpair-max", "2", "--tau-grid", "1,2.75"}},
  };
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("grid parsing") {
  const auto lg = cli::parse_grid("log:1e-3:1e2:6");
  REQUIRE(lg.size() == 6);
  CHECK(lg.front() == 1e-3);
  CHECK(lg.back() == 1e2);
  CHECK(lg[2] == doctest::Approx(1e-1));
  const auto ln = cli::parse_grid("lin:2:25:93");
  REQUIRE(ln.size() == 93);
  CHECK(ln[1] == doctest::Approx(2.25));
  CHECK(cli::parse_grid("1,2.5,7") == std::vector<double>{1.0, 2.5, 7.0});
  CHECK(cli::parse_grid("lin:3:3:1") == std::vector<double>{3.0});
  CHECK_THROWS_AS(cli::parse_grid(""), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("log:0:1:3"), DomainError);
  CHECK_THROWS_AS(cli::parse_grid("log:1:2:0"), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("log:1:2:2.5"), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("cubic:1:2:3"), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("1,x"), ConfigError);
  CHECK_THROWS_AS(cli::parse_grid("1,-2"), DomainError);
}

TEST_CASE("FNV-1a reference values") {
  CHECK(cli::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(cli::fnv1a("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("exit codes") {
  CHECK(run({"entropy-vs-temperature", "--tau-grid", "1", "--bogus"}).code == cli::kExitSpecError);
  CHECK(run({"entropy-vs-temperature"}).code == cli::kExitSpecError);
  CHECK(run({}).code == cli::kExitSpecError);
  CHECK(run({"entropy-vs-temperature", "--tau-grid", "log:0:1:3"}).code == cli::kExitSpecError);
  CHECK(run({"entropy-vs-temperature", "--tau-grid", "1", "--ratio-dR", "1.5"}).code == cli::kExitSpecError);
  CHECK(run({"entropy-vs-temperature", "--tau-grid", "1", "--material", "drude"}).code == cli::kExitSpecError);
  CHECK(run({"channels", "--tau-grid", "1", "--lpair-max", "3"}).code == cli::kExitSpecError);
  CHECK(run({"--help"}).code == cli::kExitOk);
  const auto v = run({"--version"});
  CHECK(v.code == cli::kExitOk);
  CHECK(v.out.find(cli::kVersion) != std::string::npos);
}

TEST_CASE("validity errors exit with 3 and name the sweep point") {
  const auto r = run({"plane-plane", "--material", "drude", "--gamma-d", "1e-2", "--wp-d", "400", "--tau-grid", "0.5",
                      "--quad-tol", "0.5"});
  CHECK(r.code == cli::kExitValidityError);
  CHECK(r.err.find("tau = 5.000000000000e-01") != std::string::npos);
  CHECK(r.out.empty());
}

TEST_CASE("CSV layout") {
  const auto r = run({"entropy-vs-temperature", "--tau-grid", "1,10", "--no-timestamp", "--threads", "1"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  std::size_t i = 0;
  while (i < ls.size() && ls[i].rfind("# ", 0) == 0) ++i;
  REQUIRE(i + 3 == ls.size());
  CHECK(ls[i] == "tau,S_total,S_TM,S_TE,S_mix,F_total,F_TM,F_TE,F_mix,err_est");
  CHECK(fields(ls[i + 1]).size() == 10);
  for (const char* key : {"# casimir_version: ", "# schema_version: 1", "# spec_hash: ", "# input: ", "# lmax: 1",
                          "# n_max_reached: ", "# tail_bound_max: ", "# S_HT_P: ", "# scale_dR6: "})
    CHECK(r.out.find(key) != std::string::npos);
  CHECK(r.out.find("# timestamp") == std::string::npos);
  const auto t = run({"entropy-vs-temperature", "--tau-grid", "1"});
  CHECK(t.out.find("# timestamp: ") != std::string::npos);
}

TEST_CASE("JSON layout") {
  const auto r = run({"channels", "--tau-grid", "1,10", "--observable", "free-energy", "--format", "json",
                      "--no-timestamp"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["metadata"]["schema_version"] == 1);
  CHECK(doc["metadata"]["command"] == "channels");
  REQUIRE(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["S_total"].is_null());
  CHECK(doc["rows"][0]["F_total"].get<double>() < 0.0);
  CHECK(doc["columns"][0] == "tau");
}

TEST_CASE("output is byte-identical across reruns and thread counts") {
  const std::vector<std::string> base = {"entropy-vs-distance", "--tauR", "1", "--dR-grid", "3,6", "--modes",
                                         "srt,full", "--lmax", "12", "--no-timestamp"};
  auto with_threads = [&](const char* n) {
    auto a = base;
    a.push_back("--threads");
    a.push_back(n);
    return run(a);
  };
  const auto a = with_threads("1");
  const auto b = with_threads("1");
  const auto c = with_threads("4");
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
}

TEST_CASE("spec hash tracks physics inputs only") {
  auto hash = [](const std::string& s) { return s.substr(s.find("# spec_hash: "), 30); };
  const auto a = run({"entropy-vs-temperature", "--tau-grid", "1", "--threads", "1"});
  const auto b = run({"entropy-vs-temperature", "--tau-grid", "1", "--threads", "3", "--no-timestamp"});
  const auto c = run({"entropy-vs-temperature", "--tau-grid", "2"});
  CHECK(hash(a.out) == hash(b.out));
  CHECK(hash(a.out) != hash(c.out));
}

TEST_CASE("touching spheres are skipped in distance scans") {
  const auto r = run({"entropy-vs-distance", "--dR-grid", "2,3", "--modes", "dipole", "--no-timestamp"});
  REQUIRE(r.code == 0);
  CHECK(r.err.find("skipped d/R = 2.000000000000e+00") != std::string::npos);
  CHECK(r.out.find("# skipped_d_over_R: [2.0]") != std::string::npos);
  CHECK(lines(r.out).back().rfind("3.000000000000e+00,dipole,", 0) == 0);
}

TEST_CASE("writes to an output file") {
  const auto path = std::filesystem::temp_directory_path() / "casimir_cli_test.csv";
  const auto r = run({"mie-table", "--sigma-R", "100", "--wp-R", "1", "--kR-grid", "1e-3", "--output", path.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str().find("kR,a1,b1,a2,minus_b1_over_a1") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("golden figure data") {
  const bool update = std::getenv("CASIMIR_UPDATE_GOLDEN") != nullptr;
  for (const auto& spec : golden_specs()) {
    auto args = spec.args;
    args.insert(args.end(), kCommon.begin(), kCommon.end());
    const auto r = run(args);
    INFO(spec.name << ": " << r.err);
    REQUIRE(r.code == 0);
    const auto path = std::filesystem::path(CASIMIR_GOLDEN_DIR) / (std::string(spec.name) + ".csv");
    if (update) {
      std::ofstream(path, std::ios::binary) << r.out;
      continue;
    }
    std::ifstream f(path, std::ios::binary);
    REQUIRE(f.good());
    std::stringstream want;
    want << f.rdbuf();
    compare_golden(r.out, want.str());
  }
}

}
