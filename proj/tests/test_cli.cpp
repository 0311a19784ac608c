#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    auto d = fs::temp_directory_path() /
             ("unimodal_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  auto out_path = scratch_dir() / ("out" + std::to_string(counter) + ".txt");
  auto err_path = scratch_dir() / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = std::string(CLI_PATH) + " " + args + " > " + out_path.string() +
                    " 2> " + err_path.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

fs::path write_file(const std::string& name, const std::string& content) {
  auto p = scratch_dir() / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("cli: summability example", "[cli]") {
  auto r = run_cli("summability --t 1 --alpha 2 --kmax 30");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["kmax"] == 30);
  CHECK(j["t"] == 1.0);
  double last = j["partial_sums"].back().get<double>();
  CHECK(std::fabs(last - (1.0 - std::pow(2.0, -30))) < 1e-9);
  CHECK(j["verdict"] == "ConvergentLooking");
}

TEST_CASE("cli: cascade report", "[cli]") {
  auto r = run_cli("cascade --t 0.95");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j["u"].size() == 4);
  CHECK(std::fabs(j["u"][1].get<double>() - 0.16175162884745312) < 1e-12);
  CHECK(j["q"] == json::array({3, 3, 8}));
  CHECK(j["termination"] == "UnderflowCap");
  CHECK(j["central_return"] == json::array({true, false, false}));
}

TEST_CASE("cli: telemann decomposition and injectivity", "[cli]") {
  auto r = run_cli("telemann --t 0.95 --k 500 --n0 2 --injectivity-kmax 100");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["m"] == 2);
  CHECK(j["r"] == 12);
  CHECK(j["k_list"] == json::array({361, 485, 488}));
  CHECK(j["s_list"] == json::array({1, 3, 2}));
  CHECK(j["residual"].get<double>() < 1e-8);
  CHECK(j["injectivity"]["pairs_checked"] == 4950);
  CHECK(j["injectivity"]["collisions"].empty());
}

TEST_CASE("cli: classify", "[cli]") {
  auto r = run_cli("classify --t 0.6");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["class"] == "P");
  CHECK(j["period"] == 1);
  CHECK(std::fabs(j["multiplier"].get<double>() + 0.4) < 1e-9);

  auto r2 = run_cli("classify --t 1");
  auto j2 = json::parse(r2.out);
  CHECK(j2["class"] == "M_candidate");
}

TEST_CASE("cli: lyapunov", "[cli]") {
  auto r = run_cli("lyapunov --t 1 --iters 1000000 --burn 0");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(std::fabs(j["lambda"].get<double>() - std::log(2.0)) < 1e-3);
  CHECK(j["x0"] == 0.3);
}

TEST_CASE("cli: sweep determinism across job counts", "[cli]") {
  auto a = run_cli("sweep --t-min 0.55 --t-max 1.0 --grid 5 --jobs 1 --kmax 200 --lyap-iters 20000");
  auto b = run_cli("sweep --t-min 0.55 --t-max 1.0 --grid 5 --jobs 2 --kmax 200 --lyap-iters 20000");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("t,class,n_central_returns,depth_reached,sigma_last,scaling_sum,"
                    "summability_partial,lyapunov,seed\n",
                    0) == 0);
  // 5 data rows after the header
  int lines = 0;
  for (char c : a.out)
    if (c == '\n') ++lines;
  CHECK(lines == 6);
}

TEST_CASE("cli: sweep json format", "[cli]") {
  auto r = run_cli("sweep --t-min 0.9 --t-max 1.0 --grid 3 --format json --kmax 100 --lyap-iters 20000");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 3);
  CHECK(j[0]["t"] == 0.9);
  CHECK(j[2]["t"] == 1.0);
  CHECK(j[2]["class"] == "M_candidate");
}

TEST_CASE("cli: csv is sweep-only", "[cli]") {
  auto r = run_cli("summability --t 1 --kmax 30 --format csv");
  CHECK(r.exit_code == 2);
  auto e = json::parse(r.err);
  CHECK(e["error"] == "DomainError");
}

TEST_CASE("cli: flag and domain errors", "[cli]") {
  SECTION("unknown flag") {
    auto r = run_cli("cascade --t 0.95 --no-such-flag 3");
    CHECK(r.exit_code == 2);
    auto e = json::parse(r.err);
    CHECK(e["error"] == "InvalidFlags");
  }
  SECTION("missing required parameter") {
    auto r = run_cli("cascade");
    CHECK(r.exit_code == 2);
  }
  SECTION("t outside [0,1]") {
    auto r = run_cli("cascade --t 1.5");
    CHECK(r.exit_code == 2);
    auto e = json::parse(r.err);
    CHECK(e["error"] == "DomainError");
  }
  SECTION("no fixed point below t = 1/2") {
    auto r = run_cli("mane --t 0.4 --level 1");
    CHECK(r.exit_code == 2);
    auto e = json::parse(r.err);
    CHECK(e["error"] == "NoFixedPoint");
  }
  SECTION("numerical failures exit 3") {
    auto r = run_cli("telemann --t 1 --k 100 --n0 3");
    CHECK(r.exit_code == 3);
    auto e = json::parse(r.err);
    CHECK(e["error"] == "CascadeTooShallow");
  }
  SECTION("non-nice branch point") {
    auto r = run_cli("branches --t 0.95 --u 0.3");
    CHECK(r.exit_code == 2);
    auto e = json::parse(r.err);
    CHECK(e["error"] == "NotNicePoint");
  }
}

TEST_CASE("cli: deterministic output", "[cli]") {
  auto a = run_cli("audit-prop31 --t 0.95 --level 3 --samples 150 --seed 5");
  auto b = run_cli("audit-prop31 --t 0.95 --level 3 --samples 150 --seed 5");
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  auto j = json::parse(a.out);
  CHECK(j["violations"] == 0);
  CHECK(j["growth"] == true);
}

TEST_CASE("cli: config file with command-line override", "[cli]") {
  auto cfg = write_file("cfg.json", R"({"summability": {"t": 1.0, "kmax": 30}})");
  auto base = run_cli("summability --config " + cfg.string());
  REQUIRE(base.exit_code == 0);
  CHECK(json::parse(base.out)["kmax"] == 30);

  auto over = run_cli("summability --config " + cfg.string() + " --kmax 15");
  REQUIRE(over.exit_code == 0);
  CHECK(json::parse(over.out)["kmax"] == 15);
}

TEST_CASE("cli: --out writes the same report to a file", "[cli]") {
  auto out_file = scratch_dir() / "cascade_report.json";
  auto direct = run_cli("cascade --t 0.95");
  auto filed = run_cli("cascade --t 0.95 --out " + out_file.string());
  REQUIRE(filed.exit_code == 0);
  CHECK(filed.out.empty());
  CHECK(slurp(out_file) == direct.out);
}

TEST_CASE("cli: map file", "[cli]") {
  SECTION("quadratic descriptor equals --t") {
    auto mf = write_file("map_quad.json", R"({"kind":"quadratic","t":1.0,"alpha":2.0})");
    auto a = run_cli("summability --map-file " + mf.string() + " --kmax 30");
    auto b = run_cli("summability --t 1 --kmax 30");
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
  }
  SECTION("polynomial descriptor of the same map") {
    auto mf = write_file("map_poly.json",
                         R"({"kind":"polynomial","alpha":2.0,"coefficients":[1.0,0.0,-2.0]})");
    auto r = run_cli("summability --map-file " + mf.string() + " --kmax 30");
    REQUIRE(r.exit_code == 0);
    auto j = json::parse(r.out);
    double last = j["partial_sums"].back().get<double>();
    CHECK(std::fabs(last - (1.0 - std::pow(2.0, -30))) < 1e-9);
  }
}

TEST_CASE("cli: branches report", "[cli]") {
  auto r = run_cli("branches --t 0.95 --level 2 --time-cap 1000");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["branches"].size() == 421);
  CHECK(j["level"] == 2);
  int validated = 0;
  for (const auto& b : j["branches"])
    if (b["validated"].get<bool>()) ++validated;
  CHECK(validated == 341);
}

TEST_CASE("cli: mane and density smoke", "[cli]") {
  auto r = run_cli("mane --t 1 --level 1 --r-max 30 --samples 10000 --seed 1");
  REQUIRE(r.exit_code == 0);
  auto j = json::parse(r.out);
  CHECK(j["lambda_hat"].get<double>() >= 1.5);

  auto d = run_cli("density --t 1 --iters 200000 --bins 50 --burn 1000");
  REQUIRE(d.exit_code == 0);
  auto jd = json::parse(d.out);
  REQUIRE(jd["masses"].size() == 50);
  double total = 0.0;
  for (const auto& m : jd["masses"]) total += m.get<double>();
  CHECK(std::fabs(total - 1.0) < 1e-9);
}
