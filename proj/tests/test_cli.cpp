#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = CAVITYJ_CLI;

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("cavityj_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >" + (scratch() / "stdout.txt").string() + " 2>" +
                          (scratch() / "stderr.txt").string();
  const int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out(const std::string& name) { return (scratch() / name).string(); }

}  // namespace

TEST_CASE("help and version") {
  CHECK(run("--help") == 0);
  CHECK(run("--version") == 0);
  CHECK(slurp(scratch() / "stdout.txt").find("0.") != std::string::npos);
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
}

TEST_CASE("pdos writes CSV and manifest") {
  REQUIRE(run("pdos --cavity fp --d-um 1 --omega-max-ev 10 --n 50 --out " + out("fp.csv")) == 0);
  const std::string csv = slurp(out("fp.csv"));
  CHECK(csv.find("omega_eV,pdos,pdos_free,delta_pdos,pdos_perp\n") != std::string::npos);
  CHECK(csv.find('\r') == std::string::npos);
  const auto m = nlohmann::json::parse(slurp(out("fp.csv") + ".manifest.json"));
  CHECK(m["status"] == "ok");
  CHECK(m["command"] == "pdos");
  CHECK(m["config"]["d-um"] == "1");
  CHECK(m["outputs"][0]["sha256"].get<std::string>().size() == 64);
  CHECK(m.contains("wall_time_s"));
}

TEST_CASE("surface pdos columns") {
  REQUIRE(run("pdos --cavity surface --substrate gold --z-nm 5 --omega-max-ev 8 --n 20 --out " +
              out("s.csv")) == 0);
  const std::string csv = slurp(out("s.csv"));
  CHECK(csv.find("omega_eV,pdos,pdos_free,delta_pdos,pdos_surface,pdos_bulk\n") != std::string::npos);
}

TEST_CASE("configuration errors exit with 2 and still write a manifest") {
  CHECK(run("pdos --n 0 --out " + out("bad.csv")) == 2);
  const auto m = nlohmann::json::parse(slurp(out("bad.csv") + ".manifest.json"));
  CHECK(m["status"] == "config_error");
  CHECK(run("pdos --cavity slab") == 2);
  CHECK(run("pdos --cavity surface --z-nm 5") == 2);
  CHECK(run("exchange --cavity surface --substrate nowhere --z-nm 2") == 2);
  CHECK(run("exchange --sweep-start 5 --sweep-stop 1 --sweep-count 3") == 2);
  CHECK(run("exchange --cavity fp --screening image") == 2);
  CHECK(run("variational --mode 1:x") == 2);
  CHECK(run("pdos --config " + out("missing.json")) == 2);
}

TEST_CASE("config file merges under explicit flags") {
  {
    std::ofstream cfg(out("cfg.json"));
    cfg << R"({"cavity":"delta","omega-ev":2.0,"g2":0.3,"t-ev":0.4})";
  }
  REQUIRE(run("exchange --config " + out("cfg.json") + " --g2 0.1 --out " + out("cfg.csv")) == 0);
  const std::string csv = slurp(out("cfg.csv"));
  CHECK(csv.find("\n0.1,") != std::string::npos);
  const auto m = nlohmann::json::parse(slurp(out("cfg.csv") + ".manifest.json"));
  CHECK(m["config"]["t-ev"] == "0.4");
  CHECK(m["config"]["g2"] == "0.1");
}

TEST_CASE("exchange sweep output") {
  REQUIRE(run("exchange --cavity surface --substrate gold --sweep-start 1 --sweep-stop 10 "
              "--sweep-count 3 --out " + out("ex.csv")) == 0);
  const std::string csv = slurp(out("ex.csv"));
  CHECK(csv.find("z_nm,J_over_J0_total,J_over_J0_dynamical,J_over_J0_screening,delta_U_eV,g_eff_sq,"
                 "theta,validity_flag") != std::string::npos);
  const auto m = nlohmann::json::parse(slurp(out("ex.csv") + ".manifest.json"));
  CHECK(m["points"].size() == 3);
}

TEST_CASE("Fabry-Perot validity flag") {
  REQUIRE(run("exchange --cavity fp --d-um 0.05 --out " + out("v.csv")) == 0);
  CHECK(slurp(out("v.csv")).find("outside_model_validity") != std::string::npos);
}

TEST_CASE("per-point failures are flagged and exit with 3") {
  // U0 + Delta U < 0 at the smallest distance only.
  REQUIRE(run("exchange --cavity surface --substrate gold --u0-ev 0.3 --t-ev 0.05 --sweep-start 0.3 "
              "--sweep-stop 20 --sweep-count 3 --out " + out("pf.csv")) == 3);
  const std::string csv = slurp(out("pf.csv"));
  CHECK(csv.find("error:") != std::string::npos);
  const auto m = nlohmann::json::parse(slurp(out("pf.csv") + ".manifest.json"));
  CHECK(m["status"] == "partial_failure");
}

TEST_CASE("repeated runs are byte-identical") {
  for (const std::string args :
       {"raman --grid-n 64 --n 200 --dj-percent 0 --dj-percent 2", "sqw --points-per-segment 3 --n 40",
        "dispersion --points-per-segment 5", "single-mode --substrate gold --z-nm 10 --n-min -1",
        "variational --mode 1:0.1:0.05 --sweep-start 0.5 --sweep-stop 2 --sweep-count 4"}) {
    REQUIRE(run(args + " --threads 2 --out " + out("a.csv")) == 0);
    const std::string first = slurp(out("a.csv"));
    REQUIRE(run(args + " --threads 2 --out " + out("a.csv")) == 0);
    CHECK(first == slurp(out("a.csv")));
  }
}

TEST_CASE("stdout output without a manifest") {
  REQUIRE(run("dispersion --points-per-segment 2") == 0);
  const std::string s = slurp(scratch() / "stdout.txt");
  CHECK(s.rfind("# cavityj", 0) == 0);
  CHECK(s.find("q_index,distance,kx,ky,label,energy_eV") != std::string::npos);
}
