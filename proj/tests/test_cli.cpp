// End-to-end checks of the installed binary: exit codes, artifact layout,
// and byte-level determinism of the draws file. Each case shells out to the
// real executable so the argument parsing and error mapping are exercised
// exactly as a user sees them.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kCli = BDLM_CLI_PATH;

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "bdlm_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

RunResult run_cli(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "run.log";
  const std::string cmd = kCli + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  RunResult r;
#ifdef _WIN32
  r.exit_code = raw;
#else
  r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
#endif
  std::ifstream in(log);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.output = buf.str();
  return r;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("elicit prints the published prior constants") {
  const fs::path dir = scratch_dir();
  const RunResult r = run_cli("elicit", dir);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("Gamma(3.7846, 1.5300)") != std::string::npos);
  CHECK(r.output.find("Beta(6.0000, 3.0000)") != std::string::npos);
  CHECK(r.output.find("mean: 0.6667") != std::string::npos);
  CHECK(r.output.find("sd: 0.149") != std::string::npos);

  const RunResult custom = run_cli("elicit --tau0 0 --a 1 --b 1", dir);
  CHECK(custom.exit_code == 0);
  CHECK(custom.output.find("Gamma(1.0000, 1.5300)") != std::string::npos);
  CHECK(custom.output.find("mean: 0.5000") != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  const fs::path dir = scratch_dir();
  CHECK(run_cli("", dir).exit_code == 1);
  CHECK(run_cli("frobnicate", dir).exit_code == 1);
  CHECK(run_cli("fit", dir).exit_code == 1);  // --config is required
  CHECK(run_cli("--help", dir).exit_code == 0);
}

TEST_CASE("data errors exit 2") {
  const fs::path dir = scratch_dir();
  const RunResult missing = run_cli("fit --config " + (dir / "nope.cfg").string(), dir);
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("error:") != std::string::npos);

  const fs::path bad_key = dir / "bad.cfg";
  write_file(bad_key, "no_such_key = 1\n");
  const RunResult bad = run_cli("fit --config " + bad_key.string(), dir);
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("unknown key") != std::string::npos);

  const fs::path no_data = dir / "nodata.cfg";
  write_file(no_data, "data = " + (dir / "absent.csv").string() + "\n");
  CHECK(run_cli("fit --config " + no_data.string(), dir).exit_code == 2);

  const fs::path bad_cell = dir / "bad_cell.cfg";
  const fs::path csv = dir / "bad_cell.csv";
  write_file(csv, "y\n1.0\noops\n");
  write_file(bad_cell, "data = " + csv.string() + "\niterations = 5\nburn_in = 0\n");
  const RunResult cell = run_cli("fit --config " + bad_cell.string(), dir);
  CHECK(cell.exit_code == 2);
  CHECK(cell.output.find("row 3") != std::string::npos);
}

TEST_CASE("numerical collapse exits 3") {
  const fs::path dir = scratch_dir();
  const fs::path csv = dir / "blow.csv";
  std::string body = "y\n";
  for (int t = 0; t < 8; ++t) body += (t % 2 == 0) ? "1e200\n" : "-1e200\n";
  write_file(csv, body);
  const fs::path cfg = dir / "blow.cfg";
  write_file(cfg, "data = " + csv.string() + "\niterations = 5\nburn_in = 0\nout_dir = " +
                      (dir / "blow_out").string() + "\n");
  const RunResult r = run_cli("fit --config " + cfg.string(), dir);
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("chain 1") != std::string::npos);
}

TEST_CASE("simulate, fit, summarize pipeline produces all artifacts") {
  const fs::path dir = scratch_dir();

  const fs::path sim_cfg = dir / "sim.cfg";
  write_file(sim_cfg, "seed = 42\nT = 80\nout_dir = " + (dir / "sim").string() + "\n");
  const RunResult sim = run_cli("simulate --config " + sim_cfg.string(), dir);
  CHECK(sim.exit_code == 0);
  for (const char* name : {"data.csv", "truth.csv", "metadata.txt", "resolved_config.txt"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / "sim" / name));
  }

  const fs::path fit_cfg = dir / "fit.cfg";
  write_file(fit_cfg, "seed = 7\nchains = 2\niterations = 20\nburn_in = 4\nthin = 2\n"
                      "data = " + (dir / "sim" / "data.csv").string() +
                      "\nout_dir = " + (dir / "fit").string() + "\n");
  const RunResult fit = run_cli("fit --config " + fit_cfg.string(), dir);
  CHECK(fit.exit_code == 0);
  for (const char* name :
       {"draws.csv", "state_mean.csv", "omega_mean.csv", "manifest.txt", "resolved_config.txt"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / "fit" / name));
  }
  const std::string manifest = read_file(dir / "fit" / "manifest.txt");
  CHECK(manifest.find("retained = 16") != std::string::npos);
  CHECK(manifest.find("config_hash = ") != std::string::npos);
  CHECK(manifest.find("wall_seconds = ") != std::string::npos);

  const fs::path sum_cfg = dir / "sum.cfg";
  write_file(sum_cfg, "draws = " + (dir / "fit" / "draws.csv").string() +
                      "\nout_dir = " + (dir / "sum").string() + "\n");
  const RunResult sum = run_cli("summarize --config " + sum_cfg.string(), dir);
  CHECK(sum.exit_code == 0);
  for (const char* name : {"summary.csv", "draws_long.csv", "summarize_manifest.txt"}) {
    CAPTURE(name);
    CHECK(fs::exists(dir / "sum" / name));
  }
  // 16 retained draws: too few for split-chain diagnostics, skipped with a note.
  CHECK_FALSE(fs::exists(dir / "sum" / "diagnostics.csv"));
  CHECK(sum.output.find("diagnostics") != std::string::npos);

  const std::string header = read_file(dir / "sum" / "draws_long.csv").substr(0, 21);
  CHECK(header == "parameter,draw,value\n");
}

TEST_CASE("fit is deterministic for a fixed seed") {
  const fs::path dir = scratch_dir();
  const fs::path sim_cfg = dir / "sim.cfg";
  write_file(sim_cfg, "seed = 9\nT = 60\nout_dir = " + (dir / "sim").string() + "\n");
  REQUIRE(run_cli("simulate --config " + sim_cfg.string(), dir).exit_code == 0);

  const std::string base = "seed = 5\nchains = 1\niterations = 15\nburn_in = 5\n"
                           "data = " + (dir / "sim" / "data.csv").string() + "\n";
  const fs::path cfg_a = dir / "a.cfg";
  const fs::path cfg_b = dir / "b.cfg";
  write_file(cfg_a, base + "out_dir = " + (dir / "out_a").string() + "\n");
  write_file(cfg_b, base + "out_dir = " + (dir / "out_b").string() + "\n");
  REQUIRE(run_cli("fit --config " + cfg_a.string(), dir).exit_code == 0);
  REQUIRE(run_cli("fit --config " + cfg_b.string(), dir).exit_code == 0);

  const std::string draws_a = read_file(dir / "out_a" / "draws.csv");
  const std::string draws_b = read_file(dir / "out_b" / "draws.csv");
  REQUIRE(!draws_a.empty());
  CHECK(draws_a == draws_b);

  // --seed on the command line overrides the config and changes the draws.
  const fs::path cfg_c = dir / "c.cfg";
  write_file(cfg_c, base + "out_dir = " + (dir / "out_c").string() + "\n");
  REQUIRE(run_cli("fit --config " + cfg_c.string() + " --seed 6", dir).exit_code == 0);
  CHECK(read_file(dir / "out_c" / "draws.csv") != draws_a);
}

TEST_CASE("detrend and standardize flow through fit") {
  const fs::path dir = scratch_dir();
  const fs::path sim_cfg = dir / "sim.cfg";
  write_file(sim_cfg, "seed = 3\nT = 70\nout_dir = " + (dir / "sim").string() + "\n");
  REQUIRE(run_cli("simulate --config " + sim_cfg.string(), dir).exit_code == 0);

  const fs::path fit_cfg = dir / "fit.cfg";
  write_file(fit_cfg, "seed = 2\niterations = 10\nburn_in = 0\ndetrend = true\n"
                      "detrend_k = 20\nstandardize = true\n"
                      "data = " + (dir / "sim" / "data.csv").string() +
                      "\nout_dir = " + (dir / "fit").string() + "\n");
  REQUIRE(run_cli("fit --config " + fit_cfg.string(), dir).exit_code == 0);
  const std::string manifest = read_file(dir / "fit" / "manifest.txt");
  CHECK(manifest.find("detrended = true") != std::string::npos);
  CHECK(manifest.find("standardized = true") != std::string::npos);
}
