#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef _WIN32
#include <sys/wait.h>
#endif

#include "doctest.h"
#include "fcns/builtins.hpp"
#include "fcns/cli.hpp"
#include "fcns/field_io.hpp"
#include "fcns/leray.hpp"

using namespace fcns;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("fcns_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run(std::vector<std::string> args) {
  args.insert(args.begin(), "fcns");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("builtin data") {
  BuiltinParams p;
  p.dimension = 3;
  p.truncation_radius = 6.0;
  p.seed = 4;
  p.amplitude = 0.7;
  const FourierField small = builtin_initial_data("random-small", p);
  CHECK(std::abs(seminorm_A(small, 0.0) - 0.7) <= 1e-12);
  CHECK(is_divergence_free(small));
  CHECK(reality_defect(small) == 0.0);

  const FourierField single = builtin_initial_data("single-mode", p);
  CHECK(single.size() == 1);
  CHECK(single.coefficient({1, 0, 0}) == CVector{0.0, 0.7, 0.0});

  const FourierField tg = builtin_initial_data("taylor-green", p);
  CHECK(divergence_defect(tg) == 0.0);
  CHECK(reality_defect(tg) == 0.0);

  CHECK_THROWS_AS(builtin_initial_data("nope", p), Error);
  CHECK_THROWS_AS(builtin_advection("nope", p), Error);
  CHECK(builtin_advection("zero", p).sample(1.0).empty());
  CHECK(builtin_initial_names().size() >= 3);
}

TEST_CASE("help and configuration errors") {
  CHECK(run({"--help"}).code == kExitOk);
  CHECK(run({}).code == kExitConfigError);
  CHECK(run({"no-such-command"}).code == kExitConfigError);
  CHECK(run({"simulate-ns", "--bogus", "1"}).code == kExitConfigError);
  CHECK(run({"simulate-ns", "--nu", "abc"}).code == kExitConfigError);
  const fs::path dir = scratch_dir("errors");
  CHECK(run({"simulate-ns", "--nu", "-1", "--out", dir.string()}).code == kExitConfigError);
  CHECK(run({"simulate-linear", "--init", "nope", "--out", dir.string()}).code == kExitConfigError);
  CHECK(run({"verify-bounds", "--trajectory", (dir / "missing.jsonl").string(), "--out", dir.string()}).code ==
        kExitConfigError);
  fs::remove_all(dir);
}

TEST_CASE("simulate-ns writes its trajectory and report") {
  const fs::path dir = scratch_dir("ns");
  const CliResult r = run({"simulate-ns", "--dim", "2", "--trunc", "4", "--T", "0.1", "--dt", "1e-3", "--init",
                           "random-small", "--amplitude", "0.5", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("seed=", 0) == 0);
  CHECK(fs::exists(dir / "trajectory.jsonl"));
  CHECK(fs::exists(dir / "blowup.csv"));
  const Trajectory traj = read_trajectory(dir / "trajectory.jsonl");
  CHECK(traj.points.back().t == doctest::Approx(0.1));
  fs::remove_all(dir);
}

TEST_CASE("verify-oracles passes") {
  const fs::path dir = scratch_dir("oracles");
  const CliResult r = run({"verify-oracles", "--out", dir.string()});
  CHECK(r.code == kExitOk);
  const std::string csv = slurp(dir / "oracles.csv");
  CHECK(csv.rfind("case,t,k_or_j,expected,computed,abs_err\n", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("verify-bounds accepts a computed trajectory and rejects a corrupted one") {
  const fs::path dir = scratch_dir("bounds");
  const std::vector<std::string> common{"--dim", "2", "--trunc", "4", "--T", "0.2", "--dt", "1e-3",
                                        "--init", "random-small", "--advection", "zero", "--snapshot-every", "1"};
  std::vector<std::string> sim{"simulate-linear", "--out", dir.string()};
  sim.insert(sim.end(), common.begin(), common.end());
  REQUIRE(run(sim).code == kExitOk);

  const fs::path file = dir / "trajectory.jsonl";
  CHECK(run({"verify-bounds", "--trajectory", file.string(), "--advection", "zero", "--out", dir.string()}).code ==
        kExitOk);

  Trajectory traj = read_trajectory(file);
  for (auto& pt : traj.points) {
    if (pt.t > 0.0) {
      for (auto& [d, value] : pt.norms.values) value *= 2.0;
    }
  }
  const fs::path bad_dir = dir / "bad";
  fs::create_directories(bad_dir);
  const fs::path bad = write_trajectory(bad_dir, "trajectory", traj);
  const CliResult r =
      run({"verify-bounds", "--trajectory", bad.string(), "--advection", "zero", "--out", bad_dir.string()});
  CHECK(r.code == kExitVerificationFailed);
  CHECK(slurp(bad_dir / "bounds.csv").find(",0\n") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("options can come from a configuration file") {
  const fs::path dir = scratch_dir("config");
  {
    std::ofstream cfg(dir / "run.toml");
    cfg << "dim = 2\ntrunc = 4\nT = 0.05\ndt = 1e-3\ninit = \"taylor-green\"\nout = \"" << dir.generic_string()
        << "\"\n";
  }
  const CliResult r = run({"simulate-ns", "--config", (dir / "run.toml").string()});
  CHECK(r.code == kExitOk);
  const Trajectory traj = read_trajectory(dir / "trajectory.jsonl");
  CHECK(traj.dimension == 2);
  CHECK(traj.points.back().t == doctest::Approx(0.05));
  fs::remove_all(dir);
}

TEST_CASE("runs are deterministic") {
  const fs::path a = scratch_dir("det_a");
  const fs::path b = scratch_dir("det_b");
  for (const fs::path& dir : {a, b}) {
    REQUIRE(run({"simulate-delayed", "--dim", "2", "--trunc", "4", "--T", "0.1", "--dt", "1e-3", "--eps", "0.05",
                 "--init", "random-small", "--seed", "99", "--out", dir.string()})
                .code == kExitOk);
  }
  CHECK(slurp(a / "trajectory.jsonl") == slurp(b / "trajectory.jsonl"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("the installed binary") {
  const char* cli = std::getenv("FCNS_CLI");
  if (cli == nullptr) {
    MESSAGE("FCNS_CLI not set; skipping the binary checks");
    return;
  }
  const fs::path dir = scratch_dir("binary");
  const std::string base = std::string("\"") + cli + "\" ";
  const std::string quiet = " > \"" + (dir / "log.txt").string() + "\" 2>&1";
  auto status = [](int raw) {
#ifdef _WIN32
    return raw;
#else
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
#endif
  };
  CHECK(status(std::system((base + "fixed-point-check --out \"" + dir.string() + "\"" + quiet).c_str())) == kExitOk);
  CHECK(fs::exists(dir / "fixed_point.csv"));
  CHECK(status(std::system((base + "breakdown-report --dim 2 --trunc 4 --T 0.1 --out \"" + dir.string() + "\"" +
                            quiet).c_str())) == kExitOk);
  CHECK(fs::exists(dir / "breakdown.csv"));
  CHECK(status(std::system((base + "simulate-ns --bogus" + quiet).c_str())) == kExitConfigError);
  fs::remove_all(dir);
}
