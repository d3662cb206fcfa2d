#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "reoa/io.hpp"

#ifndef REOA_CLI_PATH
#error "REOA_CLI_PATH must point at the built CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct RunResult {
  int exit_code = -1;
  std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
  const std::string out_file =
      (fs::temp_directory_path() / "reoa_cli_stdout.txt").string();
  const std::string cmd = std::string(REOA_CLI_PATH) + " " + args + " > " +
                          out_file + " 2> /dev/null";
  const int raw = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  std::ifstream in(out_file, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  result.stdout_text = buf.str();
  fs::remove(out_file);
  return result;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path temp_dir(const std::string& stem) {
  const fs::path dir = fs::temp_directory_path() / stem;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("measure on named states") {
  const RunResult bell = run_cli("measure --name bell --alpha 1.2");
  REQUIRE(bell.exit_code == 0);
  const auto j = ordered_json::parse(bell.stdout_text);
  REQUIRE(j["kind"] == "pure");
  REQUIRE_THAT(j["concurrence"].get<double>(),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(j["per_alpha"][0]["e_alpha"].get<double>(),
               Catch::Matchers::WithinAbs(1.0, 1e-12));

  const RunResult prod = run_cli("measure --name product:3 --alpha 1.2");
  REQUIRE(prod.exit_code == 0);
  const auto p = ordered_json::parse(prod.stdout_text);
  REQUIRE(p["concurrence"].get<double>() == 0.0);
  REQUIRE(p["per_alpha"][0]["e_alpha"].get<double>() == 0.0);

  const RunResult w3 =
      run_cli("measure --name w:3 --alpha 1.2 --partition 0");
  REQUIRE(w3.exit_code == 0);
  const auto w = ordered_json::parse(w3.stdout_text);
  REQUIRE_THAT(w["concurrence"].get<double>(),
               Catch::Matchers::WithinAbs(2.0 * std::numbers::sqrt2 / 3.0,
                                          1e-9));
}

TEST_CASE("measure on a state file and the density path") {
  const fs::path dir = temp_dir("reoa_cli_measure");
  const fs::path state_path = dir / "mixed.json";
  reoa::save_state(reoa::ginibre_random_mixed(2, 2, reoa::RngSeed{5}),
                   state_path.string());
  const RunResult res = run_cli("measure --state " + state_path.string() +
                                " --alpha 0.9 --alpha 1.2 --restarts 4");
  REQUIRE(res.exit_code == 0);
  const auto j = ordered_json::parse(res.stdout_text);
  REQUIRE(j["kind"] == "density");
  REQUIRE(j["per_alpha"].size() == 2);
  REQUIRE(j["coa"].get<double>() >= j["concurrence"].get<double>() - 1e-12);
  // reoa lower bound must not exceed the subunit ceiling.
  const auto& row = j["per_alpha"][0];
  const double ceiling = std::min(row["s_alpha_a"].get<double>(),
                                  row["s_alpha_b"].get<double>());
  REQUIRE(row["reoa_lower"].get<double>() <= ceiling + 1e-6);
  fs::remove_all(dir);
}

TEST_CASE("usage and validation errors exit with code 2") {
  REQUIRE(run_cli("measure --alpha 1.2").exit_code == 2);  // no state
  REQUIRE(run_cli("nonsense").exit_code == 2);
  REQUIRE(run_cli("measure --name bell").exit_code == 2);  // missing alpha
  REQUIRE(run_cli("scan --lemma bogus").exit_code == 2);
  REQUIRE(run_cli("scan --lemma g --step 0.5").exit_code == 2);
  // Mixed-state E_alpha below the validity threshold.
  const fs::path dir = temp_dir("reoa_cli_badalpha");
  const fs::path state_path = dir / "mixed.json";
  reoa::save_state(reoa::ginibre_random_mixed(2, 2, reoa::RngSeed{6}),
                   state_path.string());
  REQUIRE(run_cli("measure --state " + state_path.string() +
                  " --alpha 0.5").exit_code == 2);
  fs::remove_all(dir);
}

TEST_CASE("scan subcommand verdicts and exit codes") {
  const RunResult ok = run_cli("scan --lemma g --step 0.02");
  REQUIRE(ok.exit_code == 0);
  const auto j = ordered_json::parse(ok.stdout_text);
  REQUIRE(j["violations"].get<long>() == 0);
  REQUIRE(j["min_margin"].get<double>() >= -1e-9);

  // Negative tolerance tightens the claim above what holds on the axes.
  const RunResult tight = run_cli("scan --lemma g --step 0.05 --tolerance -0.001");
  REQUIRE(tight.exit_code == 1);

  const RunResult crit = run_cli("scan --lemma critical-m --step 0.01");
  REQUIRE(crit.exit_code == 0);
  const auto c = ordered_json::parse(crit.stdout_text);
  REQUIRE(c["contours_intersect"].get<bool>() == false);
}

TEST_CASE("scan writes CSVs into the out directory") {
  const fs::path dir = temp_dir("reoa_cli_scan");
  const RunResult res =
      run_cli("scan --lemma m --step 0.02 --out " + dir.string());
  REQUIRE(res.exit_code == 0);
  REQUIRE(fs::exists(dir / "scan-m.csv"));
  fs::remove_all(dir);
}

TEST_CASE("figures emits the full set plus manifest, deterministically") {
  const fs::path dir = temp_dir("reoa_cli_figs");
  const RunResult res =
      run_cli("figures --out " + dir.string() + " --step 0.01");
  REQUIRE(res.exit_code == 0);
  for (const std::string id : {"1a", "1b", "2", "3", "4", "5", "6", "7"}) {
    REQUIRE(fs::exists(dir / ("fig" + id + ".csv")));
  }
  REQUIRE(fs::exists(dir / "manifest.json"));
  const auto manifest = ordered_json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest["files"].size() == 8);

  const std::string fig2_first = slurp(dir / "fig2.csv");
  const RunResult rerun =
      run_cli("figures --ids 2 --out " + dir.string() + " --step 0.01");
  REQUIRE(rerun.exit_code == 0);
  REQUIRE(slurp(dir / "fig2.csv") == fig2_first);
  fs::remove_all(dir);
}

TEST_CASE("figures with an unwritable output directory exits 3") {
  REQUIRE(run_cli("figures --ids 2 --out /proc/reoa_nowrite").exit_code == 3);
}

TEST_CASE("verify runs a small campaign end to end") {
  const fs::path dir = temp_dir("reoa_cli_verify");
  const fs::path cfg_path = dir / "campaign.json";
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({
      "seed": 7,
      "alpha": [0.9, 1.2],
      "mu": [0.0, 1.0],
      "budget": {"restarts": 4},
      "checks": [
        {"inequality": "eq2", "count": 5, "n_qubits": 3},
        {"inequality": "eq19pure", "count": 3, "n_qubits": 3},
        {"inequality": "eq24", "count": 2, "n_qubits": 3},
        {"inequality": "eq8", "count": 2, "ranks": [2, 3], "alpha": [0.9]}
      ]
    })";
  }
  const RunResult res = run_cli("verify --config " + cfg_path.string() +
                                " --out " + dir.string());
  REQUIRE(res.exit_code == 0);
  const auto summary = ordered_json::parse(res.stdout_text);
  REQUIRE(summary["violations"].get<long>() == 0);
  REQUIRE(summary["total"].get<long>() == 5 + 3 * 2 + 2 * 2 * 2 + 2);
  REQUIRE(fs::exists(dir / "report.jsonl"));
  REQUIRE(fs::exists(dir / "summary.json"));

  // Byte-identical report body across reruns and thread counts.
  const std::string body = slurp(dir / "report.jsonl");
  const RunResult rerun = run_cli("verify --config " + cfg_path.string() +
                                  " --out " + dir.string() + " --threads 8");
  REQUIRE(rerun.exit_code == 0);
  REQUIRE(slurp(dir / "report.jsonl") == body);

  // Config validation failure paths.
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"seed": 1, "alpha": [2.5], "checks":
         [{"inequality": "eq19pure", "count": 1, "mode": "certified"}]})";
  }
  REQUIRE(run_cli("verify --config " + cfg_path.string()).exit_code == 2);
  REQUIRE(run_cli("verify --config /does/not/exist.json").exit_code == 3);

  // Zero-count campaign verifies trivially.
  {
    std::ofstream cfg(cfg_path);
    cfg << R"({"seed": 1, "alpha": [1.0], "checks": []})";
  }
  const RunResult empty = run_cli("verify --config " + cfg_path.string());
  REQUIRE(empty.exit_code == 0);
  REQUIRE(ordered_json::parse(empty.stdout_text)["total"].get<long>() == 0);
  fs::remove_all(dir);
}
