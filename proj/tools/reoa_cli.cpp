// Command-line front end: measure evaluation, lemma scans, figure-data
// emission and verification campaigns.
//
// Exit codes: 0 success / verified, 1 violation found, 2 usage or config
// error, 3 I/O error. Results go to stdout or files; progress goes to stderr.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "reoa/campaign.hpp"
#include "reoa/io.hpp"
#include "reoa/lemma.hpp"
#include "reoa/polygamy.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

using reoa::json;

json scan_report_json(const reoa::ScanReport& report) {
  json j;
  j["function"] = report.function_id;
  j["domain"] = report.domain_id;
  j["step"] = report.step;
  j["tolerance"] = report.tolerance;
  j["points"] = report.points;
  j["min_margin"] = report.min_margin;
  j["arg_min"] = {{"x", report.arg_min.x},
                  {"y", report.arg_min.y},
                  {"alpha", report.arg_min.alpha}};
  j["violations"] = report.violations;
  if (!report.file.empty()) {
    j["file"] = report.file;
  }
  return j;
}

int run_measure(const std::string& state_path, const std::string& state_name,
                const std::vector<double>& alphas, int focus,
                const reoa::OptBudget& budget) {
  reoa::StateVariant state;
  std::string label;
  if (!state_name.empty()) {
    state = reoa::named_state(state_name);
    label = state_name;
  } else {
    state = reoa::load_state(state_path);
    label = state_path;
  }

  json out;
  out["state"] = label;

  if (std::holds_alternative<reoa::PureState>(state)) {
    const auto& psi = std::get<reoa::PureState>(state);
    if (focus < 0 || focus >= psi.n_qubits) {
      throw std::invalid_argument("measure: partition focus out of range");
    }
    out["kind"] = "pure";
    out["n_qubits"] = psi.n_qubits;
    json part;
    part["focus"] = focus;
    json partners = json::array();
    for (int q = 0; q < psi.n_qubits; ++q) {
      if (q != focus) {
        partners.push_back(q);
      }
    }
    part["partners"] = partners;
    out["partition"] = part;

    const double c = reoa::concurrence_pure_bipartition(psi, focus);
    out["concurrence"] = c;
    // A pure state has a single decomposition, so assisted quantities
    // coincide with the plain ones.
    out["coa"] = c;
    json per_alpha = json::array();
    for (double a : alphas) {
      const reoa::AlphaParam alpha(a);
      const double s = reoa::renyi_entanglement_pure(psi, focus, alpha);
      json row;
      row["alpha"] = a;
      row["s_alpha"] = s;
      row["e_alpha"] = s;
      row["reoa_lower"] = s;
      per_alpha.push_back(std::move(row));
    }
    out["per_alpha"] = std::move(per_alpha);
  } else {
    const auto& rho = std::get<reoa::DensityMatrix>(state);
    if (rho.n_qubits != 2) {
      throw std::invalid_argument(
          "measure: density-matrix input is supported for two qubits");
    }
    for (double a : alphas) {
      if (a < reoa::kAlphaLemmaLo - 1e-12) {
        throw std::invalid_argument(
            "measure: alpha below (sqrt(7)-1)/2 is invalid for mixed "
            "two-qubit E_alpha");
      }
    }
    out["kind"] = "density";
    out["n_qubits"] = 2;
    out["partition"] = {{"focus", 0}, {"partners", {1}}};
    out["concurrence"] = reoa::concurrence_mixed_2q(rho);
    out["coa"] = reoa::coa_exact(rho);
    json per_alpha = json::array();
    for (double a : alphas) {
      const reoa::AlphaParam alpha(a);
      json row;
      row["alpha"] = a;
      const std::array<int, 1> keep_a{0};
      const std::array<int, 1> keep_b{1};
      row["s_alpha_a"] = reoa::renyi_entropy(reoa::reduce(rho, keep_a), alpha);
      row["s_alpha_b"] = reoa::renyi_entropy(reoa::reduce(rho, keep_b), alpha);
      row["e_alpha"] = reoa::renyi_entanglement_2q(rho, alpha);
      row["reoa_lower"] = reoa::reoa_lower_bound(rho, alpha, budget).value;
      per_alpha.push_back(std::move(row));
    }
    out["per_alpha"] = std::move(per_alpha);
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int run_scan(const std::string& lemma_id, double step, double tolerance,
             const std::string& out_dir, unsigned threads) {
  std::optional<std::string> csv;
  auto csv_path = [&](const std::string& stem) -> std::optional<std::string> {
    if (out_dir.empty()) {
      return std::nullopt;
    }
    std::filesystem::create_directories(out_dir);
    return out_dir + "/" + stem + ".csv";
  };

  if (lemma_id == "critical-h" || lemma_id == "critical-m") {
    const auto fn = lemma_id == "critical-h" ? reoa::CriticalFunction::h
                                             : reoa::CriticalFunction::m;
    const reoa::CriticalPointReport report =
        reoa::critical_point_scan(fn, step);
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      reoa::detail::CsvWriter dx(out_dir + "/" + lemma_id + "-dx.csv");
      dx.header("x,alpha");
      for (const auto& p : report.zeros_dx) {
        dx.row({p.x, p.alpha});
      }
      dx.close_checked(out_dir + "/" + lemma_id + "-dx.csv");
      reoa::detail::CsvWriter da(out_dir + "/" + lemma_id + "-dalpha.csv");
      da.header("x,alpha");
      for (const auto& p : report.zeros_dalpha) {
        da.row({p.x, p.alpha});
      }
      da.close_checked(out_dir + "/" + lemma_id + "-dalpha.csv");
    }
    json j;
    j["function"] = report.function_id;
    j["domain"] = report.domain_id;
    j["step"] = report.step;
    j["zeros_dx"] = report.zeros_dx.size();
    j["zeros_dalpha"] = report.zeros_dalpha.size();
    j["min_pair_distance"] = report.min_pair_distance;
    j["contours_intersect"] = report.contours_intersect;
    std::cout << j.dump(2) << '\n';
    return report.contours_intersect ? kExitViolation : kExitOk;
  }

  reoa::ScanFunction fn;
  if (lemma_id == "g") {
    fn = reoa::ScanFunction::g;
  } else if (lemma_id == "h-D1") {
    fn = reoa::ScanFunction::h_d1;
  } else if (lemma_id == "h-D2") {
    fn = reoa::ScanFunction::h_d2;
  } else if (lemma_id == "m") {
    fn = reoa::ScanFunction::m;
  } else {
    throw std::invalid_argument(
        "scan: lemma id must be one of g, h-D1, h-D2, m, critical-h, "
        "critical-m");
  }
  csv = csv_path("scan-" + lemma_id);
  const reoa::ScanReport report =
      reoa::scan_sign(fn, step, tolerance, csv, threads);
  std::cout << scan_report_json(report).dump(2) << '\n';
  return report.passed() ? kExitOk : kExitViolation;
}

int run_figures(std::vector<std::string> ids, const std::string& out_dir,
                double step) {
  if (ids.empty()) {
    ids = {"1a", "1b", "2", "3", "4", "5", "6", "7"};
  }
  std::filesystem::create_directories(out_dir);
  json manifest;
  manifest["step"] = step;
  json files = json::array();
  for (const std::string& id : ids) {
    const auto fig = reoa::parse_figure_id(id);
    if (!fig) {
      throw std::invalid_argument("figures: unknown figure id '" + id + "'");
    }
    const std::string path = out_dir + "/fig" + id + ".csv";
    reoa::emit_figure_data(*fig, path, step);
    json entry;
    entry["id"] = id;
    entry["file"] = "fig" + id + ".csv";
    files.push_back(std::move(entry));
    std::cerr << "wrote " << path << '\n';
  }
  manifest["files"] = std::move(files);
  const std::string manifest_path = out_dir + "/manifest.json";
  std::ofstream mf(manifest_path);
  if (!mf) {
    throw std::runtime_error("figures: cannot write '" + manifest_path + "'");
  }
  mf << manifest.dump(2) << '\n';
  return kExitOk;
}

int run_verify(const std::string& config_path, const std::string& out_dir,
               std::optional<unsigned> threads,
               std::optional<std::uint64_t> seed,
               std::optional<int> restarts, std::optional<double> tol) {
  reoa::CampaignConfig cfg = reoa::load_campaign_config(config_path);
  if (threads) {
    cfg.threads = *threads;
  }
  if (seed) {
    cfg.seed = *seed;
  }
  if (restarts) {
    if (*restarts < 1) {
      throw std::invalid_argument("verify: --restarts must be >= 1");
    }
    cfg.budget.restarts = *restarts;
  }
  if (tol) {
    cfg.budget.tol = *tol;
  }

  const reoa::CampaignResult result = reoa::run_campaign(cfg);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string report_path = out_dir + "/report.jsonl";
    std::ofstream report(report_path, std::ios::binary);
    if (!report) {
      throw std::runtime_error("verify: cannot write '" + report_path + "'");
    }
    report << result.report_body();
    report.flush();
    if (!report) {
      throw std::runtime_error("verify: write to '" + report_path +
                               "' failed");
    }
    const std::string summary_path = out_dir + "/summary.json";
    std::ofstream summary(summary_path);
    if (!summary) {
      throw std::runtime_error("verify: cannot write '" + summary_path + "'");
    }
    summary << result.summary.to_json().dump(2) << '\n';
  }

  json per_inequality;
  for (const reoa::InequalityReport& r : result.reports) {
    json& bucket = per_inequality[r.inequality];
    if (bucket.is_null()) {
      bucket = {{"count", 0},
                {"violations", 0},
                {"worst_margin", std::numeric_limits<double>::infinity()}};
    }
    bucket["count"] = bucket["count"].get<long>() + 1;
    if (r.verdict == reoa::Verdict::violation) {
      bucket["violations"] = bucket["violations"].get<long>() + 1;
    }
    bucket["worst_margin"] =
        std::min(bucket["worst_margin"].get<double>(), r.margin);
  }
  json out = result.summary.to_json();
  out["per_inequality"] = std::move(per_inequality);
  std::cout << out.dump(2) << '\n';
  return result.summary.violations == 0 ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Bipartite and assisted entanglement measures for small multi-qubit "
      "states, lemma scans and polygamy-inequality verification"};
  app.require_subcommand(1);

  // measure
  auto* measure = app.add_subcommand(
      "measure", "Evaluate measures of a state file or named state");
  std::string state_path;
  std::string state_name;
  std::vector<double> alphas;
  int focus = 0;
  reoa::OptBudget budget;
  auto* state_opt =
      measure->add_option("--state", state_path, "state JSON file");
  measure->add_option("--name", state_name,
                      "named state: bell, ghz:N, w:N, product:N")
      ->excludes(state_opt);
  measure->add_option("--alpha", alphas, "Renyi order (repeatable)")
      ->required();
  measure->add_option("--partition", focus,
                      "focus qubit of the partition focus | rest");
  measure->add_option("--restarts", budget.restarts, "optimizer restarts");
  measure->add_option("--max-sweeps", budget.max_sweeps,
                      "optimizer sweep cap");
  measure->add_option("--tol", budget.tol, "optimizer convergence tolerance");
  measure->add_option("--seed", budget.seed, "optimizer seed");

  // scan
  auto* scan = app.add_subcommand("scan", "Sign or critical-point scan");
  std::string lemma_id;
  double scan_step = 1e-3;
  double scan_tol = 1e-9;
  std::string scan_out;
  unsigned scan_threads = 0;
  scan->add_option("--lemma", lemma_id,
                   "one of g, h-D1, h-D2, m, critical-h, critical-m")
      ->required();
  scan->add_option("--step", scan_step, "grid step");
  scan->add_option("--tolerance", scan_tol,
                   "sign tolerance (negative tightens the claim)");
  scan->add_option("--out", scan_out, "directory for per-point CSV output");
  scan->add_option("--threads", scan_threads, "worker threads (0 = auto)");

  // figures
  auto* figures = app.add_subcommand("figures", "Emit figure data CSVs");
  std::vector<std::string> figure_ids;
  std::string figures_out = "figures";
  double figures_step = 1e-3;
  figures->add_option("--ids", figure_ids,
                      "subset of 1a 1b 2 3 4 5 6 7 (default: all)");
  figures->add_option("--out", figures_out, "output directory");
  figures->add_option("--step", figures_step, "grid step");

  // verify
  auto* verify = app.add_subcommand("verify", "Run a verification campaign");
  std::string config_path;
  std::string verify_out;
  unsigned verify_threads = 0;
  std::uint64_t verify_seed = 0;
  int verify_restarts = 0;
  double verify_tol = 0.0;
  verify->add_option("--config", config_path, "campaign config JSON")
      ->required();
  verify->add_option("--out", verify_out,
                     "directory for report.jsonl and summary.json");
  auto* threads_opt =
      verify->add_option("--threads", verify_threads, "worker threads");
  auto* seed_opt = verify->add_option("--seed", verify_seed,
                                      "override the campaign seed");
  auto* restarts_opt = verify->add_option("--restarts", verify_restarts,
                                          "override optimizer restarts");
  auto* tol_opt =
      verify->add_option("--tol", verify_tol, "override optimizer tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);
    }
    std::cerr << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (measure->parsed()) {
      if (state_path.empty() && state_name.empty()) {
        std::cerr << "measure: one of --state or --name is required\n";
        return kExitUsage;
      }
      return run_measure(state_path, state_name, alphas, focus, budget);
    }
    if (scan->parsed()) {
      return run_scan(lemma_id, scan_step, scan_tol, scan_out, scan_threads);
    }
    if (figures->parsed()) {
      return run_figures(figure_ids, figures_out, figures_step);
    }
    if (verify->parsed()) {
      return run_verify(
          config_path, verify_out,
          threads_opt->count() ? std::optional<unsigned>(verify_threads)
                               : std::nullopt,
          seed_opt->count() ? std::optional<std::uint64_t>(verify_seed)
                            : std::nullopt,
          restarts_opt->count() ? std::optional<int>(verify_restarts)
                                : std::nullopt,
          tol_opt->count() ? std::optional<double>(verify_tol) : std::nullopt);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}
