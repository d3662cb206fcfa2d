#pragma once

// Randomized verification campaigns. A campaign config (JSON) describes a
// list of check blocks; each block expands into items (state x alpha x mu),
// every item yields one InequalityReport line. Items are independent tasks:
// the state for (block, state index) is derived from the campaign seed, and
// report lines are emitted in item-index order whatever the thread schedule,
// so a fixed seed gives a byte-identical report body for any thread count.

#include <chrono>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "reoa/io.hpp"
#include "reoa/parallel.hpp"
#include "reoa/polygamy.hpp"

namespace reoa {

struct CheckBlock {
  std::string inequality;        // eq2 | eq19pure | eq19mixed | eq24 | lemma1 | eq8
  int count = 0;                 // number of random states
  int n_qubits = 3;              // for pure-state batteries
  std::vector<int> ranks{2, 3, 4};  // cycled for mixed-state batteries
  std::vector<double> alphas;    // empty = campaign default grid
  std::string mode = "certified";  // eq19pure: certified | optimized
};

struct CampaignConfig {
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0 = hardware default
  std::vector<double> alphas;
  std::vector<double> mus{1.0};
  OptBudget budget;
  std::vector<CheckBlock> checks;
};

namespace detail {

inline void config_error(const std::string& path, const std::string& what) {
  throw std::invalid_argument("campaign config: " + path + ": " + what);
}

inline void require_alpha_admissible(const std::string& path,
                                     const CheckBlock& block, double a) {
  AlphaParam alpha(0.5);
  try {
    alpha = AlphaParam(a);
  } catch (const std::exception&) {
    config_error(path, "alpha must be positive");
  }
  const std::string& id = block.inequality;
  if (id == "eq8") {
    if (!(a < 1.0) || a < kAlphaLemmaLo - 1e-12) {
      config_error(path, "eq8 needs alpha in [(sqrt(7)-1)/2, 1)");
    }
  } else if (id == "eq19pure") {
    if (block.mode == "certified" && !alpha.in_lemma_range) {
      config_error(path,
                   "certified eq19pure needs alpha in the lemma range "
                   "[(sqrt(7)-1)/2, (sqrt(13)-1)/2]");
    }
    if (block.mode == "optimized" && a < kAlphaLemmaLo - 1e-12) {
      config_error(path, "eq19pure needs alpha >= (sqrt(7)-1)/2");
    }
  } else if (id == "eq19mixed" || id == "eq24") {
    if (!alpha.in_lemma_range) {
      config_error(path, id + " needs alpha in the lemma range");
    }
  } else if (id == "lemma1") {
    if (a < kAlphaLemmaLo - 1e-12) {
      config_error(path, "lemma1 needs alpha >= (sqrt(7)-1)/2");
    }
  }
}

}  // namespace detail

inline CampaignConfig parse_campaign_config(const json& j) {
  CampaignConfig cfg;
  if (!j.is_object()) {
    detail::config_error("$", "config must be a JSON object");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      detail::config_error("$.seed", "must be an integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    cfg.threads = j["threads"].get<unsigned>();
  }
  if (j.contains("alpha")) {
    if (!j["alpha"].is_array() || j["alpha"].empty()) {
      detail::config_error("$.alpha", "must be a non-empty array");
    }
    for (const auto& v : j["alpha"]) {
      cfg.alphas.push_back(v.get<double>());
    }
  }
  if (j.contains("mu")) {
    if (!j["mu"].is_array() || j["mu"].empty()) {
      detail::config_error("$.mu", "must be a non-empty array");
    }
    cfg.mus.clear();
    for (const auto& v : j["mu"]) {
      const double m = v.get<double>();
      if (m < 0.0 || m > 1.0) {
        detail::config_error("$.mu", "entries must lie in [0, 1]");
      }
      cfg.mus.push_back(m);
    }
  }
  if (j.contains("budget")) {
    const auto& b = j["budget"];
    if (!b.is_object()) {
      detail::config_error("$.budget", "must be an object");
    }
    if (b.contains("restarts")) {
      cfg.budget.restarts = b["restarts"].get<int>();
      if (cfg.budget.restarts < 1) {
        detail::config_error("$.budget.restarts", "must be >= 1");
      }
    }
    if (b.contains("max_sweeps")) {
      cfg.budget.max_sweeps = b["max_sweeps"].get<int>();
    }
    if (b.contains("tol")) {
      cfg.budget.tol = b["tol"].get<double>();
    }
  }
  if (!j.contains("checks") || !j["checks"].is_array()) {
    detail::config_error("$.checks", "must be an array (may be empty)");
  }
  int idx = 0;
  for (const auto& c : j["checks"]) {
    const std::string path = "$.checks[" + std::to_string(idx) + "]";
    CheckBlock block;
    if (!c.is_object() || !c.contains("inequality")) {
      detail::config_error(path, "must be an object with an 'inequality'");
    }
    block.inequality = c["inequality"].get<std::string>();
    static const std::vector<std::string> known{
        "eq1", "eq2", "eq8", "lemma1", "eq19pure", "eq19mixed", "eq24"};
    if (std::find(known.begin(), known.end(), block.inequality) ==
        known.end()) {
      detail::config_error(path + ".inequality",
                           "unknown inequality '" + block.inequality + "'");
    }
    if (block.inequality == "eq1") {
      block.inequality = "eq2";  // eq1 is the three-qubit case of eq2
      block.n_qubits = 3;
    }
    if (!c.contains("count")) {
      detail::config_error(path + ".count", "required");
    }
    block.count = c["count"].get<int>();
    if (block.count < 0) {
      detail::config_error(path + ".count", "must be >= 0");
    }
    if (c.contains("n_qubits")) {
      block.n_qubits = c["n_qubits"].get<int>();
      if (block.n_qubits < 3 || block.n_qubits > kMaxQubits) {
        detail::config_error(path + ".n_qubits", "must lie in [3, 6]");
      }
    }
    if (c.contains("ranks")) {
      block.ranks.clear();
      for (const auto& r : c["ranks"]) {
        const int rank = r.get<int>();
        if (rank < 1 || rank > 4) {
          detail::config_error(path + ".ranks", "entries must lie in [1, 4]");
        }
        block.ranks.push_back(rank);
      }
      if (block.ranks.empty()) {
        detail::config_error(path + ".ranks", "must be non-empty");
      }
    }
    if (c.contains("mode")) {
      block.mode = c["mode"].get<std::string>();
      if (block.mode != "certified" && block.mode != "optimized") {
        detail::config_error(path + ".mode",
                             "must be 'certified' or 'optimized'");
      }
    }
    if (c.contains("alpha")) {
      block.alphas.clear();
      for (const auto& v : c["alpha"]) {
        block.alphas.push_back(v.get<double>());
      }
      if (block.alphas.empty()) {
        detail::config_error(path + ".alpha", "must be non-empty");
      }
    }
    const bool alpha_free = block.inequality == "eq2";
    const std::vector<double>& grid =
        block.alphas.empty() ? cfg.alphas : block.alphas;
    if (!alpha_free) {
      if (grid.empty()) {
        detail::config_error(path,
                             "no alpha grid (set $.alpha or a per-check "
                             "'alpha' list)");
      }
      for (double a : grid) {
        detail::require_alpha_admissible(path + ".alpha", block, a);
      }
    }
    cfg.checks.push_back(std::move(block));
    ++idx;
  }
  return cfg;
}

inline CampaignConfig load_campaign_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("campaign config: cannot open '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("campaign config: parse error in '" + path +
                                "': " + e.what());
  }
  return parse_campaign_config(j);
}

struct CampaignSummary {
  long total = 0;
  long holds = 0;
  long consistent = 0;
  long violations = 0;
  long inconclusive = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double wall_time_s = 0.0;

  json to_json() const {
    json s;
    s["total"] = total;
    s["holds"] = holds;
    s["consistent"] = consistent;
    s["violations"] = violations;
    s["inconclusive"] = inconclusive;
    if (total > 0) {
      s["worst_margin"] = worst_margin;
    }
    s["wall_time_s"] = wall_time_s;
    return s;
  }
};

struct CampaignResult {
  std::vector<InequalityReport> reports;  // in item-index order
  CampaignSummary summary;

  /// JSON-lines body; byte-identical for a fixed seed and any thread count.
  std::string report_body() const {
    std::ostringstream out;
    for (const InequalityReport& r : reports) {
      json line;
      line["inequality"] = r.inequality;
      line["state"] = r.state;
      if (r.alpha > 0.0) {
        line["alpha"] = r.alpha;
      }
      if (r.mu) {
        line["mu"] = *r.mu;
      }
      line["lhs"] = r.lhs;
      line["rhs"] = r.rhs;
      line["lhs_side"] = to_string(r.lhs_side);
      line["rhs_side"] = to_string(r.rhs_side);
      line["margin"] = r.margin;
      line["verdict"] = to_string(r.verdict);
      if (!r.note.empty()) {
        line["note"] = r.note;
      }
      out << line.dump() << '\n';
    }
    return out.str();
  }
};

namespace detail {

struct CampaignItem {
  const CheckBlock* block = nullptr;
  int block_index = 0;
  int state_index = 0;
  double alpha = 0.0;
  double mu = 1.0;
  bool has_alpha = false;
  bool has_mu = false;
};

}  // namespace detail

/// Expands the config into items, runs them (optionally in parallel) and
/// collects the reports in deterministic item order.
inline CampaignResult run_campaign(const CampaignConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<detail::CampaignItem> items;
  int block_index = 0;
  for (const CheckBlock& block : cfg.checks) {
    const std::vector<double>& grid =
        block.alphas.empty() ? cfg.alphas : block.alphas;
    const bool alpha_free = block.inequality == "eq2";
    const bool uses_mu = block.inequality == "eq24";
    for (int s = 0; s < block.count; ++s) {
      if (alpha_free) {
        items.push_back({&block, block_index, s, 0.0, 1.0, false, false});
        continue;
      }
      for (double a : grid) {
        if (uses_mu) {
          for (double m : cfg.mus) {
            items.push_back({&block, block_index, s, a, m, true, true});
          }
        } else {
          items.push_back({&block, block_index, s, a, 1.0, true, false});
        }
      }
    }
    ++block_index;
  }

  CampaignResult result;
  result.reports.resize(items.size());

  parallel_for_indexed(
      items.size(), cfg.threads, [&](std::size_t idx) {
        const detail::CampaignItem& item = items[idx];
        const CheckBlock& block = *item.block;
        const std::uint64_t state_seed = derive_seed(
            cfg.seed, (static_cast<std::uint64_t>(item.block_index) << 32) +
                          static_cast<std::uint64_t>(item.state_index));
        OptBudget budget = cfg.budget;
        budget.seed = derive_seed(state_seed, 0x5eedULL);

        InequalityReport rep;
        if (block.inequality == "eq2") {
          const PureState psi =
              haar_random_pure(block.n_qubits, RngSeed{state_seed});
          std::ostringstream desc;
          desc << "haar:n=" << block.n_qubits << ":seed=" << state_seed;
          rep = check_eq1_eq2(
              psi, PartitionSpec::versus_rest(0, block.n_qubits), desc.str());
        } else if (block.inequality == "eq19pure") {
          const PureState psi =
              haar_random_pure(block.n_qubits, RngSeed{state_seed});
          std::ostringstream desc;
          desc << "haar:n=" << block.n_qubits << ":seed=" << state_seed;
          rep = check_eq19_pure(
              psi, PartitionSpec::versus_rest(0, block.n_qubits),
              AlphaParam(item.alpha),
              block.mode == "certified" ? Eq19Mode::certified
                                        : Eq19Mode::optimized,
              budget, desc.str());
        } else if (block.inequality == "eq24") {
          const PureState psi =
              haar_random_pure(block.n_qubits, RngSeed{state_seed});
          std::ostringstream desc;
          desc << "haar:n=" << block.n_qubits << ":seed=" << state_seed;
          rep = check_eq24(psi, PartitionSpec::versus_rest(0, block.n_qubits),
                           AlphaParam(item.alpha), MuParam(item.mu),
                           desc.str());
        } else if (block.inequality == "lemma1" ||
                   block.inequality == "eq8") {
          const int rank =
              block.ranks[static_cast<std::size_t>(item.state_index) %
                          block.ranks.size()];
          const DensityMatrix rho =
              ginibre_random_mixed(2, rank, RngSeed{state_seed});
          std::ostringstream desc;
          desc << "ginibre:n=2:rank=" << rank << ":seed=" << state_seed;
          if (block.inequality == "lemma1") {
            rep = check_lemma1(rho, AlphaParam(item.alpha), budget,
                               desc.str());
          } else {
            rep = check_eq8(rho, AlphaParam(item.alpha), budget, desc.str());
          }
        } else if (block.inequality == "eq19mixed") {
          const int rank =
              block.ranks[static_cast<std::size_t>(item.state_index) %
                          block.ranks.size()];
          const DensityMatrix rho =
              ginibre_random_mixed(3, rank, RngSeed{state_seed});
          std::ostringstream desc;
          desc << "ginibre:n=3:rank=" << rank << ":seed=" << state_seed;
          rep = check_eq19_mixed(rho, PartitionSpec::versus_rest(0, 3),
                                 AlphaParam(item.alpha), budget, desc.str());
        } else {
          throw std::logic_error("run_campaign: unreachable inequality id");
        }
        result.reports[idx] = std::move(rep);
      });

  CampaignSummary& summary = result.summary;
  summary.total = static_cast<long>(result.reports.size());
  for (const InequalityReport& r : result.reports) {
    switch (r.verdict) {
      case Verdict::holds:
        ++summary.holds;
        break;
      case Verdict::consistent:
        ++summary.consistent;
        break;
      case Verdict::violation:
        ++summary.violations;
        break;
      case Verdict::inconclusive:
        ++summary.inconclusive;
        break;
    }
    summary.worst_margin = std::min(summary.worst_margin, r.margin);
  }
  summary.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

}  // namespace reoa
