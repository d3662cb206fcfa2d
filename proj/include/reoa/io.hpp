#pragma once

// JSON serialization of states. Amplitudes and matrix entries are stored as
// [re, im] pairs; doubles round-trip exactly. Schemas are documented in
// docs/file-formats.md.

#include <cstdio>
#include <fstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "reoa/states.hpp"

namespace reoa {

using json = nlohmann::ordered_json;

/// Formats a double with 17 significant digits (lossless round-trip).
inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline json to_json(const PureState& psi) {
  json j;
  j["kind"] = "pure";
  j["n_qubits"] = psi.n_qubits;
  json amps = json::array();
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    amps.push_back({psi.amplitudes[i].real(), psi.amplitudes[i].imag()});
  }
  j["amplitudes"] = std::move(amps);
  return j;
}

inline json to_json(const DensityMatrix& rho) {
  json j;
  j["kind"] = "density";
  j["n_qubits"] = rho.n_qubits;
  json entries = json::array();
  for (Eigen::Index r = 0; r < rho.dim(); ++r) {
    for (Eigen::Index c = 0; c < rho.dim(); ++c) {
      entries.push_back({rho.matrix(r, c).real(), rho.matrix(r, c).imag()});
    }
  }
  j["entries"] = std::move(entries);
  return j;
}

using StateVariant = std::variant<PureState, DensityMatrix>;

inline StateVariant state_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("state file: missing 'kind' field");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (!j.contains("n_qubits") || !j.at("n_qubits").is_number_integer()) {
    throw std::invalid_argument("state file: missing integer 'n_qubits'");
  }
  const int n = j.at("n_qubits").get<int>();
  if (n < 1 || n > kMaxQubits) {
    throw std::invalid_argument("state file: n_qubits out of range [1, 6]");
  }
  const Eigen::Index d = Eigen::Index{1} << n;

  auto read_pair = [](const json& e, const char* where) -> cplx {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number()) {
      throw std::invalid_argument(std::string("state file: ") + where +
                                  " entries must be [re, im] pairs");
    }
    return {e[0].get<double>(), e[1].get<double>()};
  };

  if (kind == "pure") {
    const json& amps = j.at("amplitudes");
    if (!amps.is_array() || static_cast<Eigen::Index>(amps.size()) != d) {
      throw std::invalid_argument(
          "state file: 'amplitudes' must hold exactly 2^n_qubits entries");
    }
    PureState psi;
    psi.n_qubits = n;
    psi.amplitudes.resize(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      psi.amplitudes[i] = read_pair(amps[i], "amplitudes");
    }
    validate(psi);
    return psi;
  }
  if (kind == "density") {
    const json& entries = j.at("entries");
    if (!entries.is_array() ||
        static_cast<Eigen::Index>(entries.size()) != d * d) {
      throw std::invalid_argument(
          "state file: 'entries' must hold exactly 4^n_qubits row-major "
          "entries");
    }
    DensityMatrix rho;
    rho.n_qubits = n;
    rho.matrix.resize(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index c = 0; c < d; ++c) {
        rho.matrix(r, c) = read_pair(entries[r * d + c], "matrix");
      }
    }
    validate(rho);
    return rho;
  }
  throw std::invalid_argument("state file: 'kind' must be 'pure' or 'density'");
}

inline void save_state(const StateVariant& state, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_state: cannot open '" + path +
                             "' for writing");
  }
  const json j =
      std::visit([](const auto& s) { return to_json(s); }, state);
  out << j.dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("save_state: write to '" + path + "' failed");
  }
}

inline void save_state(const PureState& psi, const std::string& path) {
  save_state(StateVariant{psi}, path);
}

inline void save_state(const DensityMatrix& rho, const std::string& path) {
  save_state(StateVariant{rho}, path);
}

inline StateVariant load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_state: cannot open '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("load_state: parse error in '" + path +
                                "': " + e.what());
  }
  return state_from_json(j);
}

}  // namespace reoa
