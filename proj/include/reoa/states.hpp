#pragma once

// Construction, random sampling and validation of pure and mixed multi-qubit
// states. Generators take explicit seeds and are otherwise pure functions;
// parallel campaigns derive per-task seeds from a base seed.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "reoa/linalg.hpp"
#include "reoa/rng.hpp"

namespace reoa {

inline constexpr int kMaxQubits = 6;
inline constexpr double kNormTol = 1e-10;

struct PureState {
  int n_qubits = 0;
  ComplexVector amplitudes;  // length 2^n, unit norm

  Eigen::Index dim() const { return amplitudes.size(); }
};

struct DensityMatrix {
  int n_qubits = 0;
  ComplexMatrix matrix;  // 2^n x 2^n, Hermitian, PSD, unit trace

  Eigen::Index dim() const { return matrix.rows(); }
};

inline void validate(const PureState& psi) {
  if (psi.n_qubits < 1 || psi.n_qubits > kMaxQubits) {
    throw std::invalid_argument("PureState: qubit count out of range [1, 6]");
  }
  if (psi.amplitudes.size() != (Eigen::Index{1} << psi.n_qubits)) {
    throw std::invalid_argument(
        "PureState: amplitude count must be 2^n_qubits");
  }
  if (!psi.amplitudes.allFinite()) {
    throw std::invalid_argument("PureState: non-finite amplitude");
  }
  if (std::abs(psi.amplitudes.squaredNorm() - 1.0) > kNormTol) {
    throw std::invalid_argument("PureState: norm differs from 1 beyond 1e-10");
  }
}

inline void validate(const DensityMatrix& rho) {
  if (rho.n_qubits < 1 || rho.n_qubits > kMaxQubits) {
    throw std::invalid_argument(
        "DensityMatrix: qubit count out of range [1, 6]");
  }
  const Eigen::Index d = Eigen::Index{1} << rho.n_qubits;
  if (rho.matrix.rows() != d || rho.matrix.cols() != d) {
    throw std::invalid_argument("DensityMatrix: dimension must be 2^n_qubits");
  }
  if (!all_finite(rho.matrix)) {
    throw std::invalid_argument("DensityMatrix: non-finite entry");
  }
  if (hermiticity_defect(rho.matrix) > kHermTol) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-10");
  }
  if (std::abs(rho.matrix.trace().real() - 1.0) > kNormTol ||
      std::abs(rho.matrix.trace().imag()) > kNormTol) {
    throw std::invalid_argument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix,
                                                      Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kNormTol) {
    throw std::invalid_argument(
        "DensityMatrix: negative eigenvalue beyond -1e-10");
  }
}

inline DensityMatrix density_from_pure(const PureState& psi) {
  DensityMatrix rho;
  rho.n_qubits = psi.n_qubits;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  return rho;
}

/// Reduced state on the `keep` qubits.
inline DensityMatrix reduce(const DensityMatrix& rho,
                            std::span<const int> keep) {
  DensityMatrix out;
  out.n_qubits = static_cast<int>(keep.size());
  out.matrix = partial_trace(rho.matrix, rho.n_qubits, keep);
  return out;
}

inline DensityMatrix reduce(const PureState& psi, std::span<const int> keep) {
  return reduce(density_from_pure(psi), keep);
}

/// Haar-random pure state: normalized vector of iid standard complex
/// Gaussians. Same seed gives identical amplitudes on every run.
inline PureState haar_random_pure(int n_qubits, RngSeed seed) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("haar_random_pure: n_qubits out of [1, 6]");
  }
  Rng rng(seed);
  PureState psi;
  psi.n_qubits = n_qubits;
  psi.amplitudes.resize(Eigen::Index{1} << n_qubits);
  for (Eigen::Index i = 0; i < psi.amplitudes.size(); ++i) {
    psi.amplitudes[i] = rng.complex_gaussian();
  }
  psi.amplitudes.normalize();
  return psi;
}

/// Induced-measure mixed state G G^dagger / tr(G G^dagger) with a complex
/// Ginibre factor G of shape 2^n x rank.
inline DensityMatrix ginibre_random_mixed(int n_qubits, int rank,
                                          RngSeed seed) {
  if (n_qubits < 1 || n_qubits > kMaxQubits) {
    throw std::invalid_argument("ginibre_random_mixed: n_qubits out of [1, 6]");
  }
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  if (rank < 1 || rank > d) {
    throw std::invalid_argument("ginibre_random_mixed: rank out of [1, 2^n]");
  }
  Rng rng(seed);
  ComplexMatrix g(d, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < d; ++i) {
      g(i, j) = rng.complex_gaussian();
    }
  }
  DensityMatrix rho;
  rho.n_qubits = n_qubits;
  rho.matrix = g * g.adjoint();
  rho.matrix /= rho.matrix.trace().real();
  // Round off the Hermiticity remainder from the matrix product.
  rho.matrix = (rho.matrix + rho.matrix.adjoint()).eval() / 2.0;
  return rho;
}

enum class NamedState { bell, ghz, w, product };

/// Textbook states. `n` is ignored for bell (n = 2).
inline PureState named_state(NamedState kind, int n = 2) {
  PureState psi;
  switch (kind) {
    case NamedState::bell: {
      psi.n_qubits = 2;
      psi.amplitudes = ComplexVector::Zero(4);
      psi.amplitudes[0] = psi.amplitudes[3] = 1.0 / std::numbers::sqrt2;
      return psi;
    }
    case NamedState::ghz: {
      if (n < 2 || n > kMaxQubits) {
        throw std::invalid_argument("named_state: GHZ needs n in [2, 6]");
      }
      psi.n_qubits = n;
      psi.amplitudes = ComplexVector::Zero(Eigen::Index{1} << n);
      psi.amplitudes[0] = 1.0 / std::numbers::sqrt2;
      psi.amplitudes[psi.amplitudes.size() - 1] = 1.0 / std::numbers::sqrt2;
      return psi;
    }
    case NamedState::w: {
      if (n < 2 || n > kMaxQubits) {
        throw std::invalid_argument("named_state: W needs n in [2, 6]");
      }
      psi.n_qubits = n;
      psi.amplitudes = ComplexVector::Zero(Eigen::Index{1} << n);
      const double amp = 1.0 / std::sqrt(static_cast<double>(n));
      for (int q = 0; q < n; ++q) {
        psi.amplitudes[Eigen::Index{1} << q] = amp;
      }
      return psi;
    }
    case NamedState::product: {
      if (n < 1 || n > kMaxQubits) {
        throw std::invalid_argument("named_state: product needs n in [1, 6]");
      }
      psi.n_qubits = n;
      psi.amplitudes = ComplexVector::Zero(Eigen::Index{1} << n);
      psi.amplitudes[0] = 1.0;
      return psi;
    }
  }
  throw std::invalid_argument("named_state: unknown state name");
}

/// Parses "bell", "ghz:N", "w:N", "product:N".
inline PureState named_state(const std::string& name) {
  auto colon = name.find(':');
  const std::string head = name.substr(0, colon);
  int n = 0;
  if (colon != std::string::npos) {
    try {
      n = std::stoi(name.substr(colon + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("named_state: bad qubit count in '" + name +
                                  "'");
    }
  }
  if (head == "bell") {
    return named_state(NamedState::bell);
  }
  if (head == "ghz") {
    return named_state(NamedState::ghz, n);
  }
  if (head == "w") {
    return named_state(NamedState::w, n);
  }
  if (head == "product") {
    return named_state(NamedState::product, n);
  }
  throw std::invalid_argument("named_state: unknown state name '" + name +
                              "'");
}

}  // namespace reoa
