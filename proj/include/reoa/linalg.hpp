#pragma once

// Dense complex linear algebra for few-qubit operators (dimensions up to 2^6):
// Kronecker products, partial traces, Hermitian eigendecomposition, PSD square
// roots and the two-qubit spin-flip transform.
//
// Qubit index convention, fixed repo-wide: qubit 0 is the most significant bit
// of the computational-basis index.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace reoa {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline bool all_finite(const ComplexMatrix& a) {
  return a.allFinite();
}

/// Max-norm Hermiticity defect ||A - A^dagger||_max.
inline double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_power_of_two(Eigen::Index n) {
  return n > 0 && (n & (n - 1)) == 0;
}

inline int log2_dim(Eigen::Index n) {
  int k = 0;
  while ((Eigen::Index{1} << k) < n) {
    ++k;
  }
  return k;
}

/// Standard Kronecker product; dims multiply.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Reduced operator on the qubits listed in `keep` (sorted, distinct).
/// Trace and Hermiticity are preserved.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, int n_qubits,
                                   std::span<const int> keep) {
  const Eigen::Index dim = rho.rows();
  if (rho.cols() != dim || !is_power_of_two(dim) ||
      dim != (Eigen::Index{1} << n_qubits)) {
    throw std::invalid_argument(
        "partial_trace: operator must be 2^n x 2^n for the given qubit count");
  }
  if (keep.empty()) {
    throw std::invalid_argument("partial_trace: keep list must be non-empty");
  }
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n_qubits) {
      throw std::invalid_argument("partial_trace: qubit index out of range");
    }
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw std::invalid_argument(
          "partial_trace: keep list must be sorted and distinct");
    }
  }

  const int k = static_cast<int>(keep.size());
  std::vector<int> rest;
  {
    std::size_t ki = 0;
    for (int q = 0; q < n_qubits; ++q) {
      if (ki < keep.size() && keep[ki] == q) {
        ++ki;
      } else {
        rest.push_back(q);
      }
    }
  }

  // Bit position of qubit q inside a full index (qubit 0 = MSB).
  auto bitpos = [n_qubits](int q) { return n_qubits - 1 - q; };

  const Eigen::Index dk = Eigen::Index{1} << k;
  const Eigen::Index dr = Eigen::Index{1} << rest.size();
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);

  std::vector<Eigen::Index> keep_masks(keep.size());
  for (int i = 0; i < k; ++i) {
    keep_masks[i] = Eigen::Index{1} << bitpos(keep[i]);
  }
  std::vector<Eigen::Index> rest_masks(rest.size());
  for (std::size_t i = 0; i < rest.size(); ++i) {
    rest_masks[i] = Eigen::Index{1} << bitpos(rest[i]);
  }

  auto expand = [](Eigen::Index bits, const std::vector<Eigen::Index>& masks) {
    Eigen::Index full = 0;
    for (std::size_t i = 0; i < masks.size(); ++i) {
      if (bits & (Eigen::Index{1} << (masks.size() - 1 - i))) {
        full |= masks[i];
      }
    }
    return full;
  };

  for (Eigen::Index a = 0; a < dk; ++a) {
    const Eigen::Index fa = expand(a, keep_masks);
    for (Eigen::Index b = 0; b < dk; ++b) {
      const Eigen::Index fb = expand(b, keep_masks);
      cplx acc = 0.0;
      for (Eigen::Index r = 0; r < dr; ++r) {
        const Eigen::Index fr = expand(r, rest_masks);
        acc += rho(fa | fr, fb | fr);
      }
      out(a, b) = acc;
    }
  }
  return out;
}

struct HermitianEig {
  RealVector eigenvalues;      // sorted descending
  ComplexMatrix eigenvectors;  // columns paired with eigenvalues
};

inline constexpr double kHermTol = 1e-10;

/// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
/// Accuracy contract: ||V diag(l) V^dagger - A||_max <= 1e-10 and
/// ||V^dagger V - I||_max <= 1e-10.
inline HermitianEig herm_eig(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("herm_eig: matrix must be square");
  }
  if (hermiticity_defect(a) > kHermTol) {
    throw std::domain_error("herm_eig: matrix is not Hermitian within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("herm_eig: eigensolver did not converge");
  }
  HermitianEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Hermitian PSD square root. Eigenvalues in [-1e-10, 0) are clamped to 0;
/// anything below -1e-8 signals a non-PSD input.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  HermitianEig eig = herm_eig(a);
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    double lam = eig.eigenvalues[i];
    if (lam < -1e-8) {
      throw std::domain_error("psd_sqrt: input has eigenvalue below -1e-8");
    }
    roots[i] = std::sqrt(std::max(lam, 0.0));
  }
  return eig.eigenvectors * roots.asDiagonal() *
         eig.eigenvectors.adjoint();
}

/// sigma_y tensor sigma_y (anti-diagonal -1, 1, 1, -1 from top-right).
inline const ComplexMatrix& spin_flip_operator() {
  static const ComplexMatrix f = [] {
    ComplexMatrix m = ComplexMatrix::Zero(4, 4);
    m(0, 3) = -1.0;
    m(1, 2) = 1.0;
    m(2, 1) = 1.0;
    m(3, 0) = -1.0;
    return m;
  }();
  return f;
}

/// Two-qubit spin flip (sy ox sy) rho^* (sy ox sy).
inline ComplexMatrix spin_flip(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw std::invalid_argument("spin_flip: operator must be 4x4");
  }
  const ComplexMatrix& f = spin_flip_operator();
  return f * rho.conjugate() * f;
}

}  // namespace reoa
