#pragma once

// Closed-form measure evaluations: Renyi-alpha entropy, concurrence for pure
// states and two-qubit mixed states, the transfer function f_alpha and the
// analytic two-qubit Renyi-alpha entanglement E_alpha = f_alpha(C).
//
// All entropies are in bits (base-2 logs), so a maximally mixed qubit has
// entropy 1 and f_alpha(1) = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "reoa/linalg.hpp"
#include "reoa/states.hpp"

namespace reoa {

/// (sqrt(7) - 1) / 2: two-qubit E_alpha = f_alpha(C) is valid from here up.
inline const double kAlphaLemmaLo = (std::sqrt(7.0) - 1.0) / 2.0;
/// (sqrt(13) - 1) / 2: upper end of the polygamy theorem's alpha range.
inline const double kAlphaLemmaHi = (std::sqrt(13.0) - 1.0) / 2.0;

/// |alpha - 1| below this selects the von Neumann limit branch.
inline constexpr double kAlphaOneTol = 1e-9;

struct AlphaParam {
  double alpha = 2.0;
  bool in_lemma_range = false;
  bool is_subunit = false;

  AlphaParam() = default;
  explicit AlphaParam(double a) : alpha(a) {
    if (!(a > 0.0)) {
      throw std::domain_error("AlphaParam: alpha must be positive");
    }
    in_lemma_range = a >= kAlphaLemmaLo && a <= kAlphaLemmaHi;
    is_subunit = a > 0.0 && a < 1.0;
  }

  bool is_limit_branch() const { return std::abs(alpha - 1.0) < kAlphaOneTol; }
};

struct MuParam {
  double mu = 1.0;

  MuParam() = default;
  explicit MuParam(double m) : mu(m) {
    if (!(m >= 0.0 && m <= 1.0)) {
      throw std::domain_error("MuParam: mu must lie in [0, 1]");
    }
  }
};

namespace detail {

/// Clamps eigenvalue noise to 0. Negative drift is clipped as specified for
/// PSD inputs; positive drift below 1e-12 is clipped as well because
/// lam^alpha amplifies solver noise (~1e-16) to ~1e-8 for subunit alpha,
/// which would break the 1e-9 additivity contract on singular states.
inline double clamp_eigenvalue(double lam) {
  return lam < 1e-12 ? 0.0 : lam;
}

inline double log2_checked(double x) { return std::log2(x); }

}  // namespace detail

/// Renyi-alpha entropy (1/(1-alpha)) log2 tr rho^alpha from the spectrum.
/// Zero eigenvalues contribute 0^alpha = 0.
inline double renyi_entropy_spectrum(std::span<const double> lambdas,
                                     const AlphaParam& alpha) {
  double acc = 0.0;
  if (alpha.is_limit_branch()) {
    for (double lam : lambdas) {
      lam = detail::clamp_eigenvalue(lam);
      if (lam > 0.0) {
        acc -= lam * std::log2(lam);
      }
    }
    return std::max(acc, 0.0);
  }
  for (double lam : lambdas) {
    lam = detail::clamp_eigenvalue(lam);
    if (lam > 0.0) {
      acc += std::pow(lam, alpha.alpha);
    }
  }
  if (acc <= 0.0) {
    return 0.0;
  }
  return std::max(std::log2(acc) / (1.0 - alpha.alpha), 0.0);
}

inline double renyi_entropy(const DensityMatrix& rho,
                            const AlphaParam& alpha) {
  HermitianEig eig = herm_eig(rho.matrix);
  std::vector<double> lams(eig.eigenvalues.data(),
                           eig.eigenvalues.data() + eig.eigenvalues.size());
  const double v = renyi_entropy_spectrum(lams, alpha);
  return std::min(v, static_cast<double>(rho.n_qubits));
}

/// von Neumann entropy -sum lam log2 lam with 0 log 0 = 0.
inline double von_neumann_entropy(const DensityMatrix& rho) {
  HermitianEig eig = herm_eig(rho.matrix);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    const double lam = detail::clamp_eigenvalue(eig.eigenvalues[i]);
    if (lam > 0.0) {
      acc -= lam * std::log2(lam);
    }
  }
  return std::clamp(acc, 0.0, static_cast<double>(rho.n_qubits));
}

/// Theta(x) = 1 + sqrt(1 - x^2) and Xi(x) = 1 - sqrt(1 - x^2), returned so
/// that Theta + Xi == 2 holds exactly in floating point.
inline std::pair<double, double> theta_xi(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("theta_xi: x must lie in [0, 1]");
  }
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  const double theta = 1.0 + s;
  return {theta, 2.0 - theta};
}

namespace detail {

/// Binary entropy h2(p) in bits.
inline double binary_entropy(double p) {
  double acc = 0.0;
  if (p > 0.0) {
    acc -= p * std::log2(p);
  }
  if (p < 1.0) {
    acc -= (1.0 - p) * std::log2(1.0 - p);
  }
  return acc;
}

}  // namespace detail

/// Concurrence-to-E_alpha transfer function
///   f_alpha(x) = (1/(1-alpha)) log2[(Theta/2)^alpha + (Xi/2)^alpha],
/// with the binary-entropy limit at alpha = 1. Monotone nondecreasing and
/// convex in x for alpha >= (sqrt(7)-1)/2.
inline double f_alpha(double x, const AlphaParam& alpha) {
  // Endpoint guards; also absorb eigenvalue-level noise just outside [0, 1].
  if (x < 0.0 || x > 1.0) {
    if (x > 1.0 && x < 1.0 + 1e-12) {
      x = 1.0;
    } else if (x < 0.0 && x > -1e-12) {
      x = 0.0;
    } else {
      throw std::domain_error("f_alpha: x must lie in [0, 1]");
    }
  }
  if (x < 1e-12) {
    return 0.0;
  }
  if (1.0 - x < 1e-12) {
    return 1.0;
  }
  const double s = std::sqrt((1.0 - x) * (1.0 + x));
  const double half_theta = (1.0 + s) / 2.0;
  // Xi computed as x^2/(1+s) to avoid cancellation near x = 0.
  const double half_xi = x * x / (2.0 * (1.0 + s));
  if (alpha.is_limit_branch()) {
    return detail::binary_entropy(half_theta);
  }
  const double a = alpha.alpha;
  return std::log2(std::pow(half_theta, a) + std::pow(half_xi, a)) /
         (1.0 - a);
}

/// Concurrence of a pure state across the single-qubit cut {q} | rest,
/// sqrt(2 (1 - tr rho_q^2)).
inline double concurrence_pure_bipartition(const PureState& psi,
                                           int focus_qubit) {
  if (focus_qubit < 0 || focus_qubit >= psi.n_qubits) {
    throw std::invalid_argument(
        "concurrence_pure_bipartition: focus qubit out of range");
  }
  // Accumulate the 2x2 reduction of the focus qubit directly.
  const int shift = psi.n_qubits - 1 - focus_qubit;
  const Eigen::Index mask = Eigen::Index{1} << shift;
  double p0 = 0.0;
  double p1 = 0.0;
  cplx off = 0.0;
  for (Eigen::Index i = 0; i < psi.dim(); ++i) {
    if (i & mask) {
      continue;
    }
    const cplx a0 = psi.amplitudes[i];
    const cplx a1 = psi.amplitudes[i | mask];
    p0 += std::norm(a0);
    p1 += std::norm(a1);
    off += a0 * std::conj(a1);
  }
  const double purity = p0 * p0 + p1 * p1 + 2.0 * std::norm(off);
  const double c2 = std::max(0.0, 2.0 * (1.0 - purity));
  return std::min(std::sqrt(c2), 1.0);
}

/// Wootters lambda spectrum: descending square roots of the eigenvalues of
/// sqrt(rho) rho~ sqrt(rho).
inline std::array<double, 4> wootters_spectrum(const DensityMatrix& rho) {
  if (rho.n_qubits != 2) {
    throw std::invalid_argument("wootters_spectrum: state must be two-qubit");
  }
  const ComplexMatrix root = psd_sqrt(rho.matrix);
  ComplexMatrix r = root * spin_flip(rho.matrix) * root;
  r = (r + r.adjoint()).eval() / 2.0;
  HermitianEig eig = herm_eig(r);
  std::array<double, 4> lams{};
  for (int i = 0; i < 4; ++i) {
    lams[i] = std::sqrt(std::max(eig.eigenvalues[i], 0.0));
  }
  std::sort(lams.begin(), lams.end(), std::greater<>());
  return lams;
}

/// Wootters concurrence max{0, l1 - l2 - l3 - l4}.
inline double concurrence_mixed_2q(const DensityMatrix& rho) {
  const auto l = wootters_spectrum(rho);
  return std::clamp(l[0] - l[1] - l[2] - l[3], 0.0, 1.0);
}

/// Analytic two-qubit E_alpha(rho) = f_alpha(C(rho)), valid for
/// alpha >= (sqrt(7)-1)/2.
inline double renyi_entanglement_2q(const DensityMatrix& rho,
                                    const AlphaParam& alpha) {
  if (alpha.alpha < kAlphaLemmaLo - 1e-12) {
    throw std::domain_error(
        "renyi_entanglement_2q: alpha below (sqrt(7)-1)/2 validity threshold");
  }
  return f_alpha(concurrence_mixed_2q(rho), alpha);
}

/// E_alpha of a pure state across the cut {focus} | rest: S_alpha of the
/// single-qubit reduction.
inline double renyi_entanglement_pure(const PureState& psi, int focus_qubit,
                                      const AlphaParam& alpha) {
  const std::array<int, 1> keep{focus_qubit};
  DensityMatrix ra = reduce(psi, keep);
  return std::min(renyi_entropy(ra, alpha), 1.0);
}

}  // namespace reoa
