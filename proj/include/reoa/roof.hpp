#pragma once

// Optimization over pure-state decompositions of a mixed state: maximization
// for assistance quantities (CoA, REoA) and minimization for the convex roof,
// with certificate semantics. A max-mode result is always a certified lower
// bound of the true maximum (its witness decomposition attains the value);
// a min-mode result is a certified upper bound of the true minimum.
//
// Every size-m decomposition of a rank-r state arises from an m x r isometry
// applied to the weighted eigenvectors (Schrodinger-HJW). The search walks
// that manifold with elementary two-coordinate complex rotations
// (angle + phase per coordinate pair), coordinate-descent sweeps and a
// golden-section line search per parameter, restarted from random rotation
// angles. Decomposition size is fixed at m = r^2.

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "reoa/measures.hpp"
#include "reoa/rng.hpp"
#include "reoa/states.hpp"

namespace reoa {

struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> states;

  std::size_t size() const { return weights.size(); }
};

/// Max-entry error of sum_i w_i |psi_i><psi_i| against the target.
inline double reconstruction_error(const Decomposition& dec,
                                   const DensityMatrix& rho) {
  ComplexMatrix acc = ComplexMatrix::Zero(rho.dim(), rho.dim());
  for (std::size_t i = 0; i < dec.size(); ++i) {
    acc.noalias() += dec.weights[i] * (dec.states[i].amplitudes *
                                       dec.states[i].amplitudes.adjoint());
  }
  return (acc - rho.matrix).cwiseAbs().maxCoeff();
}

enum class RoofMode { min, max };

struct OptBudget {
  int restarts = 32;
  int max_sweeps = 60;
  double tol = 1e-9;
  std::uint64_t seed = 0;
};

struct RoofResult {
  double value = 0.0;
  RoofMode mode = RoofMode::max;
  Decomposition decomposition;
  int restarts_used = 0;
  bool converged = false;
  /// Per-restart objective value after each sweep (nondecreasing in max
  /// mode, nonincreasing in min mode).
  std::vector<std::vector<double>> sweep_traces;
};

/// Objective evaluated on normalized amplitudes of one pure state.
using StateObjective = std::function<double(std::span<const cplx>)>;

namespace detail {

inline constexpr int kMaxRoofRank = 8;  // m = r^2 <= 64 rows

struct EigenBasis {
  int rank = 0;
  Eigen::Index dim = 0;
  // rank x dim; row j = sqrt(lambda_j) conj-free eigenvector transposed.
  ComplexMatrix weighted_rows;
};

inline EigenBasis eigen_basis(const DensityMatrix& rho) {
  HermitianEig eig = herm_eig(rho.matrix);
  EigenBasis basis;
  basis.dim = rho.dim();
  int r = 0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues[i] > 1e-12) {
      r = static_cast<int>(i) + 1;
    }
  }
  if (r == 0) {
    throw std::invalid_argument("roof: state has no positive eigenvalue");
  }
  if (r > kMaxRoofRank) {
    throw std::invalid_argument("roof: rank exceeds supported maximum 8");
  }
  basis.rank = r;
  basis.weighted_rows.resize(r, basis.dim);
  for (int j = 0; j < r; ++j) {
    basis.weighted_rows.row(j) =
        std::sqrt(std::max(eig.eigenvalues[j], 0.0)) *
        eig.eigenvectors.col(j).transpose();
  }
  return basis;
}

/// Weighted objective contribution of one unnormalized row:
/// p * objective(row / sqrt(p)) with p = |row|^2.
inline double row_contribution(const StateObjective& objective,
                               std::span<const cplx> row) {
  double p = 0.0;
  for (const cplx& v : row) {
    p += std::norm(v);
  }
  if (p < 1e-28) {
    return 0.0;
  }
  std::array<cplx, 64> buf;
  const double inv = 1.0 / std::sqrt(p);
  for (std::size_t i = 0; i < row.size(); ++i) {
    buf[i] = row[i] * inv;
  }
  return p * objective(std::span<const cplx>(buf.data(), row.size()));
}

/// Golden-section maximization of fn over [lo, hi] to the given x tolerance.
template <typename Fn>
inline std::pair<double, double> golden_max(Fn&& fn, double lo, double hi,
                                            double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = fn(c);
  double fd = fn(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = fn(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

using RowMajorMatrix =
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct RotationWorkspace {
  int m = 0;
  Eigen::Index dim = 0;
  // Row i = sqrt(p_i) psi_i; the decomposition being optimized.
  RowMajorMatrix rows;
  std::vector<double> contrib;
  double total = 0.0;

  void reset(const EigenBasis& basis, const StateObjective& objective) {
    m = basis.rank * basis.rank;
    dim = basis.dim;
    rows = RowMajorMatrix::Zero(m, dim);
    rows.topRows(basis.rank) = basis.weighted_rows;
    contrib.assign(m, 0.0);
    total = 0.0;
    for (int i = 0; i < m; ++i) {
      contrib[i] = row_contribution(objective, row_span(i));
      total += contrib[i];
    }
  }

  std::span<const cplx> row_span(int i) const {
    return {&rows(i, 0), static_cast<std::size_t>(dim)};
  }

  /// Applies the rotation [c, -s e^{-i phi}; s e^{i phi}, c] to rows (a, b).
  void apply_rotation(int a, int b, double theta, double phi) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const cplx e = std::polar(1.0, phi);
    for (Eigen::Index k = 0; k < dim; ++k) {
      const cplx ra = rows(a, k);
      const cplx rb = rows(b, k);
      rows(a, k) = c * ra - s * std::conj(e) * rb;
      rows(b, k) = s * e * ra + c * rb;
    }
  }
};

}  // namespace detail

/// Canonical decomposition of size r^2 from a real parameter vector: r column
/// phases followed by (theta, phi) for every coordinate pair (i, j) with
/// j < r and j < i < r^2, applied in that fixed order to the embedded
/// eigen-columns. Every decomposition of size <= r^2 is reachable. An empty
/// or all-zero vector reproduces the eigendecomposition itself.
inline Decomposition decompositions_from_isometry(
    const DensityMatrix& rho, std::span<const double> isometry_params) {
  const detail::EigenBasis basis = detail::eigen_basis(rho);
  const int r = basis.rank;
  const int m = r * r;

  std::size_t expected = static_cast<std::size_t>(r);
  for (int j = 0; j < r; ++j) {
    expected += 2 * static_cast<std::size_t>(m - 1 - j);
  }
  if (!isometry_params.empty() && isometry_params.size() != expected) {
    throw std::invalid_argument(
        "decompositions_from_isometry: parameter vector must be empty or "
        "hold r + 2 * sum_j (r^2 - 1 - j) values");
  }

  ComplexMatrix rows = ComplexMatrix::Zero(m, basis.dim);
  rows.topRows(r) = basis.weighted_rows;

  if (!isometry_params.empty()) {
    std::size_t k = 0;
    for (int j = 0; j < r; ++j) {
      const cplx phase = std::polar(1.0, isometry_params[k++]);
      rows.row(j) *= phase;
    }
    for (int j = 0; j < r; ++j) {
      for (int i = j + 1; i < m; ++i) {
        const double theta = isometry_params[k++];
        const double phi = isometry_params[k++];
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const cplx e = std::polar(1.0, phi);
        for (Eigen::Index col = 0; col < basis.dim; ++col) {
          const cplx rj = rows(j, col);
          const cplx ri = rows(i, col);
          rows(j, col) = c * rj - s * std::conj(e) * ri;
          rows(i, col) = s * e * rj + c * ri;
        }
      }
    }
  }

  Decomposition dec;
  int n_qubits = log2_dim(basis.dim);
  for (int i = 0; i < m; ++i) {
    const double p = rows.row(i).squaredNorm();
    if (p < 1e-14) {
      continue;
    }
    PureState psi;
    psi.n_qubits = n_qubits;
    psi.amplitudes = rows.row(i).transpose() / std::sqrt(p);
    dec.weights.push_back(p);
    dec.states.push_back(std::move(psi));
  }
  double wsum = 0.0;
  for (double w : dec.weights) {
    wsum += w;
  }
  for (double& w : dec.weights) {
    w /= wsum;
  }
  return dec;
}

/// Roof optimization of the decomposition average sum_i p_i objective(psi_i)
/// over all decompositions of size r^2. Deterministic for a fixed seed:
/// restart k always draws from the stream derived from (seed, k), whatever
/// the scheduling.
inline RoofResult optimize_roof(const DensityMatrix& rho,
                                const StateObjective& objective, RoofMode mode,
                                const OptBudget& budget) {
  if (budget.restarts < 1) {
    throw std::invalid_argument("optimize_roof: need at least one restart");
  }
  const double sign = mode == RoofMode::max ? 1.0 : -1.0;
  const StateObjective signed_objective =
      mode == RoofMode::max
          ? objective
          : StateObjective([&objective](std::span<const cplx> amps) {
              return -objective(amps);
            });

  const detail::EigenBasis basis = detail::eigen_basis(rho);
  const int r = basis.rank;

  RoofResult result;
  result.mode = mode;

  // Rank-1 states admit a single decomposition.
  if (r == 1) {
    detail::RotationWorkspace ws;
    ws.reset(basis, signed_objective);
    result.value = sign * ws.total;
    result.restarts_used = 0;
    result.converged = true;
    Decomposition dec;
    PureState psi;
    psi.n_qubits = log2_dim(basis.dim);
    const double p = basis.weighted_rows.row(0).squaredNorm();
    psi.amplitudes = basis.weighted_rows.row(0).transpose() / std::sqrt(p);
    dec.weights.push_back(1.0);
    dec.states.push_back(std::move(psi));
    result.decomposition = std::move(dec);
    result.sweep_traces.emplace_back();
    return result;
  }

  const int m = r * r;
  std::vector<std::pair<int, int>> pairs;  // (low=j, high=i), j < r
  for (int j = 0; j < r; ++j) {
    for (int i = j + 1; i < m; ++i) {
      pairs.emplace_back(j, i);
    }
  }

  constexpr double kHalfPi = std::numbers::pi / 2.0;
  const auto dim = basis.dim;

  struct Candidate {
    detail::RotationWorkspace ws;
    double xtol = 2e-3;  // line-search width, tightened as sweeps plateau
    int sweeps = 0;
    int trace_index = 0;
    bool converged = false;
    std::vector<double> trace;
  };

  std::array<cplx, 64> row_a;
  std::array<cplx, 64> row_b;

  // One full coordinate-descent sweep; returns the objective gain.
  const auto do_sweep = [&](Candidate& cand) {
    detail::RotationWorkspace& ws = cand.ws;
    const double sweep_start = ws.total;
    for (const auto& [a, b] : pairs) {
      for (Eigen::Index k = 0; k < dim; ++k) {
        row_a[k] = ws.rows(a, k);
        row_b[k] = ws.rows(b, k);
      }
      const double rest = ws.total - ws.contrib[a] - ws.contrib[b];

      std::array<cplx, 64> tmp_a;
      std::array<cplx, 64> tmp_b;
      const auto eval = [&](double theta, double phi) {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const cplx e = std::polar(1.0, phi);
        const cplx se = s * e;
        const cplx sec = s * std::conj(e);
        for (Eigen::Index k = 0; k < dim; ++k) {
          tmp_a[k] = c * row_a[k] - sec * row_b[k];
          tmp_b[k] = se * row_a[k] + c * row_b[k];
        }
        const std::size_t n = static_cast<std::size_t>(dim);
        return rest +
               detail::row_contribution(
                   signed_objective, std::span<const cplx>(tmp_a.data(), n)) +
               detail::row_contribution(
                   signed_objective, std::span<const cplx>(tmp_b.data(), n));
      };

      const double xtol = cand.xtol;
      auto [theta, v1] = detail::golden_max(
          [&](double t) { return eval(t, 0.0); }, -kHalfPi, kHalfPi, xtol);
      auto [phi, v2] = detail::golden_max(
          [&](double p) { return eval(theta, p); }, -kHalfPi, kHalfPi, xtol);
      double theta_best = theta;
      double v_best = v2;
      if (v2 > ws.total || v1 > ws.total) {
        // Polish theta at the chosen phase on a narrow bracket.
        auto [theta2, v3] = detail::golden_max(
            [&](double t) { return eval(t, phi); }, theta - 8.0 * xtol,
            theta + 8.0 * xtol, xtol * 0.05);
        if (v3 > v_best) {
          theta_best = theta2;
          v_best = v3;
        }
      }
      if (v_best > ws.total) {
        ws.apply_rotation(a, b, theta_best, phi);
        const double ca =
            detail::row_contribution(signed_objective, ws.row_span(a));
        const double cb =
            detail::row_contribution(signed_objective, ws.row_span(b));
        ws.total = rest + ca + cb;
        ws.contrib[a] = ca;
        ws.contrib[b] = cb;
      }
    }
    ++cand.sweeps;
    cand.trace.push_back(sign * ws.total);
    return ws.total - sweep_start;
  };

  // Advances one candidate until convergence, the sweep cap or the optional
  // early-out against the incumbent best.
  const auto descend = [&](Candidate& cand, int sweep_cap,
                           double abandon_gap, double incumbent) {
    while (cand.sweeps < sweep_cap && !cand.converged) {
      const double gain = do_sweep(cand);
      if (gain < budget.tol) {
        if (cand.xtol > 1.2e-7) {
          // Tighten the line search before declaring convergence.
          cand.xtol = std::max(cand.xtol * 0.02, 1e-7);
          continue;
        }
        cand.converged = true;
        break;
      }
      if (gain < 1e-4) {
        cand.xtol = std::max(cand.xtol * 0.1, 1e-7);
      }
      if (abandon_gap > 0.0 && cand.sweeps >= 4 &&
          incumbent - cand.ws.total > abandon_gap) {
        break;
      }
    }
  };

  // Exploration phase: every restart gets a short descent. The two best
  // candidates are then polished to the full sweep budget; only the best
  // witness is kept, so dropping the rest costs nothing.
  const int explore_cap = std::min(12, budget.max_sweeps);
  Candidate best_cand;
  Candidate runner_up;
  double best = -std::numeric_limits<double>::infinity();
  double second = best;

  std::vector<std::vector<double>> traces(budget.restarts);
  for (int restart = 0; restart < budget.restarts; ++restart) {
    Candidate cand;
    cand.ws.reset(basis, signed_objective);
    if (restart > 0) {
      // Random point on the isometry manifold; restart 0 keeps the
      // eigendecomposition as a deterministic baseline.
      Rng rng(derive_seed(budget.seed, static_cast<std::uint64_t>(restart)));
      for (const auto& [a, b] : pairs) {
        cand.ws.apply_rotation(a, b, rng.uniform(-kHalfPi, kHalfPi),
                               rng.uniform(-kHalfPi, kHalfPi));
      }
      cand.ws.total = 0.0;
      for (int i = 0; i < m; ++i) {
        cand.ws.contrib[i] =
            detail::row_contribution(signed_objective, cand.ws.row_span(i));
        cand.ws.total += cand.ws.contrib[i];
      }
    }
    descend(cand, explore_cap, 0.02, best);
    const double value = cand.ws.total;
    traces[restart] = cand.trace;
    if (value > best) {
      second = best;
      runner_up = std::move(best_cand);
      best = value;
      best_cand = std::move(cand);
      best_cand.trace_index = restart;
    } else if (value > second) {
      second = value;
      runner_up = std::move(cand);
      runner_up.trace_index = restart;
    }
  }

  descend(best_cand, budget.max_sweeps, 0.0, 0.0);
  if (runner_up.sweeps > 0) {
    descend(runner_up, budget.max_sweeps, 0.0, 0.0);
    if (runner_up.ws.total > best_cand.ws.total) {
      std::swap(best_cand, runner_up);
    }
  }
  traces[best_cand.trace_index] = best_cand.trace;
  if (runner_up.sweeps > 0) {
    traces[runner_up.trace_index] = runner_up.trace;
  }
  result.sweep_traces = std::move(traces);

  const detail::RotationWorkspace& best_ws = best_cand.ws;
  result.restarts_used = budget.restarts;
  result.converged = best_cand.converged;
  result.value = sign * best_cand.ws.total;

  // Witness decomposition from the best rows.
  Decomposition dec;
  const int n_qubits = log2_dim(dim);
  for (int i = 0; i < m; ++i) {
    const double p = best_ws.rows.row(i).squaredNorm();
    if (p < 1e-14) {
      continue;
    }
    PureState psi;
    psi.n_qubits = n_qubits;
    psi.amplitudes = best_ws.rows.row(i).transpose() / std::sqrt(p);
    dec.weights.push_back(p);
    dec.states.push_back(std::move(psi));
  }
  double wsum = 0.0;
  for (double w : dec.weights) {
    wsum += w;
  }
  for (double& w : dec.weights) {
    w /= wsum;
  }
  result.decomposition = std::move(dec);
  return result;
}

/// Average of `objective` over a decomposition; used to re-check witnesses.
inline double evaluate_decomposition(const Decomposition& dec,
                                     const StateObjective& objective) {
  double acc = 0.0;
  for (std::size_t i = 0; i < dec.size(); ++i) {
    const auto& amps = dec.states[i].amplitudes;
    acc += dec.weights[i] *
           objective(std::span<const cplx>(amps.data(),
                                           static_cast<std::size_t>(
                                               amps.size())));
  }
  return acc;
}

/// Concurrence of a normalized two-qubit amplitude span: 2 |a d - b c|.
inline double concurrence_amplitudes_2q(std::span<const cplx> amps) {
  return std::min(2.0 * std::abs(amps[0] * amps[3] - amps[1] * amps[2]), 1.0);
}

inline StateObjective concurrence_objective() {
  return [](std::span<const cplx> amps) {
    return concurrence_amplitudes_2q(amps);
  };
}

inline StateObjective renyi_entanglement_objective(const AlphaParam& alpha) {
  return [alpha](std::span<const cplx> amps) {
    return f_alpha(concurrence_amplitudes_2q(amps), alpha);
  };
}

/// Closed-form concurrence of assistance: the Wootters spectrum sum
/// l1 + l2 + l3 + l4 (the fidelity between rho and its spin flip).
inline double coa_exact(const DensityMatrix& rho) {
  const auto l = wootters_spectrum(rho);
  return std::min(l[0] + l[1] + l[2] + l[3], 1.0);
}

/// Renyi-alpha entanglement of assistance, max-roof over decompositions.
/// Returns a certified lower bound with its witness. Requires
/// alpha >= (sqrt(7)-1)/2 so each pure term equals f_alpha(C).
inline RoofResult reoa_lower_bound(const DensityMatrix& rho, const AlphaParam& alpha,
                       const OptBudget& budget) {
  if (rho.n_qubits != 2) {
    throw std::invalid_argument("reoa_lower_bound: state must be two-qubit");
  }
  if (alpha.alpha < kAlphaLemmaLo - 1e-12) {
    throw std::domain_error(
        "reoa_lower_bound: alpha below (sqrt(7)-1)/2 threshold");
  }
  return optimize_roof(rho, renyi_entanglement_objective(alpha),
                       RoofMode::max, budget);
}

}  // namespace reoa
