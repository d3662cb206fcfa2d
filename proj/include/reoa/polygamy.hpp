#pragma once

// Inequality checks over named states and randomized batteries, with verdicts
// that respect one-sided optimizer bounds. The optimizer returns certificates,
// not truth: a max-roof result is only a lower bound, so an inequality is
// declared VIOLATION only when the bound directions make the comparison
// conclusive, and "consistent" or "inconclusive" otherwise.
//
// All inequalities are oriented as lhs <= rhs.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "reoa/measures.hpp"
#include "reoa/roof.hpp"

namespace reoa {

/// The A1 | A2...An partition: one focus qubit against a partner list.
struct PartitionSpec {
  int focus = 0;
  std::vector<int> partners;

  /// Focus qubit plus all others, in index order.
  static PartitionSpec versus_rest(int focus, int n_qubits) {
    PartitionSpec part;
    part.focus = focus;
    for (int q = 0; q < n_qubits; ++q) {
      if (q != focus) {
        part.partners.push_back(q);
      }
    }
    return part;
  }

  void validate(int n_qubits) const {
    if (focus < 0 || focus >= n_qubits) {
      throw std::invalid_argument("PartitionSpec: focus qubit out of range");
    }
    std::vector<bool> seen(n_qubits, false);
    seen[focus] = true;
    if (partners.empty()) {
      throw std::invalid_argument("PartitionSpec: partner list is empty");
    }
    for (int q : partners) {
      if (q < 0 || q >= n_qubits || seen[q]) {
        throw std::invalid_argument(
            "PartitionSpec: partner indices must be distinct and in range");
      }
      seen[q] = true;
    }
  }
};

enum class BoundSide { exact, lower_bound, upper_bound };
enum class Verdict { holds, consistent, violation, inconclusive };

inline std::string to_string(BoundSide side) {
  switch (side) {
    case BoundSide::exact:
      return "exact";
    case BoundSide::lower_bound:
      return "lower-bound";
    case BoundSide::upper_bound:
      return "upper-bound";
  }
  return "?";
}

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::holds:
      return "holds";
    case Verdict::consistent:
      return "consistent";
    case Verdict::violation:
      return "VIOLATION";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "?";
}

/// Decision table for lhs <= rhs under one-sided bounds.
///  - confirmable (true lhs <= reported, true rhs >= reported): lhs side
///    exact or upper, rhs side exact or lower;
///  - refutable (true lhs >= reported, true rhs <= reported): lhs side exact
///    or lower, rhs side exact or upper.
/// holds requires a confirmable configuration, VIOLATION a refutable one;
/// otherwise the observed comparison yields consistent / inconclusive.
inline Verdict decide_verdict(double lhs, BoundSide lhs_side, double rhs,
                              BoundSide rhs_side, double tolerance) {
  const bool comparison_ok = lhs <= rhs + tolerance;
  const bool confirmable = (lhs_side == BoundSide::exact ||
                            lhs_side == BoundSide::upper_bound) &&
                           (rhs_side == BoundSide::exact ||
                            rhs_side == BoundSide::lower_bound);
  const bool refutable = (lhs_side == BoundSide::exact ||
                          lhs_side == BoundSide::lower_bound) &&
                         (rhs_side == BoundSide::exact ||
                          rhs_side == BoundSide::upper_bound);
  if (comparison_ok) {
    return confirmable ? Verdict::holds : Verdict::consistent;
  }
  return refutable ? Verdict::violation : Verdict::inconclusive;
}

struct InequalityReport {
  std::string inequality;  // eq1|eq2|eq8|lemma1|eq19pure|eq19mixed|eq24
  std::string state;       // descriptor: name or generator + seed
  double alpha = 0.0;
  std::optional<double> mu;
  double lhs = 0.0;
  double rhs = 0.0;
  BoundSide lhs_side = BoundSide::exact;
  BoundSide rhs_side = BoundSide::exact;
  double margin = 0.0;  // rhs - lhs
  Verdict verdict = Verdict::holds;
  std::string note;
};

/// Exact-comparison tolerance (closed forms only).
inline constexpr double kExactTol = 1e-9;
/// Optimizer-involved comparison tolerance.
inline constexpr double kOptTol = 1e-6;

namespace detail {

inline DensityMatrix pair_reduction(const PureState& psi, int focus,
                                    int partner) {
  std::array<int, 2> keep{std::min(focus, partner), std::max(focus, partner)};
  return reduce(psi, keep);
}

inline DensityMatrix pair_reduction(const DensityMatrix& rho, int focus,
                                    int partner) {
  std::array<int, 2> keep{std::min(focus, partner), std::max(focus, partner)};
  return reduce(rho, keep);
}

/// Renyi entropy of one side of a two-qubit state.
inline double side_entropy(const DensityMatrix& rho2q, int side,
                           const AlphaParam& alpha) {
  const std::array<int, 1> keep{side};
  return renyi_entropy(reduce(rho2q, keep), alpha);
}

/// x^mu with the 0^0 = 0 convention (zero within 1e-12 counts as zero).
inline double mu_power(double x, double mu) {
  if (mu == 0.0) {
    return x <= 1e-12 ? 0.0 : 1.0;
  }
  return std::pow(std::max(x, 0.0), mu);
}

}  // namespace detail

/// CoA polygamy for the squared concurrence (exact on both sides):
/// C^2(psi_{A1|rest}) <= sum_i [C^a(rho_{A1 Ai})]^2. Reported as eq1 for
/// three qubits and eq2 for more.
inline InequalityReport check_eq1_eq2(const PureState& psi,
                                      const PartitionSpec& part,
                                      const std::string& descriptor = "") {
  part.validate(psi.n_qubits);
  if (psi.n_qubits < 3 || psi.n_qubits > kMaxQubits) {
    throw std::invalid_argument("check_eq1_eq2: need 3 to 6 qubits");
  }
  InequalityReport rep;
  rep.inequality = psi.n_qubits == 3 ? "eq1" : "eq2";
  rep.state = descriptor;
  rep.alpha = 0.0;  // alpha-free inequality
  const double c = concurrence_pure_bipartition(psi, part.focus);
  rep.lhs = c * c;
  rep.rhs = 0.0;
  for (int partner : part.partners) {
    const double coa = coa_exact(detail::pair_reduction(psi, part.focus,
                                                        partner));
    rep.rhs += coa * coa;
  }
  rep.lhs_side = BoundSide::exact;
  rep.rhs_side = BoundSide::exact;
  rep.margin = rep.rhs - rep.lhs;
  rep.verdict = decide_verdict(rep.lhs, rep.lhs_side, rep.rhs, rep.rhs_side,
                               kExactTol);
  return rep;
}

/// Subunit-alpha REoA ceiling: E^a_alpha(rho) <= min{S_alpha(rho_A),
/// S_alpha(rho_B)}. The left side is an optimizer lower bound, so the check
/// can refute but never confirm: verdict is consistent or VIOLATION.
inline InequalityReport check_eq8(const DensityMatrix& rho,
                                  const AlphaParam& alpha,
                                  const OptBudget& budget,
                                  const std::string& descriptor = "") {
  if (rho.n_qubits != 2) {
    throw std::invalid_argument("check_eq8: state must be two-qubit");
  }
  if (!(alpha.alpha < 1.0) || alpha.alpha < kAlphaLemmaLo - 1e-12) {
    throw std::domain_error(
        "check_eq8: alpha must lie in [(sqrt(7)-1)/2, 1)");
  }
  InequalityReport rep;
  rep.inequality = "eq8";
  rep.state = descriptor;
  rep.alpha = alpha.alpha;
  rep.lhs = reoa_lower_bound(rho, alpha, budget).value;
  rep.lhs_side = BoundSide::lower_bound;
  rep.rhs = std::min(detail::side_entropy(rho, 0, alpha),
                     detail::side_entropy(rho, 1, alpha));
  rep.rhs_side = BoundSide::exact;
  rep.margin = rep.rhs - rep.lhs;
  rep.verdict = decide_verdict(rep.lhs, rep.lhs_side, rep.rhs, rep.rhs_side,
                               kOptTol);
  return rep;
}

/// Assistance floor f_alpha(C^a(rho)) <= E^a_alpha(rho). The floor is exact
/// and any witness decomposition certifies the right side, so the favorable
/// direction is conclusive: holds when the optimizer reaches the floor,
/// VIOLATION when it falls short (an optimizer failure, not a counterexample).
inline InequalityReport check_lemma1(const DensityMatrix& rho,
                                     const AlphaParam& alpha,
                                     const OptBudget& budget,
                                     const std::string& descriptor = "") {
  if (rho.n_qubits != 2) {
    throw std::invalid_argument("check_lemma1: state must be two-qubit");
  }
  if (alpha.alpha < kAlphaLemmaLo - 1e-12) {
    throw std::domain_error(
        "check_lemma1: alpha below (sqrt(7)-1)/2 validity threshold");
  }
  InequalityReport rep;
  rep.inequality = "lemma1";
  rep.state = descriptor;
  rep.alpha = alpha.alpha;
  rep.lhs = f_alpha(coa_exact(rho), alpha);
  rep.lhs_side = BoundSide::exact;
  rep.rhs = reoa_lower_bound(rho, alpha, budget).value;
  rep.rhs_side = BoundSide::lower_bound;
  rep.margin = rep.rhs - rep.lhs;
  rep.verdict =
      rep.rhs >= rep.lhs - kOptTol ? Verdict::holds : Verdict::violation;
  if (rep.verdict == Verdict::violation) {
    rep.note = "optimizer failed to certify the floor";
  }
  return rep;
}

enum class Eq19Mode { certified, optimized };

/// Polygamy of REoA on a pure global state, partition A1 | A2...An.
///
/// certified mode verifies the proof chain E_alpha(psi) <= sum_i
/// f_alpha(C^a(rho_{A1 Ai})) with both sides exact, which implies the
/// inequality (each floor term lower-bounds the pair REoA); requires
/// lemma-range alpha. optimized mode compares against summed optimizer lower
/// bounds: holds when lhs <= rhs, inconclusive otherwise.
inline InequalityReport check_eq19_pure(const PureState& psi,
                                        const PartitionSpec& part,
                                        const AlphaParam& alpha,
                                        Eq19Mode mode, const OptBudget& budget,
                                        const std::string& descriptor = "") {
  part.validate(psi.n_qubits);
  if (mode == Eq19Mode::certified && !alpha.in_lemma_range) {
    throw std::domain_error(
        "check_eq19_pure: certified mode needs alpha in "
        "[(sqrt(7)-1)/2, (sqrt(13)-1)/2]");
  }
  if (mode == Eq19Mode::optimized && alpha.alpha < kAlphaLemmaLo - 1e-12) {
    throw std::domain_error(
        "check_eq19_pure: alpha below (sqrt(7)-1)/2 validity threshold");
  }
  InequalityReport rep;
  rep.inequality = "eq19pure";
  rep.state = descriptor;
  rep.alpha = alpha.alpha;
  rep.lhs = renyi_entanglement_pure(psi, part.focus, alpha);
  rep.lhs_side = BoundSide::exact;
  rep.rhs = 0.0;
  if (mode == Eq19Mode::certified) {
    for (int partner : part.partners) {
      rep.rhs += f_alpha(
          coa_exact(detail::pair_reduction(psi, part.focus, partner)), alpha);
    }
    rep.rhs_side = BoundSide::exact;
    rep.note = "certified floor (exact CoA chain)";
    rep.margin = rep.rhs - rep.lhs;
    rep.verdict = decide_verdict(rep.lhs, rep.lhs_side, rep.rhs, rep.rhs_side,
                                 kExactTol);
    return rep;
  }
  for (int partner : part.partners) {
    rep.rhs +=
        reoa_lower_bound(detail::pair_reduction(psi, part.focus, partner), alpha, budget)
            .value;
  }
  rep.rhs_side = BoundSide::lower_bound;
  rep.margin = rep.rhs - rep.lhs;
  rep.verdict = decide_verdict(rep.lhs, rep.lhs_side, rep.rhs, rep.rhs_side,
                               kOptTol);
  return rep;
}

/// Polygamy of REoA on a mixed three-qubit state. The left side is a
/// max-roof lower bound over global decompositions (each pure term scored as
/// S_alpha of the focus reduction). For alpha < 1 the pair ceilings
/// min{S_alpha} (eq8) give an exact upper bound for the right side, so the
/// verdict is consistent / VIOLATION; for alpha >= 1 no upper bound for REoA
/// is available and the verdict is consistent / inconclusive against the
/// certified floors.
inline InequalityReport check_eq19_mixed(const DensityMatrix& rho,
                                         const PartitionSpec& part,
                                         const AlphaParam& alpha,
                                         const OptBudget& budget,
                                         const std::string& descriptor = "") {
  part.validate(rho.n_qubits);
  if (rho.n_qubits != 3) {
    throw std::invalid_argument("check_eq19_mixed: supported for 3 qubits");
  }
  if (!alpha.in_lemma_range) {
    throw std::domain_error(
        "check_eq19_mixed: alpha must lie in the lemma range");
  }
  {
    HermitianEig eig = herm_eig(rho.matrix);
    int rank = 0;
    for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
      if (eig.eigenvalues[i] > 1e-12) {
        ++rank;
      }
    }
    if (rank > 4) {
      throw std::invalid_argument(
          "check_eq19_mixed: rank must not exceed 4");
    }
  }
  InequalityReport rep;
  rep.inequality = "eq19mixed";
  rep.state = descriptor;
  rep.alpha = alpha.alpha;

  const int focus = part.focus;
  const StateObjective lhs_objective = [focus,
                                        alpha](std::span<const cplx> amps) {
    // S_alpha of the focus-qubit reduction of a 3-qubit pure state.
    const int n = 3;
    const int shift = n - 1 - focus;
    const Eigen::Index mask = Eigen::Index{1} << shift;
    double p0 = 0.0;
    double p1 = 0.0;
    cplx off = 0.0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(amps.size());
         ++i) {
      if (i & mask) {
        continue;
      }
      const cplx a0 = amps[i];
      const cplx a1 = amps[i | mask];
      p0 += std::norm(a0);
      p1 += std::norm(a1);
      off += a0 * std::conj(a1);
    }
    const double tr = p0 + p1;
    const double det = std::max(p0 * p1 - std::norm(off), 0.0);
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    const std::array<double, 2> lams{(tr + disc) / 2.0, (tr - disc) / 2.0};
    return renyi_entropy_spectrum(lams, alpha);
  };
  rep.lhs = optimize_roof(rho, lhs_objective, RoofMode::max, budget).value;
  rep.lhs_side = BoundSide::lower_bound;

  rep.rhs = 0.0;
  if (alpha.is_subunit) {
    for (int partner : part.partners) {
      const DensityMatrix pair =
          detail::pair_reduction(rho, part.focus, partner);
      rep.rhs += std::min(detail::side_entropy(pair, 0, alpha),
                          detail::side_entropy(pair, 1, alpha));
    }
    rep.rhs_side = BoundSide::upper_bound;
    rep.note = "rhs from subunit-alpha entropy ceilings";
  } else {
    for (int partner : part.partners) {
      rep.rhs += f_alpha(
          coa_exact(detail::pair_reduction(rho, part.focus, partner)), alpha);
    }
    rep.rhs_side = BoundSide::lower_bound;
    rep.note = "rhs from certified floors; no REoA upper bound above alpha=1";
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.verdict = decide_verdict(rep.lhs, rep.lhs_side, rep.rhs, rep.rhs_side,
                               kOptTol);
  return rep;
}

/// mu-th power polygamy on a pure state via the certified route: raising the
/// chain to a power mu in [0, 1] keeps floors floors (x^mu is monotone).
/// mu = 1 reduces exactly to the eq19 certified verdict.
inline InequalityReport check_eq24(const PureState& psi,
                                   const PartitionSpec& part,
                                   const AlphaParam& alpha, const MuParam& mu,
                                   const std::string& descriptor = "") {
  part.validate(psi.n_qubits);
  if (!alpha.in_lemma_range) {
    throw std::domain_error("check_eq24: alpha must lie in the lemma range");
  }
  InequalityReport rep;
  rep.inequality = "eq24";
  rep.state = descriptor;
  rep.alpha = alpha.alpha;
  rep.mu = mu.mu;
  rep.lhs =
      detail::mu_power(renyi_entanglement_pure(psi, part.focus, alpha), mu.mu);
  rep.lhs_side = BoundSide::exact;
  rep.rhs = 0.0;
  for (int partner : part.partners) {
    const double floor = f_alpha(
        coa_exact(detail::pair_reduction(psi, part.focus, partner)), alpha);
    rep.rhs += detail::mu_power(floor, mu.mu);
  }
  rep.rhs_side = BoundSide::exact;
  rep.note = "certified floor chain raised to mu";
  rep.margin = rep.rhs - rep.lhs;
  rep.verdict = decide_verdict(rep.lhs, rep.lhs_side, rep.rhs, rep.rhs_side,
                               kExactTol);
  return rep;
}

/// mu-th power polygamy on a mixed three-qubit state; bounds are carried
/// through the monotone map x^mu, keeping the eq19mixed verdict semantics.
inline InequalityReport check_eq24(const DensityMatrix& rho,
                                   const PartitionSpec& part,
                                   const AlphaParam& alpha, const MuParam& mu,
                                   const OptBudget& budget,
                                   const std::string& descriptor = "") {
  InequalityReport base =
      check_eq19_mixed(rho, part, alpha, budget, descriptor);
  InequalityReport rep = base;
  rep.inequality = "eq24";
  rep.mu = mu.mu;
  rep.lhs = detail::mu_power(base.lhs, mu.mu);
  // Power the summed side term-wise is not recoverable from the sum; redo it.
  rep.rhs = 0.0;
  if (alpha.is_subunit) {
    for (int partner : part.partners) {
      const DensityMatrix pair =
          detail::pair_reduction(rho, part.focus, partner);
      rep.rhs += detail::mu_power(
          std::min(detail::side_entropy(pair, 0, alpha),
                   detail::side_entropy(pair, 1, alpha)),
          mu.mu);
    }
  } else {
    for (int partner : part.partners) {
      rep.rhs += detail::mu_power(
          f_alpha(coa_exact(detail::pair_reduction(rho, part.focus, partner)),
                  alpha),
          mu.mu);
    }
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.verdict = decide_verdict(rep.lhs, rep.lhs_side, rep.rhs, rep.rhs_side,
                               kOptTol);
  return rep;
}

}  // namespace reoa
