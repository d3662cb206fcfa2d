#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cmath>

#include "reoa/measures.hpp"

using namespace reoa;
using Catch::Matchers::WithinAbs;

namespace {

DensityMatrix diagonal_state(std::initializer_list<double> probs) {
  DensityMatrix rho;
  const auto n = static_cast<Eigen::Index>(probs.size());
  rho.n_qubits = log2_dim(n);
  rho.matrix = ComplexMatrix::Zero(n, n);
  Eigen::Index i = 0;
  for (double p : probs) {
    rho.matrix(i, i) = p;
    ++i;
  }
  return rho;
}

DensityMatrix maximally_mixed_qubit() { return diagonal_state({0.5, 0.5}); }

}  // namespace

TEST_CASE("alpha parameter flags") {
  REQUIRE(AlphaParam(1.0).in_lemma_range);
  REQUIRE(AlphaParam(kAlphaLemmaLo).in_lemma_range);
  REQUIRE(AlphaParam(kAlphaLemmaHi).in_lemma_range);
  REQUIRE_FALSE(AlphaParam(kAlphaLemmaLo - 1e-9).in_lemma_range);
  REQUIRE_FALSE(AlphaParam(kAlphaLemmaHi + 1e-9).in_lemma_range);
  REQUIRE(AlphaParam(0.9).is_subunit);
  REQUIRE_FALSE(AlphaParam(1.0).is_subunit);
  REQUIRE_THROWS_AS(AlphaParam(0.0), std::domain_error);
  REQUIRE_THROWS_AS(MuParam(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(MuParam(1.1), std::domain_error);
}

TEST_CASE("renyi entropy of simple spectra") {
  REQUIRE_THAT(renyi_entropy(maximally_mixed_qubit(), AlphaParam(0.7)),
               WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(renyi_entropy(maximally_mixed_qubit(), AlphaParam(3.0)),
               WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(renyi_entropy(diagonal_state({1.0, 0.0}), AlphaParam(2.0)),
               WithinAbs(0.0, 1e-12));
  // diag(3/4, 1/4) at alpha = 2: -log2(10/16).
  REQUIRE_THAT(renyi_entropy(diagonal_state({0.75, 0.25}), AlphaParam(2.0)),
               WithinAbs(-std::log2(10.0 / 16.0), 1e-12));
}

TEST_CASE("renyi entropy brackets the von Neumann entropy near alpha = 1") {
  for (int trial = 0; trial < 50; ++trial) {
    const DensityMatrix rho =
        ginibre_random_mixed(2, 1 + trial % 4, RngSeed{derive_seed(31, trial)});
    const double vn = von_neumann_entropy(rho);
    const double below = renyi_entropy(rho, AlphaParam(1.0 - 1e-4));
    const double above = renyi_entropy(rho, AlphaParam(1.0 + 1e-4));
    REQUIRE_THAT(below, WithinAbs(vn, 1e-3));
    REQUIRE_THAT(above, WithinAbs(vn, 1e-3));
    REQUIRE(above <= below + 1e-9);  // S_alpha decreases in alpha
  }
}

TEST_CASE("von Neumann entropy endpoints") {
  REQUIRE_THAT(von_neumann_entropy(maximally_mixed_qubit()),
               WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(von_neumann_entropy(diagonal_state({1.0, 0.0})),
               WithinAbs(0.0, 1e-12));
}

TEST_CASE("renyi entropy is additive over tensor products") {
  for (int trial = 0; trial < 30; ++trial) {
    const DensityMatrix a =
        ginibre_random_mixed(1, 2, RngSeed{derive_seed(101, trial)});
    const DensityMatrix b =
        ginibre_random_mixed(2, 3, RngSeed{derive_seed(202, trial)});
    DensityMatrix ab;
    ab.n_qubits = 3;
    ab.matrix = kron(a.matrix, b.matrix);
    for (double al : {0.5, 0.9, 1.3, 2.0}) {
      const AlphaParam alpha(al);
      REQUIRE_THAT(renyi_entropy(ab, alpha),
                   WithinAbs(renyi_entropy(a, alpha) + renyi_entropy(b, alpha),
                             1e-9));
    }
  }
}

TEST_CASE("theta and xi") {
  auto [t0, x0] = theta_xi(0.0);
  REQUIRE(t0 == 2.0);
  REQUIRE(x0 == 0.0);
  auto [t1, x1] = theta_xi(1.0);
  REQUIRE_THAT(t1, WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(x1, WithinAbs(1.0, 1e-15));
  auto [t, x] = theta_xi(0.6);
  REQUIRE_THAT(t, WithinAbs(1.8, 1e-15));
  REQUIRE_THAT(x, WithinAbs(0.2, 1e-15));
  REQUIRE_THROWS_AS(theta_xi(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(theta_xi(1.1), std::domain_error);

  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double xx = rng.uniform();
    auto [theta, xi] = theta_xi(xx);
    REQUIRE(theta + xi == 2.0);  // exact by construction
    REQUIRE_THAT(theta * xi, WithinAbs(xx * xx, 1e-14));
  }
}

TEST_CASE("f_alpha endpoints and special values") {
  for (double a : {kAlphaLemmaLo, 0.9, 1.0, 1.1, kAlphaLemmaHi, 2.0}) {
    const AlphaParam alpha(a);
    REQUIRE(f_alpha(0.0, alpha) == 0.0);
    REQUIRE(f_alpha(1.0, alpha) == 1.0);
  }
  // alpha -> 1 limit matches binary entropy at x = 1/sqrt(2).
  const double x = 1.0 / std::numbers::sqrt2;
  const double h2 = [] {
    const double p = (1.0 + 1.0 / std::numbers::sqrt2) / 2.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
  }();
  REQUIRE_THAT(f_alpha(x, AlphaParam(1.0)), WithinAbs(h2, 1e-12));
  REQUIRE_THAT(f_alpha(x, AlphaParam(1.0 + 1e-5)), WithinAbs(h2, 1e-4));
  REQUIRE_THAT(f_alpha(x, AlphaParam(1.0 - 1e-5)), WithinAbs(h2, 1e-4));
  REQUIRE_THROWS_AS(f_alpha(1.5, AlphaParam(1.2)), std::domain_error);
}

TEST_CASE("f_alpha is monotone and convex on the lemma range") {
  const double step = 1e-3;
  for (int k = 0; k < 21; ++k) {
    const AlphaParam alpha(kAlphaLemmaLo +
                           (kAlphaLemmaHi - kAlphaLemmaLo) * k / 20.0);
    double prev = f_alpha(0.0, alpha);
    double prev_diff = 0.0;
    bool first = true;
    for (double x = step; x <= 1.0 + 1e-12; x += step) {
      const double v = f_alpha(std::min(x, 1.0), alpha);
      const double diff = v - prev;
      REQUIRE(diff >= -1e-9);  // monotone nondecreasing
      if (!first) {
        REQUIRE(diff - prev_diff >= -1e-7);  // convex (second difference)
      }
      first = false;
      prev = v;
      prev_diff = diff;
    }
  }
}

TEST_CASE("pure-state concurrence across single-qubit cuts") {
  REQUIRE_THAT(concurrence_pure_bipartition(named_state("bell"), 0),
               WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(concurrence_pure_bipartition(named_state("product:4"), 0),
               WithinAbs(0.0, 1e-12));
  REQUIRE_THAT(concurrence_pure_bipartition(named_state("w:3"), 0),
               WithinAbs(2.0 * std::numbers::sqrt2 / 3.0, 1e-12));
  REQUIRE_THROWS_AS(concurrence_pure_bipartition(named_state("bell"), 2),
                    std::invalid_argument);
}

TEST_CASE("wootters concurrence of two-qubit mixed states") {
  const DensityMatrix bell = density_from_pure(named_state("bell"));
  REQUIRE_THAT(concurrence_mixed_2q(bell), WithinAbs(1.0, 1e-10));

  DensityMatrix mixed;
  mixed.n_qubits = 2;
  mixed.matrix = ComplexMatrix::Identity(4, 4) / 4.0;
  REQUIRE_THAT(concurrence_mixed_2q(mixed), WithinAbs(0.0, 1e-10));

  DensityMatrix classical;
  classical.n_qubits = 2;
  classical.matrix = ComplexMatrix::Zero(4, 4);
  classical.matrix(0, 0) = 0.5;
  classical.matrix(3, 3) = 0.5;
  REQUIRE_THAT(concurrence_mixed_2q(classical), WithinAbs(0.0, 1e-10));
}

TEST_CASE("two-qubit E_alpha equals f_alpha of the concurrence") {
  const DensityMatrix bell = density_from_pure(named_state("bell"));
  for (double a : {kAlphaLemmaLo, 1.0, 1.2, 2.0}) {
    REQUIRE_THAT(renyi_entanglement_2q(bell, AlphaParam(a)),
                 WithinAbs(1.0, 1e-9));
  }
  DensityMatrix separable;
  separable.n_qubits = 2;
  separable.matrix = ComplexMatrix::Zero(4, 4);
  separable.matrix(0, 0) = 1.0;
  REQUIRE_THAT(renyi_entanglement_2q(separable, AlphaParam(1.2)),
               WithinAbs(0.0, 1e-12));
  REQUIRE_THROWS_AS(renyi_entanglement_2q(bell, AlphaParam(0.5)),
                    std::domain_error);
}

TEST_CASE("pure-state E_alpha values") {
  REQUIRE_THAT(renyi_entanglement_pure(named_state("ghz:3"), 0,
                                       AlphaParam(2.0)),
               WithinAbs(1.0, 1e-12));
  REQUIRE_THAT(renyi_entanglement_pure(named_state("product:3"), 0,
                                       AlphaParam(2.0)),
               WithinAbs(0.0, 1e-12));
  // W(3): reduction spectrum {2/3, 1/3}; S_2 = log2(9/5).
  REQUIRE_THAT(renyi_entanglement_pure(named_state("w:3"), 0, AlphaParam(2.0)),
               WithinAbs(std::log2(9.0 / 5.0), 1e-12));
}

TEST_CASE("E_alpha of pure two-qubit states matches f_alpha(C)") {
  // Consistency of the analytic formula on 1000 Haar states across an alpha
  // grid spanning the lemma range.
  for (int trial = 0; trial < 1000; ++trial) {
    const PureState psi =
        haar_random_pure(2, RngSeed{derive_seed(404, trial)});
    const double c = concurrence_pure_bipartition(psi, 0);
    for (int k = 0; k < 7; ++k) {
      const AlphaParam alpha(kAlphaLemmaLo +
                             (kAlphaLemmaHi - kAlphaLemmaLo) * k / 6.0);
      REQUIRE_THAT(renyi_entanglement_pure(psi, 0, alpha),
                   WithinAbs(f_alpha(c, alpha), 1e-9));
    }
  }
}

TEST_CASE("renyi entropy is a function of the spectrum only") {
  const std::array<double, 4> spec{0.4, 0.3, 0.2, 0.1};
  std::array<double, 4> perm{0.1, 0.4, 0.2, 0.3};
  const AlphaParam alpha(1.7);
  REQUIRE_THAT(renyi_entropy_spectrum(spec, alpha),
               WithinAbs(renyi_entropy_spectrum(perm, alpha), 1e-15));
}
