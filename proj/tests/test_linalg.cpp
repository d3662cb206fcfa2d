#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <complex>

#include "reoa/linalg.hpp"
#include "reoa/rng.hpp"

using namespace reoa;
using Catch::Matchers::WithinAbs;

namespace {

ComplexMatrix random_hermitian(Eigen::Index dim, Rng& rng) {
  ComplexMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      a(i, j) = rng.complex_gaussian();
    }
  }
  return (a + a.adjoint()).eval() / 2.0;
}

ComplexMatrix random_psd(Eigen::Index dim, Eigen::Index rank, Rng& rng) {
  ComplexMatrix g(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) {
      g(i, j) = rng.complex_gaussian();
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

const ComplexMatrix kSigmaY = [] {
  ComplexMatrix m(2, 2);
  m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
  return m;
}();

ComplexVector bell_phi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v[0] = v[3] = 1.0 / std::numbers::sqrt2;
  return v;
}

}  // namespace

TEST_CASE("kron of identities is the identity") {
  const ComplexMatrix i2 = ComplexMatrix::Identity(2, 2);
  REQUIRE((kron(i2, i2) - ComplexMatrix::Identity(4, 4)).norm() == 0.0);
}

TEST_CASE("kron(sigma_y, sigma_y) has the -1, 1, 1, -1 anti-diagonal") {
  const ComplexMatrix f = kron(kSigmaY, kSigmaY);
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect(0, 3) = -1.0;
  expect(1, 2) = 1.0;
  expect(2, 1) = 1.0;
  expect(3, 0) = -1.0;
  REQUIRE((f - expect).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE((f - spin_flip_operator()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron is associative") {
  Rng rng(71);
  const ComplexMatrix a = random_hermitian(2, rng);
  const ComplexMatrix b = random_hermitian(2, rng);
  const ComplexMatrix c = random_hermitian(2, rng);
  REQUIRE((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("partial trace of the maximally mixed state") {
  const ComplexMatrix i4 = ComplexMatrix::Identity(4, 4) / 4.0;
  const std::array<int, 1> keep{0};
  const ComplexMatrix r = partial_trace(i4, 2, keep);
  REQUIRE((r - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("partial trace of a Bell projector is maximally mixed") {
  const ComplexVector phi = bell_phi_plus();
  const ComplexMatrix rho = phi * phi.adjoint();
  const std::array<int, 1> keep{0};
  const ComplexMatrix r = partial_trace(rho, 2, keep);
  REQUIRE((r - ComplexMatrix::Identity(2, 2) / 2.0).cwiseAbs().maxCoeff() <
          1e-14);
}

TEST_CASE("partial trace factorizes product operators") {
  Rng rng(5);
  const ComplexMatrix rho = random_psd(2, 2, rng);
  const ComplexMatrix sigma = random_psd(2, 2, rng);
  const std::array<int, 1> keep{0};
  const ComplexMatrix r = partial_trace(kron(rho, sigma), 2, keep);
  REQUIRE((r - rho).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("partial trace composes over complementary subsets") {
  Rng rng(6);
  const std::array<int, 2> keep01{0, 1};
  const std::array<int, 1> keep0_of2{0};
  const std::array<int, 1> keep0{0};
  for (int trial = 0; trial < 50; ++trial) {
    const ComplexMatrix rho = random_psd(8, 8, rng);
    // Tracing out qubit 2 then qubit 1 equals tracing out {1, 2} directly.
    const ComplexMatrix step1 = partial_trace(rho, 3, keep01);
    const ComplexMatrix via = partial_trace(step1, 2, keep0_of2);
    const ComplexMatrix direct = partial_trace(rho, 3, keep0);
    REQUIRE((via - direct).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE_THAT(std::abs(step1.trace().real() - 1.0), WithinAbs(0.0, 1e-12));
    REQUIRE(hermiticity_defect(step1) < 1e-12);
  }
}

TEST_CASE("partial trace rejects bad arguments") {
  const ComplexMatrix i4 = ComplexMatrix::Identity(4, 4) / 4.0;
  const std::array<int, 1> out_of_range{2};
  REQUIRE_THROWS_AS(partial_trace(i4, 2, out_of_range), std::invalid_argument);
  const ComplexMatrix bad = ComplexMatrix::Identity(3, 3) / 3.0;
  const std::array<int, 1> keep{0};
  REQUIRE_THROWS_AS(partial_trace(bad, 2, keep), std::invalid_argument);
  REQUIRE_THROWS_AS(partial_trace(i4, 2, std::span<const int>{}),
                    std::invalid_argument);
}

TEST_CASE("herm_eig on simple diagonals") {
  const HermitianEig id = herm_eig(ComplexMatrix::Identity(2, 2));
  REQUIRE_THAT(id.eigenvalues[0], WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(id.eigenvalues[1], WithinAbs(1.0, 1e-14));

  ComplexMatrix sz = ComplexMatrix::Zero(2, 2);
  sz(0, 0) = 1.0;
  sz(1, 1) = -1.0;
  const HermitianEig z = herm_eig(sz);
  REQUIRE_THAT(z.eigenvalues[0], WithinAbs(1.0, 1e-14));
  REQUIRE_THAT(z.eigenvalues[1], WithinAbs(-1.0, 1e-14));
}

TEST_CASE("herm_eig reconstructs random Hermitian matrices") {
  Rng rng(42);
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index dim = trial % 2 == 0 ? 4 : 8;
    const ComplexMatrix a = random_hermitian(dim, rng);
    const HermitianEig eig = herm_eig(a);
    const ComplexMatrix back = eig.eigenvectors *
                               eig.eigenvalues.asDiagonal() *
                               eig.eigenvectors.adjoint();
    REQUIRE((back - a).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE((eig.eigenvectors.adjoint() * eig.eigenvectors -
             ComplexMatrix::Identity(dim, dim))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    for (Eigen::Index i = 1; i < dim; ++i) {
      REQUIRE(eig.eigenvalues[i - 1] >= eig.eigenvalues[i]);
    }
  }
}

TEST_CASE("herm_eig rejects non-Hermitian input") {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 1) = 1.0;
  REQUIRE_THROWS_AS(herm_eig(a), std::domain_error);
}

TEST_CASE("psd_sqrt on diagonal cases") {
  REQUIRE((psd_sqrt(ComplexMatrix::Identity(4, 4)) -
           ComplexMatrix::Identity(4, 4))
              .cwiseAbs()
              .maxCoeff() < 1e-12);
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 4.0;
  const ComplexMatrix r = psd_sqrt(d);
  REQUIRE_THAT(r(0, 0).real(), WithinAbs(2.0, 1e-12));
  REQUIRE_THAT(std::abs(r(1, 1)), WithinAbs(0.0, 1e-12));
}

TEST_CASE("psd_sqrt squares back to the input") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix rho = random_psd(4, 1 + trial % 4, rng);
    const ComplexMatrix root = psd_sqrt(rho);
    REQUIRE((root * root - rho).cwiseAbs().maxCoeff() < 1e-9);
    REQUIRE(hermiticity_defect(root) < 1e-10);
  }
}

TEST_CASE("psd_sqrt rejects indefinite input") {
  ComplexMatrix d = ComplexMatrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1e-6;
  REQUIRE_THROWS_AS(psd_sqrt(d), std::domain_error);
}

TEST_CASE("spin flip fixes the Bell projector and swaps |00><00|") {
  const ComplexVector phi = bell_phi_plus();
  const ComplexMatrix bell = phi * phi.adjoint();
  REQUIRE((spin_flip(bell) - bell).cwiseAbs().maxCoeff() < 1e-14);

  ComplexMatrix zz = ComplexMatrix::Zero(4, 4);
  zz(0, 0) = 1.0;  // |00><00|
  ComplexMatrix oo = ComplexMatrix::Zero(4, 4);
  oo(3, 3) = 1.0;  // |11><11|
  REQUIRE((spin_flip(zz) - oo).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spin flip is a trace-preserving Hermitian involution") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix rho = random_psd(4, 4, rng);
    const ComplexMatrix tilde = spin_flip(rho);
    REQUIRE(hermiticity_defect(tilde) < 1e-12);
    REQUIRE_THAT(tilde.trace().real(), WithinAbs(rho.trace().real(), 1e-12));
    REQUIRE((spin_flip(tilde) - rho).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("spin flip rejects non-4x4 input") {
  REQUIRE_THROWS_AS(spin_flip(ComplexMatrix::Identity(2, 2)),
                    std::invalid_argument);
}
