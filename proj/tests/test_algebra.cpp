#include <gtest/gtest.h>

#include <random>

#include "softdd/algebra.hpp"

using namespace softdd;

namespace {

Op random_hermitian(std::mt19937& rng, Eigen::Index n) {
  std::normal_distribution<double> d;
  Op a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = cplx(d(rng), d(rng));
  return 0.5 * (a + a.adjoint());
}

} // namespace

TEST(Algebra, PauliAlgebra) {
  const Op x = pauli(Axis::x), y = pauli(Axis::y), z = pauli(Axis::z);
  EXPECT_LT(op_norm(x * y - I_unit * z), 1e-15);
  EXPECT_LT(op_norm(comm(y, z) - 2.0 * I_unit * x), 1e-15);
  EXPECT_LT(op_norm(anticomm(x, z)), 1e-15);
  EXPECT_LT(op_norm(sigma_plus() * sigma_minus() + sigma_minus() * sigma_plus() - identity(2)),
            1e-15);
}

TEST(Algebra, ExpmBasics) {
  EXPECT_LT(op_norm(expm_herm(Op::Zero(3, 3), 1.0) - identity(3)), 1e-15);
  const Op u = expm_herm(0.5 * pi * pauli(Axis::x), 1.0);
  EXPECT_LT(op_norm(u + I_unit * pauli(Axis::x)), 1e-14);
  std::mt19937 rng(7);
  for (int k = 0; k < 5; ++k) {
    const Op h = random_hermitian(rng, 6);
    const Op prod = expm_herm(h, 0.7) * expm_herm(h, -0.7);
    EXPECT_LT(op_norm(prod - identity(6)), 1e-12);
    EXPECT_LT(unitarity_defect(expm_herm(h, 1.3)), 1e-12);
  }
}

TEST(Algebra, ExpmRejectsNonHermitian) {
  Op a = Op::Zero(2, 2);
  a(0, 1) = 1.0;
  EXPECT_THROW(expm_herm(a, 1.0), ValidationError);
}

TEST(Algebra, CommutatorSymmetry) {
  std::mt19937 rng(11);
  for (int k = 0; k < 5; ++k) {
    const Op a = random_hermitian(rng, 4), b = random_hermitian(rng, 4);
    EXPECT_LT(op_norm(comm(a, b) + comm(b, a)), 1e-13);
    EXPECT_LT(op_norm(anticomm(a, b) - anticomm(b, a)), 1e-13);
  }
}

TEST(Algebra, PartialTraces) {
  StateVec q(2), r(3);
  q << 0.6, cplx(0.0, 0.8);
  r << 1.0, 0.0, 0.0;
  const StateVec psi = kron(q, r);
  const Op rho = psi * psi.adjoint();
  const Op rq = partial_trace_rest(rho, 3);
  EXPECT_LT(op_norm(rq - q * q.adjoint()), 1e-14);
  EXPECT_NEAR(std::abs((rq * rq).trace() - 1.0), 0.0, 1e-14);
  EXPECT_LT(op_norm(reduced_qubit(psi, 3) - rq), 1e-14);
  EXPECT_LT(op_norm(reduced_rest(psi, 3) - partial_trace_qubit(rho, 3)), 1e-14);

  std::mt19937 rng(3);
  const Op h = random_hermitian(rng, 8);
  const Op m = h * h;
  const Op rho2 = m / m.trace();
  EXPECT_NEAR(std::abs(partial_trace_rest(rho2, 4).trace() - 1.0), 0.0, 1e-13);
  EXPECT_NEAR(std::abs(partial_trace_qubit(rho2, 4).trace() - 1.0), 0.0, 1e-13);
}

TEST(Algebra, JaynesCummingsDecoupled) {
  ModelParams p;
  p.omega_r = 0.3;
  p.g = 0.0;
  p.n_max = 3;
  const CouplingSet c = jaynes_cummings(p);
  for (Eigen::Index n = 0; n <= 3; ++n)
    EXPECT_NEAR(c.a0(n, n).real(), two_pi * 0.3 * n, 1e-14);
  EXPECT_LT(op_norm(c.ax) + op_norm(c.ay) + op_norm(c.az), 1e-15);
}

TEST(Algebra, JaynesCummingsTwoLevel) {
  ModelParams p;
  p.g = 0.1;
  p.n_max = 1;
  const Op h = assemble(jaynes_cummings(p));
  ASSERT_EQ(h.rows(), 4);
  const double g = two_pi * 0.1;
  // basis |q,n> with q=0 spin up: sigma+ b couples |down,1> (3) and |up,0> (0)
  EXPECT_NEAR(std::abs(h(0, 3)), g, 1e-14);
  EXPECT_NEAR(std::abs(h(1, 2)), 0.0, 1e-14);
  EXPECT_LT(hermiticity_defect(h), 1e-14);
  // -g (b^dag s- + s+ b) with s+- carrying the 1/2 gives element -g/2 * 2
  const Op bd = destroy(2).adjoint();
  const Op ref = -g * (kron(sigma_minus(), bd) + kron(sigma_plus(), destroy(2)));
  EXPECT_LT(op_norm(h - ref), 1e-14);
}

TEST(Algebra, JaynesCummingsRabiSplitting) {
  ModelParams p;
  p.g = 0.05;
  p.omega_r = 0.4;
  p.omega_0 = 0.4;
  p.n_max = 6;
  CouplingSet c = jaynes_cummings(p);
  // rotating-frame resonance: add the qubit bias so both sectors are degenerate
  const Op h = assemble(c) + 0.5 * two_pi * 0.4 * on_rest(identity(7));
  Eigen::SelfAdjointEigenSolver<Op> es(h);
  const Eigen::VectorXd w = es.eigenvalues();
  const double g = two_pi * 0.05;
  const double wr = two_pi * 0.4;
  for (int n = 1; n <= 3; ++n) {
    const double centre = wr * n;
    bool lo = false, hi = false;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      lo = lo || std::abs(w(k) - (centre - g * std::sqrt(n))) < 1e-10;
      hi = hi || std::abs(w(k) - (centre + g * std::sqrt(n))) < 1e-10;
    }
    EXPECT_TRUE(lo && hi) << "n=" << n;
  }
}

TEST(Algebra, ChemicalShift) {
  const CouplingSet c = chemical_shift(1.0);
  EXPECT_EQ(c.rest_dim(), 1);
  EXPECT_DOUBLE_EQ(c.az(0, 0).real(), 0.5);
  EXPECT_LT(op_norm(assemble(chemical_shift(0.0))), 1e-16);
}

TEST(Algebra, AssembleDimensionMismatch) {
  CouplingSet c = CouplingSet::zero(2);
  c.ax = Op::Zero(3, 3);
  EXPECT_THROW(assemble(c), ValidationError);
}

TEST(Algebra, ModelValidation) {
  ModelParams p;
  p.n_max = 0;
  EXPECT_THROW(p.validate(), ValidationError);
  p.n_max = 2;
  p.g = std::nan("");
  EXPECT_THROW(p.validate(), ValidationError);
}
