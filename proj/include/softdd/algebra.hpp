#ifndef SOFTDD_ALGEBRA_HPP
#define SOFTDD_ALGEBRA_HPP

// Dense complex operator algebra on the joint qubit (x) rest space.
//
// Tensor ordering is fixed as qubit (x) rest: the qubit index is the slow
// (outer) index, so a joint state vector psi reshapes to a 2 x d matrix
// M(q, k) = psi(q * d + k).

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "softdd/errors.hpp"

namespace softdd {

using cplx = std::complex<double>;
using Op = Eigen::MatrixXcd;
using StateVec = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I_unit{0.0, 1.0};

enum class Axis { x, y, z };

inline char axis_name(Axis a) {
  switch (a) {
  case Axis::x: return 'X';
  case Axis::y: return 'Y';
  case Axis::z: return 'Z';
  }
  return '?';
}

inline Op identity(Eigen::Index n) { return Op::Identity(n, n); }

inline Op pauli(Axis a) {
  Op s = Op::Zero(2, 2);
  switch (a) {
  case Axis::x:
    s(0, 1) = 1.0;
    s(1, 0) = 1.0;
    break;
  case Axis::y:
    s(0, 1) = -I_unit;
    s(1, 0) = I_unit;
    break;
  case Axis::z:
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    break;
  }
  return s;
}

/// Raising/lowering qubit operators with the conventional 1/2:
/// sigma_pm = (sigma_x +- i sigma_y) / 2.
inline Op sigma_plus() { return 0.5 * (pauli(Axis::x) + I_unit * pauli(Axis::y)); }
inline Op sigma_minus() { return 0.5 * (pauli(Axis::x) - I_unit * pauli(Axis::y)); }

/// Oscillator annihilation operator b truncated to `levels` Fock states.
inline Op destroy(Eigen::Index levels) {
  Op b = Op::Zero(levels, levels);
  for (Eigen::Index n = 1; n < levels; ++n)
    b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

inline Op number_op(Eigen::Index levels) {
  Op n = Op::Zero(levels, levels);
  for (Eigen::Index k = 0; k < levels; ++k)
    n(k, k) = static_cast<double>(k);
  return n;
}

inline Op kron(const Op& a, const Op& b) {
  Op out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Op comm(const Op& a, const Op& b) { return a * b - b * a; }
inline Op anticomm(const Op& a, const Op& b) { return a * b + b * a; }

/// Spectral (operator 2-) norm.
inline double op_norm(const Op& a) {
  if (a.size() == 0)
    return 0.0;
  Eigen::JacobiSVD<Op> svd(a);
  return svd.singularValues()(0);
}

inline double hermiticity_defect(const Op& h) { return op_norm(h - h.adjoint()); }

inline bool is_hermitian(const Op& h, double tol = 1e-12) {
  return h.rows() == h.cols() && hermiticity_defect(h) <= tol * std::max(1.0, op_norm(h));
}

inline double unitarity_defect(const Op& u) {
  return op_norm(u.adjoint() * u - identity(u.rows()));
}

/// exp(-i H t) for Hermitian H via eigendecomposition.
inline Op expm_herm(const Op& h, double t) {
  if (h.rows() != h.cols())
    throw ValidationError("expm_herm: matrix is not square");
  const double defect = hermiticity_defect(h);
  if (defect > 1e-10 * std::max(1.0, h.cwiseAbs().maxCoeff()))
    throw ValidationError("expm_herm: non-Hermitian input (|H - H^dag| = " +
                          std::to_string(defect) + ")");
  Eigen::SelfAdjointEigenSolver<Op> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& w = es.eigenvalues();
  Eigen::VectorXcd phase(w.size());
  for (Eigen::Index k = 0; k < w.size(); ++k)
    phase(k) = std::exp(-I_unit * (w(k) * t));
  const Op& v = es.eigenvectors();
  return v * phase.asDiagonal() * v.adjoint();
}

/// Trace over the rest factor of a qubit (x) rest density matrix.
inline Op partial_trace_rest(const Op& rho, Eigen::Index rest_dim) {
  if (rho.rows() != 2 * rest_dim || rho.cols() != 2 * rest_dim)
    throw ValidationError("partial_trace_rest: dimension mismatch");
  Op out = Op::Zero(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      out(a, b) = rho.block(a * rest_dim, b * rest_dim, rest_dim, rest_dim).trace();
  return out;
}

/// Trace over the qubit factor.
inline Op partial_trace_qubit(const Op& rho, Eigen::Index rest_dim) {
  if (rho.rows() != 2 * rest_dim || rho.cols() != 2 * rest_dim)
    throw ValidationError("partial_trace_qubit: dimension mismatch");
  return rho.block(0, 0, rest_dim, rest_dim) + rho.block(rest_dim, rest_dim, rest_dim, rest_dim);
}

/// Reduced states of a pure joint state without forming the full projector.
inline Op reduced_qubit(const StateVec& psi, Eigen::Index rest_dim) {
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi.data(), 2, rest_dim);
  return m * m.adjoint();
}

inline Op reduced_rest(const StateVec& psi, Eigen::Index rest_dim) {
  const Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi.data(), 2, rest_dim);
  return m.transpose() * m.conjugate();
}

/// Plain-text dump: one row per line, entries as (re,im).
inline void dump(std::ostream& os, const Op& a, int precision = 6) {
  std::ostringstream line;
  line.precision(precision);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    line.str("");
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      line << (j ? " " : "") << '(' << a(i, j).real() << ',' << a(i, j).imag() << ')';
    os << line.str() << '\n';
  }
}

// ---------------------------------------------------------------------------
// System Hamiltonians

/// Hs = sigma_x Ax + sigma_y Ay + sigma_z Az + A0, each A acting on the rest
/// factor.
struct CouplingSet {
  Op a0, ax, ay, az;

  Eigen::Index rest_dim() const { return a0.rows(); }

  void validate() const {
    const Eigen::Index d = a0.rows();
    for (const Op* a : {&a0, &ax, &ay, &az}) {
      if (a->rows() != d || a->cols() != d)
        throw ValidationError("CouplingSet: dimension mismatch among A_nu");
      if (!is_hermitian(*a, 1e-12))
        throw ValidationError("CouplingSet: A_nu must be Hermitian");
    }
    if (d < 1)
      throw ValidationError("CouplingSet: empty rest space");
  }

  CouplingSet scaled(double lambda) const {
    return {lambda * a0, lambda * ax, lambda * ay, lambda * az};
  }

  /// Coupling along a qubit axis.
  const Op& along(Axis a) const {
    switch (a) {
    case Axis::x: return ax;
    case Axis::y: return ay;
    case Axis::z: return az;
    }
    return ax;
  }

  static CouplingSet zero(Eigen::Index d) {
    return {Op::Zero(d, d), Op::Zero(d, d), Op::Zero(d, d), Op::Zero(d, d)};
  }
};

/// Model parameters. Frequencies are in units of 2*pi/tp (the figure
/// convention); the builders convert to angular frequency per unit time.
struct ModelParams {
  double omega_r = 0.0;     // oscillator frequency bias
  double omega_0 = 0.0;     // qubit frequency bias
  double g = 0.1;           // qubit-oscillator coupling
  int n_max = 8;            // oscillator truncation: levels 0..n_max
  double delta_shift = 0.0; // chemical shift for the NMR test model
  double tp = 1.0;          // pulse duration, the unit of time

  double angular(double f) const { return two_pi * f / tp; }

  void validate() const {
    if (n_max < 1)
      throw ValidationError("ModelParams: n_max must be >= 1");
    if (!(tp > 0.0) || !std::isfinite(tp))
      throw ValidationError("ModelParams: tp must be positive");
    for (double f : {omega_r, omega_0, g, delta_shift})
      if (!std::isfinite(f))
        throw ValidationError("ModelParams: frequencies must be finite");
  }
};

/// Jaynes-Cummings couplings: Hs = wr b^dag b + (w0/2) sz - g (b^dag s- + s+ b),
/// giving A0 = wr b^dag b, Ax = -g (b + b^dag)/2, Ay = i g (b^dag - b)/2,
/// Az = w0/2.
inline CouplingSet jaynes_cummings(const ModelParams& p) {
  p.validate();
  const Eigen::Index levels = p.n_max + 1;
  const Op b = destroy(levels);
  const Op bd = b.adjoint();
  const double wr = p.angular(p.omega_r);
  const double w0 = p.angular(p.omega_0);
  const double g = p.angular(p.g);
  return {wr * (bd * b), -0.5 * g * (b + bd), 0.5 * g * I_unit * (bd - b),
          0.5 * w0 * identity(levels)};
}

/// Chemical-shift model Hs = (Delta/2) sz on a bare qubit (rest dimension 1).
/// `delta` is an angular frequency.
inline CouplingSet chemical_shift(double delta) {
  CouplingSet c = CouplingSet::zero(1);
  c.az(0, 0) = 0.5 * delta;
  return c;
}

/// Full Hs on qubit (x) rest.
inline Op assemble(const CouplingSet& c) {
  c.validate();
  const Op id2 = identity(2);
  Op h = kron(id2, c.a0) + kron(pauli(Axis::x), c.ax) + kron(pauli(Axis::y), c.ay) +
         kron(pauli(Axis::z), c.az);
  return 0.5 * (h + h.adjoint());
}

/// Qubit operator q embedded as q (x) 1_rest.
inline Op on_qubit(const Op& q, Eigen::Index rest_dim) { return kron(q, identity(rest_dim)); }

/// Rest operator a embedded as 1_2 (x) a.
inline Op on_rest(const Op& a) { return kron(identity(2), a); }

} // namespace softdd

#endif
