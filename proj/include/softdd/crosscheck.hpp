#ifndef SOFTDD_CROSSCHECK_HPP
#define SOFTDD_CROSSCHECK_HPP

// Jaynes-Cummings specializations of the effective Hamiltonians compared
// against direct propagation.
//
// Three candidates are scored for a named sequence:
//   generic-printed  effective_hamiltonian(Form::printed) on JC couplings
//   generic-matched  effective_hamiltonian(Form::matched) on JC couplings
//   cavity-printed   cavity_hamiltonian, verbatim
// Each is scored by the period defect over a coupling scan, and by the
// projection of every candidate (and of the numerical generator i log(U)/T)
// onto a few JC operator terms.

#include <Eigen/Eigenvalues>

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "softdd/order.hpp"

namespace softdd {

/// Generator H with U = U0 exp(-i T H), via the principal logarithm.
inline Op numerical_hamiltonian(const Op& u, const Op& u0, double period) {
  const Op w = u0.adjoint() * u;
  Eigen::ComplexSchur<Op> schur(w);
  const Op& t = schur.matrixT();
  const Op& q = schur.matrixU();
  Eigen::VectorXcd lg(t.rows());
  for (Eigen::Index k = 0; k < t.rows(); ++k)
    lg(k) = std::log(t(k, k));
  Op h = (I_unit / period) * (q * lg.asDiagonal() * q.adjoint());
  return 0.5 * (h + h.adjoint());
}

/// Hilbert-Schmidt coefficient of basis operator b in h.
inline double project(const Op& h, const Op& b) {
  return ((b.adjoint() * h).trace() / (b.adjoint() * b).trace()).real();
}

struct CandidateScore {
  std::string name;
  std::vector<double> defects;
  double exponent = 0.0;
};

struct TermRow {
  std::string term;
  double measured = 0.0;
  std::vector<double> predicted; // one per candidate
  double floor = 0.0;            // coefficients below this count as zero

  /// Within 10% of the propagator value, or both below the floor.
  bool matches(std::size_t k) const {
    const double p = predicted.at(k);
    if (std::abs(measured) < floor && std::abs(p) < floor)
      return true;
    return std::abs(p - measured) <= 0.1 * std::abs(measured);
  }
};

struct CrossCheckReport {
  std::string sequence;
  std::string shape;
  ModelParams model;
  ShapeParams params;
  std::vector<double> scales;
  std::vector<CandidateScore> candidates;
  std::vector<TermRow> terms; // at the smallest scale
  std::string best;

  std::string text() const {
    std::ostringstream os;
    os << "cross-check " << sequence << " on Jaynes-Cummings, shape " << shape << " (s="
       << params.s << ", alpha=" << params.alpha << ", zeta=" << params.zeta << ")\n";
    os << "model omega_r=" << model.omega_r << " omega_0=" << model.omega_0 << " g=" << model.g
       << " n_max=" << model.n_max << " (units 2pi/tp), couplings scaled by lambda\n";
    os << std::left << std::setw(18) << "candidate";
    for (double s : scales)
      os << std::setw(14) << ("lambda=" + detail::fmt_double(s));
    os << "exponent\n";
    for (const auto& c : candidates) {
      os << std::left << std::setw(18) << c.name << std::scientific << std::setprecision(4);
      for (double d : c.defects)
        os << std::setw(14) << d;
      os << std::defaultfloat << std::setprecision(4) << c.exponent << '\n';
    }
    os << "terms at lambda=" << detail::fmt_double(scales.back())
       << " (coefficient, rad/tp):\n";
    os << std::left << std::setw(22) << "term" << std::setw(14) << "propagator";
    for (const auto& c : candidates)
      os << std::setw(18) << c.name;
    os << '\n';
    for (const auto& t : terms) {
      os << std::left << std::setw(22) << t.term << std::scientific << std::setprecision(4)
         << std::setw(14) << t.measured;
      for (double p : t.predicted)
        os << std::setw(18) << p;
      os << std::defaultfloat << '\n';
    }
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      std::string ok, bad;
      for (const auto& row : terms) {
        std::string& list = row.matches(k) ? ok : bad;
        list += (list.empty() ? "" : ", ") + row.term;
      }
      os << candidates[k].name << ": agrees on [" << ok << "]; disagrees on [" << bad << "]\n";
    }
    os << "matching variant: " << best << '\n';
    return os.str();
  }
};

inline CrossCheckReport jc_crosscheck(const std::string& sequence, const ModelParams& model,
                                      const PulseShape& shape, const std::vector<double>& scales,
                                      const PropagatorOptions& opt = {}) {
  const Sequence seq = parse_sequence(sequence);
  if (seq.name != "4p" && seq.name != "4pxz" && seq.name != "8a" && seq.name != "8s")
    throw ValidationError("cross-check: need one of 4p, 4pxz, 8a, 8s");
  if (scales.size() < 2)
    throw ValidationError("cross-check: need at least two scales");
  CrossCheckReport rep;
  rep.sequence = seq.name;
  rep.shape = to_text(shape);
  rep.model = model;
  rep.params = compute_params(shape);
  rep.scales = scales;
  rep.candidates = {{"generic-printed", {}, 0.0},
                    {"generic-matched", {}, 0.0},
                    {"cavity-printed", {}, 0.0}};

  const Eigen::Index levels = model.n_max + 1;
  const Op b = on_rest(destroy(levels));
  const Op bd = b.adjoint();
  const Op X = on_qubit(pauli(Axis::x), levels), Y = on_qubit(pauli(Axis::y), levels),
           Z = on_qubit(pauli(Axis::z), levels);
  const std::vector<std::pair<std::string, Op>> basis = {
      {"b^dag b", bd * b},
      {"sx", X},
      {"sz i(b^dag-b)", I_unit * Z * (bd - b)},
      {"sx i(b^dag-b)", I_unit * X * (bd - b)},
      {"sy (b+b^dag)", Y * (bd + b)},
      {"sz i(b^dag2-b^2)", I_unit * Z * (bd * bd - b * b)},
      {"sy (b+b^dag)^2", Y * (bd + b) * (bd + b)},
  };

  const double tp = shape.duration();
  const ControlSchedule sched{seq, shape};
  const double period = seq.period() * tp;
  const Op u0 = on_qubit(control_only_propagator(seq), levels);
  for (std::size_t i = 0; i < scales.size(); ++i) {
    ModelParams m = model;
    m.omega_r *= scales[i];
    m.omega_0 *= scales[i];
    m.g *= scales[i];
    const CouplingSet c = jaynes_cummings(m);
    const Op u = propagate_period_checked(c, sched, opt).u;
    const std::vector<Op> hs = {effective_hamiltonian(seq, c, rep.params, tp, Form::printed).h,
                                effective_hamiltonian(seq, c, rep.params, tp, Form::matched).h,
                                cavity_hamiltonian(seq.name, m, rep.params).h};
    for (std::size_t k = 0; k < hs.size(); ++k)
      rep.candidates[k].defects.push_back(period_defect(u, seq, hs[k], tp));
    if (i + 1 == scales.size()) {
      const Op hn = numerical_hamiltonian(u, u0, period);
      double scale = 0.0;
      for (const auto& [name, op] : basis)
        scale = std::max(scale, std::abs(project(hn, op)));
      for (const auto& [name, op] : basis) {
        TermRow row{name, project(hn, op), {}, 1e-3 * scale};
        for (const auto& h : hs)
          row.predicted.push_back(project(h, op));
        rep.terms.push_back(row);
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t k = 0; k < rep.candidates.size(); ++k) {
    auto& c = rep.candidates[k];
    c.exponent = fit_exponent(rep.scales, c.defects);
    if (c.defects.back() < rep.candidates[best].defects.back())
      best = k;
  }
  bool tie = true;
  for (const auto& c : rep.candidates)
    tie = tie && c.defects.back() <= 1.01 * rep.candidates[best].defects.back();
  if (tie) {
    rep.best = "none distinguished (all defects within 1%)";
    return rep;
  }
  rep.best = rep.candidates[best].name;
  return rep;
}

} // namespace softdd

#endif
