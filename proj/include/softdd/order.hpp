#ifndef SOFTDD_ORDER_HPP
#define SOFTDD_ORDER_HPP

// Refocusing-order check: the defect between the propagated period and a
// reference effective Hamiltonian, fitted against a coupling scale.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "softdd/propagate.hpp"
#include "softdd/sequences.hpp"

namespace softdd {

enum class Reference {
  analytic,         // effective_hamiltonian, matched form
  analytic_printed, // effective_hamiltonian, printed form
  composed,         // composed_hamiltonian (matched expansions)
  a0_only,          // H = A0
  zero,             // H = 0
};

inline const char* reference_name(Reference r) {
  switch (r) {
  case Reference::analytic: return "analytic";
  case Reference::analytic_printed: return "analytic-printed";
  case Reference::composed: return "composed";
  case Reference::a0_only: return "A0";
  case Reference::zero: return "zero";
  }
  return "?";
}

inline constexpr double kDefectFloor = 1e-12;

struct OrderCheckResult {
  std::vector<double> scales;
  std::vector<double> defects;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  bool floor_limited = false;
  int steps_per_pulse = 0;
};

/// Reference effective Hamiltonian for couplings c.
inline Op reference_hamiltonian(Reference ref, const Sequence& seq, const CouplingSet& c,
                                const ShapeParams& p, double tp) {
  const Eigen::Index n = 2 * c.rest_dim();
  switch (ref) {
  case Reference::analytic: return effective_hamiltonian(seq, c, p, tp, Form::matched).h;
  case Reference::analytic_printed: return effective_hamiltonian(seq, c, p, tp, Form::printed).h;
  case Reference::composed: return composed_hamiltonian(seq, c, p, tp, Form::matched);
  case Reference::a0_only: return on_rest(c.a0);
  case Reference::zero: return Op::Zero(n, n);
  }
  return Op::Zero(n, n);
}

/// |U - U0 exp(-i T H)|, where U0 is the ideal control propagator (a global
/// phase for refocusing sequences).
inline double period_defect(const Op& u, const Sequence& seq, const Op& h, double tp) {
  const Eigen::Index d = u.rows() / 2;
  const Op u0 = on_qubit(control_only_propagator(seq), d);
  return op_norm(u - u0 * expm_herm(h, seq.period() * tp));
}

/// Least-squares slope of log(defect) against log(scale) over the points
/// above the floor.
inline double fit_exponent(const std::vector<double>& x, const std::vector<double>& y,
                           bool* floor_limited = nullptr) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > kDefectFloor))
      continue;
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++m;
  }
  if (floor_limited)
    *floor_limited = m < static_cast<int>(x.size());
  if (m < 2)
    return std::numeric_limits<double>::quiet_NaN();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

inline OrderCheckResult order_check(const Sequence& seq, const CouplingSet& c,
                                    const PulseShape& shape, const std::vector<double>& scales,
                                    Reference ref = Reference::analytic,
                                    PropagatorOptions opt = {}) {
  if (scales.size() < 2)
    throw ValidationError("order_check: need at least two scales");
  double lo = scales.front(), hi = scales.front();
  for (double s : scales) {
    if (!(s > 0.0))
      throw ValidationError("order_check: scales must be positive");
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (hi / lo < 10.0 * (1.0 - 1e-12))
    throw ValidationError("order_check: scales must span at least one decade");
  if (zeroth_order_defect(seq) > 1e-10)
    throw ValidationError("order_check: sequence is not refocusing at zeroth order");
  const ShapeParams p = compute_params(shape);
  const ControlSchedule sched{seq, shape};
  OrderCheckResult out;
  out.scales = scales;
  for (double lambda : scales) {
    const CouplingSet cl = c.scaled(lambda);
    const PeriodPropagator pp = propagate_period_checked(cl, sched, opt);
    out.steps_per_pulse = std::max(out.steps_per_pulse, pp.steps_per_pulse);
    const Op h = reference_hamiltonian(ref, seq, cl, p, shape.duration());
    out.defects.push_back(period_defect(pp.u, seq, h, shape.duration()));
  }
  out.exponent = fit_exponent(out.scales, out.defects, &out.floor_limited);
  return out;
}

} // namespace softdd

#endif
