#ifndef SOFTDD_PROPAGATE_HPP
#define SOFTDD_PROPAGATE_HPP

// Direct propagation of H(t) = Hc(t) + Hs, Hc = (1/2) V(t) sigma_mu during a
// pulse along mu.
//
// Each pulse is integrated with the fourth-order commutator-free Magnus
// scheme (two Hermitian exponentials per step at the Gauss-Legendre nodes).
// Delta pulses are exact rotations at the pulse centre. The step count is
// doubled until two successive resolutions of the period propagator agree.

#include <array>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "softdd/algebra.hpp"
#include "softdd/errors.hpp"
#include "softdd/sequences.hpp"
#include "softdd/shapes.hpp"

namespace softdd {

struct ControlSchedule {
  Sequence sequence;
  PulseShape shape = PulseShape::delta();

  double tp() const { return shape.duration(); }
  double period() const { return sequence.period() * tp(); }

  /// (Vx, Vy, Vz) at time t within the period.
  std::array<double, 3> field(double t) const {
    std::array<double, 3> v{0.0, 0.0, 0.0};
    double start = 0.0;
    for (const auto& e : sequence.elements) {
      if (const auto* p = std::get_if<PulseSpec>(&e)) {
        if (t >= start && t < start + tp()) {
          if (!shape.is_delta())
            v[static_cast<int>(p->axis)] = p->sign * shape.amplitude(t - start);
          return v;
        }
        start += tp();
      } else {
        start += std::get<Delay>(e).duration * tp();
      }
    }
    return v;
  }

  void validate() const {
    if (sequence.elements.empty())
      throw ValidationError("ControlSchedule: empty sequence");
  }
};

struct PropagatorOptions {
  int steps_per_pulse = 256;
  double self_check_tol = 1e-8;
  int max_steps_per_pulse = 16384;
  bool self_check = true;
};

struct PeriodPropagator {
  Op u;
  int steps_per_pulse = 0; // resolution of the returned propagator
  double self_check = 0.0; // |U(N) - U(N/2)|, 0 if not checked
};

namespace detail {

inline constexpr double kSqrt3 = 1.7320508075688772;
inline constexpr double kCfNode1 = 0.5 - kSqrt3 / 6.0;
inline constexpr double kCfNode2 = 0.5 + kSqrt3 / 6.0;
inline constexpr double kCfA1 = 0.25 + kSqrt3 / 6.0;
inline constexpr double kCfA2 = 0.25 - kSqrt3 / 6.0;

inline Op single_pulse(const Op& hs, const PulseShape& shape, const PulseSpec& pulse,
                       int steps) {
  const Eigen::Index dim = hs.rows();
  const double tp = shape.duration();
  const Op sig = on_qubit(pauli(pulse.axis), dim / 2);
  if (shape.is_delta()) {
    const Op half = expm_herm(hs, 0.5 * tp);
    return half * on_qubit(ideal_pulse(pulse), dim / 2) * half;
  }
  const double h = tp / steps;
  const Op half_sig = 0.5 * pulse.sign * sig;
  Op u = identity(dim);
  for (int k = 0; k < steps; ++k) {
    const double t0 = k * h;
    const double v1 = shape.amplitude(t0 + kCfNode1 * h);
    const double v2 = shape.amplitude(t0 + kCfNode2 * h);
    const Op h1 = hs + v1 * half_sig;
    const Op h2 = hs + v2 * half_sig;
    const Op first = expm_herm(kCfA1 * h1 + kCfA2 * h2, h);
    const Op second = expm_herm(kCfA2 * h1 + kCfA1 * h2, h);
    u = second * first * u;
  }
  return u;
}

// Polar factor of u: removes accumulated roundoff from a propagator that is
// unitary in exact arithmetic.
inline Op nearest_unitary(const Op& u) {
  Eigen::JacobiSVD<Op> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

inline Op period_at(const Op& hs, const ControlSchedule& sched, int steps) {
  std::map<std::pair<int, int>, Op> cache;
  Op u = identity(hs.rows());
  for (const auto& e : sched.sequence.elements) {
    if (const auto* p = std::get_if<PulseSpec>(&e)) {
      const auto key = std::make_pair(static_cast<int>(p->axis), p->sign);
      auto it = cache.find(key);
      if (it == cache.end())
        it = cache.emplace(key, single_pulse(hs, sched.shape, *p, steps)).first;
      u = it->second * u;
    } else {
      const double d = std::get<Delay>(e).duration * sched.tp();
      if (d > 0.0)
        u = expm_herm(hs, d) * u;
    }
  }
  return nearest_unitary(u);
}

} // namespace detail

/// One-period propagator at a fixed resolution.
inline Op propagate_period(const CouplingSet& c, const ControlSchedule& sched,
                           int steps_per_pulse = 256) {
  if (steps_per_pulse < 16)
    throw ValidationError("propagate_period: steps_per_pulse must be >= 16");
  sched.validate();
  return detail::period_at(assemble(c), sched, steps_per_pulse);
}

/// One-period propagator with step doubling until successive resolutions
/// agree within opt.self_check_tol.
inline PeriodPropagator propagate_period_checked(const CouplingSet& c,
                                                 const ControlSchedule& sched,
                                                 const PropagatorOptions& opt = {}) {
  if (opt.steps_per_pulse < 16)
    throw ValidationError("propagate_period: steps_per_pulse must be >= 16");
  sched.validate();
  const Op hs = assemble(c);
  if (sched.shape.is_delta() || !opt.self_check)
    return {detail::period_at(hs, sched, opt.steps_per_pulse), opt.steps_per_pulse, 0.0};
  int n = opt.steps_per_pulse;
  Op coarse = detail::period_at(hs, sched, n);
  double diff = 0.0;
  while (2 * n <= opt.max_steps_per_pulse) {
    Op fine = detail::period_at(hs, sched, 2 * n);
    diff = op_norm(fine - coarse);
    if (diff < opt.self_check_tol)
      return {std::move(fine), 2 * n, diff};
    coarse = std::move(fine);
    n *= 2;
  }
  throw ConvergenceError("propagate_period: step-doubling self-check failed at " +
                             std::to_string(n) + " steps per pulse",
                         diff);
}

// ---------------------------------------------------------------------------
// Stroboscopic traces

/// Oscillator initial state as a mixture of Fock states.
struct OscillatorState {
  std::vector<std::pair<double, int>> components{{1.0, 0}}; // (weight, n)

  static OscillatorState ground() { return {}; }
  static OscillatorState fock(int n) { return {{{1.0, n}}}; }

  /// Thermal occupation nbar, truncated to 0..n_max and renormalized.
  static OscillatorState thermal(double nbar, int n_max) {
    if (!(nbar >= 0.0))
      throw ValidationError("thermal state: mean occupation must be >= 0");
    OscillatorState s;
    s.components.clear();
    if (nbar == 0.0)
      return ground();
    const double q = nbar / (1.0 + nbar);
    double total = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const double w = std::pow(q, n);
      s.components.emplace_back(w, n);
      total += w;
    }
    for (auto& c : s.components)
      c.first /= total;
    return s;
  }

  void validate(int n_max) const {
    double total = 0.0;
    for (const auto& [w, n] : components) {
      if (n < 0 || n > n_max)
        throw ValidationError("oscillator state: Fock level outside 0..n_max");
      if (!(w >= 0.0))
        throw ValidationError("oscillator state: negative weight");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw ValidationError("oscillator state: weights must sum to 1");
  }
};

struct TraceOptions {
  PropagatorOptions propagator;
  OscillatorState oscillator;
  bool store_propagators = true;
  double leakage_warn = 1e-6;
};

struct EvolutionTrace {
  std::vector<double> times;      // period boundaries, units of tp
  std::vector<Op> propagators;    // U(t_k), if stored
  std::vector<StateVec> initial;  // qubit states
  std::vector<std::vector<Op>> qubit_states;  // [k][state]
  std::vector<std::vector<double>> n_mean;    // [k][state]
  std::vector<std::vector<double>> leakage;   // [k][state]
  Op period_propagator;
  int steps_per_pulse = 0;
  double self_check = 0.0;
  double max_unitarity_defect = 0.0;
  double max_norm_defect = 0.0;
  std::vector<std::string> warnings;

  std::size_t samples() const { return times.size(); }
};

/// Population of the top two oscillator levels. An oscillator truncated at
/// n_max <= 2 is a deliberate few-level system and the monitor covers levels
/// >= 2 only.
inline double top_level_population(const Op& rho_rest) {
  const Eigen::Index levels = rho_rest.rows();
  double p = 0.0;
  for (Eigen::Index n = std::max<Eigen::Index>(levels - 2, 2); n < levels; ++n)
    p += rho_rest(n, n).real();
  return p;
}

inline EvolutionTrace run_trace(const CouplingSet& c, const ControlSchedule& sched, int n_periods,
                                const std::vector<StateVec>& qubit_states,
                                const TraceOptions& opt = {}) {
  if (n_periods < 0)
    throw ValidationError("run_trace: n_periods must be >= 0");
  if (qubit_states.empty())
    throw ValidationError("run_trace: no initial states");
  const Eigen::Index d = c.rest_dim();
  const int n_max = static_cast<int>(d) - 1;
  opt.oscillator.validate(n_max);
  for (const auto& q : qubit_states)
    if (q.size() != 2 || std::abs(q.norm() - 1.0) > 1e-12)
      throw ValidationError("run_trace: initial qubit states must be normalized 2-vectors");

  EvolutionTrace tr;
  tr.initial = qubit_states;
  if (n_periods > 0) {
    PeriodPropagator pp = propagate_period_checked(c, sched, opt.propagator);
    tr.period_propagator = std::move(pp.u);
    tr.steps_per_pulse = pp.steps_per_pulse;
    tr.self_check = pp.self_check;
  } else {
    tr.period_propagator = identity(2 * d);
  }
  const Op& u1 = tr.period_propagator;
  const Op n_op = number_op(d);

  // psi[state][component]
  std::vector<std::vector<StateVec>> psi(qubit_states.size());
  for (std::size_t i = 0; i < qubit_states.size(); ++i)
    for (const auto& [w, n] : opt.oscillator.components) {
      StateVec fock = StateVec::Zero(d);
      fock(n) = 1.0;
      psi[i].push_back(kron(qubit_states[i], fock));
    }

  Op u = identity(2 * d);
  double worst_leak = 0.0;
  int worst_leak_k = 0;
  for (int k = 0; k <= n_periods; ++k) {
    if (k > 0) {
      u = u1 * u;
      for (auto& comps : psi)
        for (auto& v : comps)
          v = u1 * v;
      tr.max_unitarity_defect = std::max(tr.max_unitarity_defect, unitarity_defect(u));
    }
    tr.times.push_back(k * sched.sequence.period());
    if (opt.store_propagators)
      tr.propagators.push_back(u);
    std::vector<Op> rq;
    std::vector<double> nm, lk;
    for (const auto& comps : psi) {
      Op rho_q = Op::Zero(2, 2);
      Op rho_r = Op::Zero(d, d);
      for (std::size_t j = 0; j < comps.size(); ++j) {
        const double w = opt.oscillator.components[j].first;
        tr.max_norm_defect = std::max(tr.max_norm_defect, std::abs(comps[j].norm() - 1.0));
        rho_q += w * reduced_qubit(comps[j], d);
        rho_r += w * reduced_rest(comps[j], d);
      }
      rq.push_back(rho_q);
      nm.push_back((rho_r * n_op).trace().real());
      lk.push_back(top_level_population(rho_r));
      if (lk.back() > worst_leak) {
        worst_leak = lk.back();
        worst_leak_k = k;
      }
    }
    tr.qubit_states.push_back(std::move(rq));
    tr.n_mean.push_back(std::move(nm));
    tr.leakage.push_back(std::move(lk));
  }
  if (worst_leak > opt.leakage_warn)
    tr.warnings.push_back("oscillator leakage " + detail::fmt_double(worst_leak) +
                          " at period " + std::to_string(worst_leak_k) + " exceeds " +
                          detail::fmt_double(opt.leakage_warn) + "; raise n_max (try " +
                          std::to_string(2 * n_max) + ")");
  if (tr.max_norm_defect > 1e-10)
    tr.warnings.push_back("state norm drift " + detail::fmt_double(tr.max_norm_defect));
  return tr;
}

} // namespace softdd

#endif
