#ifndef SOFTDD_METRICS_HPP
#define SOFTDD_METRICS_HPP

// Worst-case observables over a grid of initial qubit states.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "softdd/propagate.hpp"

namespace softdd {

/// Pure qubit states: the six cardinal states followed by a quasi-uniform
/// sphere sequence. The sequence is nested, so a larger grid contains every
/// point of a smaller one.
class BlochGrid {
public:
  explicit BlochGrid(int n_extra = 50) {
    if (n_extra < 0)
      throw ValidationError("BlochGrid: size must be >= 0");
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i = I_unit;
    auto push = [&](cplx a, cplx b) {
      StateVec v(2);
      v << a, b;
      states_.push_back(v.normalized());
    };
    push(1.0, 0.0);
    push(0.0, 1.0);
    push(r, r);
    push(r, -r);
    push(r, i * r);
    push(r, -i * r);
    // R2 additive recurrence on the unit square, mapped area-preservingly.
    constexpr double plastic = 1.32471795724474602596;
    const double g1 = 1.0 / plastic, g2 = 1.0 / (plastic * plastic);
    for (int k = 0; k < n_extra; ++k) {
      const double u = std::fmod(0.5 + g1 * (k + 1), 1.0);
      const double v = std::fmod(0.5 + g2 * (k + 1), 1.0);
      const double cos_theta = 1.0 - 2.0 * u;
      const double theta = std::acos(std::clamp(cos_theta, -1.0, 1.0));
      const double phi = two_pi * v;
      push(std::cos(theta / 2), std::exp(i * phi) * std::sin(theta / 2));
    }
  }

  const std::vector<StateVec>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }

private:
  std::vector<StateVec> states_;
};

inline void require_states(const EvolutionTrace& tr) {
  if (tr.qubit_states.empty() || tr.initial.empty())
    throw ValidationError("metrics: trace carries no reduced states");
}

/// min over initial states of <psi| rho_q(t_k) |psi>.
inline std::vector<double> fidelity_min(const EvolutionTrace& tr) {
  require_states(tr);
  std::vector<double> out;
  for (const auto& states : tr.qubit_states) {
    double f = 1.0;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const StateVec& psi = tr.initial[i];
      f = std::min(f, std::clamp((psi.adjoint() * states[i] * psi)(0, 0).real(), 0.0, 1.0));
    }
    out.push_back(f);
  }
  return out;
}

inline std::vector<double> quanta_max(const EvolutionTrace& tr) {
  require_states(tr);
  std::vector<double> out;
  for (const auto& n : tr.n_mean)
    out.push_back(std::max(0.0, *std::max_element(n.begin(), n.end())));
  return out;
}

inline std::vector<double> leakage_max(const EvolutionTrace& tr) {
  require_states(tr);
  std::vector<double> out;
  for (const auto& l : tr.leakage)
    out.push_back(std::max(0.0, *std::max_element(l.begin(), l.end())));
  return out;
}

inline const char* csv_header() {
  return "period_index,time_over_taup,fidelity_min,n_mean_max,leakage_max";
}

inline std::string csv_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const EvolutionTrace& tr) {
  const auto f = fidelity_min(tr);
  const auto n = quanta_max(tr);
  const auto l = leakage_max(tr);
  os << csv_header() << '\n';
  for (std::size_t k = 0; k < tr.samples(); ++k)
    os << k << ',' << csv_number(tr.times[k]) << ',' << csv_number(f[k]) << ','
       << csv_number(n[k]) << ',' << csv_number(l[k]) << '\n';
}

} // namespace softdd

#endif
