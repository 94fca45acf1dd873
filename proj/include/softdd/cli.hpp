#ifndef SOFTDD_CLI_HPP
#define SOFTDD_CLI_HPP

// Subcommand bodies. Each writes its report to `out`, diagnostics to `err`,
// and returns a process exit code; exceptions propagate to the caller, which
// maps ValidationError to 2 and ConvergenceError to 3.

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "softdd/softdd.hpp"

namespace softdd {

enum ExitCode { kExitOk = 0, kExitValidation = 2, kExitConvergence = 3 };

inline std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& p : detail::split(text, ','))
    out.push_back(detail::parse_double(p, what));
  if (out.empty())
    throw ValidationError(what + ": empty list");
  return out;
}

// ---------------------------------------------------------------------------
// params

struct ParamsOptions {
  std::vector<std::string> shapes; // empty: full table
  int n_quad = 4096;
};

inline int cmd_params(const ParamsOptions& o, std::ostream& out) {
  if (o.shapes.empty()) {
    out << table_report(o.n_quad);
    return kExitOk;
  }
  std::ostringstream rows;
  rows << std::left << std::setw(8) << "shape" << std::right << std::setw(12) << "s"
       << std::setw(12) << "alpha/2" << std::setw(12) << "zeta" << "   " << "spec\n";
  for (const auto& text : o.shapes) {
    const PulseShape shape = resolve_shape(text);
    const ShapeParams p = compute_params(shape, o.n_quad);
    rows << format_row(text, p) << "   " << to_text(shape) << '\n';
    rows << "  area=" << detail::fmt_double(p.area)
         << " cos_avg=" << detail::fmt_double(p.cos_avg) << " n_quad=" << p.n_quad << '\n';
  }
  out << rows.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// design

struct DesignCmdOptions {
  std::string family = "S";
  int L = 1;
  int extra_terms = 0;
  double tol = 1e-12;
  int n_quad = 4096;
  int max_iter = 100;
};

inline int cmd_design(const DesignCmdOptions& o, std::ostream& out) {
  if (o.family != "S" && o.family != "Q")
    throw ValidationError("design: family must be S or Q");
  DesignSpec spec{o.family == "S" ? DesignFamily::S : DesignFamily::Q, o.L, o.extra_terms};
  DesignOptions opt;
  opt.tol = o.tol;
  opt.n_quad = o.n_quad;
  opt.max_iter = o.max_iter;
  const DesignResult r = design(spec, opt);
  out << to_text(r.shape) << '\n';
  out << "design " << spec.name() << " extra_terms=" << spec.extra_terms
      << " newton_iterations=" << r.newton_iterations << '\n';
  out << "residuals:\n";
  for (const auto& res : r.residuals)
    out << "  " << std::left << std::setw(10) << res.name << detail::fmt_double(res.value) << '\n';
  out << "max_residual " << detail::fmt_double(r.max_residual) << '\n';
  out << "achieved s=" << detail::fmt_double(r.achieved.s)
      << " alpha=" << detail::fmt_double(r.achieved.alpha)
      << " zeta=" << detail::fmt_double(r.achieved.zeta) << '\n';
  out << "peak |V| = " << detail::fmt_double(r.peak_amplitude) << " (2pi/tp)\n";
  if (spec.extra_terms == 0) {
    if (const auto ref = reference_row(spec.name())) {
      const double dz = r.achieved.zeta - ref->zeta;
      out << "reference zeta=" << detail::fmt_double(ref->zeta)
          << " difference=" << detail::fmt_double(dz)
          << (std::abs(dz) > 0.01 ? "  FLAG: |difference| > 0.01, different solution branch"
                                  : "  (within 0.01)")
          << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateOptions {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides; // key, value
  unsigned jobs = 0;
};

inline int cmd_simulate(const SimulateOptions& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  if (!o.config_path.empty())
    cfg.load(o.config_path);
  for (const auto& [k, v] : o.overrides)
    cfg.set(k, v);
  const auto runs = cfg.runs();
  const auto results = run_all(runs, o.jobs);
  for (const auto& r : results) {
    for (const auto& w : r.trace.warnings)
      err << "warning [" << (r.config.tag.empty() ? r.config.output : r.config.tag) << "]: " << w
          << '\n';
    if (r.config.output == "-") {
      out << r.csv;
    } else {
      write_atomically(r.config.output, r.csv);
      const auto f = fidelity_min(r.trace);
      const auto n = quanta_max(r.trace);
      out << r.config.output << ": " << r.trace.samples() << " rows, final fidelity_min "
          << csv_number(f.back()) << ", n_mean_max " << csv_number(n.back())
          << ", steps_per_pulse " << r.trace.steps_per_pulse << '\n';
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// effham

struct ModelOptions {
  double omega_r = 0.0, omega_0 = 0.0, g = 0.1;
  int n_max = 8;

  ModelParams params() const {
    ModelParams m;
    m.omega_r = omega_r;
    m.omega_0 = omega_0;
    m.g = g;
    m.n_max = n_max;
    m.validate();
    return m;
  }
};

struct EffhamOptions {
  std::string sequence = "4p";
  std::string shape = "gaussian:0.10";
  ModelOptions model;
  std::string form = "matched"; // matched | printed | both
  bool crosscheck = false;
  std::vector<double> scales{0.1, 0.05, 0.025};
  bool matrix = true;
};

/// Coefficients of H in {1, sx, sy, sz} (x) normal-ordered b^dag^j b^k,
/// j + k <= max_degree, fitted away from the truncation edge.
struct MonomialTerm {
  char qubit;
  int j, k;
  cplx coeff;
};

inline std::vector<MonomialTerm> monomial_decomposition(const Op& h, Eigen::Index levels,
                                                        int max_degree, double* residual) {
  const Op b = destroy(levels);
  const Op bd = b.adjoint();
  std::vector<std::tuple<int, int, Op>> mono;
  for (int j = 0; j <= max_degree; ++j)
    for (int k = 0; j + k <= max_degree; ++k) {
      Op m = identity(levels);
      for (int a = 0; a < j; ++a)
        m = m * bd;
      for (int a = 0; a < k; ++a)
        m = m * b;
      mono.emplace_back(j, k, m);
    }
  const Eigen::Index edge = levels > 3 ? levels - 1 : levels;
  const std::vector<std::pair<char, Op>> qb = {
      {'1', identity(2)}, {'x', pauli(Axis::x)}, {'y', pauli(Axis::y)}, {'z', pauli(Axis::z)}};
  std::vector<MonomialTerm> out;
  double worst = 0.0;
  for (const auto& [label, s] : qb) {
    // R = Tr_q(sigma H) / 2 on the rest factor
    Op r = Op::Zero(levels, levels);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        r += 0.5 * s(c, a) * h.block(a * levels, c * levels, levels, levels);
    const Eigen::Index rows = edge * edge;
    Eigen::MatrixXcd design(rows, static_cast<Eigen::Index>(mono.size()));
    Eigen::VectorXcd target(rows);
    for (Eigen::Index m = 0; m < edge; ++m)
      for (Eigen::Index n = 0; n < edge; ++n) {
        target(m * edge + n) = r(m, n);
        for (std::size_t q = 0; q < mono.size(); ++q)
          design(m * edge + n, static_cast<Eigen::Index>(q)) = std::get<2>(mono[q])(m, n);
      }
    const Eigen::VectorXcd coef = design.completeOrthogonalDecomposition().solve(target);
    worst = std::max(worst, (design * coef - target).norm());
    for (std::size_t q = 0; q < mono.size(); ++q)
      out.push_back({label, std::get<0>(mono[q]), std::get<1>(mono[q]),
                     coef(static_cast<Eigen::Index>(q))});
  }
  if (residual)
    *residual = worst;
  return out;
}

inline void print_hamiltonian(std::ostream& out, const std::string& title, const Op& h,
                              Eigen::Index levels, bool matrix) {
  out << title << '\n';
  double residual = 0.0;
  const auto terms = monomial_decomposition(h, levels, 2, &residual);
  double scale = 0.0;
  for (const auto& t : terms)
    scale = std::max(scale, std::abs(t.coeff));
  out << "  coefficients (rad/tp) of sigma (x) b^dag^j b^k:\n";
  for (const auto& t : terms) {
    if (std::abs(t.coeff) <= 1e-10 * std::max(scale, 1e-300))
      continue;
    out << "    " << (t.qubit == '1' ? std::string("1 ") : std::string("s") + t.qubit)
        << " b^dag^" << t.j << " b^" << t.k << "  (" << detail::fmt_double(t.coeff.real())
        << ", " << detail::fmt_double(t.coeff.imag()) << ")\n";
  }
  out << "  fit residual " << detail::fmt_double(residual) << '\n';
  if (matrix) {
    out << "  matrix, basis |q,n> with q in {u,d}, n = 0.." << levels - 1 << ":\n";
    std::ostringstream m;
    dump(m, h, 5);
    std::istringstream rows(m.str());
    std::string line;
    for (Eigen::Index i = 0; std::getline(rows, line); ++i)
      out << "  |" << (i < levels ? 'u' : 'd') << ',' << i % levels << "> " << line << '\n';
  }
}

inline int cmd_effham(const EffhamOptions& o, std::ostream& out) {
  const PulseShape shape = resolve_shape(o.shape);
  const ModelParams m = o.model.params();
  if (o.crosscheck) {
    out << jc_crosscheck(o.sequence, m, shape, o.scales).text();
    return kExitOk;
  }
  const Sequence seq = parse_sequence(o.sequence);
  const ShapeParams p = compute_params(shape);
  const CouplingSet c = jaynes_cummings(m);
  const Eigen::Index levels = m.n_max + 1;
  const PeriodPropagator pp = propagate_period_checked(c, ControlSchedule{seq, shape});
  out << "sequence " << seq.name << " (time order: " << seq.text() << "), shape " << to_text(shape)
      << "\n";
  out << "s=" << detail::fmt_double(p.s) << " alpha=" << detail::fmt_double(p.alpha)
      << " zeta=" << detail::fmt_double(p.zeta) << '\n';
  std::vector<Form> forms;
  if (o.form == "matched" || o.form == "both")
    forms.push_back(Form::matched);
  if (o.form == "printed" || o.form == "both")
    forms.push_back(Form::printed);
  if (forms.empty())
    throw ValidationError("effham: form must be matched, printed or both");
  for (Form f : forms) {
    const EffectiveHamiltonian h = effective_hamiltonian(seq, c, p, shape.duration(), f);
    print_hamiltonian(out, std::string("H_eff [") + form_name(f) + "], remainder " + h.order +
                               (h.note.empty() ? "" : ", " + h.note),
                      h.h, levels, o.matrix);
    out << "  hermiticity defect " << detail::fmt_double(hermiticity_defect(h.h)) << '\n';
    out << "  period defect |U - U0 exp(-iTH)| = "
        << detail::fmt_double(period_defect(pp.u, seq, h.h, shape.duration())) << '\n';
  }
  if (seq.name == "4p" || seq.name == "4pxz" || seq.name == "8a" || seq.name == "8s") {
    const EffectiveHamiltonian h = cavity_hamiltonian(seq.name, m, p);
    print_hamiltonian(out, "H_cavity [printed], remainder " + h.order, h.h, levels, o.matrix);
    out << "  period defect |U - U0 exp(-iTH)| = "
        << detail::fmt_double(period_defect(pp.u, seq, h.h, shape.duration())) << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// ordercheck

struct OrderCmdOptions {
  std::string sequence = "8a";
  std::string shape = "Q1";
  ModelOptions model;
  std::vector<double> scales{0.3, 0.1, 0.03};
  std::string reference = "analytic";
};

inline Reference parse_reference(const std::string& r) {
  if (r == "analytic")
    return Reference::analytic;
  if (r == "printed")
    return Reference::analytic_printed;
  if (r == "composed")
    return Reference::composed;
  if (r == "a0")
    return Reference::a0_only;
  if (r == "zero")
    return Reference::zero;
  throw ValidationError("reference must be analytic, printed, composed, a0 or zero");
}

inline int cmd_ordercheck(const OrderCmdOptions& o, std::ostream& out) {
  const Reference ref = parse_reference(o.reference);
  const Sequence seq = parse_sequence(o.sequence);
  const PulseShape shape = resolve_shape(o.shape);
  const OrderCheckResult r =
      order_check(seq, jaynes_cummings(o.model.params()), shape, o.scales, ref);
  out << "order check " << (seq.name.empty() ? seq.text() : seq.name) << ", shape "
      << to_text(shape) << ", reference " << reference_name(ref) << '\n';
  out << "scale      defect\n";
  for (std::size_t i = 0; i < r.scales.size(); ++i)
    out << std::left << std::setw(10) << detail::fmt_double(r.scales[i]) << ' '
        << detail::fmt_double(r.defects[i]) << '\n';
  out << "fitted exponent " << detail::fmt_double(r.exponent);
  if (r.floor_limited)
    out << " (floor-limited: defects below " << detail::fmt_double(kDefectFloor) << " excluded)";
  out << "\nsteps_per_pulse " << r.steps_per_pulse << '\n';
  return kExitOk;
}

} // namespace softdd

#endif
