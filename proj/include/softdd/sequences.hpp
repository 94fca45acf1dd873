#ifndef SOFTDD_SEQUENCES_HPP
#define SOFTDD_SEQUENCES_HPP

// Pulse sequences, single-pulse expansions and analytic effective
// Hamiltonians.
//
// Sequence text is written in time order: the first token acts first. Named
// sequences are quoted as operator products (rightmost acts first) and are
// reversed when resolved, so "4p" = X -Y X Y as a product runs Y, X, -Y, X.
//
// Sign conventions. The control term is Hc = +(1/2) V(t) sigma_mu, so a
// positive pulse is exp(-i pi sigma_mu / 2) = -i sigma_mu. Two forms of every
// expansion are offered:
//   Form::matched  agrees with direct propagation under that convention;
//   Form::printed  the textbook expressions verbatim. These carry the
//                  opposite sign for the s- and alpha-odd terms, and build
//                  the negative pulse by alpha -> -alpha alone.

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "softdd/algebra.hpp"
#include "softdd/errors.hpp"
#include "softdd/shapes.hpp"

namespace softdd {

enum class Form { matched, printed };

inline const char* form_name(Form f) { return f == Form::matched ? "matched" : "printed"; }

struct PulseSpec {
  Axis axis = Axis::x;
  int sign = +1;

  bool operator==(const PulseSpec&) const = default;
  std::string text() const { return (sign < 0 ? "-" : "") + std::string(1, axis_name(axis)); }
};

struct Delay {
  double duration = 0.0; // in units of tp
  bool operator==(const Delay&) const = default;
};

using SequenceElement = std::variant<PulseSpec, Delay>;

struct Sequence {
  std::vector<SequenceElement> elements; // time order
  std::string name;

  int pulse_count() const {
    int n = 0;
    for (const auto& e : elements)
      n += std::holds_alternative<PulseSpec>(e) ? 1 : 0;
    return n;
  }

  /// Period in units of tp; pulses are contiguous unless delays are given.
  double period() const {
    double t = 0.0;
    for (const auto& e : elements)
      t += std::holds_alternative<PulseSpec>(e) ? 1.0 : std::get<Delay>(e).duration;
    return t;
  }

  std::string text() const {
    std::string out;
    for (const auto& e : elements) {
      if (!out.empty())
        out += ' ';
      if (const auto* p = std::get_if<PulseSpec>(&e))
        out += p->text();
      else
        out += "d(" + detail::fmt_double(std::get<Delay>(e).duration) + ")";
    }
    return out;
  }
};

namespace detail {

inline std::vector<SequenceElement> parse_tokens(const std::string& text) {
  std::vector<SequenceElement> out;
  std::istringstream is(text);
  std::string raw;
  while (is >> raw) {
    std::string tok = raw;
    if (tok.size() > 3 && tok.rfind("d(", 0) == 0 && tok.back() == ')') {
      const double d = parse_double(tok.substr(2, tok.size() - 3), "delay");
      if (!(d >= 0.0) || !std::isfinite(d))
        throw ValidationError("malformed delay '" + tok + "': duration must be >= 0");
      out.emplace_back(Delay{d});
      continue;
    }
    if (tok.rfind("d(", 0) == 0 || tok == "d")
      throw ValidationError("malformed delay '" + tok + "'");
    int sign = +1;
    if (!tok.empty() && tok[0] == '-') {
      sign = -1;
      tok = tok.substr(1);
    }
    if (tok == "X" || tok == "x")
      out.emplace_back(PulseSpec{Axis::x, sign});
    else if (tok == "Y" || tok == "y")
      out.emplace_back(PulseSpec{Axis::y, sign});
    else if (tok == "Z" || tok == "z")
      out.emplace_back(PulseSpec{Axis::z, sign});
    else
      throw ValidationError("unknown sequence token '" + raw + "'");
  }
  return out;
}

} // namespace detail

/// Built-in sequences as operator products (rightmost pulse acts first).
inline const std::map<std::string, std::string>& builtin_products() {
  static const std::map<std::string, std::string> m = {
      {"xbarx", "-X X"},
      {"x4", "X -X -X X"},
      {"4p", "X -Y X Y"},
      {"4pxz", "X -Z X Z"},
      {"8s", "Y X -Y X X -Y X Y"},
      {"8a", "-Y -X Y -X X -Y X Y"},
  };
  return m;
}

inline std::optional<std::string> canonical_name(const std::string& name) {
  static const std::map<std::string, std::string> alias = {
      {"xbarx", "xbarx"}, {"x4", "x4"},     {"4p", "4p"},         {"4p(xy)", "4p"},
      {"4pxy", "4p"},     {"4pxz", "4pxz"}, {"4p(xz)", "4pxz"}, {"8s", "8s"},
      {"8a", "8a"},
  };
  const auto it = alias.find(name);
  if (it == alias.end())
    return std::nullopt;
  return it->second;
}

/// Parses time-ordered tokens (X, -Y, d(0.5), ...) or a built-in name.
inline Sequence parse_sequence(const std::string& text) {
  const std::string t = detail::trim(text);
  if (t.empty())
    throw ValidationError("empty sequence");
  if (const auto name = canonical_name(t)) {
    auto elems = detail::parse_tokens(builtin_products().at(*name));
    std::reverse(elems.begin(), elems.end());
    return {std::move(elems), *name};
  }
  Sequence seq{detail::parse_tokens(t), ""};
  if (seq.elements.empty())
    throw ValidationError("empty sequence");
  return seq;
}

/// Ideal pulse: exp(-i sign pi sigma/2) = -i sign sigma.
inline Op ideal_pulse(const PulseSpec& p) {
  return -I_unit * static_cast<double>(p.sign) * pauli(p.axis);
}

/// Product of ideal pulses over one period, on the qubit alone.
inline Op control_only_propagator(const Sequence& seq) {
  Op u = identity(2);
  for (const auto& e : seq.elements)
    if (const auto* p = std::get_if<PulseSpec>(&e))
      u = ideal_pulse(*p) * u;
  return u;
}

/// Distance of the control-only propagator from the identity, modulo a
/// global phase.
inline double zeroth_order_defect(const Sequence& seq) {
  const Op u = control_only_propagator(seq);
  const cplx phase = u.trace() / 2.0;
  if (std::abs(phase) < 1e-12)
    return op_norm(u - identity(2));
  return op_norm(u - (phase / std::abs(phase)) * identity(2));
}

// ---------------------------------------------------------------------------
// Single-pulse expansion X = X0 + tp X1 + tp^2 X2 on the joint space.

struct PulseExpansion {
  Op x0, x1, x2;

  Op sum(double tp) const { return x0 + tp * x1 + tp * tp * x2; }
};

namespace detail {

// Joint-space operator labels for an x pulse; y and z pulses use the cyclic
// relabelling (x, y, z) -> (y, z, x).
struct Frame {
  Op s1, s2, s3; // sigma along the pulse axis and the next two cyclically
  Op a0, a1, a2, a3;
};

inline Frame pulse_frame(const CouplingSet& c, Axis axis) {
  const Eigen::Index d = c.rest_dim();
  const Op sx = on_qubit(pauli(Axis::x), d), sy = on_qubit(pauli(Axis::y), d),
           sz = on_qubit(pauli(Axis::z), d);
  const Op a0 = on_rest(c.a0), ax = on_rest(c.ax), ay = on_rest(c.ay), az = on_rest(c.az);
  switch (axis) {
  case Axis::x: return {sx, sy, sz, a0, ax, ay, az};
  case Axis::y: return {sy, sz, sx, a0, ay, az, ax};
  case Axis::z: return {sz, sx, sy, a0, az, ax, ay};
  }
  return {sx, sy, sz, a0, ax, ay, az};
}

// Positive pulse, Hc = +V sigma/2.
inline PulseExpansion expand_matched(const Frame& f, double s, double alpha, double zeta) {
  const Op B = f.a0 + f.s1 * f.a1;
  const Op C = f.s2 * f.a2 + f.s3 * f.a3;
  const Op D = f.s2 * f.a3 - f.s3 * f.a2;
  const Op m2 = 0.5 * B * B + zeta * comm(B, C) + 0.5 * s * anticomm(B, D) +
                0.5 * alpha * comm(D, C) + 0.5 * s * s * D * D;
  PulseExpansion e;
  e.x0 = -I_unit * f.s1;
  e.x1 = -f.a1 - f.s1 * f.a0 - I_unit * s * C;
  e.x2 = I_unit * f.s1 * m2;
  return e;
}

// Textbook second-order expression, term by term.
inline PulseExpansion expand_printed(const Frame& f, double s, double alpha, double zeta) {
  const Op& A0 = f.a0;
  const Op& Ax = f.a1;
  const Op& Ay = f.a2;
  const Op& Az = f.a3;
  const Op& sx = f.s1;
  const Op& sy = f.s2;
  const Op& sz = f.s3;
  PulseExpansion e;
  e.x0 = -I_unit * sx;
  e.x1 = -Ax - sx * A0 + I_unit * s * (sy * Ay + sz * Az);
  e.x2 = 0.5 * I_unit * (anticomm(A0, Ax) + sx * (A0 * A0 + Ax * Ax)) +
         zeta * (comm(A0, sy * Az - sz * Ay) + I_unit * anticomm(Ax, sy * Ay + sz * Az)) +
         0.5 * s * (anticomm(A0, sy * Ay + sz * Az) - I_unit * comm(Ax, sy * Az - sz * Ay)) +
         alpha * (Ay * Ay + Az * Az + I_unit * sx * comm(Ay, Az)) +
         0.5 * s * s * (comm(Az, Ay) + I_unit * sx * (Ay * Ay + Az * Az));
  return e;
}

} // namespace detail

/// Second-order expansion of one pulse of duration tp.
inline PulseExpansion expand_pulse(const CouplingSet& c, const ShapeParams& p,
                                   const PulseSpec& pulse, double tp = 1.0,
                                   Form form = Form::matched) {
  c.validate();
  if (std::abs(std::abs(p.area) - pi) > 1e-8)
    throw ValidationError("expand_pulse: shape parameters are not those of a pi pulse");
  if (!(tp > 0.0))
    throw ValidationError("expand_pulse: tp must be positive");
  const detail::Frame f = detail::pulse_frame(c, pulse.axis);
  PulseExpansion e;
  if (form == Form::matched) {
    // V -> -V flips s and alpha and the overall sign.
    const double sg = pulse.sign;
    e = detail::expand_matched(f, sg * p.s, sg * p.alpha, p.zeta);
    if (pulse.sign < 0) {
      e.x0 = -e.x0;
      e.x1 = -e.x1;
      e.x2 = -e.x2;
    }
  } else {
    e = detail::expand_printed(f, p.s, pulse.sign < 0 ? -p.alpha : p.alpha, p.zeta);
    if (pulse.sign < 0) {
      e.x0 = -e.x0;
      e.x1 = -e.x1;
      e.x2 = -e.x2;
    }
  }
  return e;
}

// ---------------------------------------------------------------------------
// Second-order composition of pulse expansions.

namespace detail {

struct Series2 {
  Op c0, c1, c2;
};

inline Series2 series_mul(const Series2& later, const Series2& earlier) {
  return {later.c0 * earlier.c0, later.c0 * earlier.c1 + later.c1 * earlier.c0,
          later.c0 * earlier.c2 + later.c1 * earlier.c1 + later.c2 * earlier.c0};
}

} // namespace detail

/// Effective Hamiltonian to second order built by multiplying single-pulse
/// expansions (and free-evolution delays). Works for any sequence whose
/// ideal propagator is a global phase.
inline Op composed_hamiltonian(const Sequence& seq, const CouplingSet& c, const ShapeParams& p,
                               double tp = 1.0, Form form = Form::matched) {
  c.validate();
  const Eigen::Index n = 2 * c.rest_dim();
  if (zeroth_order_defect(seq) > 1e-10)
    throw ValidationError("composed_hamiltonian: sequence is not refocusing at zeroth order");
  const Op hs = assemble(c);
  detail::Series2 u{identity(n), Op::Zero(n, n), Op::Zero(n, n)};
  for (const auto& e : seq.elements) {
    detail::Series2 step;
    if (const auto* pulse = std::get_if<PulseSpec>(&e)) {
      const PulseExpansion x = expand_pulse(c, p, *pulse, tp, form);
      step = {x.x0, x.x1, x.x2};
    } else {
      const double d = std::get<Delay>(e).duration;
      step = {identity(n), -I_unit * d * hs, -0.5 * d * d * hs * hs};
    }
    u = detail::series_mul(step, u);
  }
  const cplx phase = u.c0(0, 0);
  const Op w1 = u.c1 / phase;
  const Op w2 = u.c2 / phase;
  // exp(-i T H) = 1 + tp w1 + tp^2 w2  =>  -i T H = tp w1 + tp^2 (w2 - w1^2/2)
  const double period = seq.period() * tp;
  Op h = (I_unit / period) * (tp * w1 + tp * tp * (w2 - 0.5 * w1 * w1));
  return 0.5 * (h + h.adjoint());
}

// ---------------------------------------------------------------------------
// Analytic effective Hamiltonians of the named sequences.

struct EffectiveHamiltonian {
  Op h;
  std::string order; // dropped remainder
  std::string note;
};

inline bool has_analytic_form(const std::string& name) {
  return name == "xbarx" || name == "x4" || name == "4p" || name == "4pxz" || name == "8s" ||
         name == "8a";
}

namespace detail {

inline Op generic_4p(const Op& A0, const Op& Ax, const Op& Ay, const Op& Az, const Op& X,
                     const Op& Y, const Op& Z, double s, double al, double ze, double tp,
                     double comm_sign) {
  return A0 + 0.5 * s * (X * Az - Z * Ay) -
         comm_sign * 0.5 * I_unit * tp * comm(A0, X * Ax - Y * Ay) -
         0.5 * tp * al * Y * (Ax * Ax + Az * Az) + 0.5 * I_unit * tp * al * comm(Az, Ay) -
         0.25 * tp * (1.0 + 4.0 * ze) * Z * anticomm(Ax, Ay);
}

} // namespace detail

/// H_eff of a named sequence from the coupling operators and (s, alpha, zeta).
///
/// Form::printed evaluates the textbook expressions as written. Form::matched
/// evaluates them with (s, alpha) -> (-s, -alpha), the rotation sense of
/// Hc = +V sigma/2, and with the sign of the [A0, sigma_x Ax - sigma_y Ay] term
/// in H_4p reversed, which is what direct propagation requires.
inline EffectiveHamiltonian effective_hamiltonian(const Sequence& seq, const CouplingSet& c,
                                                  const ShapeParams& p, double tp = 1.0,
                                                  Form form = Form::matched) {
  c.validate();
  if (seq.name.empty() || !has_analytic_form(seq.name))
    throw ValidationError("effective_hamiltonian: no analytic form for sequence '" +
                          (seq.name.empty() ? seq.text() : seq.name) +
                          "'; use the propagator or composed_hamiltonian");
  const Eigen::Index d = c.rest_dim();
  const Op X = on_qubit(pauli(Axis::x), d), Y = on_qubit(pauli(Axis::y), d),
           Z = on_qubit(pauli(Axis::z), d);
  const Op A0 = on_rest(c.a0), Ax = on_rest(c.ax), Ay = on_rest(c.ay), Az = on_rest(c.az);
  const double flip = form == Form::matched ? -1.0 : 1.0;
  const double s = flip * p.s, al = flip * p.alpha, ze = p.zeta;
  const double comm_sign = form == Form::matched ? -1.0 : 1.0;

  EffectiveHamiltonian out;
  const std::string& name = seq.name;
  if (name == "xbarx") {
    out.h = A0 + X * Ax - s * (Y * Az - Z * Ay);
    out.order = "O(tp^2)";
  } else if (name == "x4") {
    out.h = A0 + X * Ax - s * tp * anticomm(Ax, Y * Ay + Z * Az) +
            I_unit * s * tp * comm(A0, Y * Az - Z * Ay);
    out.order = "O(tp^2)";
  } else if (name == "4p") {
    out.h = detail::generic_4p(A0, Ax, Ay, Az, X, Y, Z, s, al, ze, tp, comm_sign);
    out.order = "O(tp^2, s tp)";
  } else if (name == "4pxz") {
    // 4p(xz) is 4p(xy) conjugated by a quarter turn about x:
    // sigma_y -> sigma_z, sigma_z -> -sigma_y, evaluated at (A0, Ax, Az, -Ay).
    out.h = detail::generic_4p(A0, Ax, Az, -Ay, X, Z, -Y, s, al, ze, tp, comm_sign);
    out.order = "O(tp^2, s tp)";
    out.note = "obtained from H_4p by a quarter turn about x";
  } else if (name == "8s") {
    out.h = A0 +
            s * tp *
                (0.25 * I_unit * comm(Az, Ax + Ay) + 0.5 * (X * Ay * Ay - Y * Ax * Ax) +
                 0.25 * Y * anticomm(Ax, Ay) + 0.25 * Z * anticomm(Ay, Az) +
                 0.5 * I_unit * comm(A0, Y * Az + Z * Ax + 1.5 * Z * Ay - 2.5 * X * Az)) -
            0.5 * al * tp * (Y * (Ax * Ax + Az * Az) + I_unit * comm(Ay, Az));
    out.order = "O(tp^2)";
  } else if (name == "8a") {
    out.h = A0 + 0.5 * s * (X * Az - Z * Ay);
    out.order = "O(tp^2)";
  }
  out.h = 0.5 * (out.h + out.h.adjoint());
  return out;
}

/// Jaynes-Cummings specializations (omega_r, g, omega_0 as in ModelParams),
/// verbatim as printed.
///
/// "4p" joins the leading-order and s = 0 expressions: omega_r n +
/// (s w0/2) sx + (i s g/4) sz (b^dag - b) - i (tp g wr/4) sx (b^dag - b)
/// - i (1 + 4 zeta)/8 tp g^2 sz (b^2 - b^dag^2).
inline EffectiveHamiltonian cavity_hamiltonian(const std::string& name, const ModelParams& m,
                                               const ShapeParams& p) {
  m.validate();
  const Eigen::Index levels = m.n_max + 1;
  const Op b = on_rest(destroy(levels));
  const Op bd = b.adjoint();
  const Op n = bd * b;
  const Op X = on_qubit(pauli(Axis::x), levels), Y = on_qubit(pauli(Axis::y), levels),
           Z = on_qubit(pauli(Axis::z), levels);
  const double wr = m.angular(m.omega_r), w0 = m.angular(m.omega_0), g = m.angular(m.g);
  const double tp = m.tp, s = p.s, al = p.alpha, ze = p.zeta;

  EffectiveHamiltonian out;
  const std::string key = canonical_name(name).value_or(name);
  if (key == "4p") {
    out.h = wr * n + 0.5 * s * w0 * X + 0.25 * I_unit * s * g * Z * (bd - b) -
            0.25 * I_unit * tp * g * wr * X * (bd - b) -
            0.125 * I_unit * (1.0 + 4.0 * ze) * tp * g * g * Z * (b * b - bd * bd);
    out.order = "O(s tp, alpha tp, tp^2)";
  } else if (key == "4pxz") {
    out.h = wr * n + 0.25 * I_unit * s * g * X * (bd - b) +
            0.25 * I_unit * tp * g * wr * X * (bd - b);
    out.order = "O(s tp, alpha tp, tp^2)";
  } else if (key == "8a") {
    out.h = wr * n + 0.25 * I_unit * s * g * Z * (bd - b);
    out.order = "O(tp^2)";
  } else if (key == "8s") {
    out.h = wr * n - 0.125 * al * g * g * tp * Y * (bd + b) * (bd + b);
    out.order = "O(s tp, tp^2)";
  } else {
    throw ValidationError("cavity_hamiltonian: no cavity form for '" + name + "'");
  }
  out.h = 0.5 * (out.h + out.h.adjoint());
  return out;
}

} // namespace softdd

#endif
