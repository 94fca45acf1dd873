#ifndef SOFTDD_SHAPES_HPP
#define SOFTDD_SHAPES_HPP

// Symmetric pi-pulse envelopes V(t) on [0, tp] and their second-order shape
// parameters.
//
// A one-dimensional pulse Hc = V(t) sigma/2 rotates the qubit by
// phi(t) = int_0^t V. Every constructor normalizes the envelope so that
// phi(tp) = pi. Up to second order in the system Hamiltonian a symmetric
// inversion pulse is characterized by
//
//   s     = <sin phi(t)>_p
//   alpha = <theta(t - t') sin[phi(t) - phi(t')]>_p
//   zeta  = <theta(t - t') cos phi(t')>_p
//
// where <.>_p averages each time argument over the pulse duration.

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "softdd/algebra.hpp"
#include "softdd/errors.hpp"

namespace softdd {

/// gamma for the Hermitian envelope that zeroes s.
inline constexpr double kHermitianGamma = 0.9609317217;

enum class ShapeKind { delta, gaussian, hermitian, fourier };

struct ShapeParams {
  double s = 0.0;
  double alpha = 0.0;
  double zeta = 0.25;
  double area = pi;
  double cos_avg = 0.0; // <cos phi>_p, zero for symmetric inversion pulses
  int n_quad = 0;       // intervals used for the returned values

  static ShapeParams delta_limit() { return {0.0, 0.0, 0.25, pi, 0.0, 0}; }
};

namespace detail {

inline std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view text, const std::string& what) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+')
    ++first;
  auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last || first == last)
    throw ValidationError("cannot parse " + what + " from '" + std::string(text) + "'");
  return v;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos)
      break;
    start = pos + 1;
  }
  return out;
}

} // namespace detail

class PulseShape {
public:
  static PulseShape delta(double tp = 1.0) {
    PulseShape p(ShapeKind::delta, tp);
    return p;
  }

  /// Gaussian of width tau = width_ratio * tp centred at tp/2, truncated to
  /// [0, tp] and rescaled to unit-pi area.
  static PulseShape gaussian(double width_ratio, double tp = 1.0) {
    PulseShape p(ShapeKind::gaussian, tp);
    if (!(width_ratio > 0.0) || !std::isfinite(width_ratio))
      throw ValidationError("gaussian: width ratio must be positive");
    p.width_ = width_ratio;
    p.scale_ = 1.0 / std::erf(0.5 / width_ratio);
    return p;
  }

  /// Gaussian times (1 - gamma x^2/tau^2)/(1 - gamma/2), x = t - tp/2.
  static PulseShape hermitian(double width_ratio, double gamma = kHermitianGamma,
                              double tp = 1.0) {
    PulseShape p(ShapeKind::hermitian, tp);
    if (!(width_ratio > 0.0) || !std::isfinite(width_ratio))
      throw ValidationError("hermitian: width ratio must be positive");
    if (!std::isfinite(gamma) || std::abs(1.0 - 0.5 * gamma) < 1e-12)
      throw ValidationError("hermitian: gamma must be finite and != 2");
    p.width_ = width_ratio;
    p.gamma_ = gamma;
    p.scale_ = 1.0;
    const double half = 0.5 * tp;
    const double raw_area = p.hermitian_primitive(half) - p.hermitian_primitive(-half);
    if (!(raw_area > 0.0))
      throw ValidationError("hermitian: envelope has non-positive area");
    p.scale_ = pi / raw_area;
    return p;
  }

  /// V(t + tp/2) = (2 pi/tp) [a0 + sum_m a_m cos(2 pi m t/tp)], coefficients
  /// in units of 2 pi/tp. The set is rescaled so that a0 = 1/2 (area pi).
  static PulseShape fourier(std::vector<double> coeffs, double tp = 1.0) {
    PulseShape p(ShapeKind::fourier, tp);
    if (coeffs.empty())
      throw ValidationError("fourier: need at least the constant coefficient");
    for (double a : coeffs)
      if (!std::isfinite(a))
        throw ValidationError("fourier: coefficients must be finite");
    if (!(coeffs[0] > 0.0))
      throw ValidationError("fourier: a0 must be positive for an inversion pulse");
    if (coeffs[0] != 0.5) {
      const double f = 0.5 / coeffs[0];
      for (double& a : coeffs)
        a *= f;
      coeffs[0] = 0.5;
    }
    p.coeffs_ = std::move(coeffs);
    return p;
  }

  ShapeKind kind() const { return kind_; }
  bool is_delta() const { return kind_ == ShapeKind::delta; }
  double duration() const { return tp_; }
  double width_ratio() const { return width_; }
  double gamma() const { return gamma_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

  /// Short label such as "G_0.1" or "F[3]".
  std::string label() const {
    switch (kind_) {
    case ShapeKind::delta: return "delta";
    case ShapeKind::gaussian: return "G_" + detail::fmt_double(width_);
    case ShapeKind::hermitian: return "H_" + detail::fmt_double(width_);
    case ShapeKind::fourier: return "F[" + std::to_string(coeffs_.size()) + "]";
    }
    return "?";
  }

  double amplitude(double t) const {
    check_range(t);
    if (kind_ == ShapeKind::delta)
      throw ValidationError("amplitude: delta pulse has no pointwise value");
    const double x = t - 0.5 * tp_;
    switch (kind_) {
    case ShapeKind::gaussian: {
      const double tau = width_ * tp_;
      return scale_ * std::sqrt(pi) / tau * std::exp(-(x * x) / (tau * tau));
    }
    case ShapeKind::hermitian: {
      const double tau = width_ * tp_;
      const double y2 = (x * x) / (tau * tau);
      return scale_ * std::sqrt(pi) / tau * std::exp(-y2) * (1.0 - gamma_ * y2) /
             (1.0 - 0.5 * gamma_);
    }
    case ShapeKind::fourier: {
      double v = coeffs_[0];
      for (std::size_t m = 1; m < coeffs_.size(); ++m)
        v += coeffs_[m] * std::cos(two_pi * static_cast<double>(m) * x / tp_);
      return two_pi / tp_ * v;
    }
    default: return 0.0;
    }
  }

  /// Rotation angle accumulated by time t.
  double phase(double t) const {
    check_range(t);
    const double x = t - 0.5 * tp_;
    switch (kind_) {
    case ShapeKind::delta:
      if (x < 0.0)
        return 0.0;
      return x > 0.0 ? pi : 0.5 * pi;
    case ShapeKind::gaussian: {
      const double tau = width_ * tp_;
      return scale_ * 0.5 * pi * (std::erf(x / tau) + std::erf(0.5 * tp_ / tau));
    }
    case ShapeKind::hermitian:
      return scale_ * (hermitian_primitive(x) - hermitian_primitive(-0.5 * tp_));
    case ShapeKind::fourier: {
      double phi = two_pi * coeffs_[0] * t / tp_;
      for (std::size_t m = 1; m < coeffs_.size(); ++m)
        phi += coeffs_[m] / static_cast<double>(m) *
               std::sin(two_pi * static_cast<double>(m) * x / tp_);
      return phi;
    }
    }
    return 0.0;
  }

  /// max |V(t)| sampled on a uniform grid.
  double peak_amplitude(int samples = 4001) const {
    if (is_delta())
      return std::numeric_limits<double>::infinity();
    double peak = 0.0;
    for (int k = 0; k < samples; ++k)
      peak = std::max(peak, std::abs(amplitude(tp_ * k / (samples - 1))));
    return peak;
  }

private:
  PulseShape(ShapeKind kind, double tp) : kind_(kind), tp_(tp) {
    if (!(tp > 0.0) || !std::isfinite(tp))
      throw ValidationError("pulse duration must be positive");
  }

  void check_range(double t) const {
    const double eps = 1e-12 * tp_;
    if (!(t >= -eps && t <= tp_ + eps))
      throw ValidationError("time " + detail::fmt_double(t) + " outside [0, tp]");
  }

  // Antiderivative of the unnormalized Hermitian envelope in x = t - tp/2.
  double hermitian_primitive(double x) const {
    const double tau = width_ * tp_;
    const double y = x / tau;
    const double k = 1.0 - 0.5 * gamma_;
    return (0.5 * pi * k * std::erf(y) + 0.5 * gamma_ * std::sqrt(pi) * y * std::exp(-y * y)) /
           k;
  }

  ShapeKind kind_;
  double tp_;
  double width_ = 0.0;
  double gamma_ = 0.0;
  double scale_ = 1.0;
  std::vector<double> coeffs_;
};

inline double amplitude(const PulseShape& shape, double t) { return shape.amplitude(t); }
inline double phase_integral(const PulseShape& shape, double t) { return shape.phase(t); }

namespace detail {

// One quadrature pass with n_quad coarse intervals (even). Cumulative
// integrals at coarse nodes come from Simpson on a grid of twice the density.
inline ShapeParams shape_moments(const PulseShape& shape, int n_quad) {
  if (shape.is_delta())
    return ShapeParams::delta_limit();
  const int n_fine = 2 * n_quad;
  const double tp = shape.duration();
  std::vector<double> c(n_fine + 1), sn(n_fine + 1);
  for (int j = 0; j <= n_fine; ++j) {
    const double phi = shape.phase(tp * j / n_fine);
    c[j] = std::cos(phi);
    sn[j] = std::sin(phi);
  }
  const double h = 1.0 / n_fine; // fine step in u = t/tp
  std::vector<double> cum_c(n_quad + 1, 0.0), cum_s(n_quad + 1, 0.0);
  for (int k = 0; k < n_quad; ++k) {
    const int j = 2 * k;
    cum_c[k + 1] = cum_c[k] + h / 3.0 * (c[j] + 4.0 * c[j + 1] + c[j + 2]);
    cum_s[k + 1] = cum_s[k] + h / 3.0 * (sn[j] + 4.0 * sn[j + 1] + sn[j + 2]);
  }
  // Simpson over the coarse nodes.
  const double big_h = 1.0 / n_quad;
  auto coarse = [&](auto&& f) {
    double acc = f(0) + f(n_quad);
    for (int k = 1; k < n_quad; ++k)
      acc += (k % 2 ? 4.0 : 2.0) * f(k);
    return acc * big_h / 3.0;
  };
  ShapeParams p;
  p.n_quad = n_quad;
  p.s = cum_s[n_quad];
  p.cos_avg = cum_c[n_quad];
  p.area = shape.phase(tp);
  p.zeta = coarse([&](int k) { return c[2 * k] * (1.0 - static_cast<double>(k) / n_quad); });
  // alpha = <theta(u-u')[sin phi(u) cos phi(u') - cos phi(u) sin phi(u')]>
  p.alpha = coarse([&](int k) { return sn[2 * k] * cum_c[k] - c[2 * k] * cum_s[k]; });
  return p;
}

} // namespace detail

/// Shape parameters by composite Simpson quadrature. The node count is
/// doubled until successive passes agree to 1e-9 in s, alpha and zeta.
inline ShapeParams compute_params(const PulseShape& shape, int n_quad = 4096) {
  if (n_quad < 64)
    throw ValidationError("compute_params: n_quad must be >= 64");
  if (shape.is_delta())
    return ShapeParams::delta_limit();
  if (n_quad % 2)
    ++n_quad;
  constexpr int max_quad = 1 << 21;
  constexpr double tol = 1e-9;
  ShapeParams prev = detail::shape_moments(shape, n_quad);
  double diff = 0.0;
  for (int n = 2 * n_quad; n <= max_quad; n *= 2) {
    ShapeParams next = detail::shape_moments(shape, n);
    diff = std::max({std::abs(next.s - prev.s), std::abs(next.alpha - prev.alpha),
                     std::abs(next.zeta - prev.zeta)});
    if (diff < tol)
      return next;
    prev = next;
  }
  throw ConvergenceError("compute_params: quadrature did not converge for " + shape.label(),
                         diff);
}

/// The negative pulse V -> -V flips s and alpha; zeta is even.
inline ShapeParams negated(const ShapeParams& p) {
  ShapeParams q = p;
  q.s = -p.s;
  q.alpha = -p.alpha;
  q.area = -p.area;
  return q;
}

/// gamma making s = 0 for the Hermitian envelope of the given width.
inline double hermitian_gamma_for_zero_s(double width_ratio, double tol = 1e-13,
                                         int n_quad = 4096) {
  auto s_of = [&](double gamma) {
    return detail::shape_moments(PulseShape::hermitian(width_ratio, gamma), n_quad).s;
  };
  double lo = 0.5, hi = 1.5;
  if (s_of(lo) * s_of(hi) > 0.0)
    throw ConvergenceError("hermitian_gamma_for_zero_s: root not bracketed", s_of(lo));
  std::uintmax_t max_iter = 200;
  auto stop = [tol](double a, double b) { return std::abs(b - a) < tol; };
  const auto [a, b] = boost::math::tools::toms748_solve(s_of, lo, hi, stop, max_iter);
  return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// Text form: "kind=gaussian width=0.1", "kind=fourier coeffs=a0,a1,..."

inline std::string to_text(const PulseShape& shape) {
  std::string out;
  switch (shape.kind()) {
  case ShapeKind::delta: out = "kind=delta"; break;
  case ShapeKind::gaussian: out = "kind=gaussian width=" + detail::fmt_double(shape.width_ratio()); break;
  case ShapeKind::hermitian:
    out = "kind=hermitian width=" + detail::fmt_double(shape.width_ratio()) +
          " gamma=" + detail::fmt_double(shape.gamma());
    break;
  case ShapeKind::fourier: {
    out = "kind=fourier coeffs=";
    for (std::size_t m = 0; m < shape.coeffs().size(); ++m)
      out += (m ? "," : "") + detail::fmt_double(shape.coeffs()[m]);
    break;
  }
  }
  if (shape.duration() != 1.0)
    out += " duration=" + detail::fmt_double(shape.duration());
  return out;
}

/// Parses the key=value form or the shorthands "delta", "gaussian:0.1",
/// "hermitian:0.05[:gamma]", "fourier:a0,a1,...".
inline PulseShape parse_shape(std::string_view text) {
  const std::string t = detail::trim(text);
  if (t.empty())
    throw ValidationError("empty shape specification");

  if (t.find('=') == std::string::npos) {
    const auto parts = detail::split(t, ':');
    const std::string& kind = parts[0];
    if (kind == "delta" && parts.size() == 1)
      return PulseShape::delta();
    if (kind == "gaussian" && parts.size() == 2)
      return PulseShape::gaussian(detail::parse_double(parts[1], "gaussian width"));
    if (kind == "hermitian" && (parts.size() == 2 || parts.size() == 3))
      return PulseShape::hermitian(detail::parse_double(parts[1], "hermitian width"),
                                   parts.size() == 3
                                       ? detail::parse_double(parts[2], "hermitian gamma")
                                       : kHermitianGamma);
    if (kind == "fourier" && parts.size() == 2) {
      std::vector<double> coeffs;
      for (const auto& c : detail::split(parts[1], ','))
        coeffs.push_back(detail::parse_double(c, "fourier coefficient"));
      return PulseShape::fourier(std::move(coeffs));
    }
    throw ValidationError("unknown shape '" + t + "'");
  }

  std::map<std::string, std::string> kv;
  std::istringstream is(t);
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ValidationError("malformed shape token '" + tok + "'");
    kv[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  auto take = [&](const std::string& key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end())
      throw ValidationError("shape specification lacks '" + key + "'");
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const std::string kind = take("kind");
  double tp = 1.0;
  if (kv.count("duration"))
    tp = detail::parse_double(take("duration"), "duration");

  PulseShape out = PulseShape::delta(tp);
  if (kind == "delta") {
  } else if (kind == "gaussian") {
    out = PulseShape::gaussian(detail::parse_double(take("width"), "width"), tp);
  } else if (kind == "hermitian") {
    const double w = detail::parse_double(take("width"), "width");
    const double g = kv.count("gamma") ? detail::parse_double(take("gamma"), "gamma")
                                       : kHermitianGamma;
    out = PulseShape::hermitian(w, g, tp);
  } else if (kind == "fourier") {
    std::vector<double> coeffs;
    for (const auto& c : detail::split(take("coeffs"), ','))
      coeffs.push_back(detail::parse_double(c, "fourier coefficient"));
    out = PulseShape::fourier(std::move(coeffs), tp);
  } else {
    throw ValidationError("unknown shape kind '" + kind + "'");
  }
  if (!kv.empty())
    throw ValidationError("unexpected shape key '" + kv.begin()->first + "'");
  return out;
}

} // namespace softdd

#endif
