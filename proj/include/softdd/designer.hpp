#ifndef SOFTDD_DESIGNER_HPP
#define SOFTDD_DESIGNER_HPP

// Self-refocusing Fourier pulse shapes.
//
// A shape V(t + tp/2) = (2 pi/tp)[a0 + sum_m a_m cos(2 pi m t/tp)] is even
// about the pulse centre, so every odd derivative vanishes at the endpoints
// for any coefficients. The remaining conditions are
//
//   area = pi                         a0 = 1/2                       (linear)
//   V^(2k)(0) = 0, k = 0..L-1         d_k0 a0 + sum (-1)^m m^2k a_m  (linear)
//   s = 0                                                         (nonlinear)
//   alpha = 0   (family Q only)                                   (nonlinear)
//
// The linear rows are eliminated through a null-space parametrization, which
// leaves a square nonlinear system in one (S) or two (Q) unknowns. It is
// solved by damped Newton along a homotopy that starts at the normalized
// (1 + cos)^L profile, so the returned root is the one continuously connected
// to that seed. Surplus coefficients are chosen to minimize max |V|.

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "softdd/errors.hpp"
#include "softdd/shapes.hpp"

namespace softdd {

enum class DesignFamily { S, Q };

struct DesignSpec {
  DesignFamily family = DesignFamily::S;
  int L = 1;
  int extra_terms = 0;

  int nonlinear_count() const { return family == DesignFamily::Q ? 2 : 1; }
  int linear_count() const { return 1 + L; }
  int constraint_count() const { return linear_count() + nonlinear_count(); }
  int coefficient_count() const { return constraint_count() + extra_terms; }

  std::string name() const {
    return std::string(family == DesignFamily::S ? "S" : "Q") + std::to_string(L);
  }

  void validate() const {
    if (L < 1 || L > 4)
      throw ValidationError("design: L must be in 1..4");
    if (extra_terms < 0 || extra_terms > 4)
      throw ValidationError("design: extra_terms must be in 0..4");
  }
};

struct DesignOptions {
  double tol = 1e-12;
  int n_quad = 4096;
  int max_iter = 100;
  int homotopy_steps = 20;
};

struct Residual {
  std::string name;
  double value;
};

struct DesignResult {
  DesignSpec spec;
  PulseShape shape = PulseShape::delta();
  std::vector<double> coeffs;
  std::vector<Residual> residuals;
  double max_residual = 0.0;
  ShapeParams achieved;
  double peak_amplitude = 0.0; // max |V| in units of 2 pi/tp
  int newton_iterations = 0;
};

/// l-th time derivative of a Fourier-series shape at t = 0, in units of
/// (2 pi/tp)^(l+1). Odd orders vanish identically.
inline double fourier_endpoint_derivative(const std::vector<double>& coeffs, int order) {
  double v = order == 0 ? coeffs.at(0) : 0.0;
  for (std::size_t m = 1; m < coeffs.size(); ++m) {
    const double k = static_cast<double>(m);
    v += coeffs[m] * std::pow(k, order) *
         std::cos(-pi * k + 0.5 * pi * static_cast<double>(order));
  }
  return v;
}

namespace detail {

// Coefficients of (1 + cos theta)^L normalized to a0 = 1/2.
inline std::vector<double> raised_cosine_seed(int L, int n_coeffs) {
  std::vector<double> a(n_coeffs, 0.0);
  auto binom = [](int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
      r = r * (n - k + i) / i;
    return r;
  };
  const double centre = binom(2 * L, L);
  a[0] = 0.5;
  for (int k = 1; k <= L && k < n_coeffs; ++k)
    a[k] = binom(2 * L, L - k) / centre;
  return a;
}

inline Eigen::MatrixXd linear_rows(int L, int n_coeffs) {
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(1 + L, n_coeffs);
  rows(0, 0) = 1.0;
  for (int k = 0; k < L; ++k) {
    if (k == 0)
      rows(1 + k, 0) = 1.0;
    for (int m = 1; m < n_coeffs; ++m)
      rows(1 + k, m) = (m % 2 ? -1.0 : 1.0) * std::pow(static_cast<double>(m), 2 * k);
  }
  return rows;
}

inline Eigen::VectorXd linear_rhs(int L) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(1 + L);
  rhs(0) = 0.5;
  return rhs;
}

// Derivative-free simplex minimizer for the few surplus coefficients.
inline Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                   Eigen::VectorXd x0, double step, double ftol, int max_iter) {
  const Eigen::Index n = x0.size();
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> vals(n + 1);
  for (Eigen::Index i = 0; i < n; ++i)
    pts[i + 1](i) += step;
  for (Eigen::Index i = 0; i <= n; ++i)
    vals[i] = f(pts[i]);
  for (int it = 0; it < max_iter; ++it) {
    std::vector<Eigen::Index> order(n + 1);
    for (Eigen::Index i = 0; i <= n; ++i)
      order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return vals[a] < vals[b]; });
    std::vector<Eigen::VectorXd> p2;
    std::vector<double> v2;
    for (auto i : order) {
      p2.push_back(pts[i]);
      v2.push_back(vals[i]);
    }
    pts = std::move(p2);
    vals = std::move(v2);
    if (std::abs(vals[n] - vals[0]) < ftol)
      break;
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
      centroid += pts[i];
    centroid /= static_cast<double>(n);
    const Eigen::VectorXd xr = centroid + (centroid - pts[n]);
    const double fr = f(xr);
    if (fr < vals[0]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[n]);
      const double fe = f(xe);
      if (fe < fr) {
        pts[n] = xe;
        vals[n] = fe;
      } else {
        pts[n] = xr;
        vals[n] = fr;
      }
    } else if (fr < vals[n - 1]) {
      pts[n] = xr;
      vals[n] = fr;
    } else {
      const Eigen::VectorXd xc = centroid + 0.5 * (pts[n] - centroid);
      const double fc = f(xc);
      if (fc < vals[n]) {
        pts[n] = xc;
        vals[n] = fc;
      } else {
        for (Eigen::Index i = 1; i <= n; ++i) {
          pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
          vals[i] = f(pts[i]);
        }
      }
    }
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i <= n; ++i)
    if (vals[i] < vals[best])
      best = i;
  return pts[best];
}

// Square solve for the low-order coefficients with the top `fixed` ones held.
class SquareSolver {
public:
  SquareSolver(const DesignSpec& spec, const DesignOptions& opt)
      : spec_(spec), opt_(opt), n_coeffs_(spec.coefficient_count()),
        n_square_(spec.constraint_count()) {
    const Eigen::MatrixXd rows = linear_rows(spec.L, n_coeffs_);
    lin_ = rows.leftCols(n_square_);
    lin_fixed_ = rows.rightCols(n_coeffs_ - n_square_);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(lin_);
    null_ = lu.kernel();
    if (null_.cols() != spec.nonlinear_count())
      throw ConvergenceError("design: degenerate endpoint constraints", 0.0);
  }

  std::vector<double> assemble(const Eigen::VectorXd& z, const Eigen::VectorXd& fixed) const {
    const Eigen::VectorXd rhs = linear_rhs(spec_.L) - lin_fixed_ * fixed;
    const Eigen::VectorXd part = lin_.completeOrthogonalDecomposition().solve(rhs);
    const Eigen::VectorXd low = part + null_ * z;
    std::vector<double> a(n_coeffs_);
    for (int m = 0; m < n_square_; ++m)
      a[m] = low(m);
    for (int m = n_square_; m < n_coeffs_; ++m)
      a[m] = fixed(m - n_square_);
    a[0] = 0.5;
    return a;
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& z, const Eigen::VectorXd& fixed) const {
    const ShapeParams p =
        shape_moments(PulseShape::fourier(assemble(z, fixed)), opt_.n_quad);
    Eigen::VectorXd r(spec_.nonlinear_count());
    r(0) = p.s;
    if (spec_.family == DesignFamily::Q)
      r(1) = p.alpha;
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z, const Eigen::VectorXd& fixed) const {
    const Eigen::Index n = z.size();
    Eigen::MatrixXd j(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(z(c)));
      Eigen::VectorXd zp = z, zm = z;
      zp(c) += h;
      zm(c) -= h;
      j.col(c) = (residual(zp, fixed) - residual(zm, fixed)) / (2.0 * h);
    }
    return j;
  }

  Eigen::VectorXd seed_coordinates() const {
    const auto seed = raised_cosine_seed(spec_.L, n_square_);
    const Eigen::VectorXd zero_fixed = Eigen::VectorXd::Zero(n_coeffs_ - n_square_);
    Eigen::VectorXd a(n_square_);
    for (int m = 0; m < n_square_; ++m)
      a(m) = seed[m];
    const Eigen::VectorXd part =
        lin_.completeOrthogonalDecomposition().solve(linear_rhs(spec_.L));
    return null_.completeOrthogonalDecomposition().solve(a - part);
  }

  // Damped Newton on G(z) = F(z) - shift. Returns iterations used.
  int newton(Eigen::VectorXd& z, const Eigen::VectorXd& fixed, const Eigen::VectorXd& shift,
             double tol) const {
    Eigen::VectorXd g = residual(z, fixed) - shift;
    for (int it = 0; it < opt_.max_iter; ++it) {
      if (g.norm() < tol)
        return it;
      const Eigen::MatrixXd j = jacobian(z, fixed);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(j, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      if (sv(sv.size() - 1) <= 1e-12 * sv(0))
        throw ConvergenceError("design: ill-conditioned Jacobian; try more quadrature nodes or "
                               "a different seed",
                               g.norm());
      const Eigen::VectorXd dz = -svd.solve(g);
      double t = 1.0;
      Eigen::VectorXd z_new = z + dz;
      Eigen::VectorXd g_new = residual(z_new, fixed) - shift;
      while (g_new.norm() >= g.norm() && t > 1.0 / 64) {
        t *= 0.5;
        z_new = z + t * dz;
        g_new = residual(z_new, fixed) - shift;
      }
      if (g_new.norm() >= g.norm()) {
        if (g.norm() < 1e3 * tol)
          return it;
        throw ConvergenceError("design: Newton iteration stalled", g.norm());
      }
      z = z_new;
      g = g_new;
    }
    if (g.norm() < tol)
      return opt_.max_iter;
    throw ConvergenceError("design: no convergence after " + std::to_string(opt_.max_iter) +
                               " iterations",
                           g.norm());
  }

  // Homotopy from the raised-cosine seed, then polish at the target.
  int homotopy(Eigen::VectorXd& z, const Eigen::VectorXd& fixed) const {
    z = seed_coordinates();
    const Eigen::VectorXd f0 = residual(z, fixed);
    int iters = 0;
    for (int k = 1; k <= opt_.homotopy_steps; ++k) {
      const double lambda = static_cast<double>(k) / opt_.homotopy_steps;
      const double tol = k == opt_.homotopy_steps ? opt_.tol : 1e-8;
      iters += newton(z, fixed, (1.0 - lambda) * f0, tol);
    }
    return iters;
  }

  int fixed_count() const { return n_coeffs_ - n_square_; }

private:
  DesignSpec spec_;
  DesignOptions opt_;
  int n_coeffs_;
  int n_square_;
  Eigen::MatrixXd lin_, lin_fixed_, null_;
};

} // namespace detail

/// Synthesizes an S_L (s = 0) or Q_L (s = alpha = 0) Fourier shape.
inline DesignResult design(const DesignSpec& spec, const DesignOptions& opt = {}) {
  spec.validate();
  if (!(opt.tol >= 1e-14))
    throw ValidationError("design: tolerance must be >= 1e-14");
  if (opt.n_quad < 64)
    throw ValidationError("design: n_quad must be >= 64");

  detail::SquareSolver solver(spec, opt);
  Eigen::VectorXd fixed = Eigen::VectorXd::Zero(solver.fixed_count());
  Eigen::VectorXd z;
  int iters = solver.homotopy(z, fixed);

  if (spec.extra_terms > 0) {
    const Eigen::VectorXd zero_shift = Eigen::VectorXd::Zero(spec.nonlinear_count());
    Eigen::VectorXd z_warm = z;
    auto peak = [&](const Eigen::VectorXd& w) {
      Eigen::VectorXd zt = z_warm;
      try {
        solver.newton(zt, w, zero_shift, 1e-11);
      } catch (const ConvergenceError&) {
        return std::numeric_limits<double>::infinity();
      }
      z_warm = zt;
      return PulseShape::fourier(solver.assemble(zt, w)).peak_amplitude(2001) / two_pi;
    };
    fixed = detail::nelder_mead(peak, fixed, 0.05, 1e-10, 400 * spec.extra_terms);
    z = z_warm;
    iters += solver.newton(z, fixed, zero_shift, opt.tol);
  }

  DesignResult out;
  out.spec = spec;
  out.coeffs = solver.assemble(z, fixed);
  out.shape = PulseShape::fourier(out.coeffs);
  out.achieved = compute_params(out.shape, opt.n_quad);
  out.peak_amplitude = out.shape.peak_amplitude() / two_pi;
  out.newton_iterations = iters;

  out.residuals.push_back({"area", out.shape.phase(out.shape.duration()) - pi});
  for (int k = 0; k < spec.L; ++k)
    out.residuals.push_back({"V^(" + std::to_string(2 * k) + ")(0)",
                             fourier_endpoint_derivative(out.coeffs, 2 * k)});
  out.residuals.push_back({"s", out.achieved.s});
  if (spec.family == DesignFamily::Q)
    out.residuals.push_back({"alpha", out.achieved.alpha});
  for (const auto& r : out.residuals)
    out.max_residual = std::max(out.max_residual, std::abs(r.value));
  return out;
}

/// Parses "S1", "Q2", ... into a spec with no surplus terms.
inline DesignSpec parse_design_name(const std::string& name) {
  if (name.size() < 2 || (name[0] != 'S' && name[0] != 'Q'))
    throw ValidationError("unknown designed shape '" + name + "'");
  DesignSpec spec;
  spec.family = name[0] == 'S' ? DesignFamily::S : DesignFamily::Q;
  spec.L = static_cast<int>(detail::parse_double(name.substr(1), "design index L"));
  if (std::to_string(spec.L) != name.substr(1))
    throw ValidationError("unknown designed shape '" + name + "'");
  spec.validate();
  return spec;
}

/// Shape text including designed names (S1, S2, Q1, Q2, ...).
inline PulseShape resolve_shape(const std::string& text) {
  const std::string t = detail::trim(text);
  if (!t.empty() && (t[0] == 'S' || t[0] == 'Q') && t.find_first_of("=:") == std::string::npos) {
    const DesignSpec spec = parse_design_name(t);
    static std::mutex mu;
    static std::map<std::string, PulseShape> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(t);
    if (it == cache.end())
      it = cache.emplace(t, design(spec).shape).first;
    return it->second;
  }
  // G0.10 / G10 and H0.05 / H5: width as a fraction, or in percent of tp
  if (t.size() > 1 && (t[0] == 'G' || t[0] == 'H') && std::isdigit(static_cast<unsigned char>(t[1]))) {
    double w = detail::parse_double(t.substr(1), "shape width");
    if (t.find('.') == std::string::npos)
      w /= 100.0;
    return t[0] == 'G' ? PulseShape::gaussian(w) : PulseShape::hermitian(w);
  }
  return parse_shape(t);
}

} // namespace softdd

#endif
