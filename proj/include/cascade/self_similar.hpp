#ifndef CASCADE_SELF_SIMILAR_HPP
#define CASCADE_SELF_SIMILAR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/error.hpp"
#include "cascade/kpp_core.hpp"
#include "cascade/tridiagonal.hpp"

namespace cascade {

// ---------------------------------------------------------------------------
// Quadrature and the operator M = -d^2/deta^2 + (eta^2/16 - 3/4) on (0, L), Dirichlet at both ends.

inline double trapezoid(std::span<const double> values, double h) {
  if (values.size() < 2) return 0.0;
  double s = 0.5 * (values.front() + values.back());
  for (std::size_t j = 1; j + 1 < values.size(); ++j) s += values[j];
  return s * h;
}

inline double inner(std::span<const double> a, std::span<const double> b, const Grid1D& grid) {
  require(a.size() == grid.n && b.size() == grid.n, ErrorKind::invalid_input, "vector/grid size mismatch");
  double s = 0.5 * (a.front() * b.front() + a.back() * b.back());
  for (std::size_t j = 1; j + 1 < grid.n; ++j) s += a[j] * b[j];
  return s * grid.dx;
}

inline double l2_norm(std::span<const double> a, const Grid1D& grid) { return std::sqrt(inner(a, a, grid)); }

inline std::vector<double> principal_eigenfunction(const Grid1D& eta_grid) {
  require(eta_grid.x0 >= 0.0, ErrorKind::invalid_input, "eta grid must lie in [0, L]");
  const double norm = 1.0 / std::sqrt(2.0 * std::sqrt(std::numbers::pi));
  std::vector<double> e0(eta_grid.n);
  for (std::size_t j = 0; j < eta_grid.n; ++j) {
    const double eta = eta_grid.x(j);
    e0[j] = norm * eta * std::exp(-eta * eta / 8.0);
  }
  return e0;
}

inline double m_potential(double eta) { return eta * eta / 16.0 - 0.75; }

struct MResult {
  std::vector<double> values;
  bool coarse_grid = false;  ///< set when d eta > 0.2; second differences are then inaccurate
};

/// Centered second differences; the neighbours beyond both ends are taken as zero.
inline MResult apply_M(std::span<const double> w, const Grid1D& eta_grid) {
  require(w.size() == eta_grid.n && eta_grid.n >= 3, ErrorKind::invalid_input, "vector/grid size mismatch");
  require(std::abs(w[0]) <= 1e-12 * (1.0 + *std::max_element(w.begin(), w.end())), ErrorKind::invalid_input,
          "w must vanish at eta = 0");
  const std::size_t n = eta_grid.n;
  const double h2 = eta_grid.dx * eta_grid.dx;
  MResult out;
  out.coarse_grid = eta_grid.dx > 0.2;
  out.values.assign(n, 0.0);
  for (std::size_t j = 1; j < n; ++j) {
    const double right = j + 1 < n ? w[j + 1] : 0.0;
    out.values[j] = -(w[j - 1] - 2.0 * w[j] + right) / h2 + m_potential(eta_grid.x(j)) * w[j];
  }
  return out;
}

/// Q(w) = int (w'^2 + (eta^2/16 - 3/4) w^2): forward differences for w', trapezoid for the potential.
inline double quadratic_form_Q(std::span<const double> w, const Grid1D& eta_grid) {
  require(w.size() == eta_grid.n, ErrorKind::invalid_input, "vector/grid size mismatch");
  double grad = 0.0;
  for (std::size_t j = 0; j + 1 < eta_grid.n; ++j) {
    const double d = (w[j + 1] - w[j]) / eta_grid.dx;
    grad += d * d;
  }
  grad *= eta_grid.dx;
  std::vector<double> pot(eta_grid.n);
  for (std::size_t j = 0; j < eta_grid.n; ++j) pot[j] = m_potential(eta_grid.x(j)) * w[j] * w[j];
  return grad + trapezoid(pot, eta_grid.dx);
}

struct Eigenpair {
  double value;
  std::vector<double> vector;  ///< unit norm, positive near eta = 0
};

namespace detail {

inline TridiagonalSolver shifted_m_solver(const Grid1D& g, double shift) {
  const std::size_t n = g.n;
  const double h2 = g.dx * g.dx;
  std::vector<double> lo(n, -1.0 / h2), di(n), up(n, -1.0 / h2);
  for (std::size_t j = 0; j < n; ++j) di[j] = 2.0 / h2 + m_potential(g.x(j)) + shift;
  lo[0] = up[0] = 0.0;
  di[0] = 1.0;
  TridiagonalSolver s;
  s.factor(lo, di, up);
  return s;
}

inline void normalize(std::vector<double>& v, const Grid1D& g) {
  const double nrm = l2_norm(v, g);
  require(nrm > 0.0, ErrorKind::no_convergence, "iteration collapsed to zero");
  double sign = 1.0;
  for (std::size_t j = 1; j < v.size(); ++j)
    if (std::abs(v[j]) > 1e-8 * nrm) {
      sign = v[j] > 0.0 ? 1.0 : -1.0;
      break;
    }
  for (auto& x : v) x *= sign / nrm;
}

}  // namespace detail

/// The `index`-th eigenpair of the discretized M by inverse iteration on M + 1,
/// deflating the lower eigenvectors after every solve.
inline Eigenpair discrete_eigenpair(const Grid1D& eta_grid, std::size_t index, int iterations = 400) {
  const auto solver = detail::shifted_m_solver(eta_grid, 1.0);
  std::vector<std::vector<double>> lower;
  for (std::size_t m = 0; m <= index; ++m) {
    std::vector<double> v(eta_grid.n);
    for (std::size_t j = 1; j < eta_grid.n; ++j) {
      const double eta = eta_grid.x(j);
      v[j] = std::pow(eta, static_cast<double>(m + 1)) * std::exp(-eta * eta / 8.0) + 1e-3 * std::sin(eta);
    }
    v[0] = 0.0;
    for (int it = 0; it < iterations; ++it) {
      for (const auto& u : lower) {
        const double c = inner(u, v, eta_grid);
        for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * u[j];
      }
      solver.solve(v);
      v[0] = 0.0;
      detail::normalize(v, eta_grid);
    }
    for (const auto& u : lower) {
      const double c = inner(u, v, eta_grid);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= c * u[j];
    }
    detail::normalize(v, eta_grid);
    lower.push_back(std::move(v));
  }
  auto& v = lower.back();
  const auto mv = apply_M(v, eta_grid);
  return {inner(mv.values, v, eta_grid), v};
}

// ---------------------------------------------------------------------------
// Self-similar variables.

/// tau = ln(t + t0) - ln t0, eta = x / sqrt(t + t0), epsilon = 1 / (lambda* sqrt(t0)).
struct SelfSimilarScaling {
  double t0 = 100.0;
  double lambdastar = 1.0;

  static SelfSimilarScaling from_epsilon(double epsilon, double lambdastar = 1.0) {
    require(epsilon > 0.0 && lambdastar > 0.0, ErrorKind::configuration, "epsilon and lambda* must be positive");
    const double root = 1.0 / (lambdastar * epsilon);
    return {root * root, lambdastar};
  }

  double epsilon() const { return 1.0 / (lambdastar * std::sqrt(t0)); }
  double tau(double t) const { return std::log(t + t0) - std::log(t0); }
  double time(double tau) const { return t0 * std::expm1(tau); }
  double delta(double tau) const { return (tau + std::log(t0)) / (lambdastar * std::sqrt(t0 * std::exp(tau))); }
};

struct SelfSimilarState {
  double tau = 0.0;
  Grid1D eta_grid;
  std::vector<std::vector<double>> p;
  std::vector<std::vector<double>> w;
  double epsilon = 0.0;
  double delta_tau = 0.0;
};

/// Maps a linearized half-line field V (frame coordinate x >= 0, time t) to p and w:
/// z = e^{lambda* x} V, p(tau, eta) = z(t, eta sqrt(t + t0)), w = p e^{eta^2/8} e^{-tau/2}.
inline SelfSimilarState to_self_similar(const FieldStack& field, const SelfSimilarScaling& scaling,
                                        const Grid1D& eta_grid) {
  const double t = field.time();
  const double root = std::sqrt(t + scaling.t0);
  SelfSimilarState s;
  s.tau = scaling.tau(t);
  s.eta_grid = eta_grid;
  s.epsilon = scaling.epsilon();
  s.delta_tau = scaling.delta(s.tau);
  const Grid1D& g = field.grid();
  for (std::size_t i = 0; i < field.k(); ++i) {
    std::vector<double> z(g.n);
    for (std::size_t j = 0; j < g.n; ++j) z[j] = std::exp(scaling.lambdastar * g.x(j)) * field(i, j);
    std::vector<double> p(eta_grid.n), w(eta_grid.n);
    for (std::size_t j = 0; j < eta_grid.n; ++j) {
      const double eta = eta_grid.x(j);
      p[j] = interpolate_linear(z, g, eta * root, 0.0, 0.0);
      w[j] = p[j] * std::exp(eta * eta / 8.0 - s.tau / 2.0);
    }
    s.p.push_back(std::move(p));
    s.w.push_back(std::move(w));
  }
  return s;
}

/// Inverse map at tau: V(x) = w(eta) e^{-eta^2/8} e^{tau/2} e^{-lambda* x} with eta = x / sqrt(t + t0).
inline FieldStack from_self_similar(const std::vector<std::vector<double>>& w, const Grid1D& eta_grid, double tau,
                                    const SelfSimilarScaling& scaling, const Grid1D& x_grid) {
  const double t = scaling.time(tau);
  const double root = std::sqrt(t + scaling.t0);
  FieldStack out(w.size(), x_grid, t);
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto c = out.component(i);
    for (std::size_t j = 0; j < x_grid.n; ++j) {
      const double x = x_grid.x(j);
      const double eta = x / root;
      const double wv = interpolate_linear(w[i], eta_grid, eta, 0.0, 0.0);
      c[j] = wv * std::exp(-eta * eta / 8.0 + tau / 2.0 - scaling.lambdastar * x);
    }
  }
  return out;
}

struct SpectralDecomposition {
  double tau = 0.0;
  std::vector<double> q;               ///< <e0, w^i>
  std::vector<double> remainder_norm;  ///< ||w^i - q^i e0||
};

inline SpectralDecomposition decompose(const std::vector<std::vector<double>>& w, const Grid1D& eta_grid,
                                       std::span<const double> e0, double tau = 0.0) {
  SpectralDecomposition d;
  d.tau = tau;
  std::vector<double> rem(eta_grid.n);
  for (const auto& row : w) {
    const double q = inner(e0, row, eta_grid);
    for (std::size_t j = 0; j < eta_grid.n; ++j) rem[j] = row[j] - q * e0[j];
    d.q.push_back(q);
    d.remainder_norm.push_back(l2_norm(rem, eta_grid));
  }
  return d;
}

/// Orthogonal part w - <e0, w> e0.
inline std::vector<double> remainder(std::span<const double> w, const Grid1D& eta_grid, std::span<const double> e0) {
  const double q = inner(e0, w, eta_grid);
  std::vector<double> r(w.begin(), w.end());
  for (std::size_t j = 0; j < r.size(); ++j) r[j] -= q * e0[j];
  return r;
}

struct WSystemConfig {
  std::size_t k = 1;
  double alpha = 1.0;
  double epsilon = 0.1;
  double lambdastar = 1.0;
  Grid1D eta_grid = Grid1D::covering(0.0, 12.0, 0.02);
  double dtau = 2e-3;
  double tau_end = 12.0;
  double output_every = 0.05;
};

/// Integrates, for i = 1..k (1-based),
///   w^i_tau + M w^i + (k - i) w^i = -(3/2 + i - k) eps e^{-tau/2} (w^i_eta - eta w^i / 4)
///                                   + alpha w^{i+1}(eta + delta) e^{-delta^2/8} e^{-eta delta/4},
/// with the coupling absent for i = k. M + (k - i) is backward Euler; the rest is explicit.
inline std::vector<SpectralDecomposition> evolve_w_system(const WSystemConfig& cfg,
                                                          std::vector<std::vector<double>> w) {
  const Grid1D& g = cfg.eta_grid;
  const std::size_t n = g.n, k = cfg.k;
  require(k >= 1 && w.size() == k, ErrorKind::invalid_input, "need one initial row per component");
  require(cfg.dtau > 0.0 && cfg.tau_end > 0.0 && cfg.output_every > 0.0, ErrorKind::configuration,
          "dtau, tau_end and output_every must be positive");
  require(std::abs(g.x0) < 1e-12 && n >= 3, ErrorKind::invalid_input, "eta grid must start at 0");
  for (const auto& row : w) {
    require(row.size() == n, ErrorKind::invalid_input, "initial row has wrong length");
    require(std::abs(row[0]) < 1e-14 && std::abs(row[n - 1]) < 1e-14, ErrorKind::invalid_input,
            "initial rows must vanish at both ends");
  }
  const auto scaling = SelfSimilarScaling::from_epsilon(cfg.epsilon, cfg.lambdastar);
  const auto e0 = principal_eigenfunction(g);
  const double h = g.dx, h2 = h * h;

  std::vector<TridiagonalSolver> solvers(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double extra = static_cast<double>(k - 1 - i);
    std::vector<double> lo(n, -cfg.dtau / h2), di(n), up(n, -cfg.dtau / h2);
    for (std::size_t j = 0; j < n; ++j) di[j] = 1.0 + cfg.dtau * (2.0 / h2 + m_potential(g.x(j)) + extra);
    lo[0] = up[0] = lo[n - 1] = up[n - 1] = 0.0;
    di[0] = di[n - 1] = 1.0;
    solvers[i].factor(lo, di, up);
  }

  std::vector<SpectralDecomposition> series;
  series.push_back(decompose(w, g, e0, 0.0));
  const auto steps = static_cast<std::size_t>(std::llround(cfg.tau_end / cfg.dtau));
  const auto out_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.output_every / cfg.dtau)));
  std::vector<std::vector<double>> rhs(k, std::vector<double>(n));
  for (std::size_t s = 0; s < steps; ++s) {
    const double tau = static_cast<double>(s) * cfg.dtau;
    const double damp = cfg.epsilon * std::exp(-tau / 2.0);
    const double delta = scaling.delta(tau);
    const double weight0 = std::exp(-delta * delta / 8.0);
    for (std::size_t i = 0; i < k; ++i) {
      const double coef = -(1.5 + static_cast<double>(i + 1) - static_cast<double>(k)) * damp;
      auto& r = rhs[i];
      const auto& wi = w[i];
      for (std::size_t j = 1; j + 1 < n; ++j) {
        const double eta = g.x(j);
        const double deriv = (wi[j + 1] - wi[j - 1]) / (2.0 * h);
        double value = wi[j] + cfg.dtau * coef * (deriv - eta * wi[j] / 4.0);
        if (i + 1 < k) {
          const double partner = interpolate_linear(w[i + 1], g, eta + delta, 0.0, 0.0);
          value += cfg.dtau * cfg.alpha * partner * weight0 * std::exp(-eta * delta / 4.0);
        }
        r[j] = value;
      }
      r[0] = r[n - 1] = 0.0;
    }
    for (std::size_t i = 0; i < k; ++i) {
      solvers[i].solve(rhs[i]);
      std::swap(w[i], rhs[i]);
    }
    if ((s + 1) % out_every == 0 || s + 1 == steps) {
      const double tau_next = static_cast<double>(s + 1) * cfg.dtau;
      auto d = decompose(w, g, e0, tau_next);
      for (std::size_t i = 0; i < k; ++i) {
        const double norm = std::hypot(d.q[i], d.remainder_norm[i]);
        require(std::isfinite(norm) && norm <= 1e6, ErrorKind::instability,
                "w norm exceeded 1e6 at tau=" + std::to_string(tau_next));
      }
      series.push_back(std::move(d));
    }
  }
  return series;
}

struct DecayFit {
  std::vector<double> slopes;  ///< slope of ln(||w_hat^i|| / (1 + tau)) against tau, per component
  bool degenerate = false;
  std::string notice;
};

/// Least-squares decay rate of the orthogonal remainder over [tau_begin, tau_end].
inline DecayFit remainder_decay(const std::vector<SpectralDecomposition>& series, double tau_begin = 2.0,
                                double tau_end = 12.0) {
  require(!series.empty(), ErrorKind::insufficient_data, "empty series");
  require(series.back().tau - series.front().tau >= 6.0 - 1e-9, ErrorKind::insufficient_data,
          "series must span a tau range of at least 6");
  const std::size_t k = series.front().q.size();
  DecayFit fit;
  for (std::size_t i = 0; i < k; ++i) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    bool degenerate = false;
    for (const auto& d : series) {
      if (d.tau < tau_begin - 1e-9 || d.tau > tau_end + 1e-9) continue;
      if (d.remainder_norm[i] < 1e-13) {
        degenerate = true;
        break;
      }
      const double y = std::log(d.remainder_norm[i]) - std::log1p(d.tau);
      sx += d.tau;
      sy += y;
      sxx += d.tau * d.tau;
      sxy += d.tau * y;
      ++m;
    }
    if (degenerate) {
      fit.degenerate = true;
      fit.notice = "remainder of component " + std::to_string(i + 1) + " is below 1e-13; decay fit is degenerate";
      fit.slopes.push_back(NAN);
      continue;
    }
    require(m >= 3, ErrorKind::insufficient_data, "fewer than three samples in the decay window");
    const double md = static_cast<double>(m);
    fit.slopes.push_back((md * sxy - sx * sy) / (md * sxx - sx * sx));
  }
  return fit;
}

// ---------------------------------------------------------------------------
// Heat flow on the half line.

inline double halfline_kernel(double t, double x, double y) {
  const double a = (x - y) * (x - y) / (4.0 * t);
  const double b = (x + y) * (x + y) / (4.0 * t);
  // e^{-a} - e^{-b} = e^{-a} (1 - e^{-xy/t}); expm1 keeps small xy/t accurate.
  return -std::exp(-a) * std::expm1(a - b) / std::sqrt(4.0 * std::numbers::pi * t);
}

/// Image-method solution omega(t, x) of the Dirichlet heat equation from omega0 sampled on `grid`
/// (trapezoid rule in y).
inline std::vector<double> halfline_heat(std::span<const double> omega0, const Grid1D& grid, double t,
                                         std::span<const double> x_eval) {
  require(t > 0.0, ErrorKind::invalid_input, "t must be positive");
  require(omega0.size() == grid.n, ErrorKind::invalid_input, "omega0/grid size mismatch");
  require(grid.x0 >= 0.0, ErrorKind::invalid_input, "omega0 must live on x >= 0");
  std::vector<double> out(x_eval.size());
  std::vector<double> integrand(grid.n);
  for (std::size_t m = 0; m < x_eval.size(); ++m) {
    for (std::size_t j = 0; j < grid.n; ++j) integrand[j] = omega0[j] * halfline_kernel(t, x_eval[m], grid.x(j));
    out[m] = trapezoid(integrand, grid.dx);
  }
  return out;
}

/// Far-field constant C in omega(t, x) ~ C x e^{-x^2/4t} / t^{3/2}: C = int y omega0 dy / (2 sqrt(pi)).
inline double farfield_constant(std::span<const double> omega0, const Grid1D& grid) {
  std::vector<double> m(grid.n);
  for (std::size_t j = 0; j < grid.n; ++j) m[j] = grid.x(j) * omega0[j];
  return trapezoid(m, grid.dx) / (2.0 * std::sqrt(std::numbers::pi));
}

struct DuhamelOptions {
  double rel_tol = 1e-6;
  int min_depth = 4;
  int max_depth = 30;
  std::size_t max_y_points = 20000;
};

namespace detail {

/// omega(s, y) for one y: quadrature against omega0, or omega0 itself when the kernel is
/// narrower than the sampling of omega0.
inline double omega_at(std::span<const double> omega0, const Grid1D& grid, double s, double y) {
  if (s <= 0.0 || std::sqrt(2.0 * s) < 4.0 * grid.dx) return interpolate_linear(omega0, grid, y, 0.0, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < grid.n; ++j) {
    const double w = (j == 0 || j + 1 == grid.n) ? 0.5 : 1.0;
    acc += w * omega0[j] * halfline_kernel(s, y, grid.x(j));
  }
  return acc * grid.dx;
}

/// [G(t - s) omega(s, .)](x): Simpson rule in y over the overlap of the two effective supports.
inline double duhamel_integrand(std::span<const double> omega0, const Grid1D& grid, double t, double s, double x,
                                const DuhamelOptions& opt) {
  const double tau = t - s;
  if (tau <= 0.0) return x <= 0.0 ? 0.0 : detail::omega_at(omega0, grid, t, x);
  const double wk = std::sqrt(2.0 * tau);
  const double feature = std::max(grid.span() / 8.0, 4.0 * grid.dx);
  const double wo = std::max(std::sqrt(2.0 * s), feature);
  const double lo = std::max({0.0, x - 10.0 * wk, grid.x0 - 10.0 * wo});
  const double hi = std::min(x + 10.0 * wk, grid.x_end() + 10.0 * wo);
  if (hi <= lo) return 0.0;
  const double step = std::min(wk, wo) / 10.0;
  auto intervals = static_cast<std::size_t>(std::ceil((hi - lo) / step));
  intervals = std::clamp<std::size_t>(intervals + (intervals % 2), 2, opt.max_y_points);
  if (intervals % 2) ++intervals;
  const double h = (hi - lo) / static_cast<double>(intervals);
  double acc = 0.0;
  for (std::size_t j = 0; j <= intervals; ++j) {
    const double y = lo + static_cast<double>(j) * h;
    const double w = (j == 0 || j == intervals) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    acc += w * halfline_kernel(tau, x, y) * detail::omega_at(omega0, grid, s, y);
  }
  return acc * h / 3.0;
}

inline double adaptive_trapezoid(const std::function<double(double)>& f, double a, double b, double fa, double fb,
                                 double whole, double tol, int depth, const DuhamelOptions& opt, bool& failed) {
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double left = 0.25 * (b - a) * (fa + fm);
  const double right = 0.25 * (b - a) * (fm + fb);
  const double refined = left + right;
  if (depth >= opt.min_depth && std::abs(refined - whole) <= 3.0 * tol) return refined;
  if (depth >= opt.max_depth) {
    failed = true;
    return refined;
  }
  return adaptive_trapezoid(f, a, m, fa, fm, left, 0.5 * tol, depth + 1, opt, failed) +
         adaptive_trapezoid(f, m, b, fm, fb, right, 0.5 * tol, depth + 1, opt, failed);
}

}  // namespace detail

/// zeta(t, x) = alpha int_0^t [G(t - s) omega(s, .)](x) ds with omega(s) = G(s) omega0 and G the
/// Dirichlet half-line heat semigroup.
inline std::vector<double> forced_halfline_heat(std::span<const double> omega0, const Grid1D& grid, double alpha,
                                                double t, std::span<const double> x_eval,
                                                const DuhamelOptions& opt = {}) {
  require(t > 1.0, ErrorKind::invalid_input, "forced heat flow needs t > 1");
  require(omega0.size() == grid.n && grid.x0 >= 0.0, ErrorKind::invalid_input, "omega0 must live on x >= 0");
  std::vector<double> out(x_eval.size(), 0.0);
  if (alpha == 0.0) return out;
  for (std::size_t m = 0; m < x_eval.size(); ++m) {
    const double x = x_eval[m];
    if (x <= 0.0) continue;
    auto f = [&](double s) { return detail::duhamel_integrand(omega0, grid, t, s, x, opt); };
    const double f0 = f(0.0), ft = f(t);
    const double whole = 0.5 * t * (f0 + ft);
    const double scale = std::max(std::abs(whole), std::abs(t * detail::omega_at(omega0, grid, t, x)));
    bool failed = false;
    const double integral =
        detail::adaptive_trapezoid(f, 0.0, t, f0, ft, whole, opt.rel_tol * std::max(scale, 1e-300), 0, opt, failed);
    require(!failed, ErrorKind::tolerance_not_met,
            "Duhamel quadrature did not reach tolerance at x=" + std::to_string(x));
    out[m] = alpha * integral;
  }
  return out;
}

}  // namespace cascade

#endif  // CASCADE_SELF_SIMILAR_HPP
