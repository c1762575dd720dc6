#ifndef CASCADE_TRAVELING_WAVE_HPP
#define CASCADE_TRAVELING_WAVE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cascade/error.hpp"
#include "cascade/kpp_core.hpp"

namespace cascade {

/// Far-field fit of a front profile:
///   c > c*:  U ~ k_c e^{-lambda x}              (amplitude = k_c, k_const = k_c)
///   c = c*:  U ~ A (x + k*) e^{-lambda x}        (amplitude = A,   k_const = k*)
struct TailFit {
  double lambda_est = 0.0;
  double lambda_stderr = 0.0;
  double k_const = 0.0;
  double amplitude = 0.0;
  bool linear_factor = false;
  double rms_residual = 0.0;  ///< in ln U
  std::size_t points = 0;
};

struct WaveProfile {
  double speed = 0.0;
  Grid1D grid;
  std::vector<double> values;       ///< U(x_j)
  std::vector<double> derivatives;  ///< U'(x_j), from the ODE state
  double anchor = 0.0;              ///< U(anchor) = 1/2; solve_profile normalizes it to 0
  std::optional<TailFit> tail;

  /// Cubic Hermite interpolation; 1 to the left of the grid, 0 to the right.
  double operator()(double x) const {
    const double s = (x - grid.x0) / grid.dx;
    if (s <= 0.0) return s > -1e-12 ? values.front() : 1.0;
    const double last = static_cast<double>(grid.n - 1);
    if (s >= last) return s < last + 1e-12 ? values.back() : 0.0;
    auto j = static_cast<std::size_t>(s);
    if (j >= grid.n - 1) j = grid.n - 2;
    const double t = s - static_cast<double>(j);
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * values[j] + h10 * grid.dx * derivatives[j] + h01 * values[j + 1] +
           h11 * grid.dx * derivatives[j + 1];
  }

  /// x where the profile equals `level` (monotone profile, bisection on the interpolant).
  double position_of(double level) const {
    auto it = std::find_if(values.begin(), values.end(), [&](double v) { return v < level; });
    require(it != values.begin() && it != values.end(), ErrorKind::no_front,
            "profile does not cross level " + std::to_string(level));
    const auto j = static_cast<std::size_t>(it - values.begin());
    double a = grid.x(j - 1), b = grid.x(j);
    for (int iter = 0; iter < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++iter) {
      const double m = 0.5 * (a + b);
      ((*this)(m) >= level ? a : b) = m;
    }
    return 0.5 * (a + b);
  }
};

namespace detail {

using State = std::array<double, 2>;  // (U, U')

/// near_one = false: state (U, U').  near_one = true: state (1 - U, -U'), used while U is
/// close to 1 so that the small quantity 1 - U keeps full relative precision.
inline State wave_rhs(const KppNonlinearity& f, double c, const State& s, bool near_one) {
  if (near_one) return {s[1], -c * s[1] + f.near_one(s[0])};
  return {s[1], -c * s[1] - f(s[0])};
}

inline State rk4_step(const KppNonlinearity& f, double c, const State& s, double h, bool near_one = false) {
  auto axpy = [](const State& a, double w, const State& b) { return State{a[0] + w * b[0], a[1] + w * b[1]}; };
  const State k1 = wave_rhs(f, c, s, near_one);
  const State k2 = wave_rhs(f, c, axpy(s, 0.5 * h, k1), near_one);
  const State k3 = wave_rhs(f, c, axpy(s, 0.5 * h, k2), near_one);
  const State k4 = wave_rhs(f, c, axpy(s, h, k3), near_one);
  return {s[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          s[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

inline State advance(const KppNonlinearity& f, double c, State s, double length, double max_step,
                     bool near_one = false) {
  if (length <= 0.0) return s;
  const auto steps = static_cast<int>(std::ceil(length / max_step - 1e-9));
  const double h = length / std::max(steps, 1);
  for (int i = 0; i < std::max(steps, 1); ++i) s = rk4_step(f, c, s, h, near_one);
  return s;
}

/// Root of the cubic Hermite interpolant between two states for U = level.
inline double hermite_crossing(const State& a, const State& b, double h, double level) {
  auto eval = [&](double t) {
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * a[0] + (t3 - 2 * t2 + t) * h * a[1] + (-2 * t3 + 3 * t2) * b[0] +
           (t3 - t2) * h * b[1] - level;
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double m = 0.5 * (lo + hi);
    ((eval(m) > 0.0) == (eval(0.0) > 0.0) ? lo : hi) = m;
  }
  return 0.5 * (lo + hi) * h;
}

}  // namespace detail

/// Least-squares fit of tail samples (x, U) with U > 0.
///  linear_factor = false: ln U = ln K - lambda x (ordinary least squares)
///  linear_factor = true:  ln U = ln A + ln(x + k) - lambda x (Gauss-Newton with damping)
inline TailFit fit_tail_samples(std::span<const double> xs, std::span<const double> us, bool linear_factor) {
  const std::size_t m = xs.size();
  require(m == us.size(), ErrorKind::invalid_input, "tail samples size mismatch");
  require(m >= 10, ErrorKind::insufficient_data, "tail window has fewer than 10 points");
  Eigen::VectorXd y(m);
  for (std::size_t j = 0; j < m; ++j) {
    require(us[j] > 0.0, ErrorKind::invalid_input, "tail samples must be positive");
    y(static_cast<Eigen::Index>(j)) = std::log(us[j]);
  }

  TailFit fit;
  fit.linear_factor = linear_factor;
  fit.points = m;

  // Exponential fit first; it also seeds the linear-factor fit.
  Eigen::MatrixXd a(m, 2);
  for (std::size_t j = 0; j < m; ++j) a.row(static_cast<Eigen::Index>(j)) << 1.0, -xs[j];
  Eigen::Vector2d beta = a.colPivHouseholderQr().solve(y);

  if (!linear_factor) {
    const Eigen::VectorXd r = y - a * beta;
    const double dof = std::max<double>(1.0, static_cast<double>(m) - 2.0);
    const double sigma2 = r.squaredNorm() / dof;
    const Eigen::Matrix2d cov = sigma2 * (a.transpose() * a).inverse();
    fit.lambda_est = beta(1);
    fit.lambda_stderr = std::sqrt(std::max(0.0, cov(1, 1)));
    fit.amplitude = std::exp(beta(0));
    fit.k_const = fit.amplitude;
    fit.rms_residual = std::sqrt(r.squaredNorm() / static_cast<double>(m));
    return fit;
  }

  const double xmin = *std::min_element(xs.begin(), xs.end());
  // parameters p = (ln A, lambda, k)
  Eigen::Vector3d p(0.0, beta(1), std::max(1.0, 1.0 - xmin));
  {
    // Better seed: for fixed k, (ln A, lambda) is linear.
    Eigen::VectorXd yk(m);
    for (std::size_t j = 0; j < m; ++j)
      yk(static_cast<Eigen::Index>(j)) = y(static_cast<Eigen::Index>(j)) - std::log(xs[j] + p(2));
    const Eigen::Vector2d b2 = a.colPivHouseholderQr().solve(yk);
    p(0) = b2(0);
    p(1) = b2(1);
  }
  auto residuals = [&](const Eigen::Vector3d& q, Eigen::VectorXd& r) {
    r.resize(static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const double s = xs[j] + q(2);
      if (s <= 0.0) return false;
      r(static_cast<Eigen::Index>(j)) = y(static_cast<Eigen::Index>(j)) - (q(0) + std::log(s) - q(1) * xs[j]);
    }
    return true;
  };
  Eigen::VectorXd r;
  residuals(p, r);
  double cost = r.squaredNorm();
  double mu = 1e-6;
  Eigen::MatrixXd jac(m, 3);
  for (int iter = 0; iter < 200; ++iter) {
    for (std::size_t j = 0; j < m; ++j)
      jac.row(static_cast<Eigen::Index>(j)) << 1.0, -xs[j], 1.0 / (xs[j] + p(2));
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * r;
    bool accepted = false;
    for (int tries = 0; tries < 30 && !accepted; ++tries) {
      Eigen::Matrix3d lhs = jtj;
      lhs.diagonal() += mu * jtj.diagonal();
      const Eigen::Vector3d step = lhs.ldlt().solve(jtr);
      Eigen::Vector3d trial = p + step;
      Eigen::VectorXd rt;
      if (residuals(trial, rt) && rt.squaredNorm() <= cost) {
        const double improvement = cost - rt.squaredNorm();
        p = trial;
        r = rt;
        cost = rt.squaredNorm();
        mu = std::max(mu / 10.0, 1e-15);
        accepted = true;
        if (step.norm() < 1e-14 * (1.0 + p.norm()) || improvement <= 1e-30) iter = 1000;
      } else {
        mu *= 10.0;
      }
    }
    if (!accepted) break;
  }
  for (std::size_t j = 0; j < m; ++j)
    jac.row(static_cast<Eigen::Index>(j)) << 1.0, -xs[j], 1.0 / (xs[j] + p(2));
  const double dof = std::max<double>(1.0, static_cast<double>(m) - 3.0);
  const Eigen::Matrix3d cov = (cost / dof) * (jac.transpose() * jac).inverse();
  fit.lambda_est = p(1);
  fit.lambda_stderr = std::sqrt(std::max(0.0, cov(1, 1)));
  fit.amplitude = std::exp(p(0));
  fit.k_const = p(2);
  fit.rms_residual = std::sqrt(cost / static_cast<double>(m));
  return fit;
}

/// x-interval on which the profile lies in [u_low, u_high] (default fit window).
inline std::pair<double, double> tail_window(const WaveProfile& profile, double u_low = 1e-8,
                                             double u_high = 1e-2) {
  return {profile.position_of(u_high), profile.position_of(u_low)};
}

inline TailFit tail_fit(const WaveProfile& profile, std::pair<double, double> window, double cstar) {
  std::vector<double> xs, us;
  for (std::size_t j = 0; j < profile.grid.n; ++j) {
    const double x = profile.grid.x(j);
    if (x < window.first - 1e-12 || x > window.second + 1e-12) continue;
    require(profile.values[j] < 1e-2, ErrorKind::invalid_input, "tail window reaches U >= 1e-2");
    xs.push_back(x);
    us.push_back(profile.values[j]);
  }
  const bool minimal = std::abs(profile.speed - cstar) < 1e-9;
  return fit_tail_samples(xs, us, minimal);
}

struct ProfileOptions {
  double dx = 0.01;
  double start_offset = 1e-10;  ///< initial distance from the U = 1 equilibrium
};

/// Monotone front U'' + c U' + f(U) = 0, U(-inf) = 1, U(+inf) = 0 on [-half_width, half_width],
/// translated so that U(0) = 1/2.
///
/// The orbit leaves the saddle (1, 0) along its one-dimensional unstable manifold and is
/// integrated forward with RK4 into the stable node at 0; errors transverse to the orbit decay.
inline WaveProfile solve_profile(const KppNonlinearity& f, double c, double half_width, double tol,
                                 ProfileOptions options = {}) {
  const DispersionData disp = dispersion(f, c);
  require(tol > 1e-14 && tol < 1e-4, ErrorKind::invalid_input, "tol must lie in (1e-14, 1e-4)");
  require(half_width > 1.0, ErrorKind::invalid_input, "half_width too small");
  const double f1 = f.fprime1();
  require(f1 < 0.0, ErrorKind::invalid_input, "f'(1) must be negative");

  const double mu = 0.5 * (-c + std::sqrt(c * c - 4.0 * f1));  // growth rate of 1 - U at -infinity
  const double delta = options.start_offset;
  const double h = std::min(options.dx, 0.5 * std::pow(tol, 0.25));
  // (1 - U, -U') on the unstable eigendirection of the saddle.
  const detail::State start{delta, mu * delta};

  // Pass 1: distance D from the start point to the 1/2 crossing.
  double distance = 0.0;
  {
    detail::State s = start;
    double xi = 0.0;
    const double limit = 50.0 * half_width + 200.0 / mu;
    while (true) {
      const detail::State next = detail::rk4_step(f, c, s, h, true);
      if (!(next[0] > 0.0 && next[1] > 0.0 && std::isfinite(next[0])))
        throw Error(ErrorKind::no_convergence, "monotonicity lost before reaching U = 1/2 (xi=" +
                                                   std::to_string(xi) + ", 1-U=" + std::to_string(next[0]) + ")");
      if (next[0] >= 0.5) {
        distance = xi + detail::hermite_crossing(s, next, h, 0.5);
        break;
      }
      s = next;
      xi += h;
      require(xi < limit, ErrorKind::no_convergence, "U = 1/2 not reached");
    }
  }

  const Grid1D grid = Grid1D::covering(-half_width, half_width, options.dx);
  WaveProfile profile;
  profile.speed = c;
  profile.grid = grid;
  profile.values.assign(grid.n, 0.0);
  profile.derivatives.assign(grid.n, 0.0);

  // Pass 2 (repeated as a Newton correction of the translation). Grid points left of the
  // anchor are integrated in the (1 - U) variables, the rest in U.
  const auto zero_index = static_cast<std::size_t>(std::llround(half_width / grid.dx));
  for (int newton = 0; newton < 6; ++newton) {
    const double xs = -distance;  // grid coordinate of the start point
    detail::State s = start;
    double x = xs;
    bool near_one = true;
    for (std::size_t j = 0; j < grid.n; ++j) {
      const double xj = grid.x(j);
      if (xj < xs) {
        const double e = delta * std::exp(mu * (xj - xs));
        profile.values[j] = 1.0 - e;
        profile.derivatives[j] = -mu * e;
        continue;
      }
      s = detail::advance(f, c, s, xj - x, h, near_one);
      x = xj;
      if (near_one) {
        if (!(std::isfinite(s[0]) && s[0] > 0.0 && s[1] > 0.0))
          throw Error(ErrorKind::no_convergence, "monotonicity lost at x=" + std::to_string(xj));
        profile.values[j] = 1.0 - s[0];
        profile.derivatives[j] = -s[1];
        if (j == zero_index) {
          s = {1.0 - s[0], -s[1]};
          near_one = false;
        }
        continue;
      }
      if (!(std::isfinite(s[0]) && s[0] < 1.0 && s[0] >= 0.0 && s[1] < 0.0)) {
        // Deep-tail underflow is harmless; anything else means the orbit left the manifold.
        if (s[0] >= 0.0 && s[0] < 1e-280) {
          profile.values[j] = std::max(s[0], 0.0);
          profile.derivatives[j] = std::min(s[1], 0.0);
          continue;
        }
        throw Error(ErrorKind::no_convergence,
                    "monotonicity lost at x=" + std::to_string(xj) + " (U=" + std::to_string(s[0]) +
                        ", U'=" + std::to_string(s[1]) + ")");
      }
      profile.values[j] = s[0];
      profile.derivatives[j] = s[1];
    }
    const double miss = profile.values[zero_index] - 0.5;
    if (std::abs(miss) < 1e-3 * tol) break;
    distance -= miss / profile.derivatives[zero_index];
  }

  require(profile.values.front() > 1.0 - 1e-4, ErrorKind::invalid_input,
          "half_width too small: U(-half_width) = " + std::to_string(profile.values.front()));
  require(profile.values.back() < 1e-6, ErrorKind::invalid_input,
          "half_width too small: U(half_width) = " + std::to_string(profile.values.back()));

  try {
    profile.tail = tail_fit(profile, tail_window(profile), disp.cstar);
  } catch (const Error&) {
    profile.tail.reset();  // window not resolved on this domain
  }
  return profile;
}

/// max_j |U'' + c U' + f(U)| with sixth-order centered differences on the grid samples.
inline double profile_residual(const WaveProfile& profile, const KppNonlinearity& f) {
  static constexpr std::array<double, 4> d2{-49.0 / 18.0, 3.0 / 2.0, -3.0 / 20.0, 1.0 / 90.0};
  static constexpr std::array<double, 4> d1{0.0, 3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0};
  const auto& u = profile.values;
  const double dx = profile.grid.dx;
  double worst = 0.0;
  for (std::size_t j = 3; j + 3 < u.size(); ++j) {
    double second = d2[0] * u[j], first = 0.0;
    for (std::size_t m = 1; m <= 3; ++m) {
      second += d2[m] * (u[j + m] + u[j - m]);
      first += d1[m] * (u[j + m] - u[j - m]);
    }
    const double r = second / (dx * dx) + profile.speed * first / dx + f(u[j]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

struct Alignment {
  double shift = 0.0;         ///< field(x) ~ U(x - shift)
  double sup_distance = 0.0;  ///< on the window where U(x - shift) lies in [0.01, 0.99]
};

/// Translation minimizing the sup distance between `field` and the shifted profile.
inline Alignment shift_align(std::span<const double> field, const Grid1D& grid, const WaveProfile& profile) {
  require(field.size() == grid.n, ErrorKind::invalid_input, "field/grid size mismatch");
  const auto [lo, hi] = std::minmax_element(field.begin(), field.end());
  require(*lo <= 0.05 && *hi >= 0.95, ErrorKind::no_front, "field does not span [0.05, 0.95]");

  // Rightmost crossing of 1/2 seeds the search.
  double seed = NAN;
  for (std::size_t j = grid.n - 1; j-- > 0;) {
    const double a = field[j] - 0.5, b = field[j + 1] - 0.5;
    if ((a >= 0.0 && b < 0.0) || (a < 0.0 && b >= 0.0)) {
      seed = grid.x(j) + grid.dx * a / (a - b);
      break;
    }
  }
  require(std::isfinite(seed), ErrorKind::no_front, "field does not cross 1/2");

  const double win_left = profile.position_of(0.99);
  const double win_right = profile.position_of(0.01);
  auto objective = [&](double s) {
    const auto j0 = static_cast<std::ptrdiff_t>(std::ceil((win_left + s - grid.x0) / grid.dx - 1e-9));
    const auto j1 = static_cast<std::ptrdiff_t>(std::floor((win_right + s - grid.x0) / grid.dx + 1e-9));
    double worst = 0.0;
    for (std::ptrdiff_t j = std::max<std::ptrdiff_t>(j0, 0);
         j <= std::min<std::ptrdiff_t>(j1, static_cast<std::ptrdiff_t>(grid.n) - 1); ++j) {
      const auto ju = static_cast<std::size_t>(j);
      worst = std::max(worst, std::abs(field[ju] - profile(grid.x(ju) - s)));
    }
    return worst;
  };

  // Golden-section search.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = seed - 1.5, b = seed + 1.5;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = objective(c), fd = objective(d);
  while (b - a > 1e-12 * std::max(1.0, std::abs(seed))) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = objective(d);
    }
  }
  const double s = 0.5 * (a + b);
  return {s, objective(s)};
}

}  // namespace cascade

#endif  // CASCADE_TRAVELING_WAVE_HPP
