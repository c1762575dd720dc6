#ifndef CASCADE_CASCADE_SOLVER_HPP
#define CASCADE_CASCADE_SOLVER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/error.hpp"
#include "cascade/kpp_core.hpp"
#include "cascade/tridiagonal.hpp"

namespace cascade {

/// Moving coordinate xi(t) = cstar t - a_coeff ln(t + t0).
struct FrameSpec {
  double cstar = 2.0;
  double a_coeff = 1.5;
  double t0 = 10.0;

  double position(double t) const { return cstar * t - a_coeff * std::log(t + t0); }
  /// d xi / dt
  double velocity(double t) const { return cstar - a_coeff / (t + t0); }

  /// Frame in which component i (1-based) of a k-component cascade is asymptotically
  /// stationary: a = (3/2 + i - k) / lambda*.
  static FrameSpec for_component(std::size_t k, std::size_t i, double lambdastar, double t0) {
    const double a = (1.5 + static_cast<double>(i) - static_cast<double>(k)) / lambdastar;
    return {2.0 * lambdastar, a, t0};
  }

  static std::vector<FrameSpec> cascade(std::size_t k, double lambdastar, double t0) {
    std::vector<FrameSpec> frames;
    for (std::size_t i = 1; i <= k; ++i) frames.push_back(for_component(k, i, lambdastar, t0));
    return frames;
  }
};

enum class WindowPolicy { fixed, follow_front };
enum class Boundary { heaviside_clamp, dirichlet_zero };

struct EvolveConfig {
  std::size_t k = 1;
  double alpha = 0.0;
  KppNonlinearity f = KppNonlinearity::quadratic();
  Grid1D grid;
  double dt = 5e-3;
  double t_end = 1.0;
  std::optional<std::vector<FrameSpec>> frames;
  WindowPolicy window_policy = WindowPolicy::fixed;
  Boundary boundary = Boundary::heaviside_clamp;
  std::vector<double> snapshot_times;
  double cfl_safety = 10.0;
  /// follow_front: recentre once the rightmost 1/2-level passes this fraction of the window...
  double follow_trigger = 0.8;
  /// ...placing it at this fraction afterwards.
  double follow_target = 0.3;
};

struct Diagnostics {
  std::size_t k = 1;
  std::size_t steps = 0;
  std::vector<double> step_min;  ///< [step * k + i]
  std::vector<double> step_max;
  std::vector<std::size_t> clamp_count;  ///< per component, excursions beyond 1e-12
  std::size_t window_shifts = 0;

  std::size_t total_clamps() const {
    std::size_t s = 0;
    for (auto c : clamp_count) s += c;
    return s;
  }
};

struct Trajectory {
  std::vector<FieldStack> snapshots;
  Diagnostics diagnostics;
};

/// Called every `every` steps with the current state.
struct StepObserver {
  std::size_t every = 0;
  std::function<void(const FieldStack&)> callback;
};

enum class SystemKind { nonlinear, linearized };

/// First-order IMEX stepper for the triangular system
///   v^i_t = v^i_xx + b_i(t) v^i_x + R_i,  b_i = xi_i'(t) (0 in the lab frame),
/// with R_i = f(v^i) + alpha P^i (1 - v^i) (nonlinear) or f'(0) v^i + alpha P^i (linearized),
/// where P^i is component i+1 read at x + xi_i(t) - xi_{i+1}(t).
///
/// Diffusion and advection are implicit (centered, one tridiagonal solve per component);
/// reaction and coupling are explicit and use the previous step's values.
class CascadeEvolver {
 public:
  CascadeEvolver(EvolveConfig config, FieldStack init, SystemKind system)
      : cfg_(std::move(config)), system_(system), state_(std::move(init)) {
    validate();
    const std::size_t k = cfg_.k, n = state_.grid().n;
    lower_.resize(n);
    diag_.resize(n);
    upper_.resize(n);
    solvers_.resize(k);
    factored_velocity_.assign(k, NAN);
    diag_out_.k = k;
    diag_out_.clamp_count.assign(k, 0);
    state_.set_time(0.0);
  }

  const FieldStack& state() const { return state_; }
  FieldStack& state() { return state_; }
  double time() const { return static_cast<double>(step_index_) * cfg_.dt; }
  std::size_t step_index() const { return step_index_; }
  const Diagnostics& diagnostics() const { return diag_out_; }
  const EvolveConfig& config() const { return cfg_; }

  /// Coupling shift xi_i(t) - xi_{i+1}(t) for 0-based component i.
  double coupling_shift(std::size_t i, double t) const {
    if (!cfg_.frames) return 0.0;
    return (*cfg_.frames)[i].position(t) - (*cfg_.frames)[i + 1].position(t);
  }

  /// Advances one time step.
  void step() {
    const std::size_t k = cfg_.k;
    const std::size_t n = state_.grid().n;
    const double t = time();
    const double dt = cfg_.dt;
    const double alpha = cfg_.alpha;
    const bool quadratic = cfg_.f.kind() == NonlinearityKind::quadratic;
    const double f0 = cfg_.f.fprime0();

    // Partner values come from the previous step, so every right-hand side is built first.
    next_.resize(k * n);
    for (std::size_t i = 0; i < k; ++i) {
      const double* v = state_.component(i).data();
      const bool coupled = i + 1 < k && alpha != 0.0;
      const double* p = coupled ? partner_values(i, t) : nullptr;
      double* out = next_.data() + i * n;
      if (system_ == SystemKind::linearized) {
        for (std::size_t j = 0; j < n; ++j) out[j] = v[j] + dt * (f0 * v[j] + (coupled ? alpha * p[j] : 0.0));
      } else if (quadratic) {
        if (coupled)
          for (std::size_t j = 0; j < n; ++j) out[j] = v[j] + dt * (v[j] + alpha * p[j]) * (1.0 - v[j]);
        else
          for (std::size_t j = 0; j < n; ++j) out[j] = v[j] + dt * v[j] * (1.0 - v[j]);
      } else {
        for (std::size_t j = 0; j < n; ++j)
          out[j] = v[j] + dt * (cfg_.f(v[j]) + (coupled ? alpha * p[j] * (1.0 - v[j]) : 0.0));
      }
      out[0] = left_value(i);
      out[n - 1] = right_value(i);
    }

    const double t_next = t + dt;
    for (std::size_t i = 0; i < k; ++i) {
      const double b = cfg_.frames ? (*cfg_.frames)[i].velocity(t_next) : 0.0;
      if (!(factored_velocity_[i] == b)) factor(i, b);
      solvers_[i].solve(std::span<double>(next_.data() + i * n, n));
    }

    for (std::size_t i = 0; i < k; ++i) {
      double* v = next_.data() + i * n;
      double lo = INFINITY, hi = -INFINITY;
      std::size_t clamps = 0;
      bool finite = true;
      const double upper = system_ == SystemKind::nonlinear ? 1.0 : INFINITY;
      for (std::size_t j = 0; j < n; ++j) {
        double x = v[j];
        finite = finite && std::isfinite(x);
        clamps += (x < -1e-12) + (x > upper + 1e-12);
        x = std::clamp(x, 0.0, upper);
        x = x < 1e-150 ? 0.0 : x;  // squaring smaller values underflows
        v[j] = x;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      if (!finite)
        throw Error(ErrorKind::numerical_blowup, "non-finite value in component " + std::to_string(i + 1) +
                                                     " at step " + std::to_string(step_index_ + 1));
      diag_out_.clamp_count[i] += clamps;
      diag_out_.step_min.push_back(lo);
      diag_out_.step_max.push_back(hi);
    }
    state_.swap_values(next_);
    ++step_index_;
    ++diag_out_.steps;
    state_.set_time(time());
    if (cfg_.window_policy == WindowPolicy::follow_front) follow_front();
  }

  /// Runs to t_end, recording snapshots at the configured times.
  Trajectory run(const StepObserver& observer = {}) {
    Trajectory traj;
    const auto total = static_cast<std::size_t>(std::llround(cfg_.t_end / cfg_.dt));
    std::vector<std::size_t> snap_steps;
    for (double ts : cfg_.snapshot_times) snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / cfg_.dt)));
    std::size_t next_snap = 0;
    auto record = [&] {
      while (next_snap < snap_steps.size() && snap_steps[next_snap] == step_index_) {
        traj.snapshots.push_back(state_);
        ++next_snap;
      }
    };
    record();
    if (observer.every && observer.callback) observer.callback(state_);
    while (step_index_ < total) {
      step();
      record();
      if (observer.every && observer.callback && step_index_ % observer.every == 0) observer.callback(state_);
    }
    traj.diagnostics = diag_out_;
    return traj;
  }

 private:
  void validate() {
    require(cfg_.k >= 1, ErrorKind::configuration, "k must be at least 1");
    require(state_.k() == cfg_.k, ErrorKind::invalid_input, "initial data has wrong component count");
    require(cfg_.dt > 0.0 && cfg_.t_end > 0.0, ErrorKind::configuration, "dt and t_end must be positive");
    require(cfg_.alpha >= 0.0, ErrorKind::configuration, "alpha must be non-negative");
    const Grid1D& g = state_.grid();
    require(cfg_.dt <= cfg_.cfl_safety * g.dx * g.dx, ErrorKind::configuration,
            "time step violates dt <= safety * dx^2 (dt=" + std::to_string(cfg_.dt) +
                ", dx=" + std::to_string(g.dx) + ")");
    const double rate = std::max(std::abs(cfg_.f.fprime0()), 1.0) + cfg_.alpha;
    require(cfg_.dt * rate < 1.0, ErrorKind::configuration, "explicit reaction step too large");
    if (cfg_.frames) {
      require(cfg_.frames->size() == cfg_.k, ErrorKind::configuration, "one frame per component required");
      for (const auto& fr : *cfg_.frames) {
        require(fr.t0 > 0.0, ErrorKind::configuration, "frame t0 must be positive");
        // Centered advection keeps the implicit matrix an M-matrix while |b| dx <= 2.
        require(std::abs(fr.velocity(0.0)) * g.dx <= 2.0 && std::abs(fr.cstar) * g.dx <= 2.0,
                ErrorKind::configuration, "grid Peclet number too large for the frame velocity");
      }
      require(cfg_.window_policy == WindowPolicy::fixed, ErrorKind::configuration,
              "follow_front applies to lab-frame runs only");
    }
    std::vector<double> ts = cfg_.snapshot_times;
    for (std::size_t m = 1; m < ts.size(); ++m)
      require(ts[m] > ts[m - 1], ErrorKind::configuration, "snapshot times must be strictly increasing");
    for (const auto v : state_.raw()) require(std::isfinite(v), ErrorKind::invalid_input, "non-finite initial data");
  }

  double left_value(std::size_t i) const {
    if (cfg_.boundary == Boundary::dirichlet_zero) return 0.0;
    (void)i;
    return 1.0;
  }
  double right_value(std::size_t) const { return 0.0; }

  void factor(std::size_t i, double velocity) {
    const Grid1D& g = state_.grid();
    const std::size_t n = g.n;
    const double r = cfg_.dt / (g.dx * g.dx);
    const double q = cfg_.dt * velocity / (2.0 * g.dx);
    for (std::size_t j = 1; j + 1 < n; ++j) {
      lower_[j] = -r + q;
      diag_[j] = 1.0 + 2.0 * r;
      upper_[j] = -r - q;
    }
    lower_[0] = upper_[0] = 0.0;
    diag_[0] = 1.0;
    lower_[n - 1] = upper_[n - 1] = 0.0;
    diag_[n - 1] = 1.0;
    solvers_[i].factor(lower_, diag_, upper_);
    factored_velocity_[i] = velocity;
  }

  /// Component i+1 read at x_j + xi_i(t) - xi_{i+1}(t), linear interpolation.
  const double* partner_values(std::size_t i, double t) {
    const Grid1D& g = state_.grid();
    const std::size_t n = g.n;
    auto w = state_.component(i + 1);
    const double shift = coupling_shift(i, t);
    if (shift == 0.0) return w.data();
    if (std::abs(shift) >= g.span())
      throw Error(ErrorKind::domain_exhausted,
                  "coupling shift " + std::to_string(shift) + " exceeds the grid at t=" + std::to_string(t));
    partner_.resize(n);
    const double s = shift / g.dx;
    const double fl = std::floor(s);
    const auto m = static_cast<std::ptrdiff_t>(fl);
    const double frac = s - fl;
    const double left = cfg_.boundary == Boundary::dirichlet_zero ? 0.0 : w[0];
    const auto nn = static_cast<std::ptrdiff_t>(n);
    for (std::ptrdiff_t j = 0; j < nn; ++j) {
      const std::ptrdiff_t a = j + m, b = a + 1;
      const double va = a < 0 ? left : (a >= nn ? 0.0 : w[static_cast<std::size_t>(a)]);
      const double vb = b < 0 ? left : (b >= nn ? 0.0 : w[static_cast<std::size_t>(b)]);
      partner_[static_cast<std::size_t>(j)] = (1.0 - frac) * va + frac * vb;
    }
    return partner_.data();
  }

  void follow_front() {
    const Grid1D& g = state_.grid();
    const std::size_t n = g.n, k = cfg_.k;
    std::size_t front = 0;
    for (std::size_t j = n; j-- > 0;) {
      bool hit = false;
      for (std::size_t i = 0; i < k && !hit; ++i) hit = state_(i, j) >= 0.5;
      if (hit) {
        front = j;
        break;
      }
    }
    const double trigger = cfg_.follow_trigger * static_cast<double>(n - 1);
    if (static_cast<double>(front) <= trigger) return;
    const auto cells = static_cast<std::ptrdiff_t>(
        std::llround(static_cast<double>(front) - cfg_.follow_target * static_cast<double>(n - 1)));
    if (cells <= 0) return;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < static_cast<std::size_t>(cells); ++j)
        if (std::abs(state_(i, j) - 1.0) > 1e-12)
          throw Error(ErrorKind::domain_exhausted,
                      "follow_front would discard cells not equal to 1 (component " + std::to_string(i + 1) +
                          ", x=" + std::to_string(g.x(j)) + ", t=" + std::to_string(time()) + ")");
    std::vector<double> ones(k, 1.0), zeros(k, 0.0);
    state_.shift_window(cells, ones, zeros);
    ++diag_out_.window_shifts;
  }

  EvolveConfig cfg_;
  SystemKind system_;
  FieldStack state_;
  std::size_t step_index_ = 0;
  std::vector<double> lower_, diag_, upper_, partner_, next_;
  std::vector<TridiagonalSolver> solvers_;
  std::vector<double> factored_velocity_;
  Diagnostics diag_out_;
};

/// Lab-frame evolution of the nonlinear system from front-like data.
inline Trajectory evolve_lab(EvolveConfig config, FieldStack init, const StepObserver& observer = {}) {
  config.frames.reset();
  config.boundary = Boundary::heaviside_clamp;
  require(init.in_unit_range(), ErrorKind::invalid_input, "initial data must lie in [0, 1]");
  CascadeEvolver ev(std::move(config), std::move(init), SystemKind::nonlinear);
  return ev.run(observer);
}

/// Nonlinear system with component i written in its own frame xi_i(t).
inline Trajectory evolve_moving_frame(EvolveConfig config, FieldStack init, const StepObserver& observer = {}) {
  require(config.frames.has_value(), ErrorKind::configuration, "moving-frame evolution needs frames");
  require(init.in_unit_range(), ErrorKind::invalid_input, "initial data must lie in [0, 1]");
  config.window_policy = WindowPolicy::fixed;
  CascadeEvolver ev(std::move(config), std::move(init), SystemKind::nonlinear);
  return ev.run(observer);
}

/// Linearized system with f'(0) V reaction and V(t, 0) = 0 on the half line x > 0.
inline Trajectory evolve_linear_dirichlet(EvolveConfig config, FieldStack init, const StepObserver& observer = {}) {
  require(config.frames.has_value(), ErrorKind::configuration, "linear Dirichlet evolution needs frames");
  require(std::abs(init.grid().x0) < 1e-12, ErrorKind::invalid_input, "half-line grid must start at x = 0");
  for (double v : init.raw()) require(v >= 0.0, ErrorKind::invalid_input, "initial data must be non-negative");
  config.boundary = Boundary::dirichlet_zero;
  config.window_policy = WindowPolicy::fixed;
  CascadeEvolver ev(std::move(config), std::move(init), SystemKind::linearized);
  return ev.run(observer);
}

struct OrderingEntry {
  double time;
  bool holds;
  double worst_margin;  ///< min over compared x of scale * a - b
};

struct OrderingReport {
  std::vector<OrderingEntry> entries;
  bool all_hold() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.holds; });
  }
};

/// Checks scale * a >= b - tolerance pointwise on x > x_min for every snapshot and component.
/// Grids must share the spacing and be aligned; the comparison runs on their overlap.
inline OrderingReport check_ordering(const Trajectory& a, const Trajectory& b, double scale, double x_min = 0.0,
                                     double tolerance = 0.0) {
  require(a.snapshots.size() == b.snapshots.size(), ErrorKind::invalid_input, "snapshot counts differ");
  OrderingReport report;
  for (std::size_t s = 0; s < a.snapshots.size(); ++s) {
    const FieldStack& fa = a.snapshots[s];
    const FieldStack& fb = b.snapshots[s];
    require(std::abs(fa.time() - fb.time()) < 1e-9, ErrorKind::invalid_input, "snapshot times differ");
    require(fa.k() == fb.k(), ErrorKind::invalid_input, "component counts differ");
    const Grid1D& ga = fa.grid();
    const Grid1D& gb = fb.grid();
    require(std::abs(ga.dx - gb.dx) <= 1e-12 * ga.dx, ErrorKind::invalid_input, "grid spacings differ");
    const double offset = (gb.x0 - ga.x0) / ga.dx;
    const double rounded = std::round(offset);
    require(std::abs(offset - rounded) < 1e-6, ErrorKind::invalid_input, "grids are not aligned");
    const auto off = static_cast<std::ptrdiff_t>(rounded);  // index in a of b's first point
    double worst = INFINITY;
    for (std::size_t i = 0; i < fa.k(); ++i) {
      for (std::size_t jb = 0; jb < gb.n; ++jb) {
        const std::ptrdiff_t ja = static_cast<std::ptrdiff_t>(jb) + off;
        if (ja < 0 || ja >= static_cast<std::ptrdiff_t>(ga.n)) continue;
        if (gb.x(jb) <= x_min) continue;
        worst = std::min(worst, scale * fa(i, static_cast<std::size_t>(ja)) - fb(i, jb));
      }
    }
    require(std::isfinite(worst), ErrorKind::invalid_input, "grids do not overlap on x > x_min");
    report.entries.push_back({fa.time(), worst >= -tolerance, worst});
  }
  return report;
}

/// Linear resampling of one component onto another grid.
inline std::vector<double> resample(std::span<const double> values, const Grid1D& from, const Grid1D& to,
                                    double outside_left, double outside_right) {
  std::vector<double> out(to.n);
  for (std::size_t j = 0; j < to.n; ++j) out[j] = interpolate_linear(values, from, to.x(j), outside_left, outside_right);
  return out;
}

/// Grid of a lab-frame field expressed in the frame coordinate x - xi(t).
inline Grid1D frame_grid(const Grid1D& lab, const FrameSpec& frame, double t) {
  return lab.shifted(-frame.position(t));
}

}  // namespace cascade

#endif  // CASCADE_CASCADE_SOLVER_HPP
