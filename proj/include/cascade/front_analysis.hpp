#ifndef CASCADE_FRONT_ANALYSIS_HPP
#define CASCADE_FRONT_ANALYSIS_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cascade/cascade_solver.hpp"
#include "cascade/error.hpp"
#include "cascade/kpp_core.hpp"
#include "cascade/traveling_wave.hpp"

namespace cascade {

struct LevelCrossings {
  std::vector<double> positions;  ///< increasing
  double max() const { return positions.back(); }
  double min() const { return positions.front(); }
};

/// Every crossing of `level`, located by linear interpolation between neighbouring nodes.
inline LevelCrossings extract_level_set(std::span<const double> field, const Grid1D& grid, double level) {
  require(level > 0.0 && level < 1.0, ErrorKind::invalid_input, "level must lie in (0, 1)");
  require(field.size() == grid.n, ErrorKind::invalid_input, "field/grid size mismatch");
  LevelCrossings out;
  for (std::size_t j = 0; j + 1 < grid.n; ++j) {
    const double a = field[j] - level, b = field[j + 1] - level;
    if (a == 0.0) {
      out.positions.push_back(grid.x(j));
    } else if ((a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0)) {
      out.positions.push_back(grid.x(j) + grid.dx * a / (a - b));
    }
  }
  if (grid.n > 0 && field[grid.n - 1] == level) out.positions.push_back(grid.x_end());
  require(!out.positions.empty(), ErrorKind::no_front, "field never crosses level " + std::to_string(level));
  return out;
}

enum class LevelSelect { max_level_set, min_level_set };

struct TraceSample {
  double t;
  double position;
};

struct FrontTrace {
  double level = 0.5;
  LevelSelect which = LevelSelect::max_level_set;
  std::vector<TraceSample> samples;

  void push(double t, double position) {
    require(std::isfinite(position), ErrorKind::invalid_input, "non-finite front position");
    require(samples.empty() || t > samples.back().t, ErrorKind::invalid_input, "trace times must increase");
    samples.push_back({t, position});
  }
};

/// Records one trace per component while a run is in progress.
class FrontRecorder {
 public:
  FrontRecorder(std::size_t k, double level = 0.5, LevelSelect which = LevelSelect::max_level_set)
      : traces_(k, FrontTrace{level, which, {}}) {}

  void record(const FieldStack& state) {
    for (std::size_t i = 0; i < traces_.size(); ++i) {
      const auto crossings = extract_level_set(state.component(i), state.grid(), traces_[i].level);
      traces_[i].push(state.time(),
                      traces_[i].which == LevelSelect::max_level_set ? crossings.max() : crossings.min());
    }
  }

  /// Observer that records every `every` steps, skipping times before `t_min`.
  StepObserver observer(std::size_t every, double t_min = 0.0) {
    return {every, [this, t_min](const FieldStack& s) {
              if (s.time() >= t_min - 1e-12) record(s);
            }};
  }

  const std::vector<FrontTrace>& traces() const { return traces_; }

 private:
  std::vector<FrontTrace> traces_;
};

struct TimeWindow {
  double begin;
  double end;
};

/// Model m(t) = c_hat t - a_hat ln t + b_hat.
struct FrontFit {
  double c_hat = 0.0;
  double a_hat = 0.0;
  double b_hat = 0.0;
  double rms_residual = 0.0;
  TimeWindow window{0.0, 0.0};
  std::size_t samples = 0;
};

namespace detail {

struct LineFit {
  double slope;
  double intercept;
  double rms;
};

/// Ordinary least squares y = slope * x + intercept, centred for conditioning.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mx += x[j];
    my += y[j];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    sxx += (x[j] - mx) * (x[j] - mx);
    sxy += (x[j] - mx) * (y[j] - my);
  }
  require(sxx > 0.0, ErrorKind::insufficient_data, "regressor has no spread");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double r = y[j] - slope * x[j] - intercept;
    ss += r * r;
  }
  return {slope, intercept, std::sqrt(ss / static_cast<double>(n))};
}

}  // namespace detail

/// Regresses position - cstar t on (-ln t, 1) over the window; the linear speed stays frozen.
inline FrontFit fit_log_correction(const FrontTrace& trace, double cstar, TimeWindow window) {
  require(!trace.samples.empty(), ErrorKind::insufficient_data, "empty front trace");
  require(window.begin > 0.0 && window.end > window.begin, ErrorKind::invalid_input, "bad fit window");
  require(window.end >= 10.0 * window.begin * (1.0 - 1e-12), ErrorKind::invalid_input,
          "fit window must span at least one decade in t");
  const double tol = 1e-9 * window.end;
  require(window.begin >= trace.samples.front().t - tol && window.end <= trace.samples.back().t + tol,
          ErrorKind::invalid_input, "fit window exceeds the sampled range");
  std::vector<double> x, y;
  for (const auto& s : trace.samples) {
    if (s.t < window.begin - tol || s.t > window.end + tol) continue;
    x.push_back(-std::log(s.t));
    y.push_back(s.position - cstar * s.t);
  }
  require(x.size() >= 20, ErrorKind::insufficient_data,
          "need at least 20 samples in the fit window, have " + std::to_string(x.size()));
  const auto line = detail::fit_line(x, y);
  return {cstar, line.slope, line.intercept, line.rms, window, x.size()};
}

struct Separation {
  std::vector<double> times;
  std::vector<double> differences;  ///< a - b
  double slope_vs_ln_t = 0.0;
};

inline Separation front_separation(const FrontTrace& a, const FrontTrace& b) {
  require(a.samples.size() == b.samples.size(), ErrorKind::invalid_input, "traces have different lengths");
  require(a.samples.size() >= 2, ErrorKind::insufficient_data, "need at least two samples");
  Separation out;
  std::vector<double> logs;
  for (std::size_t j = 0; j < a.samples.size(); ++j) {
    const double t = a.samples[j].t;
    require(std::abs(t - b.samples[j].t) <= 1e-9 * std::max(1.0, std::abs(t)), ErrorKind::invalid_input,
            "trace times differ");
    require(t > 0.0, ErrorKind::invalid_input, "separation slope needs t > 0");
    out.times.push_back(t);
    out.differences.push_back(a.samples[j].position - b.samples[j].position);
    logs.push_back(std::log(t));
  }
  out.slope_vs_ln_t = detail::fit_line(logs, out.differences).slope;
  return out;
}

/// Restricts a trace to a time window.
inline FrontTrace restrict_trace(const FrontTrace& trace, TimeWindow window) {
  FrontTrace out{trace.level, trace.which, {}};
  const double tol = 1e-9 * window.end;
  for (const auto& s : trace.samples)
    if (s.t >= window.begin - tol && s.t <= window.end + tol) out.samples.push_back(s);
  return out;
}

/// Finite-time estimate of x_infty: the s with field(y) ~ U(y + s), where y is the frame coordinate.
/// `grid` must already be expressed in the frame (see frame_grid).
inline double estimate_x_infty(std::span<const double> field, const Grid1D& grid, const WaveProfile& profile) {
  const auto fit = shift_align(field, grid, profile);
  require(fit.sup_distance <= 0.2, ErrorKind::not_converged,
          "shape distance " + std::to_string(fit.sup_distance) + " exceeds 0.2");
  return -fit.shift;
}

/// Same estimate from a lab-frame field at time t.
inline double estimate_x_infty(std::span<const double> lab_field, const Grid1D& lab_grid, const FrameSpec& frame,
                               double t, const WaveProfile& profile) {
  return estimate_x_infty(lab_field, frame_grid(lab_grid, frame, t), profile);
}

}  // namespace cascade

#endif  // CASCADE_FRONT_ANALYSIS_HPP
