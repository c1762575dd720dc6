#ifndef CASCADE_KPP_CORE_HPP
#define CASCADE_KPP_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cascade/error.hpp"

namespace cascade {

// ---------------------------------------------------------------------------
// Reaction terms
// ---------------------------------------------------------------------------

enum class NonlinearityKind { quadratic, mckean, polynomial };

inline std::string to_string(NonlinearityKind kind) {
  switch (kind) {
    case NonlinearityKind::quadratic: return "quadratic";
    case NonlinearityKind::mckean: return "mckean";
    case NonlinearityKind::polynomial: return "polynomial";
  }
  return "unknown";
}

struct Evaluation {
  double value;
  bool clamped;  ///< the argument was outside [0, 1] and was clamped
};

/// Monostable reaction term f on [0, 1] with exact linearization data.
///
/// Three families are supported so that f'(0) and f'(1) are known in closed form:
///  - quadratic:  f(u) = u - u^2
///  - mckean:     f(u) = beta (1-u) - beta sum_{j>=1} p_j (1-u)^j,
///                coefficients = {beta, p_1, p_2, ...}
///  - polynomial: f(u) = sum_j c_j u^j, coefficients = {c_0, c_1, ...}
class KppNonlinearity {
 public:
  static KppNonlinearity quadratic() { return KppNonlinearity(NonlinearityKind::quadratic, {}); }

  static KppNonlinearity mckean(double beta, std::vector<double> offspring) {
    std::vector<double> c;
    c.reserve(offspring.size() + 1);
    c.push_back(beta);
    c.insert(c.end(), offspring.begin(), offspring.end());
    return KppNonlinearity(NonlinearityKind::mckean, std::move(c));
  }

  static KppNonlinearity polynomial(std::vector<double> coefficients) {
    return KppNonlinearity(NonlinearityKind::polynomial, std::move(coefficients));
  }

  /// Builds from the `{kind, coefficients}` pair used in config files.
  static KppNonlinearity from_spec(const std::string& kind, std::vector<double> coefficients) {
    if (kind == "quadratic") return quadratic();
    if (kind == "mckean") {
      require(!coefficients.empty(), ErrorKind::invalid_input, "mckean needs {beta, p_1, ...}");
      return KppNonlinearity(NonlinearityKind::mckean, std::move(coefficients));
    }
    if (kind == "polynomial") return polynomial(std::move(coefficients));
    throw Error(ErrorKind::invalid_input, "unknown nonlinearity kind '" + kind + "'");
  }

  NonlinearityKind kind() const { return kind_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  double fprime0() const { return fprime0_; }
  double fprime1() const { return fprime1_; }

  /// Raw evaluation, no clamping. Hot path of the solvers.
  double operator()(double u) const {
    switch (kind_) {
      case NonlinearityKind::quadratic:
        return u - u * u;
      case NonlinearityKind::mckean: {
        const double beta = coefficients_[0];
        const double s = 1.0 - u;
        // Horner in s for sum_j p_j s^j.
        double acc = 0.0;
        for (std::size_t j = coefficients_.size() - 1; j >= 1; --j) acc = (acc + coefficients_[j]) * s;
        return beta * s - beta * acc;
      }
      case NonlinearityKind::polynomial: {
        double acc = 0.0;
        for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * u + *it;
        return acc;
      }
    }
    return 0.0;
  }

  double derivative(double u) const {
    switch (kind_) {
      case NonlinearityKind::quadratic:
        return 1.0 - 2.0 * u;
      case NonlinearityKind::mckean: {
        const double beta = coefficients_[0];
        const double s = 1.0 - u;
        double acc = 0.0;
        for (std::size_t j = coefficients_.size() - 1; j >= 1; --j)
          acc = acc * s + static_cast<double>(j) * coefficients_[j];
        return -beta + beta * acc;
      }
      case NonlinearityKind::polynomial: {
        double acc = 0.0;
        for (std::size_t j = coefficients_.size() - 1; j >= 1; --j)
          acc = acc * u + static_cast<double>(j) * coefficients_[j];
        return acc;
      }
    }
    return 0.0;
  }

  /// f(1 - phi) without the cancellation of forming 1 - phi first; accurate for small phi.
  double near_one(double phi) const {
    switch (kind_) {
      case NonlinearityKind::quadratic:
        return phi * (1.0 - phi);
      case NonlinearityKind::mckean: {
        const double beta = coefficients_[0];
        double acc = 0.0;
        for (std::size_t j = coefficients_.size() - 1; j >= 1; --j) acc = (acc + coefficients_[j]) * phi;
        return beta * phi - beta * acc;
      }
      case NonlinearityKind::polynomial: {
        double acc = 0.0;
        for (auto it = shifted_.rbegin(); it != shifted_.rend(); ++it) acc = acc * phi + *it;
        return acc;
      }
    }
    return 0.0;
  }

  /// Evaluation with the [0, 1] clamp. Non-finite input is an error.
  Evaluation eval(double u) const {
    require(std::isfinite(u), ErrorKind::invalid_input, "non-finite argument to nonlinearity");
    const double c = std::clamp(u, 0.0, 1.0);
    return {(*this)(c), c != u};
  }

 private:
  KppNonlinearity(NonlinearityKind kind, std::vector<double> coefficients)
      : kind_(kind), coefficients_(std::move(coefficients)) {
    if (kind_ == NonlinearityKind::polynomial && coefficients_.empty()) coefficients_.push_back(0.0);
    if (kind_ == NonlinearityKind::mckean && coefficients_.size() == 1) coefficients_.push_back(0.0);
    fprime0_ = derivative(0.0);
    fprime1_ = derivative(1.0);
    if (kind_ == NonlinearityKind::polynomial) {
      // f(1 - phi) = sum_m d_m phi^m with d_m = (-1)^m sum_{j>=m} C(j, m) c_j
      const std::size_t n = coefficients_.size();
      shifted_.assign(n, 0.0);
      for (std::size_t m = 0; m < n; ++m) {
        double binom = 1.0;  // C(j, m) starting at j = m
        double acc = 0.0;
        for (std::size_t j = m; j < n; ++j) {
          acc += binom * coefficients_[j];
          binom = binom * static_cast<double>(j + 1) / static_cast<double>(j + 1 - m);
        }
        shifted_[m] = (m % 2 == 0) ? acc : -acc;
      }
    }
  }

  NonlinearityKind kind_;
  std::vector<double> coefficients_;
  std::vector<double> shifted_;
  double fprime0_ = 0.0;
  double fprime1_ = 0.0;
};

inline double eval_nonlinearity(const KppNonlinearity& f, double u) { return f.eval(u).value; }

struct ValidationCheck {
  std::string name;
  bool passed;
  double worst;  ///< the offending (or extremal) value found
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
  }
  const ValidationCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

/// Checks the KPP conditions on a uniform interior sample. Failures are
/// reported in the result, never thrown.
inline ValidationReport validate_kpp(const KppNonlinearity& f, int n_samples = 1000) {
  n_samples = std::max(n_samples, 10);
  ValidationReport report;
  const double f0 = f(0.0);
  const double f1 = f(1.0);
  report.checks.push_back({"f(0)=0", std::abs(f0) <= 1e-12, f0});
  report.checks.push_back({"f(1)=0", std::abs(f1) <= 1e-12, f1});
  report.checks.push_back({"f'(0)>0", f.fprime0() > 0.0, f.fprime0()});
  report.checks.push_back({"f'(1)<0", f.fprime1() < 0.0, f.fprime1()});

  double worst_positive = INFINITY;
  double worst_bound = -INFINITY;
  for (int j = 1; j <= n_samples; ++j) {
    const double u = static_cast<double>(j) / (n_samples + 1);
    const double v = f(u);
    worst_positive = std::min(worst_positive, v);
    worst_bound = std::max(worst_bound, v - f.fprime0() * u);
  }
  report.checks.push_back({"f(u)>0", worst_positive > 0.0, worst_positive});
  report.checks.push_back({"f(u)<=f'(0)u", worst_bound <= 1e-14, worst_bound});
  return report;
}

// ---------------------------------------------------------------------------
// Dispersion
// ---------------------------------------------------------------------------

struct DispersionData {
  double fprime0;
  double cstar;
  double lambdastar;
  std::optional<double> lambda_c;
};

inline DispersionData dispersion(const KppNonlinearity& f, std::optional<double> c = std::nullopt) {
  require(f.fprime0() > 0.0, ErrorKind::invalid_input, "f'(0) must be positive");
  DispersionData d{f.fprime0(), 2.0 * std::sqrt(f.fprime0()), std::sqrt(f.fprime0()), std::nullopt};
  if (c) {
    // Relative slack so that c = cstar computed elsewhere is accepted.
    require(*c >= d.cstar * (1.0 - 1e-12), ErrorKind::subcritical_speed,
            "speed " + std::to_string(*c) + " below minimal speed " + std::to_string(d.cstar));
    const double disc = std::max(0.0, *c * *c - 4.0 * d.fprime0);
    // Written as 2 f'(0) / (c + sqrt(.)) to avoid cancellation at large c.
    d.lambda_c = 2.0 * d.fprime0 / (*c + std::sqrt(disc));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Grids and fields
// ---------------------------------------------------------------------------

/// Uniform 1-D grid x_j = x0 + j dx, j = 0..n-1.
struct Grid1D {
  double x0 = 0.0;
  double dx = 1.0;
  std::size_t n = 3;

  Grid1D() = default;
  Grid1D(double x0_, double dx_, std::size_t n_) : x0(x0_), dx(dx_), n(n_) {
    require(dx > 0.0 && std::isfinite(dx), ErrorKind::invalid_input, "grid spacing must be positive");
    require(n >= 3, ErrorKind::invalid_input, "grid needs at least 3 points");
  }

  /// Grid covering [a, b] with spacing as close to dx as possible (exact endpoints).
  static Grid1D covering(double a, double b, double dx) {
    require(b > a, ErrorKind::invalid_input, "empty interval");
    const auto cells = static_cast<std::size_t>(std::llround((b - a) / dx));
    return Grid1D(a, (b - a) / static_cast<double>(std::max<std::size_t>(cells, 2)),
                  std::max<std::size_t>(cells, 2) + 1);
  }

  double x(std::size_t j) const { return x0 + static_cast<double>(j) * dx; }
  double x_end() const { return x(n - 1); }
  double span() const { return x_end() - x0; }

  std::vector<double> points() const {
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) p[j] = x(j);
    return p;
  }

  Grid1D shifted(double by) const { return Grid1D(x0 + by, dx, n); }
};

/// Piecewise-linear interpolation of grid samples; `outside_left` and
/// `outside_right` are returned beyond the endpoints.
inline double interpolate_linear(std::span<const double> values, const Grid1D& grid, double x,
                                 double outside_left, double outside_right) {
  const double s = (x - grid.x0) / grid.dx;
  if (s < 0.0) return s > -1e-12 ? values[0] : outside_left;
  const double last = static_cast<double>(grid.n - 1);
  if (s > last) return s < last + 1e-12 ? values[grid.n - 1] : outside_right;
  auto j = static_cast<std::size_t>(s);
  if (j >= grid.n - 1) j = grid.n - 2;
  const double w = s - static_cast<double>(j);
  return (1.0 - w) * values[j] + w * values[j + 1];
}

/// k components sampled on a common grid at one time. Row i is component i+1.
class FieldStack {
 public:
  FieldStack() = default;
  FieldStack(std::size_t k, Grid1D grid, double time = 0.0)
      : k_(k), grid_(grid), values_(k * grid.n, 0.0), time_(time) {
    require(k >= 1, ErrorKind::invalid_input, "field stack needs at least one component");
  }

  std::size_t k() const { return k_; }
  const Grid1D& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  std::span<double> component(std::size_t i) { return {values_.data() + i * grid_.n, grid_.n}; }
  std::span<const double> component(std::size_t i) const {
    return {values_.data() + i * grid_.n, grid_.n};
  }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * grid_.n + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * grid_.n + j]; }

  /// Moves the window by `cells` grid cells to the right (negative = left),
  /// filling new cells per component from `fill_left` / `fill_right`.
  void shift_window(std::ptrdiff_t cells, std::span<const double> fill_left,
                    std::span<const double> fill_right) {
    const auto n = static_cast<std::ptrdiff_t>(grid_.n);
    for (std::size_t i = 0; i < k_; ++i) {
      auto row = component(i);
      if (cells > 0) {
        std::copy(row.begin() + std::min(cells, n), row.end(), row.begin());
        std::fill(row.end() - std::min(cells, n), row.end(), fill_right[i]);
      } else if (cells < 0) {
        std::copy_backward(row.begin(), row.end() - std::min(-cells, n), row.end());
        std::fill(row.begin(), row.begin() + std::min(-cells, n), fill_left[i]);
      }
    }
    grid_.x0 += static_cast<double>(cells) * grid_.dx;
  }

  /// True iff all values lie in [0, 1].
  bool in_unit_range() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
  }

  const std::vector<double>& raw() const { return values_; }

  /// Exchanges the value buffer with `other`, which must have k * n entries.
  void swap_values(std::vector<double>& other) {
    require(other.size() == values_.size(), ErrorKind::invalid_input, "value buffer size mismatch");
    values_.swap(other);
  }

 private:
  std::size_t k_ = 1;
  Grid1D grid_;
  std::vector<double> values_;
  double time_ = 0.0;
};

/// Heaviside data 1_{x <= 0} in every component.
inline FieldStack heaviside_stack(std::size_t k, const Grid1D& grid) {
  FieldStack s(k, grid);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < grid.n; ++j) s(i, j) = grid.x(j) <= 1e-12 ? 1.0 : 0.0;
  return s;
}

}  // namespace cascade

#endif  // CASCADE_KPP_CORE_HPP
