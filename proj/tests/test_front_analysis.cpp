#include <gtest/gtest.h>

#include <cmath>

#include "cascade/cascade_solver.hpp"
#include "cascade/front_analysis.hpp"
#include "cascade/traveling_wave.hpp"

using namespace cascade;

namespace {

FrontTrace synthetic_trace(double c, double a, double b, double t_begin, double t_end, double step) {
  FrontTrace tr;
  for (double t = t_begin; t <= t_end + 1e-9; t += step) tr.push(t, c * t - a * std::log(t) + b);
  return tr;
}

}  // namespace

TEST(LevelSet, LinearInterpolationOfCrossings) {
  const auto g = Grid1D::covering(0.0, 10.0, 1.0);
  // Decreasing through 0.5 between x = 2 and 3, rising again between 6 and 7, falling between 8 and 9.
  std::vector<double> f{1.0, 0.9, 0.7, 0.3, 0.2, 0.2, 0.4, 0.6, 0.8, 0.0, 0.0};
  const auto c = extract_level_set(f, g, 0.5);
  ASSERT_EQ(c.positions.size(), 3u);
  EXPECT_NEAR(c.positions[0], 2.5, 1e-15);
  EXPECT_NEAR(c.positions[1], 6.5, 1e-15);
  EXPECT_NEAR(c.positions[2], 8.375, 1e-15);
  EXPECT_DOUBLE_EQ(c.min(), 2.5);
  EXPECT_DOUBLE_EQ(c.max(), 8.375);
}

TEST(LevelSet, NoCrossingIsAnError) {
  const auto g = Grid1D::covering(0.0, 1.0, 0.25);
  std::vector<double> f(g.n, 0.2);
  try {
    extract_level_set(f, g, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_front);
  }
}

TEST(Fit, RecoversExactLogCorrection) {
  const auto tr = synthetic_trace(2.0, 1.5, -0.75, 50.0, 1000.0, 5.0);
  const auto fit = fit_log_correction(tr, 2.0, {100.0, 1000.0});
  EXPECT_NEAR(fit.a_hat, 1.5, 1e-10);
  EXPECT_NEAR(fit.b_hat, -0.75, 1e-9);
  EXPECT_EQ(fit.c_hat, 2.0);
  EXPECT_LT(fit.rms_residual, 1e-10);
  EXPECT_EQ(fit.samples, 181u);
}

TEST(Fit, NegativeCoefficientForLeadingComponents) {
  const auto tr = synthetic_trace(2.0, -0.5, 1.0, 100.0, 1000.0, 10.0);
  EXPECT_NEAR(fit_log_correction(tr, 2.0, {100.0, 1000.0}).a_hat, -0.5, 1e-10);
}

TEST(Fit, ShortWindowRejected) {
  const auto tr = synthetic_trace(2.0, 1.5, 0.0, 100.0, 500.0, 1.0);
  try {
    fit_log_correction(tr, 2.0, {100.0, 500.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_input);
  }
  const auto sparse = synthetic_trace(2.0, 1.5, 0.0, 100.0, 1000.0, 100.0);
  try {
    fit_log_correction(sparse, 2.0, {100.0, 1000.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
  }
}

TEST(Separation, SlopeAgainstLogTime) {
  const auto a = synthetic_trace(2.0, 0.5, 0.3, 100.0, 1000.0, 5.0);
  const auto b = synthetic_trace(2.0, 1.5, -0.2, 100.0, 1000.0, 5.0);
  const auto sep = front_separation(a, b);
  EXPECT_NEAR(sep.slope_vs_ln_t, 1.0, 1e-10);
  EXPECT_NEAR(sep.differences.front(), std::log(100.0) + 0.5, 1e-10);
}

TEST(Separation, RestrictTraceKeepsWindow) {
  const auto tr = synthetic_trace(2.0, 1.5, 0.0, 10.0, 100.0, 1.0);
  const auto r = restrict_trace(tr, {20.0, 30.0});
  ASSERT_EQ(r.samples.size(), 11u);
  EXPECT_DOUBLE_EQ(r.samples.front().t, 20.0);
}

TEST(Recorder, TracksAnalyticFront) {
  const auto g = Grid1D::covering(-5.0, 30.0, 0.05);
  FrontRecorder rec(2);
  for (double t : {1.0, 2.0, 3.0}) {
    FieldStack s(2, g, t);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < g.n; ++j) s(i, j) = 1.0 / (1.0 + std::exp(g.x(j) - 2.0 * t - double(i)));
    rec.record(s);
  }
  for (std::size_t i = 0; i < 2; ++i) {
    ASSERT_EQ(rec.traces()[i].samples.size(), 3u);
    EXPECT_NEAR(rec.traces()[i].samples[2].position, 6.0 + double(i), 1e-3);
  }
}

TEST(Shift, RecoversKnownOffsetInFrame) {
  const auto profile = solve_profile(KppNonlinearity::quadratic(), 2.0, 40.0, 1e-10);
  const FrameSpec frame{2.0, 1.5, 1.0};
  const double t = 300.0, x_inf = 0.8;
  const auto lab = Grid1D::covering(frame.position(t) - 40.0, frame.position(t) + 40.0, 0.05);
  std::vector<double> field(lab.n);
  // Lab field U(x - xi(t) + x_inf): the front sits at xi(t) - x_inf.
  for (std::size_t j = 0; j < lab.n; ++j) field[j] = profile(lab.x(j) - frame.position(t) + x_inf);
  EXPECT_NEAR(estimate_x_infty(field, lab, frame, t, profile), x_inf, 1e-3);
}

TEST(Shift, FarFromProfileNotConverged) {
  const auto profile = solve_profile(KppNonlinearity::quadratic(), 2.0, 40.0, 1e-10);
  const auto g = Grid1D::covering(-20.0, 20.0, 0.05);
  std::vector<double> step(g.n);
  for (std::size_t j = 0; j < g.n; ++j) step[j] = g.x(j) <= 0.0 ? 1.0 : 0.0;
  try {
    estimate_x_infty(step, g, profile);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_converged);
  }
}
