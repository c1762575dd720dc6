#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

#include "cascade/traveling_wave.hpp"

using namespace cascade;

namespace {

// Closed-form front of U'' + cU' + U(1 - U) = 0 at c = 5/sqrt(6), anchored at U(0) = 1/2.
double exact_front(double z) {
  const double c = std::sqrt(2.0) - 1.0;
  const double d = 1.0 + c * std::exp(z / std::sqrt(6.0));
  return 1.0 / (d * d);
}

}  // namespace

TEST(Profile, MatchesClosedFormFront) {
  const double c = 5.0 / std::sqrt(6.0);
  const auto p = solve_profile(KppNonlinearity::quadratic(), c, 30.0, 1e-10);
  double worst = 0.0;
  for (std::size_t j = 0; j < p.grid.n; ++j) worst = std::max(worst, std::abs(p.values[j] - exact_front(p.grid.x(j))));
  EXPECT_LT(worst, 1e-7);
  EXPECT_NEAR(p(0.0), 0.5, 1e-12);
}

TEST(Profile, ResidualAndTailAtFastSpeed) {
  const auto f = KppNonlinearity::quadratic();
  const auto start = std::chrono::steady_clock::now();
  const auto p = solve_profile(f, 2.5, 40.0, 1e-10);
  const auto fit = tail_fit(p, tail_window(p), 2.0);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(profile_residual(p, f), 1e-8);
  EXPECT_NEAR(fit.lambda_est, 0.5, 0.005);
  EXPECT_FALSE(fit.linear_factor);
  EXPECT_LT(elapsed, 1.0);
}

TEST(Profile, StrictlyDecreasingInterior) {
  for (auto [c, half_width] : {std::pair{2.0, 40.0}, {2.5, 40.0}, {4.0, 80.0}}) {
    const auto p = solve_profile(KppNonlinearity::quadratic(), c, half_width, 1e-10);
    for (std::size_t j = 1; j + 1 < p.grid.n; ++j)
      if (p.values[j] > 1e-300 && p.values[j] < 1.0) EXPECT_LT(p.derivatives[j], 0.0) << "c=" << c << " j=" << j;
  }
}

TEST(Profile, MinimalSpeedTailHasLinearFactor) {
  const auto p = solve_profile(KppNonlinearity::quadratic(), 2.0, 40.0, 1e-10);
  const auto fit = tail_fit(p, tail_window(p), 2.0);
  EXPECT_TRUE(fit.linear_factor);
  EXPECT_NEAR(fit.lambda_est, 1.0, 0.01);
}

TEST(Profile, OtherNonlinearityObeysItsDispersion) {
  // f(u) = 2u(1 - u)(1 + u) has f'(0) = 2; at c = 3.5 the tail rate is the smaller root.
  const auto f = KppNonlinearity::polynomial({0.0, 2.0, 0.0, -2.0});
  ASSERT_TRUE(validate_kpp(f).all_passed());
  const double c = 3.5;
  const auto p = solve_profile(f, c, 40.0, 1e-10);
  const auto fit = tail_fit(p, tail_window(p), dispersion(f).cstar);
  EXPECT_LT(profile_residual(p, f), 1e-8);
  EXPECT_NEAR(fit.lambda_est, 0.5 * (c - std::sqrt(c * c - 8.0)), 0.01 * fit.lambda_est);
}

TEST(Profile, SubcriticalSpeedRejected) {
  EXPECT_THROW(solve_profile(KppNonlinearity::quadratic(), 1.5, 40.0, 1e-10), Error);
}

TEST(TailFit, RecoversSyntheticExponential) {
  std::vector<double> xs, us;
  for (int j = 0; j < 200; ++j) {
    xs.push_back(5.0 + 0.1 * j);
    us.push_back(0.3 * std::exp(-0.7 * xs.back()));
  }
  const auto fit = fit_tail_samples(xs, us, false);
  EXPECT_NEAR(fit.lambda_est, 0.7, 1e-12);
  EXPECT_NEAR(fit.k_const, 0.3, 1e-12);
}

TEST(TailFit, RecoversSyntheticLinearFactor) {
  std::vector<double> xs, us;
  for (int j = 0; j < 300; ++j) {
    xs.push_back(5.0 + 0.1 * j);
    us.push_back(0.8 * (xs.back() + 1.3) * std::exp(-xs.back()));
  }
  const auto fit = fit_tail_samples(xs, us, true);
  EXPECT_NEAR(fit.lambda_est, 1.0, 1e-8);
  EXPECT_NEAR(fit.k_const, 1.3, 1e-6);
  EXPECT_NEAR(fit.amplitude, 0.8, 1e-6);
}

TEST(Alignment, TranslationEquivariance) {
  const auto p = solve_profile(KppNonlinearity::quadratic(), 2.0, 40.0, 1e-10);
  const auto g = Grid1D::covering(-30.0, 60.0, 0.05);
  for (double s : {-3.217, 0.0, 0.61, 12.345}) {
    std::vector<double> field(g.n);
    for (std::size_t j = 0; j < g.n; ++j) field[j] = p(g.x(j) - s);
    const auto al = shift_align(field, g, p);
    EXPECT_NEAR(al.shift, s, g.dx * g.dx) << "s=" << s;
    EXPECT_LT(al.sup_distance, 1e-6);
  }
}

TEST(Alignment, FieldWithoutFrontRejected) {
  const auto p = solve_profile(KppNonlinearity::quadratic(), 2.0, 40.0, 1e-10);
  const auto g = Grid1D::covering(-10.0, 10.0, 0.1);
  std::vector<double> flat(g.n, 1.0);
  try {
    shift_align(flat, g, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_front);
  }
}
