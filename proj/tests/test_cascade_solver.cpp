#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cascade/cascade_solver.hpp"
#include "cascade/traveling_wave.hpp"

using namespace cascade;

namespace {

// Dirichlet half-line heat flow of y e^{-y^2/4}: x e^{-x^2/(4(1+t))} / (1+t)^{3/2}.
double image_solution(double t, double x) { return x * std::exp(-x * x / (4.0 * (1.0 + t))) / std::pow(1.0 + t, 1.5); }

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

EvolveConfig base_config(std::size_t k, double alpha, Grid1D grid, double t_end) {
  EvolveConfig c;
  c.k = k;
  c.alpha = alpha;
  c.grid = grid;
  c.dt = 5e-3;
  c.t_end = t_end;
  c.snapshot_times = {t_end};
  return c;
}

}  // namespace

TEST(Linearized, ScalarMatchesImageSolution) {
  const auto g = Grid1D::covering(0.0, 40.0, 0.02);
  FieldStack init(1, g);
  for (std::size_t j = 0; j < g.n; ++j) init(0, j) = image_solution(0.0, g.x(j));
  auto cfg = base_config(1, 0.0, g, 2.0);
  cfg.dt = 1e-3;
  cfg.frames = std::vector<FrameSpec>{{0.0, 0.0, 1.0}};
  const auto traj = evolve_linear_dirichlet(cfg, init);
  const auto& s = traj.snapshots.at(0);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    const double exact = std::exp(2.0) * image_solution(2.0, g.x(j));
    worst = std::max(worst, std::abs(s(0, j) - exact));
    peak = std::max(peak, exact);
  }
  // First order in time: the relative error is a few times dt * t.
  EXPECT_LT(worst / peak, 5e-3);
}

TEST(Linearized, CouplingAddsLinearInTimeFactor) {
  // v^2 = e^t S(t) v0 and v^1 = (1 + alpha t) v^2 when both start from v0.
  const auto g = Grid1D::covering(0.0, 40.0, 0.02);
  FieldStack init(2, g);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < g.n; ++j) init(i, j) = image_solution(0.0, g.x(j));
  auto cfg = base_config(2, 0.7, g, 2.0);
  cfg.dt = 1e-3;
  cfg.frames = std::vector<FrameSpec>(2, FrameSpec{0.0, 0.0, 1.0});
  const auto traj = evolve_linear_dirichlet(cfg, init);
  const auto& s = traj.snapshots.at(0);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < g.n; ++j) {
    worst = std::max(worst, std::abs(s(0, j) - (1.0 + 0.7 * 2.0) * s(1, j)));
    peak = std::max(peak, s(0, j));
  }
  EXPECT_LT(worst / peak, 5e-3);
}

TEST(Linearized, RequiresHalfLineGrid) {
  const auto g = Grid1D::covering(-1.0, 10.0, 0.05);
  EXPECT_THROW(evolve_linear_dirichlet(base_config(1, 0.0, g, 1.0), FieldStack(1, g)), Error);
}

TEST(MovingFrame, FastWaveIsStationary) {
  const auto f = KppNonlinearity::quadratic();
  const auto profile = solve_profile(f, 2.5, 40.0, 1e-10);
  const auto g = Grid1D::covering(-30.0, 60.0, 0.05);
  FieldStack init(1, g);
  for (std::size_t j = 0; j < g.n; ++j) init(0, j) = profile(g.x(j));
  auto cfg = base_config(1, 0.0, g, 10.0);
  cfg.frames = std::vector<FrameSpec>{{2.5, 0.0, 1.0}};
  const auto traj = evolve_moving_frame(cfg, init);
  const auto& s = traj.snapshots.at(0);
  const auto al = shift_align(s.component(0), g, profile);
  EXPECT_LT(std::abs(al.shift), 0.05);
  EXPECT_LT(al.sup_distance, 5e-3);
}

TEST(MovingFrame, AgreesWithResampledLabRun) {
  const double t_end = 50.0, t0 = 10.0;
  const auto frames = FrameSpec::cascade(2, 1.0, t0);
  const auto lab_grid = Grid1D::covering(-60.0, 140.0, 0.05);
  const auto lab = evolve_lab(base_config(2, 1.0, lab_grid, t_end), heaviside_stack(2, lab_grid));

  const auto fg = Grid1D::covering(-40.0, 40.0, 0.05);
  FieldStack init(2, fg);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < fg.n; ++j) init(i, j) = fg.x(j) + frames[i].position(0.0) <= 0.0 ? 1.0 : 0.0;
  auto cfg = base_config(2, 1.0, fg, t_end);
  cfg.frames = frames;
  const auto mov = evolve_moving_frame(cfg, init);

  const auto& ls = lab.snapshots.at(0);
  const auto& ms = mov.snapshots.at(0);
  for (std::size_t i = 0; i < 2; ++i) {
    const auto expected = resample(ls.component(i), frame_grid(ls.grid(), frames[i], t_end), fg, 1.0, 0.0);
    EXPECT_LT(sup_diff(ms.component(i), expected), 0.02) << "component " << i + 1;
  }
}

TEST(Solver, RangeIsPreservedWithoutClamps) {
  const auto g = Grid1D::covering(-40.0, 160.0, 0.05);
  const auto traj = evolve_lab(base_config(3, 2.0, g, 40.0), heaviside_stack(3, g));
  EXPECT_EQ(traj.diagnostics.total_clamps(), 0u);
  for (double v : traj.diagnostics.step_min) EXPECT_GE(v, 0.0);
  for (double v : traj.diagnostics.step_max) EXPECT_LE(v, 1.0);
  EXPECT_TRUE(traj.snapshots.at(0).in_unit_range());
}

TEST(Solver, ComparisonPrincipleOnRandomOrderedData) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto g = Grid1D::covering(-20.0, 40.0, 0.05);
  for (int pair = 0; pair < 5; ++pair) {
    FieldStack hi(2, g), lo(2, g);
    for (std::size_t i = 0; i < 2; ++i) {
      const double edge = -5.0 + 10.0 * u(rng);
      for (std::size_t j = 0; j < g.n; ++j) {
        const double x = g.x(j);
        const double a = x <= edge ? 1.0 : (x < edge + 5.0 ? u(rng) : 0.0);
        const double b = x <= edge - 2.0 ? 1.0 : (x < edge + 3.0 ? u(rng) : 0.0);
        hi(i, j) = std::max(a, b);
        lo(i, j) = std::min(a, b);
      }
    }
    auto cfg = base_config(2, 1.0, g, 4.0);
    cfg.snapshot_times = {0.5, 2.0, 4.0};
    const auto rep = check_ordering(evolve_lab(cfg, hi), evolve_lab(cfg, lo), 1.0, -INFINITY, 1e-12);
    EXPECT_TRUE(rep.all_hold()) << "pair " << pair;
  }
}

TEST(Solver, ShiftedHeavisideStaysAhead) {
  const auto g = Grid1D::covering(-20.0, 60.0, 0.05);
  FieldStack ahead(2, g);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < g.n; ++j) ahead(i, j) = g.x(j) <= 1.0 ? 1.0 : 0.0;
  auto cfg = base_config(2, 1.0, g, 10.0);
  cfg.snapshot_times = {5.0, 10.0};
  const auto rep = check_ordering(evolve_lab(cfg, ahead), evolve_lab(cfg, heaviside_stack(2, g)), 1.0, -INFINITY);
  EXPECT_TRUE(rep.all_hold());
}

TEST(Solver, FollowFrontMovesTheWindow) {
  auto cfg = base_config(1, 0.0, Grid1D::covering(-20.0, 280.0, 0.05), 120.0);
  cfg.window_policy = WindowPolicy::follow_front;
  cfg.follow_trigger = 0.6;
  cfg.follow_target = 0.3;
  const auto traj = evolve_lab(cfg, heaviside_stack(1, cfg.grid));
  EXPECT_GT(traj.diagnostics.window_shifts, 0u);
  const auto& s = traj.snapshots.at(0);
  EXPECT_GT(s.grid().x0, 0.0);
  EXPECT_EQ(s.component(0).front(), 1.0);
}

TEST(Solver, FollowFrontRefusesToDropTheFront) {
  auto cfg = base_config(1, 0.0, Grid1D::covering(-2.0, 8.0, 0.05), 20.0);
  cfg.window_policy = WindowPolicy::follow_front;
  try {
    evolve_lab(cfg, heaviside_stack(1, cfg.grid));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_exhausted);
  }
}

TEST(Solver, ConfigurationErrors) {
  const auto g = Grid1D::covering(-10.0, 10.0, 0.01);
  auto cfg = base_config(1, 0.0, g, 1.0);
  cfg.dt = 0.1;  // dt > 10 dx^2
  EXPECT_THROW(evolve_lab(cfg, heaviside_stack(1, g)), Error);
  auto bad_k = base_config(2, 1.0, g, 1.0);
  EXPECT_THROW(evolve_lab(bad_k, heaviside_stack(1, g)), Error);
  auto out_of_range = heaviside_stack(1, g);
  out_of_range(0, 3) = 1.5;
  EXPECT_THROW(evolve_lab(base_config(1, 0.0, g, 1.0), out_of_range), Error);
}

TEST(Ordering, DetectsViolationAndMisalignment) {
  const auto g = Grid1D::covering(0.0, 1.0, 0.1);
  Trajectory a, b;
  FieldStack fa(1, g), fb(1, g);
  for (std::size_t j = 0; j < g.n; ++j) {
    fa(0, j) = 0.5;
    fb(0, j) = j == 4 ? 0.6 : 0.4;
  }
  a.snapshots = {fa};
  b.snapshots = {fb};
  auto rep = check_ordering(a, b, 1.0, -INFINITY);
  EXPECT_FALSE(rep.all_hold());
  EXPECT_NEAR(rep.entries[0].worst_margin, -0.1, 1e-15);
  EXPECT_TRUE(check_ordering(a, b, 1.0, -INFINITY, 0.11).all_hold());
  Trajectory c;
  c.snapshots = {FieldStack(1, g.shifted(0.05))};
  EXPECT_THROW(check_ordering(a, c, 1.0, -INFINITY), Error);
}
