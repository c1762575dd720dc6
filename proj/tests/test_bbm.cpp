#include <gtest/gtest.h>

#include <cmath>

#include "cascade/bbm.hpp"
#include "cascade/cascade_solver.hpp"
#include "cascade/front_analysis.hpp"

using namespace cascade;

namespace {

struct Moments {
  double mean;
  double se;
};

template <class F>
Moments moments(const std::vector<BbmReplica>& reps, F&& value) {
  double s = 0.0, s2 = 0.0;
  for (const auto& r : reps) {
    const double v = value(r);
    s += v;
    s2 += v * v;
  }
  const double n = static_cast<double>(reps.size());
  const double mean = s / n;
  return {mean, std::sqrt((s2 / n - mean * mean) / n)};
}

}  // namespace

TEST(Bbm, ExpectedPopulationPerType) {
  // m1' = m1 and m2' = m2 + alpha m1 give m1 = e^t, m2 = alpha t e^t.
  BbmConfig cfg;
  cfg.k = 2;
  cfg.alpha = 0.6;
  cfg.t_max = 4.0;
  cfg.seed = 5;
  const auto reps = simulate_replicas(cfg, 4000, 4);
  const auto n1 = moments(reps, [](const BbmReplica& r) { return double(r.particle_counts[0]); });
  const auto n2 = moments(reps, [](const BbmReplica& r) { return double(r.particle_counts[1]); });
  EXPECT_NEAR(n1.mean, std::exp(4.0), 4.0 * n1.se);
  EXPECT_NEAR(n2.mean, 0.6 * 4.0 * std::exp(4.0), 4.0 * n2.se);
}

TEST(Bbm, DerivativeMartingaleHasZeroMean) {
  BbmConfig cfg;
  cfg.seed = 9;
  const auto stats = derivative_martingale_series(cfg, {1.0, 2.0, 4.0}, 4000, 4);
  ASSERT_EQ(stats.size(), 3u);
  for (const auto& s : stats) EXPECT_NEAR(s.mean, 0.0, 4.0 * s.standard_error) << "t=" << s.t;
}

TEST(Bbm, FirstEventLawAndMutationFraction) {
  BbmConfig cfg;
  cfg.k = 2;
  cfg.alpha = 1.0;
  cfg.seed = 17;
  const auto ev = sample_first_events(cfg, 1, 20000);
  std::vector<double> times;
  double mutations = 0.0;
  for (const auto& e : ev) {
    times.push_back(e.time);
    mutations += e.mutation;
  }
  const double rate = 2.0;
  const auto ks = ks_test(times, [&](double t) { return 1.0 - std::exp(-rate * t); });
  EXPECT_GT(ks.p_value, 0.01);
  const double frac = mutations / double(ev.size());
  EXPECT_NEAR(frac, 0.5, 4.0 * std::sqrt(0.25 / double(ev.size())));
  // The last type never mutates.
  for (const auto& e : sample_first_events(cfg, 2, 1000)) EXPECT_FALSE(e.mutation);
}

TEST(Bbm, DeterministicAcrossThreadCounts) {
  BbmConfig cfg;
  cfg.k = 3;
  cfg.alpha = 1.0;
  cfg.t_max = 4.0;
  cfg.seed = 123;
  const auto a = simulate_replicas(cfg, 200, 1);
  const auto b = simulate_replicas(cfg, 200, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t r = 0; r < a.size(); ++r) {
    EXPECT_EQ(a[r].max_position, b[r].max_position);
    EXPECT_EQ(a[r].derivative_martingale, b[r].derivative_martingale);
    EXPECT_EQ(a[r].particle_counts, b[r].particle_counts);
  }
  cfg.seed = 124;
  EXPECT_NE(simulate_replicas(cfg, 1, 1)[0].max_position, a[0].max_position);
}

TEST(Bbm, MedianMatchesPdeHalfLevel) {
  // P(M_t >= x) = v(t, x) with Heaviside data, so the median of M_t is the 1/2-level of v.
  BbmConfig cfg;
  cfg.t_max = 8.0;
  cfg.seed = 31;
  const auto cdf = empirical_max_cdf(simulate_replicas(cfg, 3000, 4));
  EvolveConfig pde;
  pde.grid = Grid1D::covering(-40.0, 60.0, 0.05);
  pde.t_end = 8.0;
  pde.snapshot_times = {8.0};
  const auto traj = evolve_lab(pde, heaviside_stack(1, pde.grid));
  const auto& s = traj.snapshots.at(0);
  const double half = extract_level_set(s.component(0), s.grid(), 0.5).max();
  EXPECT_NEAR(cdf.median(), half, 0.15);
}

TEST(Bbm, TruncationIsReported) {
  BbmConfig cfg;
  cfg.t_max = 6.0;
  cfg.max_particles = 20;
  const auto reps = simulate_replicas(cfg, 50, 1);
  std::size_t truncated = 0;
  for (const auto& r : reps) truncated += r.truncated;
  EXPECT_GT(truncated, 40u);
  cfg.max_particles = 1;
  try {
    empirical_max_cdf(simulate_replicas(cfg, 10, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::no_data);
  }
}

TEST(Bbm, ConfigValidation) {
  BbmConfig cfg;
  cfg.k = 2;
  cfg.initial_type = 3;
  EXPECT_THROW(simulate_replica(cfg, 0), Error);
  cfg.initial_type = 1;
  cfg.observation_times = {2.0, 1.0};
  EXPECT_THROW(simulate_replica(cfg, 0), Error);
}

TEST(Empirical, SurvivalAndMedian) {
  const EmpiricalCdf cdf({3.0, 1.0, 2.0, 2.0});
  EXPECT_DOUBLE_EQ(cdf.survival(2.0), 0.75);
  EXPECT_DOUBLE_EQ(cdf.survival_strict(2.0), 0.25);
  EXPECT_DOUBLE_EQ(cdf.survival(0.0), 1.0);
  EXPECT_DOUBLE_EQ(cdf.survival(4.0), 0.0);
  EXPECT_DOUBLE_EQ(cdf.median(), 2.0);
  EXPECT_THROW(EmpiricalCdf(std::vector<double>{}), Error);
}

TEST(Empirical, CompareAgainstExactSurvival) {
  // Exponential(1) samples against the PDE-like profile e^{-x} on x >= 0.
  std::vector<double> xs;
  CounterStream rng(stream_key(1, 2, 3));
  for (int j = 0; j < 20000; ++j) xs.push_back(rng.exponential(1.0));
  const EmpiricalCdf cdf(xs);
  const auto g = Grid1D::covering(-1.0, 10.0, 0.01);
  std::vector<double> v(g.n);
  for (std::size_t j = 0; j < g.n; ++j) v[j] = g.x(j) <= 0.0 ? 1.0 : std::exp(-g.x(j));
  const auto cmp = compare_bbm_pde(cdf, v, g);
  EXPECT_LT(cmp.distance, 0.015);
  EXPECT_GT(cmp.points, 100u);
  // A shifted profile is detected.
  for (std::size_t j = 0; j < g.n; ++j) v[j] = g.x(j) <= 0.5 ? 1.0 : std::exp(-(g.x(j) - 0.5));
  EXPECT_GT(compare_bbm_pde(cdf, v, g).distance, 0.3);
}

TEST(Kolmogorov, KnownQuantiles) {
  EXPECT_NEAR(kolmogorov_tail(1.358), 0.05, 1e-3);
  EXPECT_NEAR(kolmogorov_tail(1.628), 0.01, 1e-3);
  EXPECT_NEAR(kolmogorov_tail(0.5), 0.9639, 1e-3);
  EXPECT_EQ(kolmogorov_tail(0.1), 1.0);
}

TEST(Streams, UniformsAreUniform) {
  CounterStream rng(stream_key(42, 0, 1));
  std::vector<double> u(10000);
  for (auto& x : u) x = rng.uniform();
  EXPECT_GT(ks_test(u, [](double x) { return x; }).p_value, 0.01);
  // Same key, same stream.
  CounterStream a(7), b(7);
  for (int j = 0; j < 10; ++j) EXPECT_EQ(a.next_u64(), b.next_u64());
}
