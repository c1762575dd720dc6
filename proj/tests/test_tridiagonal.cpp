#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "cascade/tridiagonal.hpp"

using namespace cascade;

TEST(Tridiagonal, MatchesDenseLu) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 5u, 64u}) {
    std::vector<double> lo(n), di(n), up(n), rhs(n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd b(n);
    for (std::size_t j = 0; j < n; ++j) {
      lo[j] = j ? u(rng) : 0.0;
      up[j] = j + 1 < n ? u(rng) : 0.0;
      di[j] = 3.0 + u(rng);
      rhs[j] = u(rng);
      a(j, j) = di[j];
      if (j) a(j, j - 1) = lo[j];
      if (j + 1 < n) a(j, j + 1) = up[j];
      b(j) = rhs[j];
    }
    TridiagonalSolver s;
    s.factor(lo, di, up);
    s.solve(rhs);
    const Eigen::VectorXd ref = a.partialPivLu().solve(b);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(rhs[j], ref(j), 1e-13) << "n=" << n << " j=" << j;
  }
}

TEST(Tridiagonal, FactorReusedForSeveralRightHandSides) {
  const std::size_t n = 10;
  std::vector<double> lo(n, -1.0), di(n, 4.0), up(n, -1.0);
  TridiagonalSolver s;
  s.factor(lo, di, up);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> x(n);
    for (std::size_t j = 0; j < n; ++j) x[j] = trial + 0.5 * j;
    std::vector<double> b(n);
    for (std::size_t j = 0; j < n; ++j)
      b[j] = di[j] * x[j] + (j ? lo[j] * x[j - 1] : 0.0) + (j + 1 < n ? up[j] * x[j + 1] : 0.0);
    s.solve(b);
    for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(b[j], x[j], 1e-13);
  }
}

TEST(Tridiagonal, SingularPivotRejected) {
  std::vector<double> lo{0.0, 1.0}, di{0.0, 1.0}, up{1.0, 0.0};
  TridiagonalSolver s;
  EXPECT_THROW(s.factor(lo, di, up), Error);
}

TEST(Tridiagonal, MismatchedBandsRejected) {
  std::vector<double> lo{0.0}, di{1.0, 1.0}, up{0.0, 0.0};
  TridiagonalSolver s;
  EXPECT_THROW(s.factor(lo, di, up), Error);
}
