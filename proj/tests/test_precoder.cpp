#include <gtest/gtest.h>

#include "lcris/precoder.hpp"
#include "oracles.hpp"

using namespace lcris;

namespace {

std::vector<Eigen::VectorXcd> random_channels(int m, int k, SplitMix64& rng) {
  std::vector<Eigen::VectorXcd> f(static_cast<size_t>(k));
  for (int u = 0; u < k; ++u) {
    f[static_cast<size_t>(u)].resize(m);
    for (int r = 0; r < m; ++r) f[static_cast<size_t>(u)][r] = rng.cnormal();
  }
  return f;
}

}  // namespace

TEST(Mrt, SingleUserClosedForm) {
  SplitMix64 rng(1);
  auto f = random_channels(3, 1, rng);
  double p = 2.5;
  Precoder w = mrt_precoder(f, p);
  Eigen::VectorXcd expect = std::sqrt(p) / f[0].norm() * f[0];
  EXPECT_LT((w.w.col(0) - expect).norm(), 1e-12);
  EXPECT_NEAR(w.total_power(), p, 1e-12);
}

TEST(Mrt, IdenticalChannelsEqualSplit) {
  SplitMix64 rng(2);
  auto f = random_channels(4, 1, rng);
  std::vector<Eigen::VectorXcd> two = {f[0], f[0]};
  Precoder w = mrt_precoder(two, 1.0);
  EXPECT_LT((w.w.col(0) - w.w.col(1)).norm(), 1e-12);
  EXPECT_NEAR(w.w.col(0).squaredNorm(), 0.5, 1e-12);
  EXPECT_NEAR(w.w.col(1).squaredNorm(), 0.5, 1e-12);
}

TEST(Mrt, ExactPowerUseOnRandomInputs) {
  SplitMix64 rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    auto f = random_channels(3, 3, rng);
    double p = rng.uniform(0.5, 4.0);
    Precoder w = mrt_precoder(f, p);
    EXPECT_NEAR(w.total_power(), p, 1e-12 * p);
  }
}

TEST(Mrt, ZeroChannelRedistribution) {
  SplitMix64 rng(4);
  auto f = random_channels(3, 2, rng);
  f[1].setZero();
  Precoder w = mrt_precoder(f, 2.0);
  EXPECT_NEAR(w.w.col(1).norm(), 0.0, 1e-15);
  EXPECT_NEAR(w.w.col(0).squaredNorm(), 2.0, 1e-12);
}

TEST(Feasibility, SingleUserBoundary) {
  SplitMix64 rng(5);
  auto f = random_channels(3, 1, rng);
  double p = 2.0, sigma2 = 0.05;
  double bound = p * f[0].squaredNorm() / sigma2;
  Eigen::VectorXd noise = Eigen::VectorXd::Constant(1, sigma2);
  PrecoderOptions opts;

  auto lo = feasibility_sinr(f, noise, bound * (1.0 - 1e-6), p, opts);
  EXPECT_EQ(lo.status, FeasibilityStatus::Feasible);
  auto hi = feasibility_sinr(f, noise, bound * (1.0 + 1e-6), p, opts);
  EXPECT_EQ(hi.status, FeasibilityStatus::Infeasible);
}

TEST(Feasibility, TwoOrthogonalUsersBoundary) {
  // Equal-norm orthogonal channels: each user can get at most (P/2) g / sigma^2.
  int m = 2;
  std::vector<Eigen::VectorXcd> f(2);
  f[0] = Eigen::VectorXcd::Zero(m);
  f[1] = Eigen::VectorXcd::Zero(m);
  f[0][0] = cplx(1.3, 0.2);
  f[1][1] = cplx(-0.4, 1.25);
  double g = f[0].squaredNorm();
  f[1] *= std::sqrt(g / f[1].squaredNorm());
  double p = 3.0, sigma2 = 0.1;
  double bound = 0.5 * p * g / sigma2;
  Eigen::VectorXd noise = Eigen::VectorXd::Constant(2, sigma2);
  PrecoderOptions opts;

  EXPECT_EQ(feasibility_sinr(f, noise, bound * 0.98, p, opts).status,
            FeasibilityStatus::Feasible);
  EXPECT_EQ(feasibility_sinr(f, noise, bound * 1.02, p, opts).status,
            FeasibilityStatus::Infeasible);
}

TEST(Feasibility, TinyTargetAlwaysFeasibleWithSmallPower) {
  SplitMix64 rng(6);
  auto f = random_channels(2, 2, rng);
  Eigen::VectorXd noise = Eigen::VectorXd::Constant(2, 0.1);
  auto r = feasibility_sinr(f, noise, 1e-12, 4.0, PrecoderOptions{});
  ASSERT_EQ(r.status, FeasibilityStatus::Feasible);
  EXPECT_LT(r.w.squaredNorm(), 1e-6);
  // Returned precoder hits the target exactly for every user.
  SinrReport rep = sinr_from_channels(f, r.w, noise);
  for (int k = 0; k < 2; ++k) EXPECT_NEAR(rep.per_user[k], 1e-12, 1e-15);
}

TEST(Feasibility, MonotoneInGamma) {
  SplitMix64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    auto f = random_channels(2, 2, rng);
    Eigen::VectorXd noise = Eigen::VectorXd::Constant(2, 0.1);
    double p = 2.0;
    PrecoderOptions opts;
    auto sol = maxmin_precoder(f, noise, p, opts);
    double gstar = sol.gamma;
    EXPECT_EQ(feasibility_sinr(f, noise, gstar * 0.5, p, opts).status,
              FeasibilityStatus::Feasible);
    EXPECT_EQ(feasibility_sinr(f, noise, gstar * 0.9, p, opts).status,
              FeasibilityStatus::Feasible);
    EXPECT_EQ(feasibility_sinr(f, noise, gstar * 1.2, p, opts).status,
              FeasibilityStatus::Infeasible);
  }
}

TEST(Maxmin, SingleUserIsMrt) {
  SplitMix64 rng(8);
  auto f = random_channels(4, 1, rng);
  double p = 1.7, sigma2 = 0.2;
  Eigen::VectorXd noise = Eigen::VectorXd::Constant(1, sigma2);
  auto sol = maxmin_precoder(f, noise, p);
  Precoder mrt = mrt_precoder(f, p);
  EXPECT_LT((sol.precoder.w - mrt.w).norm(), 1e-8);
  double expect = p * f[0].squaredNorm() / sigma2;
  EXPECT_NEAR(sinr_from_channels(f, sol.precoder.w, noise).min_linear, expect,
              1e-8 * expect);
}

TEST(Maxmin, BeatsRandomSearchAndBalances) {
  SplitMix64 rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    auto f = random_channels(2, 2, rng);
    Eigen::VectorXd noise = Eigen::VectorXd::Constant(2, 0.1);
    double p = 2.0;
    auto sol = maxmin_precoder(f, noise, p);
    SinrReport rep_sol = sinr_from_channels(f, sol.precoder.w, noise);

    double best_random = oracles::random_search_precoder(f, noise, p, 10000, rng);
    EXPECT_GE(linear_to_db(rep_sol.min_linear), linear_to_db(best_random) - 1e-3);

    double spread = rep_sol.per_user.maxCoeff() - rep_sol.per_user.minCoeff();
    EXPECT_LE(spread, 1e-3 * rep_sol.per_user.minCoeff());
    EXPECT_LE(sol.precoder.total_power(), p * (1.0 + 1e-9));
  }
}

TEST(Maxmin, NeverBelowMrtBaseline) {
  SplitMix64 rng(10);
  for (int rep = 0; rep < 10; ++rep) {
    int m = 2 + rep % 3;
    int k = 2 + rep % 2;
    auto f = random_channels(m, k, rng);
    Eigen::VectorXd noise = Eigen::VectorXd::Constant(k, 0.1);
    double p = 1.0;
    auto sol = maxmin_precoder(f, noise, p);
    double v = sinr_from_channels(f, sol.precoder.w, noise).min_linear;
    double v_mrt = sinr_from_channels(f, mrt_precoder(f, p).w, noise).min_linear;
    EXPECT_GE(v, v_mrt - 1e-12 * v_mrt);
  }
}

TEST(Maxmin, OrthogonalPowerScaling) {
  // Interference-free equal-norm channels: quadrupling P quadruples min-SINR.
  std::vector<Eigen::VectorXcd> f(2);
  f[0] = Eigen::VectorXcd::Zero(2);
  f[1] = Eigen::VectorXcd::Zero(2);
  f[0][0] = cplx(0.9, -0.1);
  f[1][1] = cplx(0.2, 0.9);
  f[1] *= f[0].norm() / f[1].norm();
  Eigen::VectorXd noise = Eigen::VectorXd::Constant(2, 0.05);
  auto s1 = maxmin_precoder(f, noise, 1.0);
  auto s4 = maxmin_precoder(f, noise, 4.0);
  double v1 = sinr_from_channels(f, s1.precoder.w, noise).min_linear;
  double v4 = sinr_from_channels(f, s4.precoder.w, noise).min_linear;
  EXPECT_NEAR(v4, 4.0 * v1, 1e-3 * v4);
}

TEST(Maxmin, DegenerateZeroChannelUser) {
  SplitMix64 rng(11);
  auto f = random_channels(3, 2, rng);
  f[1].setZero();
  Eigen::VectorXd noise = Eigen::VectorXd::Constant(2, 0.1);
  auto sol = maxmin_precoder(f, noise, 2.0);
  ASSERT_EQ(sol.zero_users.size(), 1u);
  EXPECT_EQ(sol.zero_users[0], 1);
  EXPECT_NEAR(sol.precoder.w.col(1).norm(), 0.0, 1e-15);
  EXPECT_GT(sol.precoder.w.col(0).norm(), 0.0);
  EXPECT_EQ(sol.gamma, 0.0);
}
