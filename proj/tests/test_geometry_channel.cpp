#include <gtest/gtest.h>

#include "lcris/channel.hpp"
#include "lcris/config.hpp"
#include "lcris/geometry.hpp"

using namespace lcris;

namespace {
ChannelParams params(double c0 = -61.0, double d0 = 1.0, double sigma = 2.0) {
  return ChannelParams{28e9, 10.0, 10.0, 10.0, sigma, c0, d0, 0.0};
}
}  // namespace

TEST(Pathloss, ReferenceValues) {
  ChannelParams p = params();
  EXPECT_NEAR(pathloss_linear(1.0, p), 7.943282347242822e-07, 1e-18);
  EXPECT_DOUBLE_EQ(pathloss_linear(p.d0, p), db_to_linear(p.c0_db));
  EXPECT_NEAR(pathloss_linear(10.0, p), std::pow(10.0, -8.1),
              1e-12 * std::pow(10.0, -8.1));
  EXPECT_THROW(pathloss_linear(0.0, p), std::domain_error);
  EXPECT_THROW(pathloss_linear(-1.0, p), std::domain_error);
}

TEST(Pathloss, StrictlyDecreasing) {
  ChannelParams p = params();
  double prev = pathloss_linear(0.5, p);
  for (double d = 1.0; d < 100.0; d += 1.7) {
    double cur = pathloss_linear(d, p);
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(Geometry, Validation) {
  EXPECT_THROW(ArrayGeometry::ula_x(0, 0.5, Eigen::Vector3d::Zero()), std::invalid_argument);
  EXPECT_THROW(ArrayGeometry::upa_xz(2, 0, 0.5, Eigen::Vector3d::Zero()),
               std::invalid_argument);
  EXPECT_THROW(ArrayGeometry::ula_x(2, 0.0, Eigen::Vector3d::Zero()), std::invalid_argument);
  EXPECT_EQ(ArrayGeometry::upa_xz(3, 4, 0.5, Eigen::Vector3d::Zero()).size(), 12);
}

TEST(Steering, BroadsideAllOnes) {
  auto ula = ArrayGeometry::ula_x(4, 0.005, Eigen::Vector3d::Zero());
  // Propagation along +y is orthogonal to every x-axis offset.
  Eigen::VectorXcd a = steering_vector(ula, kPi / 2.0, 0.0, 0.01);
  for (int n = 0; n < a.size(); ++n) {
    EXPECT_DOUBLE_EQ(a[n].real(), 1.0);
    EXPECT_NEAR(a[n].imag(), 0.0, 1e-15);
  }
}

TEST(Steering, SingleElement) {
  auto one = ArrayGeometry::ula_x(1, 0.005, Eigen::Vector3d(1, 2, 3));
  SplitMix64 rng(3);
  for (int i = 0; i < 10; ++i) {
    Eigen::VectorXcd a =
        steering_vector(one, rng.uniform(-kPi, kPi), rng.uniform(-1.5, 1.5), 0.01);
    ASSERT_EQ(a.size(), 1);
    EXPECT_DOUBLE_EQ(a[0].real(), 1.0);
    EXPECT_DOUBLE_EQ(a[0].imag(), 0.0);
  }
}

TEST(Steering, EndfireTwoElementPhaseStep) {
  double lambda = 0.01;
  auto ula = ArrayGeometry::ula_x(2, lambda / 2.0, Eigen::Vector3d::Zero());
  Eigen::VectorXcd a = steering_vector(ula, 0.0, 0.0, lambda);  // along the array axis
  // Element-to-element phase progression of 2pi/lambda * lambda/2 = pi.
  cplx ratio = a[1] / a[0];
  EXPECT_NEAR(ratio.real(), -1.0, 1e-12);
  EXPECT_NEAR(ratio.imag(), 0.0, 1e-12);
}

TEST(Steering, UnitModulusAndConjugation) {
  auto upa = ArrayGeometry::upa_xz(3, 4, 0.005, Eigen::Vector3d(0, 0, 4));
  SplitMix64 rng(17);
  for (int i = 0; i < 50; ++i) {
    Eigen::Vector3d d = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal()).normalized();
    Eigen::VectorXcd a = steering_vector_dir(upa, d, 0.01);
    Eigen::VectorXcd b = steering_vector_dir(upa, -d, 0.01);
    for (int n = 0; n < a.size(); ++n) {
      EXPECT_NEAR(std::abs(a[n]), 1.0, 1e-12);
      EXPECT_NEAR(std::abs(a[n] - std::conj(b[n])), 0.0, 1e-12);
    }
  }
}

TEST(Rician, LosOnlyLimit) {
  auto bs = ArrayGeometry::ula_x(3, 0.005, Eigen::Vector3d(0, 20, 4));
  auto ris = ArrayGeometry::upa_xz(2, 2, 0.005, Eigen::Vector3d(0, 0, 4));
  SplitMix64 rng(11);
  double gain = 1e-6;
  Eigen::MatrixXcd h = rician_channel(bs, ris, 0.01, 300.0, gain, rng);

  Eigen::Vector3d dir = (ris.center - bs.center).normalized();
  Eigen::VectorXcd a_tx = steering_vector_dir(bs, dir, 0.01);
  Eigen::VectorXcd a_rx = steering_vector_dir(ris, -dir, 0.01);
  Eigen::MatrixXcd los = std::sqrt(gain) * (a_rx * a_tx.adjoint());
  EXPECT_LT((h - los).norm(), 1e-12 * los.norm());
}

TEST(Rician, ScatterOnlyMoments) {
  auto bs = ArrayGeometry::ula_x(2, 0.005, Eigen::Vector3d(0, 20, 4));
  auto ris = ArrayGeometry::upa_xz(2, 1, 0.005, Eigen::Vector3d(0, 0, 4));
  SplitMix64 rng(13);
  double gain = 4.0;
  double power = 0.0;
  cplx mean = 0.0;
  const int draws = 10000;
  int entries = 0;
  for (int i = 0; i < draws; ++i) {
    Eigen::MatrixXcd h = rician_channel(bs, ris, 0.01, -300.0, gain, rng);
    power += h.squaredNorm();
    mean += h.sum();
    entries += static_cast<int>(h.size());
  }
  EXPECT_NEAR(power / entries, gain, 0.05 * gain);
  EXPECT_NEAR(std::abs(mean) / entries, 0.0, 0.05 * std::sqrt(gain));
}

TEST(Rician, FrobeniusNormalizationAnyK) {
  auto bs = ArrayGeometry::ula_x(2, 0.005, Eigen::Vector3d(0, 20, 4));
  auto ris = ArrayGeometry::upa_xz(2, 2, 0.005, Eigen::Vector3d(0, 0, 4));
  SplitMix64 rng(29);
  double gain = 0.5;
  double power = 0.0;
  int entries = 0;
  for (int i = 0; i < 10000; ++i) {
    Eigen::MatrixXcd h = rician_channel(bs, ris, 0.01, 10.0, gain, rng);
    power += h.squaredNorm();
    entries += static_cast<int>(h.size());
  }
  EXPECT_NEAR(power / entries, gain, 0.05 * gain);
}

TEST(Rician, FixedSeedDeterminism) {
  auto bs = ArrayGeometry::ula_x(3, 0.005, Eigen::Vector3d(0, 20, 4));
  auto ris = ArrayGeometry::upa_xz(2, 2, 0.005, Eigen::Vector3d(0, 0, 4));
  SplitMix64 r1(77), r2(77);
  Eigen::MatrixXcd h1 = rician_channel(bs, ris, 0.01, 10.0, 1.0, r1);
  Eigen::MatrixXcd h2 = rician_channel(bs, ris, 0.01, 10.0, 1.0, r2);
  EXPECT_TRUE(h1 == h2);
  EXPECT_THROW(rician_channel(bs, ris, 0.01, 10.0, 0.0, r1), std::invalid_argument);
}

TEST(ChannelSet, ShapesAndDeterminism) {
  ExperimentConfig cfg;
  cfg.m_antennas = 2;
  cfg.ris_nx = 2;
  cfg.ris_nz = 2;
  cfg.users = 2;
  SplitMix64 rng(123);
  ChannelSet ch = generate_channel_set(cfg, rng.fork(1));
  EXPECT_EQ(ch.G.rows(), 4);
  EXPECT_EQ(ch.G.cols(), 2);
  ASSERT_EQ(ch.k(), 2);
  EXPECT_EQ(ch.h[0].size(), 4);
  EXPECT_EQ(ch.h_d[0].size(), 2);
  EXPECT_TRUE(ch.G.allFinite());

  ChannelSet again = generate_channel_set(cfg, rng.fork(1));
  EXPECT_TRUE(ch.G == again.G);
  EXPECT_TRUE(ch.h[1] == again.h[1]);
  EXPECT_TRUE(ch.h_d[0] == again.h_d[0]);
  EXPECT_TRUE(ch.ue_positions[0] == again.ue_positions[0]);
}

TEST(ChannelSet, FullDirectBlockage) {
  ExperimentConfig cfg;
  cfg.m_antennas = 2;
  cfg.ris_nx = 2;
  cfg.ris_nz = 2;
  cfg.users = 1;
  cfg.direct_extra_loss_db = 300.0;
  SplitMix64 rng(5);
  ChannelSet ch = generate_channel_set(cfg, rng.fork(1));
  EXPECT_LT(ch.h_d[0].norm(), 1e-12);
}

TEST(ChannelSet, DirectLinkIndependentOfRisSize) {
  ExperimentConfig small, large;
  for (ExperimentConfig* c : {&small, &large}) {
    c->m_antennas = 3;
    c->users = 2;
  }
  small.ris_nx = small.ris_nz = 2;
  large.ris_nx = large.ris_nz = 4;
  SplitMix64 rng(321);
  ChannelSet a = generate_channel_set(small, rng.fork(1));
  ChannelSet b = generate_channel_set(large, rng.fork(1));
  EXPECT_TRUE(a.h_d[0] == b.h_d[0]);
  EXPECT_TRUE(a.h_d[1] == b.h_d[1]);
  EXPECT_TRUE(a.ue_positions[1] == b.ue_positions[1]);
}

TEST(ChannelSet, EmptyRegionRejected) {
  ExperimentConfig cfg;
  cfg.ue_region_lo = Eigen::Vector3d(1, 0, 0);
  cfg.ue_region_hi = Eigen::Vector3d(-1, 10, 0);
  SplitMix64 rng(5);
  EXPECT_THROW(generate_channel_set(cfg, rng), ConfigError);
}
