#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pinn/errors.hpp"
#include "pinn/init.hpp"
#include "pinn/ntk.hpp"

using namespace pinn;
using oracle::Vec;

namespace {

TEST(Ntk, ZeroPointGivesZero) {
  Rng rng(1);
  const Vec x = Vec::Zero(3), y = oracle::random_vec(3, rng);
  const KernelEstimate e = ntk_kernel_mc(Activation(), 2.0, x, y, 1000, rng);
  EXPECT_EQ(e.value, 0.0);
  EXPECT_EQ(e.std_error, 0.0);
  EXPECT_EQ(e.n_samples, 1000);
}

TEST(Ntk, SymmetricWithSharedStream) {
  Rng r0(2);
  const Vec x = oracle::random_vec(2, r0), y = oracle::random_vec(2, r0);
  Rng r1(9), r2(9);
  EXPECT_EQ(ntk_kernel_mc(Activation(), 2.0, x, y, 5000, r1).value,
            ntk_kernel_mc(Activation(), 2.0, y, x, 5000, r2).value);
}

TEST(Ntk, DiagonalBoundedBySigmaOne) {
  Rng rng(3);
  for (auto kind : {ActivationKind::Tanh, ActivationKind::Sigmoid, ActivationKind::Sine}) {
    const Activation act(kind);
    const Vec x = oracle::random_vec(3, rng, -2, 2);
    const KernelEstimate e = ntk_kernel_mc(act, 1.5, x, x, 2000, rng);
    EXPECT_GE(e.value, 0.0);
    EXPECT_LE(e.value, x.squaredNorm() * std::pow(act.bounds().s1, 2));
  }
}

TEST(Ntk, MatchesDirectTruncatedNormalIntegral) {
  // d = 1: K(x, y) = x y E[tanh'(t x) tanh'(t y)], t ~ N(0,1) on (-a, a).
  const double a = 1.5, x = 0.8, y = -1.3;
  const double num = oracle::simpson(
      [&](double t) { return std::exp(-t * t / 2) * oracle::tanh_d1(t * x) * oracle::tanh_d1(t * y); }, -a, a);
  const double den = oracle::simpson([](double t) { return std::exp(-t * t / 2); }, -a, a);
  const double exact = x * y * num / den;
  Rng rng(4);
  const KernelEstimate e = ntk_kernel_mc(Activation(), a, Vec{{x}}, Vec{{y}}, 200000, rng);
  EXPECT_NEAR(e.value, exact, 4 * e.std_error);
}

TEST(Ntk, GramEntriesMatchKernelOnSharedSample) {
  Rng rng(5);
  const Mat pts = Mat::Random(5, 2) * 2.0;
  const Mat thetas = draw_kernel_samples(2.0, 2, 3000, rng);
  const Mat g = ntk_gram_on(Activation(), thetas, pts);
  for (int p = 0; p < 5; ++p)
    for (int q = 0; q < 5; ++q)
      EXPECT_NEAR(g(p, q), ntk_kernel_on(Activation(), thetas, pts.row(p).transpose(), pts.row(q).transpose()).value,
                  1e-12);
  EXPECT_EQ(g, g.transpose());
  EXPECT_LT((ntk_gram_on(Activation(), thetas, pts, Exec::Parallel) - g).norm(), 1e-14);
}

TEST(Ntk, GramIsPositiveSemidefinite) {
  Rng rng(6);
  for (int rep = 0; rep < 10; ++rep) {
    // Include near-duplicate points to stress the small eigenvalues.
    Mat pts = Mat::Random(8, 2) * 3.0;
    pts.row(7) = pts.row(6) + 1e-9 * Mat::Ones(1, 2);
    const Mat g = ntk_gram(Activation(), 2.0, pts, 500, rng);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff(), -1e-10);
  }
  const Mat one = ntk_gram(Activation(), 2.0, Mat::Ones(1, 3), 50, rng);
  ASSERT_EQ(one.rows(), 1);
  EXPECT_GE(one(0, 0), 0.0);
}

TEST(Ntk, EmpiricalKernelMatchesGradientInnerProducts) {
  Rng rng(7);
  NetworkParams net = symmetric_init({2.0, 16, 2, 1}, Activation());
  const Vec x = oracle::random_vec(2, rng), y = oracle::random_vec(2, rng);
  double direct = 0;
  for (int i = 0; i < 16; ++i) {
    const double zi = net.theta0().row(i).dot(x), yi = net.theta0().row(i).dot(y);
    direct += net.c()[i] * net.c()[i] * x.dot(y) * oracle::tanh_d1(zi) * oracle::tanh_d1(yi);
  }
  EXPECT_NEAR(empirical_ntk(net, x, y), direct, 1e-14);
  // Evaluated at theta0 regardless of training.
  net.theta() += Mat::Ones(16, 2);
  EXPECT_NEAR(empirical_ntk(net, x, y), direct, 1e-14);
  EXPECT_GE(empirical_ntk(net, x, x), 0.0);
  EXPECT_NEAR(empirical_ntk_estimate(net, x, y).value, direct, 1e-14);
}

TEST(Ntk, EmpiricalKernelScalingInX) {
  Rng rng(8);
  const NetworkParams net = symmetric_init({2.0, 32, 2, 2}, Activation());
  const Vec x = oracle::random_vec(2, rng), y = oracle::random_vec(2, rng);
  double direct = 0;
  for (int i = 0; i < 32; ++i)
    direct += 2 * x.dot(y) * oracle::tanh_d1(2 * net.theta0().row(i).dot(x)) *
              oracle::tanh_d1(net.theta0().row(i).dot(y)) / 32.0;
  EXPECT_NEAR(empirical_ntk(net, 2 * x, y), direct, 1e-14);
}

TEST(Ntk, FiniteWidthConvergesToPopulation) {
  Rng rng(9);
  const NetworkParams net = symmetric_init({2.0, 1 << 14, 2, 3}, Activation());
  for (int rep = 0; rep < 3; ++rep) {
    const Vec x = oracle::random_vec(2, rng, -2, 2), y = oracle::random_vec(2, rng, -2, 2);
    const KernelEstimate fin = empirical_ntk_estimate(net, x, y);
    const KernelEstimate pop = ntk_kernel_mc(Activation(), 2.0, x, y, 200000, rng);
    EXPECT_LE(std::abs(fin.value - pop.value), 4 * std::hypot(fin.std_error, pop.std_error));
  }
}

TEST(Ntk, Errors) {
  Rng rng(10);
  EXPECT_THROW(ntk_kernel_mc(Activation(), 2.0, Vec::Zero(2), Vec::Zero(2), 1, rng), ContractViolation);
  EXPECT_THROW(ntk_kernel_mc(Activation(), 2.0, Vec::Zero(2), Vec::Zero(3), 10, rng), ContractViolation);
  EXPECT_THROW(ntk_gram(Activation(), 2.0, Mat(0, 2), 10, rng), ContractViolation);
}

}  // namespace
