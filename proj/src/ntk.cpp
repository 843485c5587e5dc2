#include "pinn/ntk.hpp"

#include <cmath>

#include "pinn/errors.hpp"
#include "pinn/init.hpp"

namespace pinn {

namespace {

KernelEstimate summarize(const Vec& terms) {
  const double n = static_cast<double>(terms.size());
  const double mu = terms.mean();
  KernelEstimate out;
  out.value = mu;
  out.n_samples = static_cast<long>(terms.size());
  out.std_error = terms.size() > 1 ? std::sqrt((terms.array() - mu).square().sum() / (n - 1.0) / n) : 0.0;
  return out;
}

}  // namespace

Mat draw_kernel_samples(double a, int d, int n, Rng& rng) {
  require(n >= 1, "kernel sample count must be positive");
  Mat out(n, d);
  for (int j = 0; j < n; ++j) out.row(j) = sample_truncated_normal(a, d, rng).transpose();
  return out;
}

KernelEstimate ntk_kernel_on(const Activation& act, const Mat& thetas, const VecIn& x, const VecIn& x2) {
  require(x.size() == thetas.cols() && x2.size() == thetas.cols(), "kernel points must match the sample dimension");
  require(thetas.rows() >= 2, "kernel estimate needs at least two samples");
  const double xx = x.dot(x2);
  Vec terms(thetas.rows());
  for (Eigen::Index j = 0; j < thetas.rows(); ++j) {
    const double d1 = act.eval_all(thetas.row(j).dot(x))[1];
    const double d2 = act.eval_all(thetas.row(j).dot(x2))[1];
    terms[j] = xx * d1 * d2;
  }
  return summarize(terms);
}

KernelEstimate ntk_kernel_mc(const Activation& act, double a, const VecIn& x, const VecIn& x2, int n, Rng& rng) {
  require(n >= 2, "kernel estimate needs at least two samples");
  require(x.size() == x2.size(), "kernel points differ in dimension");
  return ntk_kernel_on(act, draw_kernel_samples(a, static_cast<int>(x.size()), n, rng), x, x2);
}

Mat ntk_gram_on(const Activation& act, const Mat& thetas, const Mat& points, Exec exec) {
  require(points.rows() >= 1, "Gram matrix needs at least one point");
  require(points.cols() == thetas.cols(), "points must match the sample dimension");
  const Eigen::Index n = points.rows(), s = thetas.rows();
  // Explicit features phi_j(x) = sigma'(theta_j^T x) scaled by 1/sqrt(s); the
  // Gram is (X X^T) .* (Phi Phi^T), a Schur product of two PSD matrices.
  Mat phi(n, s);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index j = 0; j < s; ++j) phi(p, j) = act.eval_all(thetas.row(j).dot(points.row(p)))[1];
  Mat gram(n, n);
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = 0; q <= p; ++q) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < s; ++j) acc += phi(p, j) * phi(q, j);
      gram(p, q) = points.row(p).dot(points.row(q)) * acc / static_cast<double>(s);
    }
  }
  for (Eigen::Index p = 0; p < n; ++p)
    for (Eigen::Index q = p + 1; q < n; ++q) gram(p, q) = gram(q, p);
  return gram;
}

Mat ntk_gram(const Activation& act, double a, const Mat& points, int n_mc, Rng& rng, Exec exec) {
  require(n_mc >= 1, "kernel sample count must be positive");
  return ntk_gram_on(act, draw_kernel_samples(a, static_cast<int>(points.cols()), n_mc, rng), points, exec);
}

double empirical_ntk(const NetworkParams& net, const VecIn& x, const VecIn& x2) {
  NetworkParams at0(net.activation(), net.theta0(), net.c());
  double acc = 0.0;
  for (int i = 0; i < net.width(); ++i) acc += net_grad(at0, x, i).dot(net_grad(at0, x2, i));
  return acc;
}

KernelEstimate empirical_ntk_estimate(const NetworkParams& net, const VecIn& x, const VecIn& x2) {
  NetworkParams at0(net.activation(), net.theta0(), net.c());
  const int half = net.width() / 2;
  // Pair-unit u_k = (m/2) (g_k.g'_k + g_{k+h}.g'_{k+h}); mean of u = sum over all neurons.
  Vec units(half);
  for (int k = 0; k < half; ++k)
    units[k] = half * (net_grad(at0, x, k).dot(net_grad(at0, x2, k)) +
                       net_grad(at0, x, k + half).dot(net_grad(at0, x2, k + half)));
  KernelEstimate est = summarize(units);
  est.n_samples = half;
  return est;
}

}  // namespace pinn
