#pragma once

#include <functional>

#include "pinn/activation.hpp"
#include "pinn/types.hpp"

namespace pinn {

/// Shallow network F(x) = sum_i c_i sigma(theta_i^T x) with fixed output weights.
///
/// Output-weight convention: `c` stores the full output weight including the
/// 1/sqrt(m) scale, so |c_i| = 1/sqrt(m) and every derivative formula uses c_i
/// directly with no further normalization.
///
/// theta0 (the initialization) is frozen at construction; theta is the trained
/// copy and starts equal to theta0.
class NetworkParams {
 public:
  NetworkParams(Activation act, Mat theta0, Vec c);

  int width() const { return static_cast<int>(theta0_.rows()); }
  int dim() const { return static_cast<int>(theta0_.cols()); }
  const Activation& activation() const { return act_; }

  const Mat& theta() const { return theta_; }
  /// Mutable access for the optimizer and for tests building perturbed weights.
  /// The shape is fixed; resizing through this reference is a contract violation
  /// that the evaluators will reject.
  Mat& theta() { return theta_; }
  const Mat& theta0() const { return theta0_; }
  const Vec& c() const { return c_; }

  /// theta - theta0.
  Mat displacement() const { return theta_ - theta0_; }

 private:
  Activation act_;
  Mat theta0_;
  Mat theta_;
  Vec c_;
};

double net_eval(const NetworkParams& net, const VecIn& x);

/// Laplacian in x: sum_i c_i |theta_i|^2 sigma''(theta_i^T x).
double net_laplacian(const NetworkParams& net, const VecIn& x);

/// Spatial gradient in x: sum_i c_i theta_i sigma'(theta_i^T x).
Vec net_spatial_grad(const NetworkParams& net, const VecIn& x);

/// d F / d theta_i = c_i x sigma'(theta_i^T x).
Vec net_grad(const NetworkParams& net, const VecIn& x, int i);

/// d (Delta F) / d theta_i, entry k: c_i (x_k |theta_i|^2 sigma'''(z) + 2 theta_ik sigma''(z)).
Vec net_grad_laplacian(const NetworkParams& net, const VecIn& x, int i);

/// First-order expansion of the network in theta around theta0.
class LinearizedModel {
 public:
  /// Linearizes `net` around its own theta0 with displacement theta - theta0.
  explicit LinearizedModel(const NetworkParams& net);
  LinearizedModel(const NetworkParams& base, Mat displacement);

  const NetworkParams& base() const { return base_; }
  const Mat& displacement() const { return displacement_; }

 private:
  NetworkParams base_;  // evaluated at theta0
  Mat displacement_;
};

/// F(x; theta0) + sum_i grad_{theta_i} F(x; theta0)^T (theta_i - theta_i(0)).
double linearized_eval(const LinearizedModel& lin, const VecIn& x);

/// Delta F(x; theta0) + sum_i grad_{theta_i} Delta F(x; theta0)^T (theta_i - theta_i(0)).
double linearized_laplacian(const LinearizedModel& lin, const VecIn& x);

using TransportMap = std::function<Vec(const VecIn&)>;

/// theta_i = theta_i(0) + sign(c_i)/sqrt(m) * v(theta_i(0)). Throws
/// TransportBoundError if |v(theta_i(0))| > p for any sampled neuron.
NetworkParams transport_to_weights(const NetworkParams& init, const TransportMap& v, double p);

}  // namespace pinn
