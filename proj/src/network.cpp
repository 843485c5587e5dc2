#include "pinn/network.hpp"

#include <cmath>
#include <string>

#include "pinn/errors.hpp"

namespace pinn {

namespace {

void check_x(const NetworkParams& net, const VecIn& x) {
  if (x.size() != net.dim())
    throw ContractViolation("input has dimension " + std::to_string(x.size()) +
                            ", network expects " + std::to_string(net.dim()));
}

void check_neuron(const NetworkParams& net, int i) {
  if (i < 0 || i >= net.width())
    throw ContractViolation("neuron index " + std::to_string(i) + " out of range [0, " +
                            std::to_string(net.width()) + ")");
}

void check_shape(const NetworkParams& net) {
  if (net.theta().rows() != net.width() || net.theta().cols() != net.dim())
    throw ContractViolation("theta shape no longer matches theta0");
}

}  // namespace

NetworkParams::NetworkParams(Activation act, Mat theta0, Vec c)
    : act_(act), theta0_(std::move(theta0)), theta_(theta0_), c_(std::move(c)) {
  const auto m = theta0_.rows();
  require(m > 0 && m % 2 == 0, "network width must be a positive even number");
  require(theta0_.cols() > 0, "input dimension must be positive");
  require(c_.size() == m, "output weight vector must have one entry per neuron");
  const double mag = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index i = 0; i < m; ++i)
    require(std::abs(std::abs(c_[i]) - mag) <= 1e-12 * mag, "output weights must be +-1/sqrt(m)");
}

double net_eval(const NetworkParams& net, const VecIn& x) {
  check_x(net, x);
  check_shape(net);
  const Mat& th = net.theta();
  // The two halves are summed separately so that a sign-paired network
  // (rows i and i + m/2 equal, c negated) cancels exactly.
  const int h = net.width() / 2;
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < h; ++i) lo += net.c()[i] * net.activation().eval_all(th.row(i).dot(x))[0];
  for (int i = h; i < net.width(); ++i) hi += net.c()[i] * net.activation().eval_all(th.row(i).dot(x))[0];
  return lo + hi;
}

double net_laplacian(const NetworkParams& net, const VecIn& x) {
  check_x(net, x);
  check_shape(net);
  const Mat& th = net.theta();
  const int h = net.width() / 2;
  double half[2] = {0.0, 0.0};
  for (int i = 0; i < net.width(); ++i) {
    const auto s = net.activation().eval_all(th.row(i).dot(x));
    half[i >= h] += net.c()[i] * th.row(i).squaredNorm() * s[2];
  }
  return half[0] + half[1];
}

Vec net_spatial_grad(const NetworkParams& net, const VecIn& x) {
  check_x(net, x);
  check_shape(net);
  const Mat& th = net.theta();
  const int h = net.width() / 2;
  Vec lo = Vec::Zero(net.dim()), hi = Vec::Zero(net.dim());
  for (int i = 0; i < net.width(); ++i) {
    const auto s = net.activation().eval_all(th.row(i).dot(x));
    (i < h ? lo : hi) += (net.c()[i] * s[1]) * th.row(i).transpose();
  }
  return lo + hi;
}

Vec net_grad(const NetworkParams& net, const VecIn& x, int i) {
  check_x(net, x);
  check_neuron(net, i);
  check_shape(net);
  const double z = net.theta().row(i).dot(x);
  return (net.c()[i] * net.activation().eval_all(z)[1]) * x;
}

Vec net_grad_laplacian(const NetworkParams& net, const VecIn& x, int i) {
  check_x(net, x);
  check_neuron(net, i);
  check_shape(net);
  const auto row = net.theta().row(i);
  const auto s = net.activation().eval_all(row.dot(x));
  const double ci = net.c()[i];
  return ci * (row.squaredNorm() * s[3]) * x + (2.0 * ci * s[2]) * row.transpose();
}

LinearizedModel::LinearizedModel(const NetworkParams& net)
    : LinearizedModel(net, net.displacement()) {}

LinearizedModel::LinearizedModel(const NetworkParams& base, Mat displacement)
    : base_(base.activation(), base.theta0(), base.c()), displacement_(std::move(displacement)) {
  require(displacement_.rows() == base_.width() && displacement_.cols() == base_.dim(),
          "displacement must have shape m x d");
}

double linearized_eval(const LinearizedModel& lin, const VecIn& x) {
  const NetworkParams& net = lin.base();
  double acc = net_eval(net, x);
  for (int i = 0; i < net.width(); ++i)
    acc += net_grad(net, x, i).dot(lin.displacement().row(i));
  return acc;
}

double linearized_laplacian(const LinearizedModel& lin, const VecIn& x) {
  const NetworkParams& net = lin.base();
  double acc = net_laplacian(net, x);
  for (int i = 0; i < net.width(); ++i)
    acc += net_grad_laplacian(net, x, i).dot(lin.displacement().row(i));
  return acc;
}

NetworkParams transport_to_weights(const NetworkParams& init, const TransportMap& v, double p) {
  require(p > 0, "transport bound p must be positive");
  const int m = init.width();
  const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(m));
  NetworkParams out(init.activation(), init.theta0(), init.c());
  for (int i = 0; i < m; ++i) {
    const Vec th0 = init.theta0().row(i).transpose();
    const Vec vi = v(th0);
    if (vi.size() != init.dim())
      throw ContractViolation("transport map returned a vector of the wrong dimension");
    const double nv = vi.norm();
    if (!(nv <= p))
      throw TransportBoundError("transport map has norm " + std::to_string(nv) +
                                " > p = " + std::to_string(p) + " at neuron " + std::to_string(i));
    const double sign = init.c()[i] > 0 ? 1.0 : -1.0;
    out.theta().row(i) = (th0 + (sign * inv_sqrt_m) * vi).transpose();
  }
  return out;
}

}  // namespace pinn
