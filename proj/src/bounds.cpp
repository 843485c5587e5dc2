#include "pinn/bounds.hpp"

#include <cmath>

#include "pinn/errors.hpp"

namespace pinn {

double GradientBounds::row_norm() const { return (c4 + c5) / std::sqrt(static_cast<double>(m)); }

GradientBounds gradient_bounds(const BoundInputs& in) {
  require(in.m > 0 && in.d > 0 && in.p > 0 && in.a > 0, "bound inputs must be positive");
  const auto& s = in.sigma;
  const double sqm = std::sqrt(static_cast<double>(in.m));
  GradientBounds b;
  b.m = in.m;
  b.c_omega = in.c_omega;
  b.theta_a = in.a * std::sqrt(static_cast<double>(in.d));
  const double step = in.p / sqm;
  b.theta_r = b.theta_a + step;
  const double r = b.theta_r;

  b.grad_f = in.c_omega * s.s1 / sqm;
  b.grad_lap_f = in.d / sqm * (2.0 * r * s.s2 + in.c_omega * s.s3 * r * r);
  b.f_sup = s.s1 * in.c_omega * in.p;

  // Per neuron: |r_t^2 s''(z_t) - r_0^2 s''(z_0)| <= r_t^2 s3 |x||dtheta| + s2 |r_t^2 - r_0^2|
  // with |dtheta| <= p/sqrt(m) and |r_t^2 - r_0^2| <= (p/sqrt(m)) (2 theta_a + p/sqrt(m));
  // m neurons with |c_i| = 1/sqrt(m).
  b.c3 = sqm * step * (r * r * s.s3 * in.c_omega + s.s2 * (2.0 * b.theta_a + step));

  b.c4 = 2.0 * (b.c3 + in.source_sup) * in.d * (2.0 * r * s.s2 + in.c_omega * s.s3 * r * r);
  b.c5 = 2.0 * in.lambda * s.s1 * s.s1 * in.c_omega * in.c_omega * in.p;
  return b;
}

double linearization_value_bound(const ActivationBounds& sigma, double x_norm, double p, int m) {
  return sigma.s2 * x_norm * x_norm * p * p / std::sqrt(static_cast<double>(m));
}

double tangent_drift_bound(const ActivationBounds& sigma, double c_omega, double p, int m) {
  return p * p * c_omega * c_omega * sigma.s2 / std::sqrt(static_cast<double>(m));
}

}  // namespace pinn
