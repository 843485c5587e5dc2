#pragma once

#include "pinn/activation.hpp"

namespace pinn {

/// Explicit constants of the bounded-gradient argument for Algorithm-style
/// projected descent with |theta_i - theta_i(0)| <= p/sqrt(m) and theta_i(0) in
/// [-a, a]^d. Every field is an upper bound valid for all x in Omega.
struct GradientBounds {
  double c_omega = 0;     // sup |x| over Omega
  double theta_a = 0;     // sup |theta_i(0)| = a sqrt(d)
  double theta_r = 0;     // sup |theta_i(t)| = theta_a + p/sqrt(m)
  double grad_f = 0;      // |grad_{theta_i} F| <= grad_f            (= c_omega s1 / sqrt(m))
  double grad_lap_f = 0;  // |grad_{theta_i} Delta F| <= grad_lap_f  (d/sqrt(m) (2 r s2 + c_omega s3 r^2))
  double f_sup = 0;       // |F| <= s1 c_omega p
  double c3 = 0;          // |Delta F| <= c3
  double c4 = 0;          // interior part of |grad_{theta_i} E_S| times sqrt(m)
  double c5 = 0;          // boundary part of |grad_{theta_i} E_S| times sqrt(m)
  int m = 0;

  /// Bound on each row norm |grad_{theta_i} E_S|.
  double row_norm() const;
  /// Bound on sum_i |grad_{theta_i} E_S|^2, i.e. (c4 + c5)^2.
  double total_squared() const { return (c4 + c5) * (c4 + c5); }
};

struct BoundInputs {
  ActivationBounds sigma;
  double a = 2.0;
  int d = 1;
  int m = 2;
  double c_omega = 1.0;
  double p = 1.0;
  double lambda = 1.0;
  double source_sup = 0.0;
};

GradientBounds gradient_bounds(const BoundInputs& in);

/// |F(x; theta) - F_lin(x; theta)| <= s2 |x|^2 p^2 / sqrt(m).
double linearization_value_bound(const ActivationBounds& sigma, double x_norm, double p, int m);

/// |sum_i (grad F(x; theta) - grad F(x; theta0))^T (theta_i - theta_i(0))| <= p^2 c_omega^2 s2 / sqrt(m).
double tangent_drift_bound(const ActivationBounds& sigma, double c_omega, double p, int m);

}  // namespace pinn
