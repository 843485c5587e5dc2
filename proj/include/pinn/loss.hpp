#pragma once

#include "pinn/geometry.hpp"
#include "pinn/network.hpp"
#include "pinn/types.hpp"

namespace pinn {

/// Quadrature points: interior rows x_j in Omega, boundary rows y_j on its boundary.
struct SampleSet {
  Mat interior;
  Mat boundary;
};

SampleSet draw_samples(const Domain& dom, int n_interior, int n_boundary, Rng& rng);

/// residual_term = mean_j (Delta F(x_j) + f(x_j))^2
/// boundary_term = mean_j F(y_j)^2            (unweighted)
/// total         = residual_term + lambda * boundary_term
struct LossBreakdown {
  double residual_term = 0.0;
  double boundary_term = 0.0;
  double total = 0.0;
};

/// Empirical loss E_S.
LossBreakdown empirical_loss(const PoissonProblem& prob, const NetworkParams& net,
                             const SampleSet& s, Exec exec = Exec::Serial);

/// Gradient of E_S with respect to theta (m x d, row i = d/d theta_i).
Mat loss_gradient(const PoissonProblem& prob, const NetworkParams& net, const SampleSet& s,
                  Exec exec = Exec::Serial);

/// Loss and gradient from one pass over the samples.
LossBreakdown loss_and_gradient(const PoissonProblem& prob, const NetworkParams& net,
                                const SampleSet& s, Mat& grad, Exec exec = Exec::Serial);

/// Monte Carlo estimate of the exact loss
///   E = int_Omega (Delta F + f)^2 dx + lambda int_dOmega F^2 dy
///     ~ |Omega| mean_res + lambda |dOmega| mean_bd.
/// `integral` uses that convention (its boundary_term is the unweighted
/// boundary integral); `averaged` holds the plain means, comparable to E_S.
struct McLoss {
  LossBreakdown integral;
  double std_error = 0.0;
  LossBreakdown averaged;
  double averaged_std_error = 0.0;
};

McLoss exact_loss_mc(const PoissonProblem& prob, const NetworkParams& net, int n_interior,
                     int n_boundary, Rng& rng, Exec exec = Exec::Serial);

/// Monte Carlo L2(Omega) error |F - u*| and H1-seminorm error |grad F - grad u*|,
/// with delta-method standard errors. Throws UnsupportedError without u*.
struct SolutionError {
  double l2 = 0.0;
  double h1_seminorm = 0.0;
  double l2_std_error = 0.0;
  double h1_std_error = 0.0;
};

SolutionError solution_error(const PoissonProblem& prob, const NetworkParams& net, int n, Rng& rng);

}  // namespace pinn
