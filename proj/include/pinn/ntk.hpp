#pragma once

#include "pinn/activation.hpp"
#include "pinn/network.hpp"
#include "pinn/types.hpp"

namespace pinn {

struct KernelEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
};

/// n rows of i.i.d. N_a(0, I_d) draws: the shared sample behind kernel estimates.
Mat draw_kernel_samples(double a, int d, int n, Rng& rng);

/// Population NTK K(x, x') = x^T x' E_theta[sigma'(theta^T x) sigma'(theta^T x')]
/// estimated on a given theta sample.
KernelEstimate ntk_kernel_on(const Activation& act, const Mat& thetas, const VecIn& x, const VecIn& x2);

/// Same, drawing n fresh theta ~ N_a(0, I_d) from rng.
KernelEstimate ntk_kernel_mc(const Activation& act, double a, const VecIn& x, const VecIn& x2, int n, Rng& rng);

/// Gram matrix over point rows, every entry computed on one shared theta sample
/// so the estimate is positive semidefinite.
Mat ntk_gram_on(const Activation& act, const Mat& thetas, const Mat& points, Exec exec = Exec::Serial);
Mat ntk_gram(const Activation& act, double a, const Mat& points, int n_mc, Rng& rng,
             Exec exec = Exec::Serial);

/// Finite-width kernel sum_i grad_{theta_i} F(x; theta0)^T grad_{theta_i} F(x'; theta0).
double empirical_ntk(const NetworkParams& net, const VecIn& x, const VecIn& x2);

/// empirical_ntk with a standard error, treating the m/2 neuron pairs
/// (i, i + m/2) as the independent units of a symmetric initialization.
KernelEstimate empirical_ntk_estimate(const NetworkParams& net, const VecIn& x, const VecIn& x2);

}  // namespace pinn
