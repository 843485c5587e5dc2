#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pinn/network.hpp"
#include "pinn/types.hpp"

namespace pinn {

/// One row of the `verify` table. `measured` is compared against `bound`
/// (measured <= bound passes, unless the check documents a window).
struct CheckResult {
  std::string group;
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double bound = 0.0;
  std::string detail;
};

struct VerifyOptions {
  std::string only;  // empty: every group
  std::uint64_t seed = 1;
};

/// Group names accepted by VerifyOptions::only.
std::vector<std::string> verify_groups();

/// Fast invariant suite (gradient checks, Laplacian, symmetric init,
/// projection, linearization scaling, NTK). Throws ContractViolation for an
/// unknown group.
std::vector<CheckResult> run_verify(const VerifyOptions& opts);

/// Per-neuron displacement drawn uniformly from the ball of the given radius.
Mat random_ball_displacement(int m, int d, double radius, Rng& rng);

/// Worst of `trials` random in-ball perturbations of |theta_i - theta_i(0)| <= p/sqrt(m):
/// (max |F - F_lin|, max |Delta F - (Delta F)_lin|) at x.
struct LinearizationResidual {
  double value = 0.0;
  double laplacian = 0.0;
};
LinearizationResidual worst_linearization_residual(const NetworkParams& init, const VecIn& x, double p, int trials,
                                                   Rng& rng);

/// Median over `inits` symmetric initializations (truncation a) of the
/// worst-of-`trials` Laplacian linearization residual at width m.
double median_laplacian_residual(int m, const VecIn& x, double p, double a, int inits, int trials, std::uint64_t seed);

}  // namespace pinn
