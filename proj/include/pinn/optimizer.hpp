#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "pinn/geometry.hpp"
#include "pinn/loss.hpp"
#include "pinn/network.hpp"

namespace pinn {

enum class Resample { Fresh, Fixed };

struct TrainConfig {
  double p = 1.0;              // projection radius; per-neuron ball radius is p/sqrt(m)
  std::optional<double> eta;   // step size; defaults to 1/sqrt(T)
  int steps = 1;               // T
  int batch_interior = 1;      // b_Omega
  int batch_boundary = 1;      // b_dOmega
  Resample resample = Resample::Fresh;
  std::uint64_t seed = 0;
  Exec exec = Exec::Serial;

  double step_size() const;
};

/// Per-step outcome. Losses are E_{S_t}(theta(t)) evaluated before the update.
struct RunRecord {
  std::vector<LossBreakdown> losses;
  std::vector<double> grad_sq_norm;      // sum_i |grad_{theta_i} E_{S_t}(theta(t))|^2
  std::vector<double> max_displacement;  // max_i |theta_i(t+1) - theta_i(0)| after projection
  double time_average = 0.0;
  int best_step = 0;  // first argmin of losses[t].total
  NetworkParams best_params;
  NetworkParams final_params;
};

/// Euclidean projection onto the closed ball B(center, radius).
Vec project_ball(const VecIn& point, const VecIn& center, double radius);

/// Projected (stochastic) gradient descent. `init` must satisfy theta == theta0.
/// Fresh mode draws a new sample set from `rng` each step (interior, then
/// boundary); Fixed mode draws one set up front. Throws DivergedError on a
/// non-finite loss or gradient.
RunRecord train(const PoissonProblem& prob, const NetworkParams& init, const TrainConfig& cfg, Rng& rng);

/// train() with rng seeded from derive_seed(cfg.seed, {kTrainStream}).
RunRecord train(const PoissonProblem& prob, const NetworkParams& init, const TrainConfig& cfg);

/// Time average only, skipping the snapshots/telemetry; this is the hot loop of
/// the experiment harness. Produces the same time_average as train().
double train_time_average(const PoissonProblem& prob, const NetworkParams& init,
                          const TrainConfig& cfg, Rng& rng);

}  // namespace pinn
