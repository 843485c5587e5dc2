#include "pinn/optimizer.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "pinn/errors.hpp"
#include "pinn/seeding.hpp"

namespace pinn {

double TrainConfig::step_size() const {
  return eta ? *eta : 1.0 / std::sqrt(static_cast<double>(steps));
}

Vec project_ball(const VecIn& point, const VecIn& center, double radius) {
  require(radius > 0, "projection radius must be positive");
  require(point.size() == center.size(), "projection point and center differ in dimension");
  const Vec diff = point - center;
  const double n = diff.stableNorm();  // no overflow for huge steps
  if (n <= radius) return point;
  // Shrink by ulps until the rounded result is inside, so projecting again is a no-op.
  double scale = radius / n;
  Vec out = center + scale * diff;
  while ((out - center).stableNorm() > radius) {
    scale = std::nextafter(scale, 0.0);
    out = center + scale * diff;
  }
  return out;
}

namespace {

void validate(const NetworkParams& init, const TrainConfig& cfg) {
  require(cfg.p > 0, "projection radius p must be positive");
  require(cfg.step_size() >= 0 && std::isfinite(cfg.step_size()), "step size must be finite and nonnegative");
  require(cfg.steps >= 1, "step count T must be at least 1");
  require(cfg.batch_interior >= 1 && cfg.batch_boundary >= 1, "batch sizes must be at least 1");
  require(init.theta() == init.theta0(), "training must start at theta = theta0");
}

// One projected step in place; returns max_i |theta_i - theta_i(0)|.
double step_and_project(NetworkParams& net, const Mat& grad, double eta, double radius) {
  Mat& th = net.theta();
  const Mat& th0 = net.theta0();
  th.noalias() -= eta * grad;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < th.rows(); ++i) {
    double n = (th.row(i) - th0.row(i)).stableNorm();
    if (n > radius) {
      th.row(i) = project_ball(th.row(i).transpose(), th0.row(i).transpose(), radius).transpose();
      n = (th.row(i) - th0.row(i)).stableNorm();
    }
    worst = std::max(worst, n);
  }
  return worst;
}

// Runs the T projected steps on `net` in place. `rec`, when given, receives
// the per-step telemetry and the best-iterate snapshot. Returns the sum of the
// recorded losses.
double run_steps(const PoissonProblem& prob, NetworkParams& net, const TrainConfig& cfg, Rng& rng,
                 RunRecord* rec) {
  const double eta = cfg.step_size();
  const double radius = cfg.p / std::sqrt(static_cast<double>(net.width()));
  SampleSet s;
  if (cfg.resample == Resample::Fixed)
    s = draw_samples(prob.domain, cfg.batch_interior, cfg.batch_boundary, rng);
  Mat grad;
  double sum = 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int t = 0; t < cfg.steps; ++t) {
    if (cfg.resample == Resample::Fresh)
      s = draw_samples(prob.domain, cfg.batch_interior, cfg.batch_boundary, rng);
    const LossBreakdown loss = loss_and_gradient(prob, net, s, grad, cfg.exec);
    if (!std::isfinite(loss.total) || !grad.allFinite())
      throw DivergedError("non-finite loss or gradient at step " + std::to_string(t), t);
    sum += loss.total;
    if (rec) {
      rec->losses.push_back(loss);
      rec->grad_sq_norm.push_back(grad.squaredNorm());
      if (loss.total < best) {
        best = loss.total;
        rec->best_step = t;
        rec->best_params.theta() = net.theta();
      }
    }
    const double disp = step_and_project(net, grad, eta, radius);
    if (rec) rec->max_displacement.push_back(disp);
  }
  return sum;
}

}  // namespace

RunRecord train(const PoissonProblem& prob, const NetworkParams& init, const TrainConfig& cfg, Rng& rng) {
  validate(init, cfg);
  RunRecord rec{{}, {}, {}, 0.0, 0, init, init};
  rec.losses.reserve(cfg.steps);
  rec.grad_sq_norm.reserve(cfg.steps);
  rec.max_displacement.reserve(cfg.steps);
  const double sum = run_steps(prob, rec.final_params, cfg, rng, &rec);
  rec.time_average = sum / cfg.steps;
  return rec;
}

RunRecord train(const PoissonProblem& prob, const NetworkParams& init, const TrainConfig& cfg) {
  Rng rng(derive_seed(cfg.seed, {kTrainStream}));
  return train(prob, init, cfg, rng);
}

double train_time_average(const PoissonProblem& prob, const NetworkParams& init,
                          const TrainConfig& cfg, Rng& rng) {
  validate(init, cfg);
  NetworkParams net = init;
  return run_steps(prob, net, cfg, rng, nullptr) / cfg.steps;
}

}  // namespace pinn
