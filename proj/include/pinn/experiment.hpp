#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "pinn/activation.hpp"
#include "pinn/errors.hpp"
#include "pinn/geometry.hpp"
#include "pinn/loss.hpp"
#include "pinn/optimizer.hpp"

namespace pinn {

/// Width sweep with T = m steps per run. train_template.steps and .seed are
/// ignored (bound per run); an unset train_template.eta means 1/sqrt(m).
struct ExperimentConfig {
  std::vector<int> widths;
  int runs_per_width = 10000;
  double percentile = 0.9;
  TrainConfig train_template;
  double init_a = 2.0;
  std::uint64_t base_seed = 0;
  int workers = 1;
};

struct WidthStat {
  int m = 0;
  double percentile_value = 0.0;
  double mean = 0.0;
  double std = 0.0;
  int n_runs = 0;
};

struct ExperimentResult {
  std::vector<WidthStat> widths;
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
};

class ExperimentDivergedError : public DivergedError {
 public:
  ExperimentDivergedError(const std::string& what, int step, int m, int run, std::uint64_t seed)
      : DivergedError(what, step), m_(m), run_(run), seed_(seed) {}
  int width() const { return m_; }
  int run() const { return run_; }
  std::uint64_t seed() const { return seed_; }

 private:
  int m_, run_;
  std::uint64_t seed_;
};

/// derive_seed(base_seed, {m, run}): each run is reproducible from its coordinates.
std::uint64_t run_seed(std::uint64_t base_seed, int m, int run);

/// Time average of one run of the sweep (init and training share one stream).
double run_single(const PoissonProblem& prob, const Activation& act, const ExperimentConfig& cfg, int m, int run);

/// All time averages for width m, indexed by run. `workers` > 1 runs them on
/// an OpenMP pool; the result does not depend on the worker count.
std::vector<double> run_width(const PoissonProblem& prob, const Activation& act, const ExperimentConfig& cfg, int m);

ExperimentResult run_experiment(const PoissonProblem& prob, const Activation& act, const ExperimentConfig& cfg);

/// Nearest-rank percentile: the ceil(q n)-th smallest value.
double percentile(std::vector<double> values, double q);

/// Ordinary least squares of ln y on ln x; returns (slope, intercept).
std::pair<double, double> fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

struct GapEstimate {
  double gap = 0.0;
  double std_error = 0.0;
  double empirical = 0.0;  // E_S(theta)
  double reference = 0.0;  // averaged-convention MC estimate of E(theta)
};

/// |E_S(theta) - E(theta)| with E in the averaged convention (comparable to E_S),
/// estimated by Monte Carlo with n_mc points per set.
GapEstimate generalization_gap(const PoissonProblem& prob, const NetworkParams& net, const SampleSet& s,
                               int n_mc, Rng& rng);

/// CSV columns: m,percentile,mean,std,n_runs. SVG: log-log scatter with the
/// fitted line and a slope -1/2 reference. Writes nothing for an empty result.
void emit_results(const ExperimentResult& res, const std::filesystem::path& csv_path,
                  const std::filesystem::path& svg_path);

std::vector<WidthStat> read_results_csv(const std::filesystem::path& csv_path);

}  // namespace pinn
