#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pinn/activation.hpp"
#include "pinn/experiment.hpp"
#include "pinn/geometry.hpp"
#include "pinn/init.hpp"
#include "pinn/optimizer.hpp"

namespace pinn {

/// Plain description of a problem as it appears in a config file.
struct ProblemSpec {
  enum class Shape { Ball, Box } shape = Shape::Ball;
  std::vector<double> center{0.0, 2.0};
  double radius = 1.0;
  std::vector<double> lo, hi;
  std::string source = "constant:1";
  double lambda = 1.0;

  Domain domain() const;
  PoissonProblem build() const;
};

/// Parsed JSON config. Every section is optional and defaults to the disc
/// example; unknown keys are rejected.
struct Config {
  ProblemSpec problem;
  std::string activation = "tanh";
  InitConfig init;
  TrainConfig train;
  std::optional<ExperimentConfig> experiment;
};

/// Parses JSON text. Syntax errors carry 1-based line/column; schema errors
/// name the offending key.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Canonical JSON for `cfg`; parse_config(dump_config(c)) reproduces c.
std::string dump_config(const Config& cfg);

/// Initialization settings bound to the problem dimension.
InitConfig init_for(const Config& cfg);

}  // namespace pinn

namespace pinn {

/// Experiment settings with the train template and truncation taken from the
/// `train` and `init` sections. Requires cfg.experiment.
ExperimentConfig experiment_for(const Config& cfg);

}  // namespace pinn
