// pinn: train, experiment, ntk and verify front end.
//
// Exit codes: 0 success, 1 usage or config error, 2 numerical failure.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pinn/config.hpp"
#include "pinn/diagnostics.hpp"
#include "pinn/errors.hpp"
#include "pinn/experiment.hpp"
#include "pinn/init.hpp"
#include "pinn/ntk.hpp"
#include "pinn/optimizer.hpp"
#include "pinn/seeding.hpp"
#include "pinn/snapshot.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kNumerical = 2;

struct Common {
  std::optional<std::uint64_t> seed;
  bool deterministic = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Override every seed in the config");
  cmd->add_flag("--deterministic", c.deterministic, "Serial kernels and a single worker");
}

void apply_common(const Common& c, pinn::Config& cfg) {
  if (c.seed) {
    cfg.init.seed = *c.seed;
    cfg.train.seed = *c.seed;
    if (cfg.experiment) cfg.experiment->base_seed = *c.seed;
  }
  if (c.deterministic) {
    cfg.train.exec = pinn::Exec::Serial;
    if (cfg.experiment) cfg.experiment->workers = 1;
  }
}

pinn::Config load_or_default(const std::string& path) {
  return path.empty() ? pinn::Config{} : pinn::load_config(path);
}

int cmd_train(const std::string& config_path, const Common& common, const std::string& trace_path,
              const std::string& save_path, bool dump) {
  pinn::Config cfg = pinn::load_config(config_path);
  apply_common(common, cfg);
  if (dump) {
    std::cout << pinn::dump_config(cfg) << '\n';
    return kOk;
  }
  const pinn::PoissonProblem prob = cfg.problem.build();
  const pinn::NetworkParams init = pinn::symmetric_init(pinn::init_for(cfg), pinn::Activation::from_name(cfg.activation));
  const pinn::RunRecord rec = pinn::train(prob, init, cfg.train);

  std::ofstream trace(trace_path);
  if (!trace) throw pinn::Error("cannot write trace file '" + trace_path + "'");
  trace << "step,residual_term,boundary_term,total\n" << std::setprecision(17);
  for (std::size_t t = 0; t < rec.losses.size(); ++t) {
    const auto& l = rec.losses[t];
    trace << t << ',' << l.residual_term << ',' << l.boundary_term << ',' << l.total << '\n';
  }
  if (!save_path.empty()) pinn::save_snapshot(rec.best_params, save_path);

  std::cout << std::setprecision(10) << "time_average " << rec.time_average << "\nbest_step " << rec.best_step
            << "\nbest_loss " << rec.losses[rec.best_step].total << '\n';
  return kOk;
}

int cmd_experiment(const std::string& config_path, const Common& common, const std::string& csv,
                   const std::string& svg, std::optional<int> workers, bool dump) {
  pinn::Config cfg = pinn::load_config(config_path);
  if (!cfg.experiment) throw pinn::ConfigError("config has no 'experiment' section", 0, 0);
  if (const char* env = std::getenv("PINN_WORKERS"); env && !workers) {
    try {
      cfg.experiment->workers = std::stoi(env);
    } catch (const std::exception&) {
      throw pinn::ConfigError(std::string("PINN_WORKERS is not an integer: '") + env + "'", 0, 0);
    }
  }
  if (workers) cfg.experiment->workers = *workers;
  if (cfg.experiment->workers < 1) throw pinn::ConfigError("workers must be >= 1", 0, 0);
  apply_common(common, cfg);
  if (dump) {
    std::cout << pinn::dump_config(cfg) << '\n';
    return kOk;
  }
  const pinn::ExperimentConfig ecfg = pinn::experiment_for(cfg);
  const pinn::ExperimentResult res =
      pinn::run_experiment(cfg.problem.build(), pinn::Activation::from_name(cfg.activation), ecfg);
  pinn::emit_results(res, csv, svg);
  std::cout << "m,percentile,mean,std,n_runs\n" << std::setprecision(6);
  for (const auto& w : res.widths)
    std::cout << w.m << ',' << w.percentile_value << ',' << w.mean << ',' << w.std << ',' << w.n_runs << '\n';
  std::cout << "fitted_slope " << res.fitted_slope << '\n';
  return kOk;
}

pinn::Mat read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pinn::ConfigError("cannot read points file '" + path + "'", 0, 0);
  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
      } catch (const std::exception&) {
        throw pinn::ConfigError("points file: bad number '" + cell + "'", lineno, 0);
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw pinn::ConfigError("points file: ragged row", lineno, 0);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw pinn::ConfigError("points file is empty", 0, 0);
  pinn::Mat pts(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < rows[i].size(); ++k) pts(i, k) = rows[i][k];
  return pts;
}

int cmd_ntk(const std::string& config_path, const Common& common, const std::string& points_path,
            const std::string& out_path, int samples) {
  pinn::Config cfg = load_or_default(config_path);
  apply_common(common, cfg);
  const pinn::Mat pts = read_points(points_path);
  pinn::Rng rng(pinn::derive_seed(cfg.init.seed, {0x6e746b}));
  const pinn::Mat gram =
      pinn::ntk_gram(pinn::Activation::from_name(cfg.activation), cfg.init.a, pts, samples, rng, cfg.train.exec);
  std::ofstream out(out_path);
  if (!out) throw pinn::Error("cannot write '" + out_path + "'");
  out << std::setprecision(17);
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) out << (j ? "," : "") << gram(i, j);
    out << '\n';
  }
  return kOk;
}

int cmd_verify(const std::string& only, const Common& common, bool json) {
  pinn::VerifyOptions opts;
  opts.only = only;
  if (common.seed) opts.seed = *common.seed;
  const auto results = pinn::run_verify(opts);
  bool all = true;
  for (const auto& r : results) all = all && r.passed;
  if (json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results)
      arr.push_back({{"group", r.group}, {"name", r.name}, {"passed", r.passed}, {"measured", r.measured},
                     {"bound", r.bound}, {"detail", r.detail}});
    std::cout << nlohmann::json{{"passed", all}, {"checks", arr}}.dump(2) << '\n';
  } else {
    std::cout << std::left << std::setw(16) << "group" << std::setw(34) << "check" << std::setw(14) << "measured"
              << std::setw(14) << "bound" << "result\n";
    for (const auto& r : results) {
      std::cout << std::setw(16) << r.group << std::setw(34) << r.name << std::setw(14) << std::setprecision(4)
                << r.measured << std::setw(14) << r.bound << (r.passed ? "PASS" : "FAIL");
      if (!r.passed && !r.detail.empty()) std::cout << "  (" << r.detail << ')';
      std::cout << '\n';
    }
    std::cout << (all ? "all checks passed" : "some checks FAILED") << '\n';
  }
  return all ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected-gradient PINN training for the Poisson equation"};
  app.require_subcommand(1);

  Common c_train, c_exp, c_ntk, c_verify;
  std::string train_cfg, trace = "trace.csv", save;
  bool train_dump = false;
  auto* train = app.add_subcommand("train", "Run one projected SGD training");
  train->add_option("--config", train_cfg, "JSON config")->required();
  train->add_option("--trace", trace, "Per-step loss CSV")->capture_default_str();
  train->add_option("--save", save, "Write the best-iterate snapshot here");
  train->add_flag("--dump-config", train_dump, "Print the effective config and exit");
  add_common(train, c_train);

  std::string exp_cfg, out_csv = "results.csv", out_svg = "results.svg";
  std::optional<int> workers;
  bool exp_dump = false;
  auto* exp = app.add_subcommand("experiment", "Width sweep of the time-average loss");
  exp->add_option("--config", exp_cfg, "JSON config with an 'experiment' section")->required();
  exp->add_option("--out-csv", out_csv, "Result table")->capture_default_str();
  exp->add_option("--out-svg", out_svg, "Log-log plot")->capture_default_str();
  exp->add_option("--workers", workers, "Worker threads (default: PINN_WORKERS, then config)");
  exp->add_flag("--dump-config", exp_dump, "Print the effective config and exit");
  add_common(exp, c_exp);

  std::string ntk_cfg, points, gram_out = "gram.csv";
  int samples = 100000;
  auto* ntk = app.add_subcommand("ntk", "Monte Carlo NTK Gram matrix of a point set");
  ntk->add_option("--config", ntk_cfg, "JSON config (activation, init.a, init.seed)");
  ntk->add_option("--points", points, "CSV, one point per row")->required();
  ntk->add_option("--out", gram_out, "Gram matrix CSV")->capture_default_str();
  ntk->add_option("--samples", samples, "Shared Monte Carlo samples")->capture_default_str()->check(
      CLI::PositiveNumber);
  add_common(ntk, c_ntk);

  std::string only;
  bool json = false;
  auto* verify = app.add_subcommand("verify", "Fast invariant suite");
  verify->add_option("--only", only, "Run a single group");
  verify->add_flag("--json", json, "Machine-readable output");
  add_common(verify, c_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train) return cmd_train(train_cfg, c_train, trace, save, train_dump);
    if (*exp) return cmd_experiment(exp_cfg, c_exp, out_csv, out_svg, workers, exp_dump);
    if (*ntk) return cmd_ntk(ntk_cfg, c_ntk, points, gram_out, samples);
    return cmd_verify(only, c_verify, json);
  } catch (const pinn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const pinn::DivergedError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const pinn::TransportBoundError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const pinn::ContractViolation& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
