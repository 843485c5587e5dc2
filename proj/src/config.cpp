#include "pinn/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pinn/errors.hpp"

namespace pinn {

using nlohmann::json;

namespace {

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("'" + where + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : obj.items())
    if (!ok.count(k)) throw ConfigError("unknown key '" + where + "." + k + "'");
}

template <class T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + where + "." + key + "' has the wrong type");
  }
}

std::pair<int, int> line_col(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

}  // namespace

Domain ProblemSpec::domain() const {
  if (shape == Shape::Ball) return Domain(Ball{to_vec(center), radius});
  return Domain(Box{to_vec(lo), to_vec(hi)});
}

PoissonProblem ProblemSpec::build() const { return make_problem(domain(), source, lambda); }

InitConfig init_for(const Config& cfg) {
  InitConfig ic = cfg.init;
  ic.d = static_cast<int>(cfg.problem.shape == ProblemSpec::Shape::Ball ? cfg.problem.center.size() : cfg.problem.lo.size());
  return ic;
}

Config parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
    throw ConfigError("config parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                          e.what(),
                      line, col);
  }
  only_keys(root, "config", {"problem", "activation", "init", "train", "experiment"});
  Config cfg;

  if (root.contains("problem")) {
    const json& p = root["problem"];
    only_keys(p, "problem", {"domain", "source", "lambda"});
    if (p.contains("domain")) {
      const json& d = p["domain"];
      only_keys(d, "problem.domain", {"ball", "box"});
      if (d.size() != 1) throw ConfigError("'problem.domain' must hold exactly one of 'ball' or 'box'");
      if (d.contains("ball")) {
        only_keys(d["ball"], "problem.domain.ball", {"center", "radius"});
        cfg.problem.shape = ProblemSpec::Shape::Ball;
        cfg.problem.center = get(d["ball"], "center", "problem.domain.ball", cfg.problem.center);
        cfg.problem.radius = get(d["ball"], "radius", "problem.domain.ball", cfg.problem.radius);
      } else {
        only_keys(d["box"], "problem.domain.box", {"lo", "hi"});
        cfg.problem.shape = ProblemSpec::Shape::Box;
        if (!d["box"].contains("lo") || !d["box"].contains("hi"))
          throw ConfigError("'problem.domain.box' needs 'lo' and 'hi'");
        cfg.problem.lo = get(d["box"], "lo", "problem.domain.box", std::vector<double>{});
        cfg.problem.hi = get(d["box"], "hi", "problem.domain.box", std::vector<double>{});
      }
    }
    cfg.problem.source = get(p, "source", "problem", cfg.problem.source);
    cfg.problem.lambda = get(p, "lambda", "problem", cfg.problem.lambda);
  }

  cfg.activation = get(root, "activation", "config", cfg.activation);

  if (root.contains("init")) {
    const json& i = root["init"];
    only_keys(i, "init", {"a", "m", "seed"});
    cfg.init.a = get(i, "a", "init", cfg.init.a);
    cfg.init.m = get(i, "m", "init", cfg.init.m);
    cfg.init.seed = get(i, "seed", "init", cfg.init.seed);
  }

  if (root.contains("train")) {
    const json& t = root["train"];
    only_keys(t, "train", {"p", "eta", "T", "b_int", "b_bd", "resample", "seed"});
    cfg.train.p = get(t, "p", "train", cfg.train.p);
    if (t.contains("eta") && !t["eta"].is_null()) cfg.train.eta = get(t, "eta", "train", 0.0);
    cfg.train.steps = get(t, "T", "train", cfg.train.steps);
    cfg.train.batch_interior = get(t, "b_int", "train", cfg.train.batch_interior);
    cfg.train.batch_boundary = get(t, "b_bd", "train", cfg.train.batch_boundary);
    const auto rs = get<std::string>(t, "resample", "train", "fresh");
    if (rs == "fresh") cfg.train.resample = Resample::Fresh;
    else if (rs == "fixed") cfg.train.resample = Resample::Fixed;
    else throw ConfigError("'train.resample' must be \"fresh\" or \"fixed\"");
    cfg.train.seed = get(t, "seed", "train", cfg.train.seed);
  }

  if (root.contains("experiment")) {
    const json& e = root["experiment"];
    only_keys(e, "experiment", {"widths", "runs_per_width", "percentile", "base_seed", "workers"});
    ExperimentConfig ec;
    ec.widths = get(e, "widths", "experiment", ec.widths);
    ec.runs_per_width = get(e, "runs_per_width", "experiment", ec.runs_per_width);
    ec.percentile = get(e, "percentile", "experiment", ec.percentile);
    ec.base_seed = get(e, "base_seed", "experiment", ec.base_seed);
    ec.workers = get(e, "workers", "experiment", ec.workers);
    cfg.experiment = ec;
  }

  // Semantic validation; library contract errors surface as config errors here.
  try {
    (void)Activation::from_name(cfg.activation);
    (void)cfg.problem.build();
  } catch (const ContractViolation& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  if (!(cfg.init.a > 0)) throw ConfigError("'init.a' must be positive");
  if (cfg.init.m < 2 || cfg.init.m % 2) throw ConfigError("'init.m' must be even and >= 2");
  if (!(cfg.train.p > 0)) throw ConfigError("'train.p' must be positive");
  if (cfg.train.eta && !(*cfg.train.eta >= 0)) throw ConfigError("'train.eta' must be nonnegative");
  if (cfg.train.steps < 1) throw ConfigError("'train.T' must be >= 1");
  if (cfg.train.batch_interior < 1 || cfg.train.batch_boundary < 1) throw ConfigError("batch sizes must be >= 1");
  if (cfg.experiment) {
    const auto& ec = *cfg.experiment;
    if (ec.widths.empty()) throw ConfigError("'experiment.widths' must be nonempty");
    for (int m : ec.widths)
      if (m < 2 || m % 2) throw ConfigError("'experiment.widths' entries must be even and >= 2");
    if (ec.runs_per_width < 1) throw ConfigError("'experiment.runs_per_width' must be >= 1");
    if (!(ec.percentile > 0 && ec.percentile < 1)) throw ConfigError("'experiment.percentile' must lie in (0, 1)");
    if (ec.workers < 1) throw ConfigError("'experiment.workers' must be >= 1");
  }
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string dump_config(const Config& cfg) {
  json root;
  json dom;
  if (cfg.problem.shape == ProblemSpec::Shape::Ball)
    dom["ball"] = {{"center", cfg.problem.center}, {"radius", cfg.problem.radius}};
  else
    dom["box"] = {{"lo", cfg.problem.lo}, {"hi", cfg.problem.hi}};
  root["problem"] = {{"domain", dom}, {"source", cfg.problem.source}, {"lambda", cfg.problem.lambda}};
  root["activation"] = cfg.activation;
  root["init"] = {{"a", cfg.init.a}, {"m", cfg.init.m}, {"seed", cfg.init.seed}};
  root["train"] = {{"p", cfg.train.p},
                   {"eta", cfg.train.eta ? json(*cfg.train.eta) : json(nullptr)},
                   {"T", cfg.train.steps},
                   {"b_int", cfg.train.batch_interior},
                   {"b_bd", cfg.train.batch_boundary},
                   {"resample", cfg.train.resample == Resample::Fresh ? "fresh" : "fixed"},
                   {"seed", cfg.train.seed}};
  if (cfg.experiment) {
    const auto& e = *cfg.experiment;
    root["experiment"] = {{"widths", e.widths},
                          {"runs_per_width", e.runs_per_width},
                          {"percentile", e.percentile},
                          {"base_seed", e.base_seed},
                          {"workers", e.workers}};
  }
  return root.dump(2) + "\n";
}

}  // namespace pinn

namespace pinn {

ExperimentConfig experiment_for(const Config& cfg) {
  if (!cfg.experiment) throw ConfigError("config has no 'experiment' section");
  ExperimentConfig ec = *cfg.experiment;
  ec.train_template = cfg.train;
  ec.init_a = cfg.init.a;
  return ec;
}

}  // namespace pinn
