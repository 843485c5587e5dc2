#include "pinn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "pinn/init.hpp"
#include "pinn/seeding.hpp"

namespace pinn {

namespace {

void validate(const ExperimentConfig& cfg) {
  require(!cfg.widths.empty(), "experiment needs at least one width");
  for (int m : cfg.widths) require(m >= 2 && m % 2 == 0, "experiment widths must be even and >= 2");
  require(cfg.runs_per_width >= 1, "runs_per_width must be at least 1");
  require(cfg.percentile > 0 && cfg.percentile < 1, "percentile must lie in (0, 1)");
  require(cfg.workers >= 1, "worker count must be at least 1");
}

}  // namespace

std::uint64_t run_seed(std::uint64_t base_seed, int m, int run) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(run)});
}

double run_single(const PoissonProblem& prob, const Activation& act, const ExperimentConfig& cfg, int m, int run) {
  const std::uint64_t seed = run_seed(cfg.base_seed, m, run);
  Rng rng(seed);
  InitConfig ic{cfg.init_a, m, prob.domain.dim(), seed};
  const NetworkParams init = symmetric_init(ic, act, rng);
  TrainConfig tc = cfg.train_template;
  tc.steps = m;
  tc.seed = seed;
  tc.exec = Exec::Serial;
  try {
    return train_time_average(prob, init, tc, rng);
  } catch (const DivergedError& e) {
    throw ExperimentDivergedError("run diverged (m = " + std::to_string(m) + ", run = " + std::to_string(run) +
                                      ", seed = " + std::to_string(seed) + "): " + e.what(),
                                  e.step(), m, run, seed);
  }
}

std::vector<double> run_width(const PoissonProblem& prob, const Activation& act, const ExperimentConfig& cfg, int m) {
  validate(cfg);
  const int n = cfg.runs_per_width;
  std::vector<double> out(n);
  // Lowest failing run index wins, so the reported failure is scheduling-independent.
  std::atomic<int> first_bad{std::numeric_limits<int>::max()};
  std::optional<ExperimentDivergedError> err;
#pragma omp parallel for schedule(dynamic, 64) num_threads(cfg.workers)
  for (int r = 0; r < n; ++r) {
    if (r > first_bad.load(std::memory_order_relaxed)) continue;
    try {
      out[r] = run_single(prob, act, cfg, m, r);
    } catch (const ExperimentDivergedError& e) {
#pragma omp critical(pinn_experiment_error)
      {
        if (r < first_bad.load()) {
          first_bad.store(r);
          err.emplace(e);
        }
      }
    }
  }
  if (err) throw *err;
  return out;
}

ExperimentResult run_experiment(const PoissonProblem& prob, const Activation& act, const ExperimentConfig& cfg) {
  validate(cfg);
  ExperimentResult res;
  std::vector<std::pair<double, double>> pts;
  for (int m : cfg.widths) {
    const std::vector<double> vals = run_width(prob, act, cfg, m);
    WidthStat ws;
    ws.m = m;
    ws.n_runs = static_cast<int>(vals.size());
    ws.percentile_value = percentile(vals, cfg.percentile);
    double sum = 0.0;
    for (double v : vals) sum += v;
    ws.mean = sum / vals.size();
    double ss = 0.0;
    for (double v : vals) ss += (v - ws.mean) * (v - ws.mean);
    ws.std = vals.size() > 1 ? std::sqrt(ss / (vals.size() - 1)) : 0.0;
    res.widths.push_back(ws);
    pts.emplace_back(m, ws.percentile_value);
  }
  if (pts.size() >= 2) std::tie(res.fitted_slope, res.fitted_intercept) = fit_loglog_slope(pts);
  return res;
}

double percentile(std::vector<double> values, double q) {
  require(!values.empty(), "percentile of an empty list");
  require(q > 0 && q < 1, "percentile level must lie in (0, 1)");
  const std::size_t n = values.size();
  // ceil(q n) with a guard against q n landing a rounding error above an integer.
  const double qn = q * static_cast<double>(n);
  auto rank = static_cast<std::size_t>(std::ceil(qn - 1e-9 * std::max(1.0, qn)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return values[rank - 1];
}

std::pair<double, double> fit_loglog_slope(const std::vector<std::pair<double, double>>& points) {
  require(points.size() >= 2, "slope fit needs at least two points");
  double sx = 0, sy = 0;
  for (const auto& [x, y] : points) {
    require(x > 0 && y > 0, "log-log fit needs positive coordinates");
    sx += std::log(x);
    sy += std::log(y);
  }
  const double n = static_cast<double>(points.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  require(sxx > 0, "log-log fit needs at least two distinct x values");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

GapEstimate generalization_gap(const PoissonProblem& prob, const NetworkParams& net, const SampleSet& s,
                               int n_mc, Rng& rng) {
  GapEstimate g;
  g.empirical = empirical_loss(prob, net, s).total;
  const McLoss ref = exact_loss_mc(prob, net, n_mc, n_mc, rng);
  g.reference = ref.averaged.total;
  g.std_error = ref.averaged_std_error;
  g.gap = std::abs(g.empirical - g.reference);
  return g;
}

namespace {

std::string svg_plot(const ExperimentResult& res) {
  constexpr double W = 640, H = 440, L = 70, R = 20, T = 20, B = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& w : res.widths) {
    xmin = std::min(xmin, std::log(w.m));
    xmax = std::max(xmax, std::log(w.m));
    const double ly = std::log(std::max(w.percentile_value, 1e-300));
    ymin = std::min(ymin, ly);
    ymax = std::max(ymax, ly);
  }
  const double padx = std::max(0.1, 0.08 * (xmax - xmin)), pady = std::max(0.1, 0.1 * (ymax - ymin));
  xmin -= padx;
  xmax += padx;
  ymin -= pady;
  ymax += pady;
  const auto px = [&](double lx) { return L + (lx - xmin) / (xmax - xmin) * (W - L - R); };
  const auto py = [&](double ly) { return H - B - (ly - ymin) / (ymax - ymin) * (H - T - B); };

  std::ostringstream o;
  o << std::setprecision(6);
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << ' ' << H << "\">\n"
    << "  <rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n"
    << "  <rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << (W - L - R) << "\" height=\"" << (H - T - B)
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  // Fitted line and slope -1/2 reference through the centroid of the data.
  double cx = 0, cy = 0;
  for (const auto& w : res.widths) {
    cx += std::log(w.m);
    cy += std::log(std::max(w.percentile_value, 1e-300));
  }
  cx /= res.widths.size();
  cy /= res.widths.size();
  const auto line = [&](double slope, double intercept, const char* colour, const char* dash) {
    o << "  <line x1=\"" << px(xmin) << "\" y1=\"" << py(intercept + slope * xmin) << "\" x2=\"" << px(xmax)
      << "\" y2=\"" << py(intercept + slope * xmax) << "\" stroke=\"" << colour << "\" stroke-width=\"2\""
      << (dash[0] ? " stroke-dasharray=\"" : "") << dash << (dash[0] ? "\"" : "") << "/>\n";
  };
  if (res.widths.size() >= 2) line(res.fitted_slope, res.fitted_intercept, "#1f4fbf", "");
  line(-0.5, cy + 0.5 * cx, "black", "6,4");
  for (const auto& w : res.widths)
    o << "  <circle cx=\"" << px(std::log(w.m)) << "\" cy=\"" << py(std::log(std::max(w.percentile_value, 1e-300)))
      << "\" r=\"4\" fill=\"#1f4fbf\"/>\n";
  for (const auto& w : res.widths)
    o << "  <text x=\"" << px(std::log(w.m)) << "\" y=\"" << (H - B + 18) << "\" font-size=\"12\" text-anchor=\"middle\">"
      << w.m << "</text>\n";
  o << "  <text x=\"" << (L + (W - L - R) / 2) << "\" y=\"" << (H - 15)
    << "\" font-size=\"14\" text-anchor=\"middle\">m = T (log scale)</text>\n"
    << "  <text x=\"18\" y=\"" << (T + (H - T - B) / 2) << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
    << (T + (H - T - B) / 2) << ")\">percentile of time-averaged loss (log scale)</text>\n"
    << "  <text x=\"" << (W - R - 8) << "\" y=\"" << (T + 18) << "\" font-size=\"12\" text-anchor=\"end\">fitted slope "
    << res.fitted_slope << "; dashed: slope -0.5</text>\n"
    << "</svg>\n";
  return o.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw Error("write to '" + path.string() + "' failed");
}

}  // namespace

void emit_results(const ExperimentResult& res, const std::filesystem::path& csv_path,
                  const std::filesystem::path& svg_path) {
  if (res.widths.empty()) throw ContractViolation("cannot emit an experiment result with no widths");
  std::ostringstream csv;
  csv << std::setprecision(17) << "m,percentile,mean,std,n_runs\n";
  for (const auto& w : res.widths)
    csv << w.m << ',' << w.percentile_value << ',' << w.mean << ',' << w.std << ',' << w.n_runs << '\n';
  const std::string svg = svg_plot(res);
  if (!csv_path.empty()) write_file(csv_path, csv.str());
  if (!svg_path.empty()) write_file(svg_path, svg);
}

std::vector<WidthStat> read_results_csv(const std::filesystem::path& csv_path) {
  std::ifstream f(csv_path);
  if (!f) throw Error("cannot open '" + csv_path.string() + "'");
  std::string line;
  std::getline(f, line);
  if (line != "m,percentile,mean,std,n_runs") throw Error("'" + csv_path.string() + "' has an unexpected header");
  std::vector<WidthStat> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell[5];
    for (auto& c : cell)
      if (!std::getline(ss, c, ',')) throw Error("short row in '" + csv_path.string() + "'");
    out.push_back({std::stoi(cell[0]), std::stod(cell[1]), std::stod(cell[2]), std::stod(cell[3]), std::stoi(cell[4])});
  }
  return out;
}

}  // namespace pinn
