// Grid search over the initialization truncation a and the boundary penalty
// lambda for the disc width sweep: minimizes the RMS log error between the
// measured 90th percentiles and a reference curve.

#include <cmath>
#include <iomanip>
#include <iostream>
#include <limits>
#include <vector>

#include <CLI11.hpp>

#include "pinn/experiment.hpp"
#include "pinn/geometry.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Calibrate (a, lambda) against reference percentiles"};
  std::vector<double> as{1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0, 8.0, 10.0};
  std::vector<double> lambdas{0.5, 1.0, 1.5, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 4.0, 5.0};
  std::vector<int> widths{4, 6, 10, 14, 20, 24, 30};
  std::vector<double> reference{4.575, 3.250, 2.136, 1.716, 1.424, 1.293, 1.159};
  int runs = 10000;
  std::uint64_t seed = 20240607;
  double p = 40.0;
  app.add_option("--a", as, "Truncation grid");
  app.add_option("--lambda", lambdas, "Boundary penalty grid");
  app.add_option("--widths", widths, "Widths (T = m)");
  app.add_option("--reference", reference, "Reference percentile per width");
  app.add_option("--runs", runs, "Runs per width")->capture_default_str();
  app.add_option("--seed", seed, "Base seed")->capture_default_str();
  app.add_option("--p", p, "Projection radius")->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  if (reference.size() != widths.size()) {
    std::cerr << "--reference needs one value per width\n";
    return 1;
  }

  double best = std::numeric_limits<double>::infinity(), best_a = 0, best_l = 0;
  std::cout << "a,lambda,rms_log_error,max_abs_rel_error,slope\n" << std::setprecision(5);
  for (double a : as) {
    for (double lam : lambdas) {
      pinn::ExperimentConfig cfg;
      cfg.widths = widths;
      cfg.runs_per_width = runs;
      cfg.init_a = a;
      cfg.base_seed = seed;
      cfg.train_template.p = p;
      const auto res = pinn::run_experiment(pinn::reference_disc_problem(lam), pinn::Activation(), cfg);
      double ss = 0, worst = 0;
      for (std::size_t k = 0; k < widths.size(); ++k) {
        const double r = res.widths[k].percentile_value / reference[k];
        ss += std::log(r) * std::log(r);
        worst = std::max(worst, std::abs(r - 1));
      }
      const double rms = std::sqrt(ss / widths.size());
      std::cout << a << ',' << lam << ',' << rms << ',' << worst << ',' << res.fitted_slope << std::endl;
      if (rms < best) best = rms, best_a = a, best_l = lam;
    }
  }
  std::cout << "best a=" << best_a << " lambda=" << best_l << " rms_log_error=" << best << '\n';
  return 0;
}
