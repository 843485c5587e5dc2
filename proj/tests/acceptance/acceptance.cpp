// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "../oracles.hpp"
#include "pinn/bounds.hpp"
#include "pinn/config.hpp"
#include "pinn/diagnostics.hpp"
#include "pinn/experiment.hpp"
#include "pinn/geometry.hpp"
#include "pinn/init.hpp"
#include "pinn/loss.hpp"
#include "pinn/network.hpp"
#include "pinn/ntk.hpp"
#include "pinn/optimizer.hpp"
#include "pinn/seeding.hpp"

using namespace pinn;
using oracle::Vec;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
  void info(const std::string& what) { notes.push_back("info " + what); }
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Config sweep_config() { return load_config(std::string(PINN_SOURCE_DIR) + "/configs/width_sweep.json"); }

// 1. Width sweep reproduces the reference percentiles and slope.
Outcome width_sweep() {
  Outcome o;
  const Config cfg = sweep_config();
  const ExperimentConfig ec = experiment_for(cfg);
  const double reference[] = {4.575, 3.250, 2.136, 1.716, 1.424, 1.293, 1.159};
  const std::vector<int> widths{4, 6, 10, 14, 20, 24, 30};
  o.require(ec.widths == widths && ec.runs_per_width == 10000 && ec.percentile == 0.9 &&
                ec.train_template.p == 40.0 && !ec.train_template.eta && ec.train_template.batch_interior == 1 &&
                ec.train_template.batch_boundary == 1 && cfg.problem.source == "constant:1" &&
                cfg.activation == "tanh",
            "config matches the experiment protocol (p = 40, eta = 1/sqrt(T), b = 1, T = m, 1e4 runs)");
  o.info(fmt("a = %g, lambda = %g (calibrated; see README)", ec.init_a, cfg.problem.lambda));
  const ExperimentResult res = run_experiment(cfg.problem.build(), Activation::from_name(cfg.activation), ec);
  for (std::size_t k = 0; k < widths.size(); ++k) {
    const double v = res.widths[k].percentile_value, rel = v / reference[k] - 1;
    o.require(std::abs(rel) <= 0.15, fmt("m = %2d: p90 = %.4f vs %.3f (%+.1f%%, limit 15%%)", widths[k], v, reference[k],
                                         100 * rel));
  }
  o.require(res.fitted_slope >= -0.65 && res.fitted_slope <= -0.35,
            fmt("fitted slope %.4f in [-0.65, -0.35]", res.fitted_slope));
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < widths.size(); ++k) pts.emplace_back(widths[k], reference[k]);
  o.info(fmt("slope fitted to the seven reference points: %.4f", fit_loglog_slope(pts).first));
  return o;
}

// Central-difference gradient of fn(theta_i) for one row.
Vec fd_row(const NetworkParams& net, int i, const std::function<double(const NetworkParams&)>& fn) {
  return oracle::fd_gradient(
      [&](const Vec& row) {
        NetworkParams copy = net;
        copy.theta().row(i) = row.transpose();
        return fn(copy);
      },
      net.theta().row(i).transpose());
}

// 2. Analytic parameter gradients against finite differences.
Outcome gradients() {
  Outcome o;
  Rng rng(2002);
  const int ms[] = {2, 8, 32}, ds[] = {1, 2, 5};
  double w_grad = 0, w_glap = 0, w_loss = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int m = ms[inst % 3], d = ds[(inst / 3) % 3];
    const NetworkParams net = oracle::random_network(m, d, rng);
    const Vec x = oracle::random_vec(d, rng, -1.5, 1.5);
    const int i = static_cast<int>(rng() % m);
    w_grad = std::max(w_grad, oracle::rel_err(net_grad(net, x, i),
                                              fd_row(net, i, [&](const NetworkParams& n) { return net_eval(n, x); })));
    w_glap = std::max(w_glap, oracle::rel_err(net_grad_laplacian(net, x, i), fd_row(net, i, [&](const NetworkParams& n) {
                                                return net_laplacian(n, x);
                                              })));
    const PoissonProblem prob = make_problem(Domain(Ball{Vec::Zero(d), 1.5}), "constant:1", 1.0);
    const SampleSet s = draw_samples(prob.domain, 4, 4, rng);
    const Mat g = loss_gradient(prob, net, s);
    w_loss = std::max(w_loss, oracle::rel_err(g.row(i).transpose(), fd_row(net, i, [&](const NetworkParams& n) {
                                                return empirical_loss(prob, n, s).total;
                                              })));
  }
  o.require(w_grad < 1e-5, fmt("net_grad max rel error %.2e < 1e-5 (50 instances)", w_grad));
  o.require(w_glap < 1e-5, fmt("net_grad_laplacian max rel error %.2e < 1e-5", w_glap));
  o.require(w_loss < 1e-5, fmt("loss_gradient max rel error %.2e < 1e-5", w_loss));
  return o;
}

// 3. Closed-form Laplacian against the finite-difference Laplacian.
Outcome laplacian() {
  Outcome o;
  Rng rng(3003);
  double worst = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int m = 2 * (1 + inst % 16), d = 1 + inst % 5;
    const NetworkParams net = oracle::random_network(m, d, rng);
    const Vec x = oracle::random_vec(d, rng, -1.5, 1.5);
    const double fd = oracle::fd_laplacian([&](const Vec& y) { return net_eval(net, y); }, x);
    const double exact = net_laplacian(net, x);
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  o.require(worst < 1e-5, fmt("max rel error %.2e < 1e-5 (50 instances, step 1e-4)", worst));
  return o;
}

// 4. The symmetric initialization is the zero function.
Outcome null_function() {
  Outcome o;
  Rng rng(4004);
  double worst_f = 0, worst_l = 0;
  for (int seed = 0; seed < 20; ++seed) {
    const int m = 2 * (1 + seed), d = 1 + seed % 4;
    const NetworkParams net = symmetric_init({2.0, m, d, derive_seed(4004, {std::uint64_t(seed)})}, Activation());
    for (int j = 0; j < 100; ++j) {
      const Vec x = oracle::random_vec(d, rng, -3, 3);
      worst_f = std::max(worst_f, std::abs(net_eval(net, x)));
      worst_l = std::max(worst_l, std::abs(net_laplacian(net, x)));
    }
  }
  o.require(worst_f <= 1e-10, fmt("max |F| = %.2e <= 1e-10 (20 seeds x 100 points)", worst_f));
  o.require(worst_l <= 1e-10, fmt("max |Delta F| = %.2e <= 1e-10", worst_l));
  return o;
}

// 5. Ball invariant and gradient-norm bound along full training runs.
Outcome projection() {
  Outcome o;
  const Config cfg = sweep_config();
  const PoissonProblem prob = cfg.problem.build();
  const ExperimentConfig ec = experiment_for(cfg);
  double excess = -INFINITY, grad_ratio = 0;
  long steps = 0, on_sphere = 0;
  for (double p : {40.0, 2.0, 0.1}) {
    for (int m : ec.widths) {
      for (int run = 0; run < 50; ++run) {
        const std::uint64_t seed = run_seed(5005 + std::uint64_t(p * 10), m, run);
        TrainConfig tc = ec.train_template;
        tc.p = p;
        tc.steps = m;
        Rng rng(seed);
        const NetworkParams init = symmetric_init({ec.init_a, m, 2, seed}, Activation(), rng);
        const RunRecord rec = train(prob, init, tc, rng);
        const double radius = p / std::sqrt(double(m));
        const auto gb =
            gradient_bounds({Activation().bounds(), ec.init_a, 2, m, prob.domain.c_omega(), p, prob.lambda,
                             prob.source_sup});
        for (int t = 0; t < m; ++t, ++steps) {
          excess = std::max(excess, rec.max_displacement[t] - radius);
          on_sphere += rec.max_displacement[t] >= radius * (1 - 1e-12);
          grad_ratio = std::max(grad_ratio, rec.grad_sq_norm[t] / gb.total_squared());
        }
      }
    }
  }
  o.require(excess <= 1e-12, fmt("max_i |theta_i(t) - theta_i(0)| - p/sqrt(m) = %.2e <= 1e-12 over %ld steps", excess,
                                 steps));
  o.info(fmt("projection active on %ld steps (p in {40, 2, 0.1})", on_sphere));
  o.require(grad_ratio < 1.0, fmt("max sum_i |grad_i E_S|^2 / (c4 + c5)^2 = %.2e < 1", grad_ratio));
  return o;
}

// 6. Linearization residual scaling in m and the explicit value bound.
Outcome linearization() {
  Outcome o;
  Vec x(2);
  x << 1.0, 2.5;  // |x| = 2.69
  const double p = 10.0, a = 2.0;
  const int inits = 101, trials = 20;
  const std::vector<int> ms{16, 64, 256, 1024};
  std::vector<std::pair<double, double>> med, single;
  double worst_ratio = 0;
  for (int m : ms) {
    med.emplace_back(m, median_laplacian_residual(m, x, p, a, inits, trials, 6006));
    Rng rng(derive_seed(6006, {std::uint64_t(m), 999}));
    const NetworkParams init = symmetric_init({a, m, 2, 0}, Activation(), rng);
    const LinearizationResidual r = worst_linearization_residual(init, x, p, trials, rng);
    single.emplace_back(m, r.laplacian);
    worst_ratio = std::max(worst_ratio, r.value / linearization_value_bound(Activation().bounds(), x.norm(), p, m));
    o.info(fmt("m = %4d: median worst-of-20 Laplacian residual %.4e", m, med.back().second));
  }
  const double slope = fit_loglog_slope(med).first;
  o.require(slope >= -0.65 && slope <= -0.35,
            fmt("slope of the median (over %d inits) worst-of-%d residual: %.4f in [-0.65, -0.35]", inits, trials,
                slope));
  o.info(fmt("single-init slope (one draw per width): %.4f", fit_loglog_slope(single).first));
  o.require(worst_ratio <= 1.0, fmt("|F - F_lin| / (s2 |x|^2 p^2 / sqrt(m)) max %.3e <= 1", worst_ratio));
  return o;
}

// 7. Transported weights reproduce the Monte Carlo function u(x).
Outcome transport() {
  Outcome o;
  const int m = 4096, nmc = 1000000;
  const double a = 2.0;
  const NetworkParams init = symmetric_init({a, m, 2, 7007}, Activation());
  Vec w(2);
  w << 0.6, -0.8;
  const NetworkParams moved = transport_to_weights(init, [&](const VecIn&) { return w; }, 1.0);
  const LinearizedModel lin(moved);
  Rng rng(7007);
  std::normal_distribution<double> n;
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const Vec x = oracle::random_vec(2, rng, -3, 3);
    const double fin = linearized_eval(lin, x);
    // m/2 independent pairs carry the finite-width estimate.
    double s = 0, s2 = 0;
    for (int i = 0; i < m / 2; ++i) {
      const double u = w.dot(x) * oracle::tanh_d1(init.theta0().row(i).dot(x));
      s += u;
      s2 += u * u;
    }
    const double h = m / 2, fin_se = std::sqrt((s2 / h - std::pow(s / h, 2)) / (h - 1));
    double r = 0, r2 = 0;
    for (int j = 0; j < nmc; ++j) {
      double z0, z1;
      do z0 = n(rng);
      while (!(std::abs(z0) < a));
      do z1 = n(rng);
      while (!(std::abs(z1) < a));
      const double u = w.dot(x) * oracle::tanh_d1(z0 * x[0] + z1 * x[1]);
      r += u;
      r2 += u * u;
    }
    const double ref = r / nmc, ref_se = std::sqrt((r2 / nmc - ref * ref) / (nmc - 1));
    worst = std::max(worst, std::abs(fin - ref) / std::hypot(fin_se, ref_se));
  }
  o.require(worst <= 4.0, fmt("max deviation %.2f combined std errors <= 4 (m = 4096, 10 points, 1e6 MC)", worst));
  return o;
}

// 8. Generalization gap shrinks with the batch size.
Outcome generalization() {
  Outcome o;
  const Config cfg = sweep_config();
  const PoissonProblem prob = cfg.problem.build();
  const ExperimentConfig ec = experiment_for(cfg);
  const int reps = 100, m = 20, n_mc = 100000;
  std::vector<double> g10, g100, g1000;
  int wins = 0;
  for (int r = 0; r < reps; ++r) {
    const std::uint64_t seed = run_seed(8008, m, r);
    Rng rng(seed);
    TrainConfig tc = ec.train_template;
    tc.steps = m;
    const NetworkParams init = symmetric_init({ec.init_a, m, 2, seed}, Activation(), rng);
    const NetworkParams best = train(prob, init, tc, rng).best_params;
    double g[3];
    int k = 0;
    for (int b : {10, 100, 1000}) {
      const SampleSet s = draw_samples(prob.domain, b, b, rng);
      g[k++] = generalization_gap(prob, best, s, n_mc, rng).gap;
    }
    g10.push_back(g[0]);
    g100.push_back(g[1]);
    g1000.push_back(g[2]);
    wins += g[2] < g[0];
  }
  const double med10 = oracle::median(g10), med1000 = oracle::median(g1000), pval = oracle::sign_test_p(wins, reps);
  o.require(med1000 < med10 && pval < 0.01,
            fmt("median gap b=1000: %.4e < b=10: %.4e; sign test %d/%d, p = %.2e < 0.01", med1000, med10, wins, reps,
                pval));
  const double rate =
      fit_loglog_slope({{10.0, med10}, {100.0, oracle::median(g100)}, {1000.0, med1000}}).first;
  o.info(fmt("rate across b in {10, 100, 1000}: slope %.3f (expected near -0.5; window [-0.7, -0.3], %s)", rate,
             rate >= -0.7 && rate <= -0.3 ? "inside" : "outside"));
  return o;
}

// 9. Best-iterate L2 error is smaller at m = T = 64 than at m = T = 8.
Outcome solution_error_trend() {
  Outcome o;
  const Config cfg = sweep_config();
  const PoissonProblem prob = cfg.problem.build();
  const ExperimentConfig ec = experiment_for(cfg);
  const int reps = 100, n_mc = 20000;
  auto error_at = [&](int m, int r) {
    const std::uint64_t seed = run_seed(9009, m, r);
    Rng rng(seed);
    TrainConfig tc = ec.train_template;
    tc.steps = m;
    const NetworkParams init = symmetric_init({ec.init_a, m, 2, seed}, Activation(), rng);
    const NetworkParams best = train(prob, init, tc, rng).best_params;
    return solution_error(prob, best, n_mc, rng).l2;
  };
  std::vector<double> e8, e64;
  int wins = 0;
  for (int r = 0; r < reps; ++r) {
    e8.push_back(error_at(8, r));
    e64.push_back(error_at(64, r));
    wins += e64.back() < e8.back();
  }
  const double pval = oracle::sign_test_p(wins, reps);
  o.require(oracle::median(e64) < oracle::median(e8) && pval < 0.01,
            fmt("median L2 error m=64: %.4f < m=8: %.4f; sign test %d/%d, p = %.2e < 0.01", oracle::median(e64),
                oracle::median(e8), wins, reps, pval));
  o.info(fmt("L2 norm of the exact solution: %.4f", std::sqrt(std::acos(-1.0) / 48)));
  return o;
}

// 10. Finite-width NTK against the population kernel; Gram PSD.
Outcome ntk() {
  Outcome o;
  const Activation act;
  const NetworkParams net = symmetric_init({2.0, 1 << 14, 2, 10010}, act);
  Rng rng(10010);
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const Vec x = oracle::random_vec(2, rng, -2, 2), y = oracle::random_vec(2, rng, -2, 2);
    const KernelEstimate fin = empirical_ntk_estimate(net, x, y);
    const KernelEstimate pop = ntk_kernel_mc(act, 2.0, x, y, 1000000, rng);
    worst = std::max(worst, std::abs(fin.value - pop.value) / std::hypot(fin.std_error, pop.std_error));
  }
  o.require(worst <= 4.0, fmt("max deviation %.2f combined std errors <= 4 (m = 2^14, 10 pairs)", worst));
  double min_eig = INFINITY;
  for (int rep = 0; rep < 20; ++rep) {
    Mat pts(8, 2);
    for (int j = 0; j < 8; ++j) pts.row(j) = oracle::random_vec(2, rng, -3, 3).transpose();
    const Mat g = ntk_gram(act, 2.0, pts, 2000, rng);
    min_eig = std::min(min_eig, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g).eigenvalues().minCoeff());
  }
  o.require(min_eig >= -1e-10, fmt("min eigenvalue over 20 8-point Grams %.3e >= -1e-10", min_eig));
  return o;
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* title;
    Outcome (*fn)();
  };
  const Item items[] = {{1, "width-sweep reproduction", width_sweep},
                        {2, "gradient exactness", gradients},
                        {3, "Laplacian exactness", laplacian},
                        {4, "symmetric-init null function", null_function},
                        {5, "projection invariant", projection},
                        {6, "linearization-error scaling", linearization},
                        {7, "transport concentration", transport},
                        {8, "generalization gap trend", generalization},
                        {9, "solution error decreases", solution_error_trend},
                        {10, "NTK consistency", ntk}};
  int failed = 0;
  for (const auto& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.fn();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << it.id << ". " << it.title << " (" << fmt("%.1f", secs)
              << " s)\n";
    for (const auto& n : o.notes) std::cout << "         " << n << '\n';
    std::cout.flush();
    failed += !o.pass;
  }
  std::cout << (10 - failed) << "/10 criteria passed\n";
  return failed ? 1 : 0;
}
