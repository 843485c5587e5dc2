#include "pinn/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "pinn/bounds.hpp"
#include "pinn/errors.hpp"
#include "pinn/experiment.hpp"
#include "pinn/geometry.hpp"
#include "pinn/init.hpp"
#include "pinn/loss.hpp"
#include "pinn/ntk.hpp"
#include "pinn/optimizer.hpp"
#include "pinn/seeding.hpp"

namespace pinn {

Mat random_ball_displacement(int m, int d, double radius, Rng& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Mat out(m, d);
  for (int i = 0; i < m; ++i) {
    Vec g(d);
    for (int k = 0; k < d; ++k) g[k] = normal(rng);
    const double r = radius * std::pow(unif(rng), 1.0 / d);
    out.row(i) = (r / g.norm()) * g.transpose();
  }
  return out;
}

LinearizationResidual worst_linearization_residual(const NetworkParams& init, const VecIn& x, double p, int trials,
                                                   Rng& rng) {
  const double radius = p / std::sqrt(static_cast<double>(init.width()));
  LinearizationResidual worst;
  for (int k = 0; k < trials; ++k) {
    Mat disp = random_ball_displacement(init.width(), init.dim(), radius, rng);
    NetworkParams moved = init;
    moved.theta() = init.theta0() + disp;
    const LinearizedModel lin(init, std::move(disp));
    worst.value = std::max(worst.value, std::abs(net_eval(moved, x) - linearized_eval(lin, x)));
    worst.laplacian = std::max(worst.laplacian, std::abs(net_laplacian(moved, x) - linearized_laplacian(lin, x)));
  }
  return worst;
}

double median_laplacian_residual(int m, const VecIn& x, double p, double a, int inits, int trials, std::uint64_t seed) {
  std::vector<double> w(inits);
  for (int k = 0; k < inits; ++k) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)}));
    const NetworkParams init = symmetric_init({a, m, static_cast<int>(x.size()), 0}, Activation(), rng);
    w[k] = worst_linearization_residual(init, x, p, trials, rng).laplacian;
  }
  std::sort(w.begin(), w.end());
  return inits % 2 ? w[inits / 2] : 0.5 * (w[inits / 2 - 1] + w[inits / 2]);
}

namespace {

constexpr double kFdStep = 1e-5;

// Random network off the zero function: symmetric init, then every row moved
// by a random vector of norm up to `spread`.
NetworkParams random_network(Activation act, int m, int d, double spread, Rng& rng) {
  NetworkParams net = symmetric_init({2.0, m, d, 0}, act, rng);
  net.theta() = net.theta0() + random_ball_displacement(m, d, spread, rng);
  return net;
}

Vec random_point(int d, double scale, Rng& rng) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec x(d);
  for (int k = 0; k < d; ++k) x[k] = u(rng);
  return x;
}

double rel_err(const Vec& got, const Vec& want, double floor) {
  return (got - want).norm() / std::max(want.norm(), floor);
}

// Central difference in theta_i of a scalar functional of the network.
template <class Fn>
Vec fd_theta(NetworkParams net, int i, Fn&& fn) {
  Vec g(net.dim());
  for (int k = 0; k < net.dim(); ++k) {
    const double orig = net.theta()(i, k);
    net.theta()(i, k) = orig + kFdStep;
    const double fp = fn(net);
    net.theta()(i, k) = orig - kFdStep;
    const double fm = fn(net);
    net.theta()(i, k) = orig;
    g[k] = (fp - fm) / (2 * kFdStep);
  }
  return g;
}

CheckResult make(std::string group, std::string name, double measured, double bound, std::string detail = {}) {
  return {std::move(group), std::move(name), measured <= bound, measured, bound, std::move(detail)};
}

void check_activation(std::vector<CheckResult>& out, Rng& rng) {
  for (auto kind : {ActivationKind::Tanh, ActivationKind::Sigmoid, ActivationKind::Sine}) {
    const Activation act(kind);
    const auto b = act.bounds();
    double worst = 0.0;
    for (int j = 0; j < 1000; ++j) {
      const double z = -5.0 + 10.0 * j / 999.0;
      for (int k = 1; k <= 4; ++k) {
        const double fd = (act.eval(k - 1, z + kFdStep) - act.eval(k - 1, z - kFdStep)) / (2 * kFdStep);
        const double exact = act.eval(k, z);
        worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-2 * b[k]));
      }
    }
    out.push_back(make("activation", "derivative-chain/" + act.name(), worst, 1e-6));
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    double ratio = 0.0;
    for (int j = 0; j < 20000; ++j) {
      const auto v = act.eval_all(u(rng));
      for (int k = 1; k <= 4; ++k) ratio = std::max(ratio, std::abs(v[k]) / b[k]);
    }
    out.push_back(make("activation", "sup-bounds/" + act.name(), ratio, 1.0, "max |s^(k)| / s_k"));
  }
}

void check_gradients(std::vector<CheckResult>& out, Rng& rng) {
  const int ms[] = {2, 8, 32}, ds[] = {1, 2, 5};
  double w_grad = 0, w_glap = 0, w_loss = 0;
  for (int inst = 0; inst < 30; ++inst) {
    const int m = ms[inst % 3], d = ds[(inst / 3) % 3];
    const NetworkParams net = random_network(Activation(), m, d, 0.5, rng);
    const Vec x = random_point(d, 1.5, rng);
    const int i = static_cast<int>(rng() % m);
    const Vec fdg = fd_theta(net, i, [&](const NetworkParams& n) { return net_eval(n, x); });
    w_grad = std::max(w_grad, rel_err(net_grad(net, x, i), fdg, 1e-6));
    const Vec fdl = fd_theta(net, i, [&](const NetworkParams& n) { return net_laplacian(n, x); });
    w_glap = std::max(w_glap, rel_err(net_grad_laplacian(net, x, i), fdl, 1e-6));

    Vec center = Vec::Zero(d);
    const PoissonProblem prob = make_problem(Domain(Ball{center, 1.0}), "constant:1", 1.5);
    const SampleSet s = draw_samples(prob.domain, 4, 3, rng);
    const Mat g = loss_gradient(prob, net, s);
    const Vec fde = fd_theta(net, i, [&](const NetworkParams& n) { return empirical_loss(prob, n, s).total; });
    w_loss = std::max(w_loss, rel_err(g.row(i).transpose(), fde, 1e-6));
  }
  out.push_back(make("gradients", "net_grad-vs-fd", w_grad, 1e-5, "max relative error, 30 instances"));
  out.push_back(make("gradients", "net_grad_laplacian-vs-fd", w_glap, 1e-5, "max relative error, 30 instances"));
  out.push_back(make("gradients", "loss_gradient-vs-fd", w_loss, 1e-5, "max relative error, 30 instances"));
}

void check_laplacian(std::vector<CheckResult>& out, Rng& rng) {
  double worst = 0;
  constexpr double h = 1e-4;
  for (int inst = 0; inst < 30; ++inst) {
    const int m = 2 + 2 * (inst % 8), d = 1 + inst % 4;
    const NetworkParams net = random_network(Activation(), m, d, 0.5, rng);
    const Vec x = random_point(d, 1.5, rng);
    double fd = 0;
    const double f0 = net_eval(net, x);
    for (int k = 0; k < d; ++k) {
      Vec xp = x, xm = x;
      xp[k] += h;
      xm[k] -= h;
      fd += (net_eval(net, xp) - 2 * f0 + net_eval(net, xm)) / (h * h);
    }
    const double exact = net_laplacian(net, x);
    worst = std::max(worst, std::abs(fd - exact) / std::max(std::abs(exact), 1e-2));
  }
  out.push_back(make("laplacian", "net_laplacian-vs-fd", worst, 1e-5, "max relative error, 30 instances"));
}

void check_symmetric_init(std::vector<CheckResult>& out, Rng& rng) {
  double worst = 0;
  for (int seed = 0; seed < 5; ++seed) {
    const NetworkParams net = symmetric_init({2.0, 32, 3, static_cast<std::uint64_t>(seed)}, Activation());
    for (int j = 0; j < 100; ++j) {
      const Vec x = random_point(3, 3.0, rng);
      worst = std::max({worst, std::abs(net_eval(net, x)), std::abs(net_laplacian(net, x))});
    }
  }
  out.push_back(make("symmetric-init", "zero-function", worst, 1e-10, "max |F|, |Delta F| at theta0"));
}

void check_projection(std::vector<CheckResult>& out, std::uint64_t seed) {
  const PoissonProblem prob = reference_disc_problem(1.0);
  double disp_excess = -1e300, grad_ratio = 0, touched = 0;
  for (int run = 0; run < 20; ++run) {
    const int m = 20;
    TrainConfig tc;
    tc.p = run % 2 ? 40.0 : 0.05;  // small p forces the projection to act
    tc.steps = m;
    tc.seed = derive_seed(seed, {static_cast<std::uint64_t>(run)});
    const NetworkParams init = symmetric_init({2.0, m, 2, tc.seed}, Activation());
    const RunRecord rec = train(prob, init, tc);
    const double radius = tc.p / std::sqrt(static_cast<double>(m));
    const auto gb = gradient_bounds({Activation().bounds(), 2.0, 2, m, prob.domain.c_omega(), tc.p, prob.lambda,
                                     prob.source_sup});
    for (int t = 0; t < tc.steps; ++t) {
      disp_excess = std::max(disp_excess, rec.max_displacement[t] - radius);
      if (rec.max_displacement[t] >= radius * (1 - 1e-12)) ++touched;
      grad_ratio = std::max(grad_ratio, rec.grad_sq_norm[t] / gb.total_squared());
    }
  }
  out.push_back(make("projection", "ball-invariant", disp_excess, 1e-12,
                     "max_i |theta_i(t) - theta_i(0)| - p/sqrt(m); steps on the sphere: " + std::to_string(int(touched))));
  out.push_back(make("projection", "gradient-norm-bound", grad_ratio, 1.0, "sum_i |grad_i E_S|^2 / (c4 + c5)^2"));
}

void check_linearization(std::vector<CheckResult>& out, std::uint64_t seed, Rng& rng) {
  Vec x(2);
  x << 1.0, 2.5;
  const double p = 10.0;
  double ratio = 0;
  for (int m : {16, 64, 256}) {
    const NetworkParams init = symmetric_init({2.0, m, 2, seed + m}, Activation());
    const auto r = worst_linearization_residual(init, x, p, 20, rng);
    ratio = std::max(ratio, r.value / linearization_value_bound(Activation().bounds(), x.norm(), p, m));
  }
  out.push_back(make("linearization", "value-bound", ratio, 1.0, "|F - F_lin| / (s2 |x|^2 p^2 / sqrt(m))"));

  std::vector<std::pair<double, double>> pts;
  for (int m : {16, 64, 256, 1024}) pts.emplace_back(m, median_laplacian_residual(m, x, p, 2.0, 9, 20, seed));
  const double slope = fit_loglog_slope(pts).first;
  CheckResult c{"linearization", "laplacian-residual-slope", slope >= -0.65 && slope <= -0.35, slope, -0.35,
                "log-log slope over m in {16,64,256,1024}; window [-0.65, -0.35]"};
  out.push_back(c);
}

void check_ntk(std::vector<CheckResult>& out, Rng& rng) {
  const Activation act;
  Mat pts(8, 2);
  for (int j = 0; j < 8; ++j) pts.row(j) = random_point(2, 2.0, rng).transpose();
  const Mat gram = ntk_gram(act, 2.0, pts, 4000, rng);
  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gram).eigenvalues().minCoeff();
  out.push_back(make("ntk", "gram-psd", -min_eig, 1e-10, "-(min eigenvalue) of an 8-point Gram"));

  const int m = 1 << 12;
  const NetworkParams net = symmetric_init({2.0, m, 2, rng()}, act);
  double worst = 0;
  for (int k = 0; k < 4; ++k) {
    const Vec x = random_point(2, 2.0, rng), x2 = random_point(2, 2.0, rng);
    const KernelEstimate fin = empirical_ntk_estimate(net, x, x2);
    const KernelEstimate pop = ntk_kernel_mc(act, 2.0, x, x2, 100000, rng);
    const double se = std::hypot(fin.std_error, pop.std_error);
    worst = std::max(worst, std::abs(fin.value - pop.value) / se);
  }
  out.push_back(make("ntk", "finite-width-vs-population", worst, 4.0, "max |K_m - K| / combined std error"));
}

}  // namespace

std::vector<std::string> verify_groups() {
  return {"activation", "gradients", "laplacian", "symmetric-init", "projection", "linearization", "ntk"};
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  const auto groups = verify_groups();
  if (!opts.only.empty() && std::find(groups.begin(), groups.end(), opts.only) == groups.end())
    throw ContractViolation("unknown verify group '" + opts.only + "'");
  const auto want = [&](const char* g) { return opts.only.empty() || opts.only == g; };
  std::vector<CheckResult> out;
  Rng rng(derive_seed(opts.seed, {0x76657269}));
  if (want("activation")) check_activation(out, rng);
  if (want("gradients")) check_gradients(out, rng);
  if (want("laplacian")) check_laplacian(out, rng);
  if (want("symmetric-init")) check_symmetric_init(out, rng);
  if (want("projection")) check_projection(out, opts.seed);
  if (want("linearization")) check_linearization(out, opts.seed, rng);
  if (want("ntk")) check_ntk(out, rng);
  return out;
}

}  // namespace pinn
