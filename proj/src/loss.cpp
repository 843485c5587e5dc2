#include "pinn/loss.hpp"

#include <cmath>
#include <vector>

#include <omp.h>

#include "pinn/errors.hpp"

namespace pinn {

namespace {

struct Sums {
  double residual = 0.0;  // sum_j (Delta F(x_j) + f(x_j))^2
  double boundary = 0.0;  // sum_j F(y_j)^2
};

void check_samples(const NetworkParams& net, const SampleSet& s) {
  require(s.interior.rows() > 0 && s.boundary.rows() > 0, "loss needs nonempty interior and boundary batches");
  require(s.interior.cols() == net.dim() && s.boundary.cols() == net.dim(),
          "sample dimension does not match the network");
  require(net.theta().rows() == net.width() && net.theta().cols() == net.dim(),
          "theta shape no longer matches theta0");
}

// Accumulates loss sums over interior rows [i0, i1) and boundary rows [b0, b1).
// With grad != nullptr also adds the unscaled gradient contributions
//   w_int * r_j * dDeltaF/dtheta   and   w_bd * F_j * dF/dtheta.
Sums accumulate(const PoissonProblem& prob, const NetworkParams& net, const SampleSet& s,
                Eigen::Index i0, Eigen::Index i1, Eigen::Index b0, Eigen::Index b1, double w_int,
                double w_bd, Mat* grad) {
  const int m = net.width(), h = m / 2;
  const Mat& th = net.theta();
  const Vec& c = net.c();
  const Activation& act = net.activation();
  Sums out;
  std::vector<double> n2(m), s2(m), s3(m);
  for (int i = 0; i < m; ++i) n2[i] = th.row(i).squaredNorm();

  for (Eigen::Index j = i0; j < i1; ++j) {
    const auto x = s.interior.row(j);
    // Half-split sums, as in net_laplacian / net_eval.
    double lap2[2] = {0.0, 0.0};
    for (int i = 0; i < m; ++i) {
      const auto d = act.eval_all(th.row(i).dot(x));
      s2[i] = d[2];
      s3[i] = d[3];
      lap2[i >= h] += c[i] * n2[i] * d[2];
    }
    const double lap = lap2[0] + lap2[1];
    const double r = lap + prob.source(x.transpose());
    out.residual += r * r;
    if (grad) {
      const double k = w_int * r;
      for (int i = 0; i < m; ++i)
        grad->row(i) += (k * c[i]) * (n2[i] * s3[i] * x + 2.0 * s2[i] * th.row(i));
    }
  }

  std::vector<double> s1(m);
  for (Eigen::Index j = b0; j < b1; ++j) {
    const auto y = s.boundary.row(j);
    double f2[2] = {0.0, 0.0};
    for (int i = 0; i < m; ++i) {
      const auto d = act.eval_all(th.row(i).dot(y));
      s1[i] = d[1];
      f2[i >= h] += c[i] * d[0];
    }
    const double f = f2[0] + f2[1];
    out.boundary += f * f;
    if (grad) {
      const double k = w_bd * f;
      for (int i = 0; i < m; ++i) grad->row(i) += (k * c[i] * s1[i]) * y;
    }
  }
  return out;
}

Sums run(const PoissonProblem& prob, const NetworkParams& net, const SampleSet& s, Mat* grad,
         Exec exec) {
  const Eigen::Index bi = s.interior.rows(), bb = s.boundary.rows();
  const double w_int = 2.0 / static_cast<double>(bi);
  const double w_bd = 2.0 * prob.lambda / static_cast<double>(bb);
  if (grad) grad->setZero(net.width(), net.dim());

  const int nthreads = exec == Exec::Parallel ? omp_get_max_threads() : 1;
  if (nthreads == 1) return accumulate(prob, net, s, 0, bi, 0, bb, w_int, w_bd, grad);

  // Fixed contiguous partition per thread, combined in thread order: the
  // result depends on the thread count only, not on scheduling.
  std::vector<Sums> part(nthreads);
  std::vector<Mat> gpart(grad ? nthreads : 0);
#pragma omp parallel num_threads(nthreads)
  {
    const int t = omp_get_thread_num();
    const int nt = omp_get_num_threads();
    const Eigen::Index i0 = bi * t / nt, i1 = bi * (t + 1) / nt;
    const Eigen::Index b0 = bb * t / nt, b1 = bb * (t + 1) / nt;
    Mat* g = nullptr;
    if (grad) {
      gpart[t] = Mat::Zero(net.width(), net.dim());
      g = &gpart[t];
    }
    part[t] = accumulate(prob, net, s, i0, i1, b0, b1, w_int, w_bd, g);
  }
  Sums total;
  for (int t = 0; t < nthreads; ++t) {
    total.residual += part[t].residual;
    total.boundary += part[t].boundary;
    if (grad && gpart[t].size() > 0) *grad += gpart[t];
  }
  return total;
}

LossBreakdown breakdown(const Sums& sums, const SampleSet& s, double lambda) {
  LossBreakdown out;
  out.residual_term = sums.residual / static_cast<double>(s.interior.rows());
  out.boundary_term = sums.boundary / static_cast<double>(s.boundary.rows());
  out.total = out.residual_term + lambda * out.boundary_term;
  return out;
}

}  // namespace

SampleSet draw_samples(const Domain& dom, int n_interior, int n_boundary, Rng& rng) {
  SampleSet s;
  s.interior = sample_interior(dom, n_interior, rng);
  s.boundary = sample_boundary(dom, n_boundary, rng);
  return s;
}

LossBreakdown empirical_loss(const PoissonProblem& prob, const NetworkParams& net,
                             const SampleSet& s, Exec exec) {
  check_samples(net, s);
  return breakdown(run(prob, net, s, nullptr, exec), s, prob.lambda);
}

Mat loss_gradient(const PoissonProblem& prob, const NetworkParams& net, const SampleSet& s,
                  Exec exec) {
  Mat g;
  loss_and_gradient(prob, net, s, g, exec);
  return g;
}

LossBreakdown loss_and_gradient(const PoissonProblem& prob, const NetworkParams& net,
                                const SampleSet& s, Mat& grad, Exec exec) {
  check_samples(net, s);
  return breakdown(run(prob, net, s, &grad, exec), s, prob.lambda);
}

namespace {

// Per-point integrands; the MC estimators need their variances, not only sums.
void integrands(const PoissonProblem& prob, const NetworkParams& net, const SampleSet& s,
                Vec& res, Vec& bd, Exec exec) {
  res.resize(s.interior.rows());
  bd.resize(s.boundary.rows());
  const int ni = static_cast<int>(s.interior.rows());
  const int nb = static_cast<int>(s.boundary.rows());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (int j = 0; j < ni; ++j) {
    const Vec x = s.interior.row(j).transpose();
    const double r = net_laplacian(net, x) + prob.source(x);
    res[j] = r * r;
  }
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (int j = 0; j < nb; ++j) {
    const double f = net_eval(net, s.boundary.row(j).transpose());
    bd[j] = f * f;
  }
}

double mean(const Vec& v) { return v.sum() / static_cast<double>(v.size()); }

// Unbiased sample variance divided by n: the squared standard error of the mean.
double var_of_mean(const Vec& v) {
  const double mu = mean(v);
  const double n = static_cast<double>(v.size());
  return (v.array() - mu).square().sum() / (n - 1.0) / n;
}

}  // namespace

McLoss exact_loss_mc(const PoissonProblem& prob, const NetworkParams& net, int n_interior,
                     int n_boundary, Rng& rng, Exec exec) {
  require(n_interior >= 2 && n_boundary >= 2, "Monte Carlo loss needs at least two samples per set");
  const SampleSet s = draw_samples(prob.domain, n_interior, n_boundary, rng);
  check_samples(net, s);
  Vec res, bd;
  integrands(prob, net, s, res, bd, exec);

  const double vol = prob.domain.volume(), surf = prob.domain.surface();
  const double lam = prob.lambda;
  const double vr = var_of_mean(res), vb = var_of_mean(bd);

  McLoss out;
  out.averaged.residual_term = mean(res);
  out.averaged.boundary_term = mean(bd);
  out.averaged.total = out.averaged.residual_term + lam * out.averaged.boundary_term;
  out.averaged_std_error = std::sqrt(vr + lam * lam * vb);

  out.integral.residual_term = vol * out.averaged.residual_term;
  out.integral.boundary_term = surf * out.averaged.boundary_term;
  out.integral.total = out.integral.residual_term + lam * out.integral.boundary_term;
  out.std_error = std::sqrt(vol * vol * vr + lam * lam * surf * surf * vb);
  return out;
}

SolutionError solution_error(const PoissonProblem& prob, const NetworkParams& net, int n, Rng& rng) {
  if (!prob.solution) throw UnsupportedError("solution error needs an analytic solution");
  require(n >= 2, "solution error needs at least two samples");
  const Mat pts = sample_interior(prob.domain, n, rng);
  const auto& sol = *prob.solution;
  Vec e0(n), e1(n);
  for (int j = 0; j < n; ++j) {
    const Vec x = pts.row(j).transpose();
    const double diff = net_eval(net, x) - sol.value(x);
    Vec gu;
    if (sol.gradient) {
      gu = sol.gradient(x);
    } else {
      constexpr double h = 1e-5;
      gu.resize(x.size());
      for (Eigen::Index k = 0; k < x.size(); ++k) {
        Vec xp = x, xm = x;
        xp[k] += h;
        xm[k] -= h;
        gu[k] = (sol.value(xp) - sol.value(xm)) / (2 * h);
      }
    }
    e0[j] = diff * diff;
    e1[j] = (net_spatial_grad(net, x) - gu).squaredNorm();
  }
  const double vol = prob.domain.volume();
  SolutionError out;
  out.l2 = std::sqrt(vol * mean(e0));
  out.h1_seminorm = std::sqrt(vol * mean(e1));
  // se(sqrt(V)) ~ se(V) / (2 sqrt(V)).
  const auto se = [&](const Vec& e, double val) {
    return val > 0 ? vol * std::sqrt(var_of_mean(e)) / (2.0 * val) : 0.0;
  };
  out.l2_std_error = se(e0, out.l2);
  out.h1_std_error = se(e1, out.h1_seminorm);
  return out;
}

}  // namespace pinn
