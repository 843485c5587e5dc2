#include "pinn/init.hpp"

#include <cmath>

#include "pinn/errors.hpp"
#include "pinn/seeding.hpp"

namespace pinn {

Vec sample_truncated_normal(double a, int d, Rng& rng) {
  require(a > 0, "truncation half-width a must be positive");
  require(d >= 1, "dimension must be positive");
  std::normal_distribution<double> normal;
  Vec out(d);
  for (int k = 0; k < d; ++k) {
    double z;
    do z = normal(rng);
    while (!(std::abs(z) < a));
    out[k] = z;
  }
  return out;
}

NetworkParams symmetric_init(const InitConfig& cfg, Activation act, Rng& rng) {
  require(cfg.m > 0 && cfg.m % 2 == 0, "symmetric initialization needs an even positive width");
  require(cfg.d >= 1, "dimension must be positive");
  const int half = cfg.m / 2;
  const double mag = 1.0 / std::sqrt(static_cast<double>(cfg.m));
  Mat theta0(cfg.m, cfg.d);
  Vec c(cfg.m);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < half; ++i) {
    const Vec row = sample_truncated_normal(cfg.a, cfg.d, rng);
    theta0.row(i) = row.transpose();
    theta0.row(i + half) = row.transpose();
    c[i] = coin(rng) ? mag : -mag;
    c[i + half] = -c[i];
  }
  return NetworkParams(act, std::move(theta0), std::move(c));
}

NetworkParams symmetric_init(const InitConfig& cfg, Activation act) {
  Rng rng(derive_seed(cfg.seed, {kInitStream}));
  return symmetric_init(cfg, act, rng);
}

}  // namespace pinn
