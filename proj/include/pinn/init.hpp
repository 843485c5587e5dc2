#pragma once

#include <cstdint>

#include "pinn/network.hpp"
#include "pinn/types.hpp"

namespace pinn {

struct InitConfig {
  double a = 2.0;  // truncation half-width of N_a(0, I_d)
  int m = 2;       // even width
  int d = 1;
  std::uint64_t seed = 0;
};

/// d i.i.d. draws of a standard normal conditioned on (-a, a), by rejection.
Vec sample_truncated_normal(double a, int d, Rng& rng);

/// Paired initialization: rows i and i + m/2 share one truncated-normal draw and
/// carry opposite output weights +-1/sqrt(m), so F(.; theta0) and its Laplacian
/// vanish identically.
NetworkParams symmetric_init(const InitConfig& cfg, Activation act, Rng& rng);

/// Same, drawing from a stream seeded with derive_seed(cfg.seed, {kInitStream}).
NetworkParams symmetric_init(const InitConfig& cfg, Activation act);

}  // namespace pinn
