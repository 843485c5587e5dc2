#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace pinn {

using Vec = Eigen::VectorXd;
/// Row-major so that row i (one neuron, or one sample point) is contiguous.
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using VecIn = Eigen::Ref<const Vec>;

using Rng = std::mt19937_64;

/// Serial kernels reduce in a fixed order and are bit-reproducible; Parallel
/// kernels split sample points across OpenMP threads.
enum class Exec { Serial, Parallel };

}  // namespace pinn
