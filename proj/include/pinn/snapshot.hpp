#pragma once

#include <filesystem>

#include "pinn/network.hpp"

namespace pinn {

/// Flat CSV parameter snapshot:
///   line 1      m,d,activation          (column names)
///   line 2      <m>,<d>,<name>
///   m lines     theta0 rows, d comma-separated values each
///   m lines     theta rows
///   m lines     c_i
/// Values are written with 17 significant digits and reload bit-exactly.
void save_snapshot(const NetworkParams& net, const std::filesystem::path& path);
NetworkParams load_snapshot(const std::filesystem::path& path);

}  // namespace pinn
