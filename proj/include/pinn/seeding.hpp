#pragma once

#include <cstdint>
#include <initializer_list>

namespace pinn {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Folds a list of coordinates into a base seed. derive_seed(base, {m, run})
/// is the seed of run `run` at width `m`; any run can be replayed from its
/// coordinates alone.
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> coords) {
  std::uint64_t h = mix64(base);
  for (std::uint64_t c : coords) h = mix64(h ^ mix64(c + 0x632be59bd9b4e019ULL));
  return h;
}

// Stream tags for the two random streams of a single training run.
inline constexpr std::uint64_t kInitStream = 0x696e6974;   // "init"
inline constexpr std::uint64_t kTrainStream = 0x7472616e;  // "tran"

}  // namespace pinn
