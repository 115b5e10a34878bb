#pragma once

#include <cstdint>
#include <filesystem>

#include "landau/kinetic_sim.hpp"

namespace landau::kinetic {

/// Flat little-endian snapshot of a SpectralState.
///
///   bytes 0..7    magic "LNDCKPT1"
///   u32           format version (1)
///   u32 x 3       dim, n_x, n_v
///   f64 x 3       v_max, t, epsilon
///   u64           values per species (n_x^d * n_v^d)
///   complex64[]   f_hat_plus, then f_hat_minus; (re, im) as f32 pairs,
///                 index x_slot * n_v^d + v_index (FFT order in x).
struct CheckpointHeader {
  std::uint32_t version = 1;
  std::uint32_t dim = 1;
  std::uint32_t n_x = 0;
  std::uint32_t n_v = 0;
  double v_max = 0.0;
  double t = 0.0;
  double epsilon = 0.0;
  std::uint64_t count = 0;
};

struct Checkpoint {
  CheckpointHeader header;
  SpectralState state;
};

void write_checkpoint(const std::filesystem::path& path, const SimConfig& cfg, const SpectralState& state);

/// Throws Error on a bad magic, unsupported version, or truncated payload.
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace landau::kinetic
