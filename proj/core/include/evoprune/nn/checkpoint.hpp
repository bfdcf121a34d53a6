#pragma once

#include <cstdint>
#include <filesystem>

#include "evoprune/nn/network.hpp"

namespace evoprune::nn {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
  Network network;
  std::uint64_t seed = 0;
};

/// Writes `path` (JSON manifest: format version, seed, layer names, widths,
/// prunable flags) plus one sidecar "<stem>.<layer>.bin" per layer holding the
/// weights (row-major) followed by the bias as little-endian float64.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

/// Throws FormatError on version mismatch, missing blobs or bad sizes.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace evoprune::nn
