#pragma once

#include <cstdint>
#include <string>

#include "headsum/model.h"

namespace headsum {

inline constexpr char kCheckpointMagic[9] = "HSUMCKPT";
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Container layout: 8-byte magic, u32 version, u32 header length, JSON
/// header (model config, vocabulary reference, tensor directory with
/// shapes), then each tensor's values as row-major little-endian f32 in
/// directory order. Parameters live on the f32 grid, so save/load
/// round-trips bitwise.
void save_checkpoint(const std::string& path, const Parameters& params,
                     const std::string& vocab_ref);

struct Checkpoint {
  Parameters params;
  std::string vocab_ref;
};

Checkpoint load_checkpoint(const std::string& path);

/// Load, then reject checkpoints whose config differs from the expected
/// one in any shape or forward-behavior field.
Checkpoint load_checkpoint_expecting(const std::string& path, const ModelConfig& expected);

}  // namespace headsum
