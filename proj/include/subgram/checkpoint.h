#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "subgram/model.h"

namespace subgram {

inline constexpr std::string_view kCheckpointMagic = "SUBGRAM1\n";
inline constexpr int kCheckpointFormatVersion = 1;

// Text checkpoint:
//   SUBGRAM1
//   key=value header lines, blank line
//   UNITS <n>     serialized-unit-key <dim floats>
//   WORDS <n>     surface <count> <dim floats>
//   ANALYSES <n>  canonical annotated token of each word, in word id order
//   CRC32 <hex>   over every byte above
// Floats carry exactly six decimals.
std::string save_checkpoint(const Model& model);
void save_checkpoint_file(const Model& model, const std::string& path);

// Throws Error(kChecksumMismatch) on truncation or corruption,
// Error(kIncompatibleFormatVersion) on a foreign magic or version and
// Error(kMalformedCheckpoint) on structural problems.
Model load_checkpoint(std::string_view bytes);
Model load_checkpoint_file(const std::string& path);

bool looks_like_checkpoint(std::string_view bytes);

std::uint32_t crc32(std::string_view bytes);

// "%.6f".
void append_fixed6(std::string& out, double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view bytes);

}  // namespace subgram
