#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "subgram/model.h"

namespace subgram {

enum class ExportMode { kComposedWords, kRawUnits };

// Parses "composed-words" / "raw-units"; throws Error(kInvalidConfig).
ExportMode parse_export_mode(std::string_view name);

// Text table: "<rows> <dim>" header, then "key v1 ... vdim" per row with
// six decimals.
struct VectorTable {
  std::size_t dim = 0;
  std::vector<std::string> keys;
  std::vector<double> values;  // row-major, keys.size() * dim

  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }

  friend bool operator==(const VectorTable&, const VectorTable&) = default;
};

VectorTable vector_table(const Model& model, ExportMode mode);

std::string format_vectors(const VectorTable& table);
std::string export_vectors(const Model& model, ExportMode mode);

// Throws Error(kMalformedVectorFile).
VectorTable import_vectors(std::string_view text);

}  // namespace subgram
