#include "subgram/vectors.h"

#include <charconv>

#include "subgram/checkpoint.h"
#include "subgram/error.h"
#include "subgram/eval.h"

namespace subgram {

namespace {

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::kMalformedVectorFile, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

ExportMode parse_export_mode(std::string_view name) {
  if (name == "composed-words") return ExportMode::kComposedWords;
  if (name == "raw-units") return ExportMode::kRawUnits;
  throw Error(ErrorCode::kInvalidConfig, "unknown export mode '" + std::string(name) + "'");
}

VectorTable vector_table(const Model& model, ExportMode mode) {
  if (!model.all_finite()) throw Error(ErrorCode::kNonFiniteParameter, "model is not finite");
  VectorTable table;
  table.dim = static_cast<std::size_t>(model.dim());
  const auto append = [&](std::string key, std::span<const float> row) {
    table.keys.push_back(std::move(key));
    table.values.insert(table.values.end(), row.begin(), row.end());
  };
  if (mode == ExportMode::kRawUnits) {
    for (std::size_t i = 0; i < model.vocab().num_units(); ++i) {
      append(serialize_unit_key(model.vocab().units()[i]), model.input().row(i));
    }
  } else {
    const Matrix composed = composed_word_vectors(model);
    for (std::size_t w = 0; w < model.vocab().num_words(); ++w) {
      append(model.vocab().words()[w].surface, composed.row(w));
    }
  }
  return table;
}

std::string format_vectors(const VectorTable& table) {
  std::string out = std::to_string(table.keys.size()) + ' ' + std::to_string(table.dim) + '\n';
  for (std::size_t i = 0; i < table.keys.size(); ++i) {
    out += table.keys[i];
    for (const double x : table.row(i)) {
      out += ' ';
      append_fixed6(out, x);
    }
    out += '\n';
  }
  return out;
}

std::string export_vectors(const Model& model, ExportMode mode) {
  return format_vectors(vector_table(model, mode));
}

VectorTable import_vectors(std::string_view text) {
  VectorTable table;
  std::size_t pos = 0;
  std::size_t line_number = 0;
  const auto next_line = [&]() -> std::string_view {
    const std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) malformed(line_number + 1, "missing line terminator");
    const auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_number;
    return line;
  };
  const auto fields_of = [](std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(' ', start);
      if (end == std::string_view::npos) end = line.size();
      out.push_back(line.substr(start, end - start));
      start = end + 1;
    }
    return out;
  };
  const auto number = [&](std::string_view s, auto& value) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      malformed(line_number, "bad number '" + std::string(s) + "'");
    }
  };

  if (text.empty()) malformed(1, "empty file");
  const auto header = fields_of(next_line());
  if (header.size() != 2) malformed(1, "header must be '<rows> <dim>'");
  std::size_t rows = 0;
  number(header[0], rows);
  number(header[1], table.dim);
  table.keys.reserve(rows);
  table.values.reserve(rows * table.dim);
  for (std::size_t r = 0; r < rows; ++r) {
    if (pos >= text.size()) malformed(line_number + 1, "fewer rows than the header declares");
    const auto fields = fields_of(next_line());
    if (fields.size() != table.dim + 1 || fields[0].empty()) {
      malformed(line_number, "expected a key and " + std::to_string(table.dim) + " values");
    }
    table.keys.emplace_back(fields[0]);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double x = 0.0;
      number(fields[i], x);
      table.values.push_back(x);
    }
  }
  if (pos != text.size()) malformed(line_number + 1, "more rows than the header declares");
  return table;
}

}  // namespace subgram
