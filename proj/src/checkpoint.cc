#include "subgram/checkpoint.h"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "subgram/error.h"

namespace subgram {

namespace {

void append_row(std::string& out, std::span<const float> row) {
  for (const float x : row) {
    out += ' ';
    append_fixed6(out, x);
  }
  out += '\n';
}

std::string format_double(double x) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, result.ptr);
}

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedCheckpoint, what);
}

// Sequential line reader over the checksummed body.
class LineCursor {
 public:
  explicit LineCursor(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }

  std::string_view next() {
    if (done()) malformed("unexpected end of checkpoint");
    const std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) malformed("unterminated line");
    const auto line = text_.substr(pos_, end - pos_);
    pos_ = end + 1;
    return line;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= line.size()) {
    std::size_t end = line.find(' ', start);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view s, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    malformed(std::string("bad ") + what + " '" + std::string(s) + "'");
  }
  return value;
}

std::size_t parse_section(LineCursor& cursor, std::string_view name) {
  const auto line = cursor.next();
  const auto parts = split_spaces(line);
  if (parts.size() != 2 || parts[0] != name) {
    malformed("expected section " + std::string(name) + ", got '" + std::string(line) + "'");
  }
  return parse_number<std::size_t>(parts[1], "section size");
}

void parse_floats(std::span<const std::string_view> fields, std::span<float> row) {
  if (fields.size() != row.size()) malformed("row has the wrong number of values");
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = parse_number<float>(fields[i], "value");
}

}  // namespace

void append_fixed6(std::string& out, double value) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof buf, "%.6f", value);
  out.append(buf, static_cast<std::size_t>(n));
}

std::uint32_t crc32(std::string_view bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t pos = 0; pos < bytes.size(); pos += kChunk) {
    const std::size_t n = std::min(kChunk, bytes.size() - pos);
    crc = ::crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + pos), static_cast<uInt>(n));
  }
  return static_cast<std::uint32_t>(crc);
}

std::string save_checkpoint(const Model& model) {
  if (!model.all_finite()) {
    throw Error(ErrorCode::kNonFiniteParameter, "refusing to save a non-finite model");
  }
  const TrainConfig& c = model.config();
  const Vocabulary& vocab = model.vocab();
  const CorpusStats& stats = model.corpus_stats();

  std::string out(kCheckpointMagic);
  const auto header = [&](std::string_view key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  header("format_version", std::to_string(kCheckpointFormatVersion));
  header("language", c.language);
  header("dim", std::to_string(c.dim));
  header("window", std::to_string(c.window));
  header("negatives", std::to_string(c.negatives));
  header("epochs", std::to_string(c.epochs));
  header("lr0", format_double(c.lr0));
  header("min_n", std::to_string(c.units.min_n()));
  header("max_n", std::to_string(c.units.max_n()));
  header("units", c.units.to_string());
  header("seed", std::to_string(c.seed));
  header("min_count", std::to_string(c.min_count));
  header("subsample", format_double(c.subsample));
  header("threads", std::to_string(c.threads));
  header("fixed_window", c.fixed_window ? "1" : "0");
  header("freeze_transferred_epochs", std::to_string(c.freeze_transferred_epochs));
  header("lenient_annotations", c.lenient_annotations ? "1" : "0");
  header("total_tokens", std::to_string(vocab.total_tokens()));
  header("corpus_tokens", std::to_string(stats.token_count));
  header("corpus_sentences", std::to_string(stats.sentence_count));
  for (const auto& [field, fraction] : stats.annotated_fraction_per_field) {
    header("annotated_" + field, format_double(fraction));
  }
  out += '\n';

  out += "UNITS " + std::to_string(vocab.num_units()) + '\n';
  for (std::size_t i = 0; i < vocab.num_units(); ++i) {
    out += serialize_unit_key(vocab.units()[i]);
    append_row(out, model.input().row(i));
  }
  out += "WORDS " + std::to_string(vocab.num_words()) + '\n';
  for (std::size_t i = 0; i < vocab.num_words(); ++i) {
    const auto& w = vocab.words()[i];
    out += w.surface;
    out += ' ';
    out += std::to_string(w.count);
    append_row(out, model.output().row(i));
  }
  out += "ANALYSES " + std::to_string(vocab.num_words()) + '\n';
  for (const auto& w : vocab.words()) {
    out += render_token(w.analysis);
    out += '\n';
  }

  char crc[32];
  std::snprintf(crc, sizeof crc, "CRC32 %08x\n", crc32(out));
  out += crc;
  return out;
}

bool looks_like_checkpoint(std::string_view bytes) { return bytes.starts_with("SUBGRAM"); }

Model load_checkpoint(std::string_view bytes) {
  if (!looks_like_checkpoint(bytes) || bytes.size() < kCheckpointMagic.size()) {
    throw Error(ErrorCode::kIncompatibleFormatVersion, "not a checkpoint (bad magic)");
  }
  if (!bytes.starts_with(kCheckpointMagic)) {
    throw Error(ErrorCode::kIncompatibleFormatVersion,
                "unsupported checkpoint format '" + std::string(bytes.substr(0, 8)) + "'");
  }

  // Checksum first; a truncated file must not reach the parser.
  constexpr std::string_view kCrcTag = "CRC32 ";
  if (bytes.empty() || bytes.back() != '\n') {
    throw Error(ErrorCode::kChecksumMismatch, "checkpoint is truncated");
  }
  const std::size_t crc_line = bytes.rfind('\n', bytes.size() - 2);
  if (crc_line == std::string_view::npos ||
      bytes.substr(crc_line + 1, kCrcTag.size()) != kCrcTag) {
    throw Error(ErrorCode::kChecksumMismatch, "checkpoint has no CRC32 trailer");
  }
  const std::string_view body = bytes.substr(0, crc_line + 1);
  const std::string_view stored =
      bytes.substr(crc_line + 1 + kCrcTag.size(), bytes.size() - crc_line - 2 - kCrcTag.size());
  char expected[16];
  std::snprintf(expected, sizeof expected, "%08x", crc32(body));
  if (stored != expected) {
    throw Error(ErrorCode::kChecksumMismatch,
                "stored CRC32 " + std::string(stored) + " but content hashes to " + expected);
  }

  LineCursor cursor(body.substr(kCheckpointMagic.size()));
  std::map<std::string, std::string, std::less<>> header;
  while (true) {
    const auto line = cursor.next();
    if (line.empty()) break;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) malformed("bad header line '" + std::string(line) + "'");
    header.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
  }
  const auto get = [&](std::string_view key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) malformed("missing header key '" + std::string(key) + "'");
    return it->second;
  };
  const auto get_int = [&](std::string_view key) {
    return parse_number<std::int64_t>(get(key), "integer header");
  };
  const auto get_double = [&](std::string_view key) {
    return parse_number<double>(get(key), "real header");
  };

  if (get_int("format_version") != kCheckpointFormatVersion) {
    throw Error(ErrorCode::kIncompatibleFormatVersion, "format_version " + get("format_version"));
  }

  TrainConfig config;
  config.language = get("language");
  config.dim = static_cast<int>(get_int("dim"));
  config.window = static_cast<int>(get_int("window"));
  config.negatives = static_cast<int>(get_int("negatives"));
  config.epochs = static_cast<int>(get_int("epochs"));
  config.lr0 = get_double("lr0");
  config.units = UnitConfig::parse(get("units"), static_cast<int>(get_int("min_n")),
                                   static_cast<int>(get_int("max_n")));
  config.seed = parse_number<std::uint64_t>(get("seed"), "seed");
  config.min_count = get_int("min_count");
  config.subsample = get_double("subsample");
  config.threads = static_cast<int>(get_int("threads"));
  config.fixed_window = get_int("fixed_window") != 0;
  config.freeze_transferred_epochs = static_cast<int>(get_int("freeze_transferred_epochs"));
  config.lenient_annotations = get_int("lenient_annotations") != 0;
  try {
    config.validate();
  } catch (const Error& e) {
    malformed(std::string("invalid configuration: ") + e.what());
  }
  const std::size_t dim = static_cast<std::size_t>(config.dim);

  CorpusStats stats;
  stats.token_count = get_int("corpus_tokens");
  stats.sentence_count = get_int("corpus_sentences");
  for (const auto& [key, value] : header) {
    if (key.starts_with("annotated_")) {
      stats.annotated_fraction_per_field[key.substr(10)] = parse_number<double>(value, "fraction");
    }
  }

  const std::size_t num_units = parse_section(cursor, "UNITS");
  std::vector<UnitKey> units;
  units.reserve(num_units);
  Matrix input(num_units, dim);
  for (std::size_t i = 0; i < num_units; ++i) {
    const auto fields = split_spaces(cursor.next());
    units.push_back(parse_unit_key(fields[0]));
    parse_floats(std::span(fields).subspan(1), input.row(i));
  }

  const std::size_t num_words = parse_section(cursor, "WORDS");
  std::vector<WordEntry> words;
  words.reserve(num_words);
  Matrix output(num_words, dim);
  for (std::size_t i = 0; i < num_words; ++i) {
    const auto fields = split_spaces(cursor.next());
    if (fields.size() < 2) malformed("short word line");
    words.push_back({std::string(fields[0]), parse_number<std::int64_t>(fields[1], "count"), {}});
    parse_floats(std::span(fields).subspan(2), output.row(i));
  }

  if (parse_section(cursor, "ANALYSES") != num_words) malformed("analysis count differs from word count");
  for (auto& word : words) {
    try {
      word.analysis = parse_token(cursor.next());
    } catch (const Error& e) {
      malformed(std::string("bad analysis: ") + e.what());
    }
    if (word.analysis.surface != word.surface) malformed("analysis does not match word '" + word.surface + "'");
  }
  if (!cursor.done()) malformed("trailing content before CRC32");

  Model model(Vocabulary::from_tables(std::move(words), std::move(units), get_int("total_tokens")),
              config);
  model.input() = std::move(input);
  model.output() = std::move(output);
  model.corpus_stats() = std::move(stats);
  if (!model.all_finite()) throw Error(ErrorCode::kNonFiniteParameter, "checkpoint holds non-finite values");
  return model;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoFailure, "read error on '" + path + "'");
  return std::move(buffer).str();
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoFailure, "cannot write '" + path + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIoFailure, "write error on '" + path + "'");
}

void save_checkpoint_file(const Model& model, const std::string& path) {
  write_file(path, save_checkpoint(model));
}

Model load_checkpoint_file(const std::string& path) { return load_checkpoint(read_file(path)); }

}  // namespace subgram
