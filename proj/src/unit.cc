#include "subgram/unit.h"

#include <iostream>

#include "subgram/error.h"

namespace subgram {

namespace {

constexpr std::array<std::string_view, 6> kKindNames = {"word",        "char-ngrams", "phon-word",
                                                        "phon-ngrams", "lemma",       "morph"};
constexpr std::array<std::string_view, 6> kKindTags = {"w:", "c:", "pw:", "p:", "l:", "m:"};

std::size_t code_point_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;  // stray continuation or invalid lead byte: treat as one unit
}

}  // namespace

std::string_view unit_kind_name(UnitKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<UnitKind> unit_kind_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return static_cast<UnitKind>(i);
  }
  return std::nullopt;
}

std::string_view unit_kind_tag(UnitKind kind) { return kKindTags[static_cast<int>(kind)]; }

std::string serialize_unit_key(const UnitKey& key) {
  std::string out(unit_kind_tag(key.kind));
  out += key.text;
  return out;
}

UnitKey parse_unit_key(std::string_view serialized) {
  // "pw:" must be tried before "p:".
  static constexpr std::array<UnitKind, 6> kTryOrder = {
      UnitKind::kPhonWord, UnitKind::kPhonNgram, UnitKind::kWord,
      UnitKind::kCharNgram, UnitKind::kLemma,   UnitKind::kMorphTag};
  for (const UnitKind kind : kTryOrder) {
    const auto tag = unit_kind_tag(kind);
    if (serialized.starts_with(tag) && serialized.size() > tag.size()) {
      return UnitKey{kind, std::string(serialized.substr(tag.size()))};
    }
  }
  throw Error(ErrorCode::kMalformedCheckpoint,
              "bad unit key '" + std::string(serialized) + "'");
}

UnitConfig::UnitConfig(std::initializer_list<UnitKind> kinds, int min_n, int max_n)
    : min_n_(min_n), max_n_(max_n) {
  for (const UnitKind kind : kinds) enable(kind);
}

UnitConfig UnitConfig::parse(std::string_view list, int min_n, int max_n) {
  UnitConfig config({}, min_n, max_n);
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    const auto name = list.substr(start, end - start);
    const auto kind = unit_kind_from_name(name);
    if (!kind) throw Error(ErrorCode::kInvalidConfig, "unknown unit kind '" + std::string(name) + "'");
    config.enable(*kind);
    start = end + 1;
  }
  config.validate();
  return config;
}

std::vector<UnitKind> UnitConfig::kinds() const {
  std::vector<UnitKind> out;
  for (const UnitKind kind : kAllUnitKinds) {
    if (enabled(kind)) out.push_back(kind);
  }
  return out;
}

std::string UnitConfig::to_string() const {
  std::string out;
  for (const UnitKind kind : kinds()) {
    if (!out.empty()) out += ',';
    out += unit_kind_name(kind);
  }
  return out;
}

void UnitConfig::validate() const {
  if (min_n_ < 1 || min_n_ > max_n_) {
    throw Error(ErrorCode::kInvalidConfig, "n-gram range must satisfy 1 <= min_n <= max_n");
  }
  if (kinds().empty()) throw Error(ErrorCode::kInvalidConfig, "no unit kinds enabled");
}

std::vector<std::string_view> utf8_code_points(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t len = code_point_length(static_cast<unsigned char>(s[pos]));
    if (pos + len > s.size()) len = s.size() - pos;
    out.push_back(s.substr(pos, len));
    pos += len;
  }
  return out;
}

std::vector<std::string> extract_ngrams(std::string_view s, int min_n, int max_n) {
  if (s.find_first_of("<>") != std::string_view::npos) {
    throw Error(ErrorCode::kReservedCharacter, "'" + std::string(s) + "' contains '<' or '>'");
  }
  std::string bounded;
  bounded.reserve(s.size() + 2);
  bounded += '<';
  bounded += s;
  bounded += '>';
  const auto points = utf8_code_points(bounded);
  const int length = static_cast<int>(points.size());

  std::vector<std::string> out;
  for (int n = min_n; n <= max_n; ++n) {
    for (int start = 0; start + n <= length; ++start) {
      const char* first = points[start].data();
      const char* last = points[start + n - 1].data() + points[start + n - 1].size();
      out.emplace_back(first, last);
    }
  }
  return out;
}

UnitExtractor::UnitExtractor(UnitConfig config, MissingPolicy policy)
    : config_(std::move(config)), policy_(policy) {
  config_.validate();
}

std::vector<UnitKey> UnitExtractor::keys(const AnnotatedToken& token) const {
  const auto missing = [&](int field, const char* name) {
    if (policy_ == MissingPolicy::kAbort) {
      throw Error(ErrorCode::kMissingAnnotation,
                  "token '" + token.surface + "' has no " + name + " annotation");
    }
    if (policy_ == MissingPolicy::kFallback && !warned_[field]) {
      warned_[field] = true;
      std::cerr << "warning: tokens without " << name
                << " annotation fall back to the remaining unit kinds\n";
    }
  };

  std::vector<UnitKey> out;
  if (config_.enabled(UnitKind::kWord)) out.push_back({UnitKind::kWord, token.surface});
  if (config_.enabled(UnitKind::kCharNgram)) {
    for (auto& gram : extract_ngrams(token.surface, config_.min_n(), config_.max_n())) {
      out.push_back({UnitKind::kCharNgram, std::move(gram)});
    }
  }
  const bool wants_phonemic =
      config_.enabled(UnitKind::kPhonWord) || config_.enabled(UnitKind::kPhonNgram);
  if (wants_phonemic && !token.phonemic) {
    missing(0, "ipa");
  } else if (wants_phonemic) {
    if (config_.enabled(UnitKind::kPhonWord)) out.push_back({UnitKind::kPhonWord, *token.phonemic});
    if (config_.enabled(UnitKind::kPhonNgram)) {
      for (auto& gram : extract_ngrams(*token.phonemic, config_.min_n(), config_.max_n())) {
        out.push_back({UnitKind::kPhonNgram, std::move(gram)});
      }
    }
  }
  if (config_.enabled(UnitKind::kLemma)) {
    if (!token.lemma) {
      missing(1, "lemma");
    } else {
      out.push_back({UnitKind::kLemma, *token.lemma});
    }
  }
  if (config_.enabled(UnitKind::kMorphTag)) {
    for (const auto& tag : token.morph_tags) out.push_back({UnitKind::kMorphTag, tag});
  }
  if (out.empty() && policy_ == MissingPolicy::kAbort) {
    throw Error(ErrorCode::kMissingAnnotation,
                "token '" + token.surface + "' yields no units under " + config_.to_string());
  }
  return out;
}

std::vector<UnitKey> unit_keys(const AnnotatedToken& token, const UnitConfig& config) {
  return UnitExtractor(config, MissingPolicy::kAbort).keys(token);
}

std::vector<double> compose(std::span<const std::vector<double>> unit_vectors) {
  if (unit_vectors.empty()) throw Error(ErrorCode::kEmptyUnitList, "nothing to compose");
  const std::size_t dim = unit_vectors.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto& v : unit_vectors) {
    if (v.size() != dim) throw Error(ErrorCode::kDimensionMismatch, "unit vectors differ in dimension");
    for (std::size_t i = 0; i < dim; ++i) mean[i] += v[i];
  }
  const double scale = 1.0 / static_cast<double>(unit_vectors.size());
  for (auto& x : mean) x *= scale;
  return mean;
}

}  // namespace subgram
