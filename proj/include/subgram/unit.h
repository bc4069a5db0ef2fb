#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "subgram/corpus.h"

namespace subgram {

// Declaration order is the order unit_keys() emits kinds in.
enum class UnitKind : int { kWord = 0, kCharNgram, kPhonWord, kPhonNgram, kLemma, kMorphTag };

inline constexpr std::array<UnitKind, 6> kAllUnitKinds = {
    UnitKind::kWord,      UnitKind::kCharNgram, UnitKind::kPhonWord,
    UnitKind::kPhonNgram, UnitKind::kLemma,     UnitKind::kMorphTag};

// Command-line names: word, char-ngrams, phon-word, phon-ngrams, lemma, morph.
std::string_view unit_kind_name(UnitKind kind);
std::optional<UnitKind> unit_kind_from_name(std::string_view name);

// Serialization prefixes: w: c: pw: p: l: m:
std::string_view unit_kind_tag(UnitKind kind);

struct UnitKey {
  UnitKind kind = UnitKind::kWord;
  std::string text;

  friend auto operator<=>(const UnitKey&, const UnitKey&) = default;
  friend bool operator==(const UnitKey&, const UnitKey&) = default;
};

struct UnitKeyHash {
  std::size_t operator()(const UnitKey& key) const noexcept {
    return std::hash<std::string>{}(key.text) * 31u + static_cast<std::size_t>(key.kind);
  }
};

std::string serialize_unit_key(const UnitKey& key);
// Throws Error(kMalformedCheckpoint) for an unknown tag or empty text.
UnitKey parse_unit_key(std::string_view serialized);

class UnitConfig {
 public:
  UnitConfig() = default;
  UnitConfig(std::initializer_list<UnitKind> kinds, int min_n = 3, int max_n = 6);

  // Parses "phon-ngrams,lemma,morph".
  static UnitConfig parse(std::string_view list, int min_n = 3, int max_n = 6);

  bool enabled(UnitKind kind) const { return enabled_[static_cast<int>(kind)]; }
  void enable(UnitKind kind) { enabled_[static_cast<int>(kind)] = true; }
  int min_n() const { return min_n_; }
  int max_n() const { return max_n_; }
  std::vector<UnitKind> kinds() const;
  std::string to_string() const;

  // Throws Error(kInvalidConfig) unless 1 <= min_n <= max_n and some kind is enabled.
  void validate() const;

  friend bool operator==(const UnitConfig&, const UnitConfig&) = default;

 private:
  std::array<bool, 6> enabled_{};
  int min_n_ = 3;
  int max_n_ = 6;
};

// Splits UTF-8 text into code points (each returned as its byte slice).
std::vector<std::string_view> utf8_code_points(std::string_view s);

// All code-point n-grams of "<" + s + ">" for n = min_n..max_n, ordered by
// (n, start).  Duplicates are kept.  Throws Error(kReservedCharacter) when s
// contains '<' or '>'.
std::vector<std::string> extract_ngrams(std::string_view s, int min_n, int max_n);

enum class MissingPolicy {
  kAbort,     // throw Error(kMissingAnnotation)
  kFallback,  // use whatever kinds the token supports, warn once per field
  kSilent,    // fall back without warning (lookups)
};

// Unit extraction bound to one configuration.  Holds the warn-once state of
// the fallback policy, so share one instance per run.
class UnitExtractor {
 public:
  explicit UnitExtractor(UnitConfig config, MissingPolicy policy = MissingPolicy::kAbort);

  // May return an empty list only under a fallback policy.
  std::vector<UnitKey> keys(const AnnotatedToken& token) const;

  const UnitConfig& config() const { return config_; }

 private:
  UnitConfig config_;
  MissingPolicy policy_;
  mutable std::array<bool, 3> warned_{};
};

// Strict extraction: throws Error(kMissingAnnotation) if the token lacks an
// annotation an enabled kind needs.
std::vector<UnitKey> unit_keys(const AnnotatedToken& token, const UnitConfig& config);

// Component-wise mean.  Throws Error(kEmptyUnitList) for an empty list and
// Error(kDimensionMismatch) when dimensions differ.
std::vector<double> compose(std::span<const std::vector<double>> unit_vectors);

}  // namespace subgram
