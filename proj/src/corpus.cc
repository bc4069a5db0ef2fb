#include "subgram/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "subgram/error.h"
#include "subgram/rng.h"

namespace subgram {

namespace {

bool has_boundary_symbol(std::string_view s) {
  return s.find_first_of("<>") != std::string_view::npos;
}

[[noreturn]] void malformed(std::string_view raw, const std::string& why) {
  throw Error(ErrorCode::kMalformedToken, "'" + std::string(raw) + "': " + why);
}

std::vector<std::string_view> split(std::string_view s, char delim) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(delim, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

AnnotatedToken parse_token(std::string_view raw) {
  const auto fields = split(raw, '|');
  AnnotatedToken token;
  if (fields[0].empty()) malformed(raw, "empty surface form");
  if (has_boundary_symbol(fields[0])) malformed(raw, "surface contains a boundary symbol");
  token.surface = std::string(fields[0]);

  bool seen_morph = false;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    const std::string_view field = fields[i];
    if (field.starts_with("ipa:")) {
      if (token.phonemic) malformed(raw, "duplicate ipa: field");
      const auto payload = field.substr(4);
      if (payload.empty()) malformed(raw, "empty ipa: field");
      if (has_boundary_symbol(payload)) malformed(raw, "phonemic form contains a boundary symbol");
      token.phonemic = std::string(payload);
    } else if (field.starts_with("l:")) {
      if (token.lemma) malformed(raw, "duplicate l: field");
      const auto payload = field.substr(2);
      if (payload.empty()) malformed(raw, "empty l: field");
      token.lemma = std::string(payload);
    } else if (field.starts_with("m:")) {
      if (seen_morph) malformed(raw, "duplicate m: field");
      seen_morph = true;
      for (const auto tag : split(field.substr(2), '+')) {
        if (tag.empty()) malformed(raw, "empty morphological tag");
        if (std::find(token.morph_tags.begin(), token.morph_tags.end(), tag) ==
            token.morph_tags.end()) {
          token.morph_tags.emplace_back(tag);
        }
      }
    } else {
      malformed(raw, "unknown field '" + std::string(field) + "'");
    }
  }
  return token;
}

std::string render_token(const AnnotatedToken& token) {
  std::string out = token.surface;
  if (token.phonemic) out += "|ipa:" + *token.phonemic;
  if (token.lemma) out += "|l:" + *token.lemma;
  if (!token.morph_tags.empty()) {
    out += "|m:";
    for (std::size_t i = 0; i < token.morph_tags.size(); ++i) {
      if (i > 0) out += '+';
      out += token.morph_tags[i];
    }
  }
  return out;
}

std::string render_sentence(const Sentence& sentence) {
  std::string out;
  for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += render_token(sentence.tokens[i]);
  }
  return out;
}

CorpusReader::CorpusReader(std::istream& in, ReadOptions options)
    : in_(in), options_(options) {}

bool CorpusReader::next(Sentence& sentence) {
  while (std::getline(in_, line_)) {
    ++line_number_;
    if (!line_.empty() && line_.back() == '\r') line_.pop_back();
    sentence.tokens.clear();
    std::size_t pos = 0;
    std::int64_t position = 0;
    while (pos < line_.size()) {
      const std::size_t start = line_.find_first_not_of(" \t", pos);
      if (start == std::string::npos) break;
      std::size_t end = line_.find_first_of(" \t", start);
      if (end == std::string::npos) end = line_.size();
      ++position;
      const std::string_view raw(line_.data() + start, end - start);
      try {
        sentence.tokens.push_back(parse_token(raw));
      } catch (const Error& e) {
        const std::string where =
            "line " + std::to_string(line_number_) + ", token " + std::to_string(position);
        if (!options_.lenient) throw Error(e.code(), where + ": " + e.what());
        std::cerr << "warning: skipping token at " << where << ": " << e.what() << '\n';
        ++skipped_tokens_;
      }
      pos = end;
    }
    if (!sentence.tokens.empty()) return true;
  }
  if (in_.bad()) throw Error(ErrorCode::kIoFailure, "read error");
  return false;
}

std::vector<Sentence> read_corpus(std::istream& in, ReadOptions options) {
  CorpusReader reader(in, options);
  std::vector<Sentence> corpus;
  Sentence sentence;
  while (reader.next(sentence)) corpus.push_back(std::move(sentence));
  return corpus;
}

std::vector<Sentence> read_corpus_file(const std::string& path, ReadOptions options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoFailure, "cannot open corpus '" + path + "'");
  return read_corpus(in, options);
}

CorpusStats compute_stats(std::span<const Sentence> corpus) {
  CorpusStats stats;
  std::int64_t ipa = 0, lemma = 0, morph = 0;
  for (const auto& sentence : corpus) {
    ++stats.sentence_count;
    for (const auto& token : sentence.tokens) {
      ++stats.token_count;
      ipa += token.phonemic.has_value();
      lemma += token.lemma.has_value();
      morph += !token.morph_tags.empty();
    }
  }
  const auto fraction = [&](std::int64_t n) {
    return stats.token_count == 0 ? 0.0
                                  : static_cast<double>(n) / static_cast<double>(stats.token_count);
  };
  stats.annotated_fraction_per_field = {
      {"ipa", fraction(ipa)}, {"lemma", fraction(lemma)}, {"morph", fraction(morph)}};
  return stats;
}

std::int64_t upsample_factor(std::int64_t hr_tokens, std::int64_t lr_tokens,
                             std::optional<std::int64_t> override_factor) {
  if (lr_tokens <= 0) {
    throw Error(ErrorCode::kZeroLowResourceCorpus, "low-resource corpus has no tokens");
  }
  if (hr_tokens < 0) throw Error(ErrorCode::kInvalidConfig, "negative token count");
  if (override_factor) {
    if (*override_factor < 1) {
      throw Error(ErrorCode::kInvalidConfig, "upsample factor must be positive");
    }
    return *override_factor;
  }
  const auto ratio = std::llround(static_cast<double>(hr_tokens) / static_cast<double>(lr_tokens));
  return std::max<std::int64_t>(1, ratio);
}

std::vector<Sentence> merge_joint(std::span<const Sentence> hr, std::span<const Sentence> lr,
                                  std::int64_t factor, std::uint64_t seed) {
  if (factor < 1) throw Error(ErrorCode::kInvalidConfig, "upsample factor must be positive");
  std::vector<Sentence> merged;
  merged.reserve(hr.size() + static_cast<std::size_t>(factor) * lr.size());
  merged.insert(merged.end(), hr.begin(), hr.end());
  for (std::int64_t copy = 0; copy < factor; ++copy) {
    merged.insert(merged.end(), lr.begin(), lr.end());
  }
  Rng rng(seed);
  for (std::size_t i = merged.size(); i > 1; --i) {
    std::swap(merged[i - 1], merged[rng.below(i)]);
  }
  return merged;
}

}  // namespace subgram
