#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccalign/corpus.hpp"
#include "ccalign/url_types.hpp"

namespace ccalign {

struct LangIdentifierPattern {
  IdentifierPosition position;
  std::optional<std::string> key;  // required for query-param and joined-param
  ValueClass value_class;

  bool operator==(const LangIdentifierPattern &) const = default;
};

std::string_view to_string(IdentifierPosition p);
std::string_view to_string(ValueClass c);

class PatternTable {
 public:
  PatternTable() = default;
  explicit PatternTable(std::vector<LangIdentifierPattern> patterns);

  /// ISO-639 codes, locales and English names in subdomains and path
  /// segments; lang/language/locale/l/lng/hl keys in query strings and
  /// "&"-joined path parameters with any recognizable value.
  static PatternTable builtin();

  static PatternTable from_json(const nlohmann::json &j);
  static PatternTable load(const std::string &path);
  nlohmann::json to_json() const;

  bool accepts(IdentifierPosition position, std::string_view key, ValueClass value_class) const;
  const std::vector<LangIdentifierPattern> &patterns() const { return patterns_; }

 private:
  std::vector<LangIdentifierPattern> patterns_;
};

struct ClassifiedValue {
  ValueClass value_class;
  std::optional<std::string> lang;
};

/// Recognizes digits, ISO codes, locale codes and language names.
std::optional<ClassifiedValue> classify_identifier_value(std::string_view value);

/// Short codes that double as common words ("it", "is", "sun", ...). In a
/// path they only count when another "/" follows the segment.
bool is_ambiguous_code(std::string_view segment);

StrippedUrl strip_language_identifiers(std::string_view normalized_url, const PatternTable &patterns);

/// Inverse of stripping: reinserts each identifier's removed bytes.
std::string reconstruct_url(const StrippedUrl &stripped);

struct UrlMatchStats {
  std::size_t documents = 0;
  std::size_t untagged = 0;
  std::size_t buckets = 0;
  std::size_t discarded_buckets = 0;  // several documents of one language
  std::size_t verify_failures = 0;
  std::size_t missing_tag = 0;
  std::size_t pairs = 0;
};

/// Buckets documents by skeleton and emits verified cross-lingual pairs,
/// sorted by (skeleton, source id, target id). Uses Document::lang as the tag.
std::vector<CandidatePair> match_candidates(const std::vector<Document> &docs, const PatternTable &patterns,
                                            UrlMatchStats *stats = nullptr);

/// `src_url \t tgt_url \t skeleton \t src_lang \t tgt_lang` lines.
std::string candidate_pairs_to_tsv(const std::vector<CandidatePair> &pairs, const std::vector<Document> &docs);

}  // namespace ccalign
