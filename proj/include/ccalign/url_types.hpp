#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ccalign {

enum class IdentifierPosition { subdomain, path_segment, query_param, joined_param };
enum class ValueClass { iso_code, locale_code, language_name, numeric };

/// One language identifier found in a URL.
struct UrlIdentifier {
  IdentifierPosition position;
  ValueClass value_class;
  std::string raw_text;                     // e.g. "en-gb", "lang=1"
  std::optional<std::string> inferred_lang;  // two-letter code when inferable
  std::size_t offset = 0;                    // where `removed` started in the input URL
  std::string removed;                       // exact bytes cut, separators included

  bool operator==(const UrlIdentifier &) const = default;
};

struct StrippedUrl {
  std::string skeleton;
  std::vector<UrlIdentifier> identifiers;  // ascending offset
};

enum class PairEvidence { source, target, both };

/// Unordered cross-lingual document pair sharing a skeleton. The document
/// with the smaller id is the source.
struct CandidatePair {
  std::string source_doc_id;
  std::string target_doc_id;
  std::string skeleton;
  std::vector<UrlIdentifier> source_identifiers;
  std::vector<UrlIdentifier> target_identifiers;

  PairEvidence evidence() const;
};

}  // namespace ccalign
