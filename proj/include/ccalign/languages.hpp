#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace ccalign {

struct LanguageInfo {
  std::string_view iso1;  // two-letter code, or the three-letter one when none exists
  std::string_view iso3;  // ISO 639-2/T (equals 639-3 for individual languages)
  std::string_view name;  // English name, lowercase
};

/// Lookup by two- or three-letter code (case-insensitive).
const LanguageInfo *language_by_code(std::string_view code);

/// Lookup by English language name (case-insensitive).
const LanguageInfo *language_by_name(std::string_view name);

/// Splits "en-gb" / "en_US" style locale codes. Returns the language entry
/// when the primary subtag is a known code and the region is 2-4 alnum chars.
const LanguageInfo *language_by_locale(std::string_view locale);

/// Canonical comparison key for a language tag: primary subtag, lowercased,
/// mapped to its two-letter code when one exists.
std::string canonical_language(std::string_view code);

}  // namespace ccalign
