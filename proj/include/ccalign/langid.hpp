#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccalign/corpus.hpp"
#include "ccalign/url_types.hpp"

namespace ccalign {

struct LangTag {
  std::string code;
  double confidence = 1.0;
};

/// Character-trigram language model.
struct LangProfile {
  std::string code;
  std::unordered_map<std::string, double> ngram_logprobs;
  /// Log-probability charged for trigrams absent from the profile. Shared by
  /// every profile unless a profile file overrides it, so trigrams no
  /// profile knows do not bias the decision.
  double unseen_logprob = kDefaultUnseenLogprob;

  static constexpr double kDefaultUnseenLogprob = -16.0;
};

inline constexpr std::size_t kLangSamplePrefix = 4000;

/// Lowercased, whitespace-collapsed, space-padded trigrams over the first
/// `kLangSamplePrefix` code points.
std::vector<std::string> extract_trigrams(std::string_view text);

/// Builds a profile from training text with maximum-likelihood trigram
/// probabilities.
LangProfile build_profile(std::string code, std::string_view training_text);

LangProfile profile_from_json(const nlohmann::json &j);
nlohmann::json to_json(const LangProfile &p);

/// Loads every *.json file in `dir` (sorted by filename).
std::vector<LangProfile> load_profiles(const std::filesystem::path &dir);

/// Scores the content against every profile and returns the argmax.
/// Throws Error(untaggable) for empty content, Error(configuration) for
/// fewer than two profiles.
LangTag classify_text(std::string_view content, const std::vector<LangProfile> &profiles);

/// Passes through a pre-set document language, otherwise classifies.
LangTag tag_language(const Document &doc, const std::vector<LangProfile> &profiles);

enum class VerifyOutcome { accepted, no_identifier, same_language, identifier_mismatch, missing_tag };

/// Checks every URL-derived language against the document tags. Identifiers
/// without an inferable language only require the two tags to differ.
VerifyOutcome verify_pair_language_detail(const CandidatePair &pair,
                                          const std::unordered_map<std::string, LangTag> &tags);

inline bool verify_pair_language(const CandidatePair &pair,
                                 const std::unordered_map<std::string, LangTag> &tags) {
  return verify_pair_language_detail(pair, tags) == VerifyOutcome::accepted;
}

}  // namespace ccalign
