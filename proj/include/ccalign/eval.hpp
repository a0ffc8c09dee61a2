#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccalign/matcher.hpp"

namespace ccalign {

/// Unordered URL pair; `first <= second` after construction.
struct UrlPair {
  std::string first;
  std::string second;

  UrlPair(std::string a, std::string b);
  auto operator<=>(const UrlPair &) const = default;
};

struct GoldSet {
  std::set<UrlPair> pairs;
  std::string language;
};

/// Reads `src_url \t tgt_url [\t ...]` lines and normalizes both URLs.
std::vector<UrlPair> load_url_pairs(const std::string &path);
GoldSet make_gold_set(const std::vector<UrlPair> &pairs, std::string language);

/// |predicted ∩ gold| / |gold|. Throws Error(undefined_metric) on empty gold.
double recall(const std::vector<UrlPair> &predicted, const GoldSet &gold);
/// Alignment doc ids are normalized URLs.
double recall(const Alignment &predicted, const GoldSet &gold);

/// Unweighted mean. Throws Error(undefined_metric) on an empty map.
double macro_average(const std::map<std::string, double> &per_language);

/// Nominal ratings: (unit, rater) -> label.
struct AnnotationTable {
  std::map<std::pair<std::string, std::string>, std::string> ratings;

  void add(std::string unit, std::string rater, std::string label);
  std::vector<std::string> units() const;
  std::vector<std::string> raters() const;
};

/// "unit_id,rater_id,label" rows; a header row is skipped.
AnnotationTable parse_annotation_csv(const std::string &text);

/// Krippendorff's alpha with the nominal metric. Units with fewer than two
/// ratings are ignored. Throws Error(insufficient_data) when fewer than two
/// raters or fewer than two pairable units remain.
double krippendorff_alpha(const AnnotationTable &table);

struct LanguageResult {
  double recall = 0.0;
  std::size_t gold = 0;
  std::size_t predicted = 0;
  std::size_t found = 0;
};

struct EvalReport {
  std::map<std::string, LanguageResult> languages;
  double macro_average = 0.0;
  std::map<std::string, double> tier_macro_average;
  std::vector<std::string> warnings;

  nlohmann::json to_json() const;
};

/// Per-language recall and macro averages, optionally grouped by resource
/// tier (language -> tier name).
EvalReport evaluate(const std::map<std::string, std::vector<UrlPair>> &predicted_by_language,
                    const std::map<std::string, GoldSet> &gold_by_language,
                    const std::map<std::string, std::string> &tiers = {});

}  // namespace ccalign
