#include "ccalign/eval.hpp"

#include <algorithm>

#include "ccalign/corpus.hpp"
#include "ccalign/error.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

UrlPair::UrlPair(std::string a, std::string b) : first(std::move(a)), second(std::move(b)) {
  if (second < first) std::swap(first, second);
}

std::vector<UrlPair> load_url_pairs(const std::string &path) {
  std::vector<UrlPair> out;
  std::size_t line_no = 0;
  for (const auto &line : read_lines(path)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() < 2) {
      throw Error(ErrorCode::format, path + ":" + std::to_string(line_no) + ": expected at least two tab-separated URLs");
    }
    out.emplace_back(normalize_url(fields[0]), normalize_url(fields[1]));
  }
  return out;
}

GoldSet make_gold_set(const std::vector<UrlPair> &pairs, std::string language) {
  return GoldSet{std::set<UrlPair>(pairs.begin(), pairs.end()), std::move(language)};
}

namespace {

std::size_t count_found(const std::vector<UrlPair> &predicted, const GoldSet &gold) {
  std::set<UrlPair> hits;
  for (const auto &p : predicted) {
    if (gold.pairs.count(p)) hits.insert(p);
  }
  return hits.size();
}

}  // namespace

double recall(const std::vector<UrlPair> &predicted, const GoldSet &gold) {
  if (gold.pairs.empty()) throw Error(ErrorCode::undefined_metric, "recall against an empty gold set");
  return static_cast<double>(count_found(predicted, gold)) / static_cast<double>(gold.pairs.size());
}

double recall(const Alignment &predicted, const GoldSet &gold) {
  std::vector<UrlPair> pairs;
  pairs.reserve(predicted.pairs.size());
  for (const auto &p : predicted.pairs) pairs.emplace_back(p.source_doc_id, p.target_doc_id);
  return recall(pairs, gold);
}

double macro_average(const std::map<std::string, double> &per_language) {
  if (per_language.empty()) throw Error(ErrorCode::undefined_metric, "macro average over no languages");
  double sum = 0.0;
  for (const auto &[lang, value] : per_language) sum += value;
  return sum / static_cast<double>(per_language.size());
}

void AnnotationTable::add(std::string unit, std::string rater, std::string label) {
  ratings[{std::move(unit), std::move(rater)}] = std::move(label);
}

std::vector<std::string> AnnotationTable::units() const {
  std::set<std::string> s;
  for (const auto &[key, label] : ratings) s.insert(key.first);
  return {s.begin(), s.end()};
}

std::vector<std::string> AnnotationTable::raters() const {
  std::set<std::string> s;
  for (const auto &[key, label] : ratings) s.insert(key.second);
  return {s.begin(), s.end()};
}

AnnotationTable parse_annotation_csv(const std::string &text) {
  AnnotationTable table;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    auto fields = split(line, ',');
    if (fields.size() != 3) {
      throw Error(ErrorCode::format, "annotation line " + std::to_string(line_no) + ": expected unit,rater,label");
    }
    auto unit = std::string(trim(fields[0]));
    auto rater = std::string(trim(fields[1]));
    auto label = std::string(trim(fields[2]));
    if (line_no == 1 && ascii_lower(label) == "label") continue;
    table.add(std::move(unit), std::move(rater), std::move(label));
  }
  return table;
}

double krippendorff_alpha(const AnnotationTable &table) {
  if (table.raters().size() < 2) throw Error(ErrorCode::insufficient_data, "alpha needs at least two raters");

  std::map<std::string, std::vector<std::string>> by_unit;
  for (const auto &[key, label] : table.ratings) by_unit[key.first].push_back(label);

  // coincidence matrix o[c][k]; each unit adds every ordered pair of its
  // ratings (from different raters) with weight 1/(m-1)
  std::map<std::string, std::map<std::string, double>> coincidence;
  std::size_t pairable_units = 0;
  for (const auto &[unit, labels] : by_unit) {
    const auto m = labels.size();
    if (m < 2) continue;
    ++pairable_units;
    const double w = 1.0 / static_cast<double>(m - 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (i != j) coincidence[labels[i]][labels[j]] += w;
      }
    }
  }
  if (pairable_units < 2) throw Error(ErrorCode::insufficient_data, "alpha needs at least two units with two ratings");

  std::map<std::string, double> marginal;
  double n = 0.0;
  double disagree = 0.0;
  for (const auto &[c, row] : coincidence) {
    for (const auto &[k, o] : row) {
      marginal[c] += o;
      n += o;
      if (c != k) disagree += o;
    }
  }
  double expected = 0.0;  // sum over c != k of n_c * n_k
  for (const auto &[c, nc] : marginal) {
    for (const auto &[k, nk] : marginal) {
      if (c != k) expected += nc * nk;
    }
  }
  if (disagree == 0.0) return 1.0;
  // alpha = 1 - D_o / D_e with D_o = disagree / n, D_e = expected / (n (n - 1))
  return 1.0 - (n - 1.0) * disagree / expected;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json langs = nlohmann::json::object();
  for (const auto &[code, r] : languages) {
    langs[code] = {{"recall", r.recall}, {"gold", r.gold}, {"predicted", r.predicted}, {"found", r.found}};
  }
  nlohmann::json j{{"languages", langs}, {"macro_average", macro_average}, {"warnings", warnings}};
  if (!tier_macro_average.empty()) j["tiers"] = tier_macro_average;
  return j;
}

EvalReport evaluate(const std::map<std::string, std::vector<UrlPair>> &predicted_by_language,
                    const std::map<std::string, GoldSet> &gold_by_language,
                    const std::map<std::string, std::string> &tiers) {
  EvalReport report;
  std::map<std::string, double> recalls;
  for (const auto &[lang, gold] : gold_by_language) {
    LanguageResult r;
    r.gold = gold.pairs.size();
    auto it = predicted_by_language.find(lang);
    if (it == predicted_by_language.end()) {
      report.warnings.push_back("no predictions for language '" + lang + "'; recall set to 0");
    } else {
      r.predicted = it->second.size();
      r.recall = recall(it->second, gold);
      r.found = count_found(it->second, gold);
    }
    recalls[lang] = r.recall;
    report.languages[lang] = r;
  }
  for (const auto &[lang, pairs] : predicted_by_language) {
    if (!gold_by_language.count(lang)) {
      report.warnings.push_back("predictions for language '" + lang + "' have no gold set; ignored");
    }
  }
  report.macro_average = macro_average(recalls);

  std::map<std::string, std::map<std::string, double>> by_tier;
  for (const auto &[lang, value] : recalls) {
    if (auto t = tiers.find(lang); t != tiers.end()) by_tier[t->second][lang] = value;
  }
  for (const auto &[tier, values] : by_tier) report.tier_macro_average[tier] = macro_average(values);
  return report;
}

}  // namespace ccalign
