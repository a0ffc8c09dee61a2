#include "ccalign/langid.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ccalign/error.hpp"
#include "ccalign/languages.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

std::vector<std::string> extract_trigrams(std::string_view text) {
  auto units = utf8_units(text);
  if (units.size() > kLangSamplePrefix) units.resize(kLangSamplePrefix);

  std::vector<std::string> normalized;
  normalized.reserve(units.size() + 2);
  normalized.emplace_back(" ");
  for (auto u : units) {
    if (u.size() == 1 && std::isspace(static_cast<unsigned char>(u[0]))) {
      if (normalized.back() != " ") normalized.emplace_back(" ");
    } else {
      normalized.push_back(ascii_lower(u));
    }
  }
  if (normalized.back() != " ") normalized.emplace_back(" ");

  std::vector<std::string> grams;
  if (normalized.size() < 3) return grams;
  grams.reserve(normalized.size() - 2);
  for (std::size_t i = 0; i + 2 < normalized.size(); ++i) {
    grams.push_back(normalized[i] + normalized[i + 1] + normalized[i + 2]);
  }
  return grams;
}

LangProfile build_profile(std::string code, std::string_view training_text) {
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  // Each line is sampled independently so the prefix cap does not truncate
  // multi-line training corpora.
  for (auto line : split(training_text, '\n')) {
    for (auto &g : extract_trigrams(line)) {
      ++counts[std::move(g)];
      ++total;
    }
  }
  if (total == 0) throw Error(ErrorCode::configuration, "empty training text for profile " + code);
  LangProfile p;
  p.code = std::move(code);
  for (const auto &[g, c] : counts) {
    p.ngram_logprobs.emplace(g, std::log(static_cast<double>(c) / static_cast<double>(total)));
  }
  return p;
}

LangProfile profile_from_json(const nlohmann::json &j) {
  LangProfile p;
  try {
    p.code = j.at("code").get<std::string>();
    for (const auto &[g, lp] : j.at("ngrams").items()) {
      double v = lp.get<double>();
      if (!std::isfinite(v) || v > 0.0) throw Error(ErrorCode::format, "bad log-probability for '" + g + "'");
      p.ngram_logprobs.emplace(g, v);
    }
    if (auto it = j.find("unseen"); it != j.end()) p.unseen_logprob = it->get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::format, std::string("profile: ") + e.what());
  }
  if (p.code.empty()) throw Error(ErrorCode::format, "profile with empty code");
  return p;
}

nlohmann::json to_json(const LangProfile &p) {
  nlohmann::json ngrams = nlohmann::json::object();
  for (const auto &[g, lp] : p.ngram_logprobs) ngrams[g] = lp;
  return {{"code", p.code}, {"ngrams", std::move(ngrams)}, {"unseen", p.unseen_logprob}};
}

std::vector<LangProfile> load_profiles(const std::filesystem::path &dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorCode::configuration, "profile directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<LangProfile> profiles;
  for (const auto &f : files) {
    try {
      profiles.push_back(profile_from_json(nlohmann::json::parse(read_file(f))));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::format, f.string() + ": " + e.what());
    }
  }
  return profiles;
}

LangTag classify_text(std::string_view content, const std::vector<LangProfile> &profiles) {
  if (profiles.size() < 2) {
    throw Error(ErrorCode::configuration, "at least two language profiles are required");
  }
  if (trim(content).empty()) throw Error(ErrorCode::untaggable, "empty content");

  auto grams = extract_trigrams(content);
  std::vector<double> scores(profiles.size(), 0.0);
  for (std::size_t p = 0; p < profiles.size(); ++p) {
    const auto &model = profiles[p].ngram_logprobs;
    double s = 0.0;
    for (const auto &g : grams) {
      auto it = model.find(g);
      s += it == model.end() ? profiles[p].unseen_logprob : it->second;
    }
    scores[p] = s;
  }

  std::size_t best = 0;
  for (std::size_t p = 1; p < profiles.size(); ++p) {
    if (scores[p] > scores[best] || (scores[p] == scores[best] && profiles[p].code < profiles[best].code)) {
      best = p;
    }
  }
  // softmax share of the winner
  double denom = 0.0;
  for (double s : scores) denom += std::exp(s - scores[best]);
  return LangTag{profiles[best].code, 1.0 / denom};
}

LangTag tag_language(const Document &doc, const std::vector<LangProfile> &profiles) {
  if (doc.lang && !doc.lang->empty()) return LangTag{*doc.lang, 1.0};
  return classify_text(doc.content, profiles);
}

VerifyOutcome verify_pair_language_detail(const CandidatePair &pair,
                                          const std::unordered_map<std::string, LangTag> &tags) {
  auto src = tags.find(pair.source_doc_id);
  auto tgt = tags.find(pair.target_doc_id);
  if (src == tags.end() || tgt == tags.end()) return VerifyOutcome::missing_tag;
  if (pair.source_identifiers.empty() && pair.target_identifiers.empty()) {
    return VerifyOutcome::no_identifier;
  }
  auto src_lang = canonical_language(src->second.code);
  auto tgt_lang = canonical_language(tgt->second.code);
  if (src_lang == tgt_lang) return VerifyOutcome::same_language;

  auto agrees = [](const std::vector<UrlIdentifier> &ids, const std::string &lang) {
    return std::all_of(ids.begin(), ids.end(), [&](const UrlIdentifier &id) {
      return !id.inferred_lang || canonical_language(*id.inferred_lang) == lang;
    });
  };
  if (!agrees(pair.source_identifiers, src_lang) || !agrees(pair.target_identifiers, tgt_lang)) {
    return VerifyOutcome::identifier_mismatch;
  }
  return VerifyOutcome::accepted;
}

}  // namespace ccalign
