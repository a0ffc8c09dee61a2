#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "ccalign/corpus.hpp"

namespace fixture {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::string operator/(const std::string &name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

struct CliResult {
  int exit_code = -1;
  std::string out;
};

/// Runs the ccalign executable with the given arguments; stderr is discarded.
CliResult run_cli(const std::vector<std::string> &args);

std::string slurp(const std::string &path);
void write_text(const std::string &path, const std::string &text);

/// Document with url, normalized url, domain and an optional language.
ccalign::Document make_doc(const std::string &url, const std::string &content, const std::string &lang = "");

/// Translated URL pairs, one per identifier shape: (url, lang, url, lang).
struct UrlRow {
  std::string url_a, lang_a, url_b, lang_b;
};
const std::vector<UrlRow> &identifier_examples();

/// Sentence of `words` words drawn from a small English or French lexicon.
std::string prose(const std::string &lang, std::size_t words, std::mt19937 &rng);
/// Multi-line training text for a trigram profile.
std::string training_text(const std::string &lang, std::size_t lines, std::uint32_t seed);

/// Three-domain corpus with planted en/fr translation pairs. Paired pages
/// share URL skeletons ("/en/" vs "/fr/") and two byte-identical anchor lines;
/// every page of a domain carries the same boilerplate lines, which two pages
/// repeat many times so that plain averaging is pulled towards them.
struct PlantedCorpus {
  std::string raw_jsonl;                                  // dedup input, with duplicates and a malformed line
  std::vector<std::pair<std::string, std::string>> gold;  // normalized (en, fr)
  std::size_t raw_records = 0;
  std::size_t distinct_urls = 0;
};
PlantedCorpus planted_corpus();

/// Runs build-profile, dedup, langid, match-urls, embed-hash, align and eval
/// through the executable inside `dir`, once with SLIDF and once with SA.
struct PlantedRun {
  std::string failed_step;  // empty when every command exited 0
  double slidf_recall = -1.0;
  double sa_recall = -1.0;
  std::size_t gold_pairs = 0;
  std::size_t url_pairs = 0;
};
PlantedRun run_planted_pipeline(const TempDir &dir, const PlantedCorpus &corpus);

/// Synthetic raw records over `distinct` URLs with several copies each.
std::vector<ccalign::RawDocument> duplicate_heavy_records(std::size_t records, std::size_t distinct,
                                                          std::uint32_t seed);

}  // namespace fixture
