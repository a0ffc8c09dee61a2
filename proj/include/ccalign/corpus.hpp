#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ccalign {

/// A crawl record before URL normalization and deduplication.
struct RawDocument {
  std::string url;
  std::string content;
  std::optional<std::string> snapshot_id;
  std::optional<std::string> lang;
};

struct Document {
  std::string doc_id;  // equal to normalized_url; unique after dedup
  std::string url;
  std::string normalized_url;
  std::string domain;
  std::string content;
  std::optional<std::string> lang;
  std::optional<double> lang_confidence;
  std::optional<std::string> snapshot_id;
};

/// Strips the scheme and any leading "www.", lowercases the host, and drops a
/// lone trailing "/". Path and query bytes are preserved. Idempotent.
/// Throws Error(malformed_url).
std::string normalize_url(std::string_view url);

/// Host of a normalized URL: everything before the first "/", "?", "&" or
/// "#", minus any ":port". Throws Error(malformed_url) on an empty host.
std::string extract_domain(std::string_view normalized_url);

struct DedupStats {
  std::size_t raw_records = 0;
  std::size_t malformed = 0;
  std::size_t distinct_urls = 0;

  /// Percentage of raw records removed, counting malformed ones.
  double reduction_percent() const;
};

/// Incremental longest-content deduplication keyed on normalized URL.
/// Feed records in any order; `finish` returns one Document per distinct
/// normalized URL, sorted by normalized URL. Survivor choice depends only on
/// the multiset of records fed, never on their order.
class Deduplicator {
 public:
  /// Returns false when the record's URL is malformed (counted, skipped).
  bool add(RawDocument record);

  /// Folds another shard's survivors into this one.
  void merge(Deduplicator &&other);

  std::vector<Document> finish() &&;

  const DedupStats &stats() const { return stats_; }

 private:
  std::unordered_map<std::string, RawDocument> best_;
  DedupStats stats_;
};

/// True when `candidate` should replace `incumbent` as the survivor for a URL.
bool prefer_record(const RawDocument &candidate, const RawDocument &incumbent);

std::vector<Document> dedup(std::vector<RawDocument> records, DedupStats *stats = nullptr);

// JSONL codecs. Unknown keys are ignored.
RawDocument raw_document_from_json(const nlohmann::json &j);
Document document_from_json(const nlohmann::json &j);
nlohmann::json to_json(const Document &doc);

/// Loads a processed corpus (output of dedup or langid).
std::vector<Document> load_documents(const std::string &path);
std::string documents_to_jsonl(const std::vector<Document> &docs);

}  // namespace ccalign
