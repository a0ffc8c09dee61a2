#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccalign/doc_embed.hpp"

namespace ccalign {

/// Documents of one language within one web domain.
struct DocumentSet {
  std::string domain;
  std::string language;
  std::vector<std::string> doc_ids;
};

struct ScoredPair {
  std::string source_doc_id;
  std::string target_doc_id;
  double score = 0.0;

  bool operator==(const ScoredPair &) const = default;
};

struct Alignment {
  std::vector<ScoredPair> pairs;  // acceptance order: score descending
};

struct ScoreStats {
  std::size_t dropped_source = 0;  // no usable vector
  std::size_t dropped_target = 0;
};

/// Cosine over the complete bipartite graph src x tgt. Documents without a
/// vector, or whose vector is zero, are dropped and counted. Rows are scored
/// on up to `threads` workers; output is row-major in input order.
std::vector<ScoredPair> score_domain(const DocumentSet &src, const DocumentSet &tgt,
                                     const std::unordered_map<std::string, DocumentVector> &vectors,
                                     unsigned threads = 1, ScoreStats *stats = nullptr);

/// Wall time spent in each phase of competitive_match.
struct MatchProfile {
  std::chrono::nanoseconds index{0};
  std::chrono::nanoseconds sort{0};
  std::chrono::nanoseconds scan{0};
};

/// Greedy one-to-one matching: visit edges by descending score (ties by
/// ascending source id, then target id) and accept an edge when both
/// endpoints are still free. Stops after min(|sources|, |targets|) pairs.
/// Throws Error(format) on a non-finite score.
Alignment competitive_match(const std::vector<ScoredPair> &pairs, MatchProfile *profile = nullptr);

}  // namespace ccalign
