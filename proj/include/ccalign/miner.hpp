#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ccalign/corpus.hpp"
#include "ccalign/doc_embed.hpp"

namespace ccalign {

struct MarginParams {
  std::size_t k = 4;
  double threshold = 1.06;
  /// Keep x -> y only if y's best source is also x.
  bool intersect_backward = false;
};

struct BitextPair {
  std::string src_text;
  std::string tgt_text;
  double margin_score = 0.0;
  std::string src_doc_id;
  std::string tgt_doc_id;

  bool operator==(const BitextPair &) const = default;
};

/// Cosine matrix rows = source sentences, cols = target sentences.
using SimilarityMatrix = std::vector<std::vector<double>>;

/// Ratio margin for every (source, target) cell:
///   cos(x,y) / ((mean of x's top-k cosines over targets
///                + mean of y's top-k cosines over sources) / 2)
/// with k capped per side at the opposite document's sentence count. Cells
/// whose denominator is not positive get -inf.
std::vector<std::vector<double>> margin_scores(const SimilarityMatrix &cos, std::size_t k);

/// Forward mining within one aligned document pair. Throws
/// Error(missing_vectors) when a sentence vector is absent.
std::vector<BitextPair> mine_sentences(const Document &src, const Document &tgt, const EmbeddingStore &store,
                                       const MarginParams &params);

/// Collapses identical (src_text, tgt_text) pairs, keeping the highest
/// margin, and returns them sorted by text.
std::vector<BitextPair> dedup_bitext(std::vector<BitextPair> pairs);

/// `src_text \t tgt_text \t margin \t src_url \t tgt_url`; tabs inside texts
/// become spaces.
std::string bitext_to_tsv(const std::vector<BitextPair> &pairs);

}  // namespace ccalign
