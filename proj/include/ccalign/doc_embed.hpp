#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ccalign/corpus.hpp"

namespace ccalign {

using Vector = std::vector<double>;

struct SentenceRecord {
  std::string doc_id;
  std::size_t index = 0;
  std::string text;
  std::size_t token_count = 0;
};

enum class EmbedMethod { de, sa, sl, idf, slidf };

std::string_view to_string(EmbedMethod m);
/// Accepts "de", "sa", "sl", "idf", "slidf" (any case). Throws Error(usage).
EmbedMethod parse_embed_method(std::string_view s);

/// Dense vectors for sentences and whole documents, keyed by
/// `record_key(doc_id, index)`.
class EmbeddingStore {
 public:
  explicit EmbeddingStore(std::uint32_t dim = 0) : dim_(dim) {}

  static constexpr std::uint64_t kWholeDocument = ~std::uint64_t{0};

  /// FNV-1a over "doc_id\t<index>" with the index in decimal; whole-document
  /// vectors use index 2^64-1.
  static std::uint64_t record_key(std::string_view doc_id, std::uint64_t index);

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return keys_.size(); }

  /// Throws Error(dimension_mismatch) or Error(format) for non-finite values.
  void add(std::uint64_t key, std::span<const float> values);
  void add_sentence(std::string_view doc_id, std::size_t index, std::span<const float> values);
  void add_document(std::string_view doc_id, std::span<const float> values);

  const std::vector<float> *find(std::uint64_t key) const;
  const std::vector<float> *sentence(std::string_view doc_id, std::size_t index) const;
  const std::vector<float> *document(std::string_view doc_id) const;

  /// Insertion order.
  const std::vector<std::uint64_t> &keys() const { return keys_; }

 private:
  std::uint32_t dim_;
  std::vector<std::uint64_t> keys_;
  std::unordered_map<std::uint64_t, std::vector<float>> vectors_;
};

/// Sentence document frequencies within one web domain.
struct DomainIndex {
  std::string domain;
  std::size_t num_documents = 0;
  std::unordered_map<std::string, std::size_t> df;

  /// Each document contributes at most once per distinct sentence text.
  static DomainIndex build(std::string domain, const std::vector<std::vector<SentenceRecord>> &documents);

  std::size_t document_frequency(const std::string &text) const;
};

struct DocumentVector {
  std::string doc_id;
  Vector vector;
  EmbedMethod method = EmbedMethod::sa;
  bool zero = false;  // every weight vanished (or no sentences)
};

/// Splits on newlines, trims, drops empty lines.
std::vector<SentenceRecord> segment(const Document &doc);
std::vector<SentenceRecord> segment(std::string_view doc_id, std::string_view content);

/// (1/n) sum v_i. Throws Error(empty_document) / Error(dimension_mismatch).
Vector sentence_average(std::span<const Vector> vectors);

/// (1/n) sum w_i v_i -- divided by n, not by the weight sum.
Vector weighted_average(std::span<const Vector> vectors, std::span<const double> weights);

/// |s| / sum over distinct texts s' of count(s') * |s'|.
double sl_weight(const SentenceRecord &sentence, std::span<const SentenceRecord> doc_sentences);

/// SL weight for every sentence position of one document.
std::vector<double> sl_weights(std::span<const SentenceRecord> doc_sentences);

/// ln((N + 1) / (1 + df)), df = 0 for sentences the index has not seen.
double idf_weight(const std::string &sentence_text, const DomainIndex &index);

double slidf_weight(const SentenceRecord &sentence, std::span<const SentenceRecord> doc_sentences,
                    const DomainIndex &index);

/// Throws Error(missing_vectors) when a required vector is absent and
/// Error(empty_document) when a sentence method meets a document without
/// sentences.
DocumentVector embed_document(const Document &doc, EmbedMethod method, const EmbeddingStore &store,
                              const DomainIndex &index);

/// Same, for an already segmented document.
DocumentVector embed_segmented(std::string_view doc_id, std::span<const SentenceRecord> sentences,
                               EmbedMethod method, const EmbeddingStore &store, const DomainIndex &index);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

/// Throws Error(undefined_similarity) for a zero vector and
/// Error(dimension_mismatch) for unequal lengths.
double cosine(std::span<const double> a, std::span<const double> b);

Vector to_vector(std::span<const float> values);

}  // namespace ccalign
