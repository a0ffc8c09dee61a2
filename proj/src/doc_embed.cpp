#include "ccalign/doc_embed.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "ccalign/error.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

std::string_view to_string(EmbedMethod m) {
  switch (m) {
    case EmbedMethod::de: return "de";
    case EmbedMethod::sa: return "sa";
    case EmbedMethod::sl: return "sl";
    case EmbedMethod::idf: return "idf";
    case EmbedMethod::slidf: return "slidf";
  }
  return "?";
}

EmbedMethod parse_embed_method(std::string_view s) {
  auto lower = ascii_lower(s);
  for (auto m : {EmbedMethod::de, EmbedMethod::sa, EmbedMethod::sl, EmbedMethod::idf, EmbedMethod::slidf}) {
    if (to_string(m) == lower) return m;
  }
  throw Error(ErrorCode::usage, "unknown embedding method '" + std::string(s) + "' (expected de|sa|sl|idf|slidf)");
}

std::uint64_t EmbeddingStore::record_key(std::string_view doc_id, std::uint64_t index) {
  std::string key(doc_id);
  key += '\t';
  key += std::to_string(index);
  return fnv1a64(key);
}

void EmbeddingStore::add(std::uint64_t key, std::span<const float> values) {
  if (values.size() != dim_) {
    throw Error(ErrorCode::dimension_mismatch,
                "vector of length " + std::to_string(values.size()) + " in store of dim " + std::to_string(dim_));
  }
  if (!std::all_of(values.begin(), values.end(), [](float v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::format, "non-finite vector component");
  }
  auto [it, inserted] = vectors_.try_emplace(key, values.begin(), values.end());
  if (!inserted) {
    it->second.assign(values.begin(), values.end());
  } else {
    keys_.push_back(key);
  }
}

void EmbeddingStore::add_sentence(std::string_view doc_id, std::size_t index, std::span<const float> values) {
  add(record_key(doc_id, index), values);
}

void EmbeddingStore::add_document(std::string_view doc_id, std::span<const float> values) {
  add(record_key(doc_id, kWholeDocument), values);
}

const std::vector<float> *EmbeddingStore::find(std::uint64_t key) const {
  auto it = vectors_.find(key);
  return it == vectors_.end() ? nullptr : &it->second;
}

const std::vector<float> *EmbeddingStore::sentence(std::string_view doc_id, std::size_t index) const {
  return find(record_key(doc_id, index));
}

const std::vector<float> *EmbeddingStore::document(std::string_view doc_id) const {
  return find(record_key(doc_id, kWholeDocument));
}

DomainIndex DomainIndex::build(std::string domain, const std::vector<std::vector<SentenceRecord>> &documents) {
  DomainIndex index;
  index.domain = std::move(domain);
  index.num_documents = documents.size();
  for (const auto &doc : documents) {
    std::unordered_set<std::string_view> seen;
    for (const auto &s : doc) {
      if (seen.insert(s.text).second) ++index.df[s.text];
    }
  }
  return index;
}

std::size_t DomainIndex::document_frequency(const std::string &text) const {
  auto it = df.find(text);
  return it == df.end() ? 0 : it->second;
}

std::vector<SentenceRecord> segment(std::string_view doc_id, std::string_view content) {
  std::vector<SentenceRecord> out;
  for (auto line : split(content, '\n')) {
    auto text = trim(line);
    if (text.empty()) continue;
    out.push_back({std::string(doc_id), out.size(), std::string(text), count_tokens(text)});
  }
  return out;
}

std::vector<SentenceRecord> segment(const Document &doc) { return segment(doc.doc_id, doc.content); }

Vector sentence_average(std::span<const Vector> vectors) {
  if (vectors.empty()) throw Error(ErrorCode::empty_document, "no sentence vectors to average");
  std::vector<double> ones(vectors.size(), 1.0);
  return weighted_average(vectors, ones);
}

Vector weighted_average(std::span<const Vector> vectors, std::span<const double> weights) {
  if (vectors.empty()) throw Error(ErrorCode::empty_document, "no sentence vectors to average");
  if (vectors.size() != weights.size()) {
    throw Error(ErrorCode::length_mismatch, std::to_string(vectors.size()) + " vectors but " +
                                                std::to_string(weights.size()) + " weights");
  }
  const auto dim = vectors.front().size();
  Vector out(dim, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) throw Error(ErrorCode::dimension_mismatch, "ragged sentence vectors");
    const double w = weights[i];
    if (!std::isfinite(w) || w < 0.0) throw Error(ErrorCode::format, "weights must be finite and non-negative");
    for (std::size_t k = 0; k < dim; ++k) out[k] += w * vectors[i][k];
  }
  const double n = static_cast<double>(vectors.size());
  for (auto &x : out) x /= n;
  return out;
}

namespace {

// sum over distinct texts of count(s) * |s|
double sl_denominator(std::span<const SentenceRecord> doc_sentences) {
  std::unordered_map<std::string_view, std::pair<std::size_t, std::size_t>> distinct;  // count, tokens
  for (const auto &s : doc_sentences) {
    auto &entry = distinct[s.text];
    ++entry.first;
    entry.second = s.token_count;
  }
  double total = 0.0;
  for (const auto &[text, ct] : distinct) total += static_cast<double>(ct.first) * static_cast<double>(ct.second);
  if (total <= 0.0) throw Error(ErrorCode::empty_document, "document has no tokens");
  return total;
}

}  // namespace

double sl_weight(const SentenceRecord &sentence, std::span<const SentenceRecord> doc_sentences) {
  if (doc_sentences.empty()) throw Error(ErrorCode::empty_document, "empty document");
  return static_cast<double>(sentence.token_count) / sl_denominator(doc_sentences);
}

std::vector<double> sl_weights(std::span<const SentenceRecord> doc_sentences) {
  if (doc_sentences.empty()) throw Error(ErrorCode::empty_document, "empty document");
  const double denom = sl_denominator(doc_sentences);
  std::vector<double> out;
  out.reserve(doc_sentences.size());
  for (const auto &s : doc_sentences) out.push_back(static_cast<double>(s.token_count) / denom);
  return out;
}

double idf_weight(const std::string &sentence_text, const DomainIndex &index) {
  const double n = static_cast<double>(index.num_documents);
  const double df = static_cast<double>(index.document_frequency(sentence_text));
  return std::log((n + 1.0) / (1.0 + df));
}

double slidf_weight(const SentenceRecord &sentence, std::span<const SentenceRecord> doc_sentences,
                    const DomainIndex &index) {
  return sl_weight(sentence, doc_sentences) * idf_weight(sentence.text, index);
}

Vector to_vector(std::span<const float> values) { return Vector(values.begin(), values.end()); }

DocumentVector embed_segmented(std::string_view doc_id, std::span<const SentenceRecord> sentences,
                               EmbedMethod method, const EmbeddingStore &store, const DomainIndex &index) {
  DocumentVector out{std::string(doc_id), {}, method, false};
  if (method == EmbedMethod::de) {
    const auto *v = store.document(doc_id);
    if (!v) throw Error(ErrorCode::missing_vectors, "no whole-document vector for " + std::string(doc_id));
    out.vector = to_vector(*v);
    out.zero = norm(out.vector) == 0.0;
    return out;
  }
  if (sentences.empty()) throw Error(ErrorCode::empty_document, "no sentences in " + std::string(doc_id));

  std::vector<Vector> vectors;
  vectors.reserve(sentences.size());
  for (const auto &s : sentences) {
    const auto *v = store.sentence(doc_id, s.index);
    if (!v) {
      throw Error(ErrorCode::missing_vectors,
                  "no vector for sentence " + std::to_string(s.index) + " of " + std::string(doc_id));
    }
    vectors.push_back(to_vector(*v));
  }

  std::vector<double> weights;
  switch (method) {
    case EmbedMethod::sa:
      out.vector = sentence_average(vectors);
      break;
    case EmbedMethod::sl:
      out.vector = weighted_average(vectors, sl_weights(sentences));
      break;
    case EmbedMethod::idf:
      for (const auto &s : sentences) weights.push_back(idf_weight(s.text, index));
      out.vector = weighted_average(vectors, weights);
      break;
    case EmbedMethod::slidf:
      weights = sl_weights(sentences);
      for (std::size_t i = 0; i < sentences.size(); ++i) weights[i] *= idf_weight(sentences[i].text, index);
      out.vector = weighted_average(vectors, weights);
      break;
    case EmbedMethod::de:
      break;
  }
  out.zero = norm(out.vector) == 0.0;
  return out;
}

DocumentVector embed_document(const Document &doc, EmbedMethod method, const EmbeddingStore &store,
                              const DomainIndex &index) {
  auto sentences = segment(doc);
  return embed_segmented(doc.doc_id, sentences, method, store, index);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::dimension_mismatch, "cosine of vectors with different lengths");
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorCode::undefined_similarity, "cosine with a zero vector");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

}  // namespace ccalign
