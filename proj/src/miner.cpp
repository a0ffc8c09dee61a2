#include "ccalign/miner.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "ccalign/error.hpp"

namespace ccalign {

namespace {

double top_k_mean(std::vector<double> values, std::size_t k) {
  k = std::min(k, values.size());
  std::partial_sort(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end(),
                    std::greater<>());
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += values[i];
  return s / static_cast<double>(k);
}

std::vector<Vector> sentence_vectors(const Document &doc, const std::vector<SentenceRecord> &sentences,
                                     const EmbeddingStore &store) {
  std::vector<Vector> out;
  out.reserve(sentences.size());
  for (const auto &s : sentences) {
    const auto *v = store.sentence(doc.doc_id, s.index);
    if (!v) {
      throw Error(ErrorCode::missing_vectors,
                  "no vector for sentence " + std::to_string(s.index) + " of " + doc.doc_id);
    }
    out.push_back(to_vector(*v));
  }
  return out;
}

std::string tsv_field(std::string s) {
  std::replace(s.begin(), s.end(), '\t', ' ');
  return s;
}

}  // namespace

std::vector<std::vector<double>> margin_scores(const SimilarityMatrix &cos, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::configuration, "margin k must be positive");
  const auto rows = cos.size();
  const auto cols = rows ? cos.front().size() : 0;
  std::vector<double> row_knn(rows);
  std::vector<double> col_knn(cols);
  for (std::size_t i = 0; i < rows; ++i) row_knn[i] = top_k_mean(cos[i], k);
  for (std::size_t j = 0; j < cols; ++j) {
    std::vector<double> column(rows);
    for (std::size_t i = 0; i < rows; ++i) column[i] = cos[i][j];
    col_knn[j] = top_k_mean(std::move(column), k);
  }
  std::vector<std::vector<double>> out(rows, std::vector<double>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      const double denom = (row_knn[i] + col_knn[j]) / 2.0;
      out[i][j] = denom > 0.0 ? cos[i][j] / denom : -std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

std::vector<BitextPair> mine_sentences(const Document &src, const Document &tgt, const EmbeddingStore &store,
                                       const MarginParams &params) {
  if (params.k == 0) throw Error(ErrorCode::configuration, "margin k must be positive");
  auto src_sentences = segment(src);
  auto tgt_sentences = segment(tgt);
  if (src_sentences.empty() || tgt_sentences.empty()) return {};
  auto sv = sentence_vectors(src, src_sentences, store);
  auto tv = sentence_vectors(tgt, tgt_sentences, store);

  SimilarityMatrix cos(sv.size(), std::vector<double>(tv.size()));
  for (std::size_t i = 0; i < sv.size(); ++i) {
    for (std::size_t j = 0; j < tv.size(); ++j) {
      double n = norm(sv[i]) * norm(tv[j]);
      cos[i][j] = n == 0.0 ? 0.0 : dot(sv[i], tv[j]) / n;
    }
  }
  auto margin = margin_scores(cos, params.k);

  // first index wins ties
  auto argmax_row = [&](std::size_t i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < tv.size(); ++j) {
      if (margin[i][j] > margin[i][best]) best = j;
    }
    return best;
  };
  auto argmax_col = [&](std::size_t j) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < sv.size(); ++i) {
      if (margin[i][j] > margin[best][j]) best = i;
    }
    return best;
  };

  std::vector<BitextPair> out;
  for (std::size_t i = 0; i < sv.size(); ++i) {
    const auto j = argmax_row(i);
    const double m = margin[i][j];
    if (!(m >= params.threshold)) continue;
    if (params.intersect_backward && argmax_col(j) != i) continue;
    out.push_back({src_sentences[i].text, tgt_sentences[j].text, m, src.doc_id, tgt.doc_id});
  }
  return out;
}

std::vector<BitextPair> dedup_bitext(std::vector<BitextPair> pairs) {
  std::map<std::pair<std::string, std::string>, BitextPair> best;
  for (auto &p : pairs) {
    auto key = std::make_pair(p.src_text, p.tgt_text);
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(std::move(key), std::move(p));
      continue;
    }
    auto &cur = it->second;
    if (p.margin_score > cur.margin_score ||
        (p.margin_score == cur.margin_score &&
         std::tie(p.src_doc_id, p.tgt_doc_id) < std::tie(cur.src_doc_id, cur.tgt_doc_id))) {
      cur = std::move(p);
    }
  }
  std::vector<BitextPair> out;
  out.reserve(best.size());
  for (auto &[key, p] : best) out.push_back(std::move(p));
  return out;
}

std::string bitext_to_tsv(const std::vector<BitextPair> &pairs) {
  std::string out;
  for (const auto &p : pairs) {
    out += fmt::format("{}\t{}\t{:.6f}\t{}\t{}\n", tsv_field(p.src_text), tsv_field(p.tgt_text), p.margin_score,
                       p.src_doc_id, p.tgt_doc_id);
  }
  return out;
}

}  // namespace ccalign
