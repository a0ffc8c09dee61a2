#include "ccalign/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>

#include "ccalign/error.hpp"
#include "ccalign/languages.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

std::vector<ScoredPair> score_domain(const DocumentSet &src, const DocumentSet &tgt,
                                     const std::unordered_map<std::string, DocumentVector> &vectors,
                                     unsigned threads, ScoreStats *stats) {
  if (canonical_language(src.language) == canonical_language(tgt.language)) {
    throw Error(ErrorCode::configuration, "source and target language are both '" + src.language + "'");
  }
  ScoreStats local;
  struct Side {
    const std::string *id;
    const Vector *v;
    double norm;
  };
  auto usable = [&](const DocumentSet &set, std::size_t &dropped) {
    std::vector<Side> out;
    for (const auto &id : set.doc_ids) {
      auto it = vectors.find(id);
      if (it == vectors.end() || it->second.zero) {
        ++dropped;
        continue;
      }
      double n = norm(it->second.vector);
      if (n == 0.0 || !std::isfinite(n)) {
        ++dropped;
        continue;
      }
      out.push_back({&id, &it->second.vector, n});
    }
    return out;
  };
  auto sources = usable(src, local.dropped_source);
  auto targets = usable(tgt, local.dropped_target);
  if (stats) *stats = local;

  std::vector<ScoredPair> out(sources.size() * targets.size());
  parallel_for(sources.size(), threads, [&](std::size_t i) {
    const auto &s = sources[i];
    for (std::size_t j = 0; j < targets.size(); ++j) {
      const auto &t = targets[j];
      if (s.v->size() != t.v->size()) throw Error(ErrorCode::dimension_mismatch, "document vector dims differ");
      double c = std::clamp(dot(*s.v, *t.v) / (s.norm * t.norm), -1.0, 1.0);
      out[i * targets.size() + j] = ScoredPair{*s.id, *t.id, c};
    }
  });
  return out;
}

Alignment competitive_match(const std::vector<ScoredPair> &pairs, MatchProfile *profile) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();

  // Dense ranks that preserve lexicographic id order, so ties compare on
  // integers. Inputs are usually row-major, hence the last-id shortcut.
  struct Ranker {
    std::unordered_map<std::string_view, std::uint32_t> first_seen;
    std::vector<std::string_view> ids;
    std::vector<std::uint32_t> rank;
    std::string_view last;
    std::uint32_t last_id = 0;

    std::uint32_t intern(std::string_view id) {
      if (!ids.empty() && id == last) return last_id;
      auto [it, inserted] = first_seen.try_emplace(id, static_cast<std::uint32_t>(ids.size()));
      if (inserted) ids.push_back(id);
      last = id;
      last_id = it->second;
      return last_id;
    }
    void finalize() {
      std::vector<std::uint32_t> order(ids.size());
      for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return ids[a] < ids[b]; });
      rank.resize(ids.size());
      for (std::uint32_t r = 0; r < order.size(); ++r) rank[order[r]] = r;
    }
  };
  Ranker sources;
  Ranker targets;

  struct Edge {
    double score;
    std::uint32_t source;
    std::uint32_t target;
    std::uint32_t input;
  };
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto &p = pairs[i];
    if (!std::isfinite(p.score)) throw Error(ErrorCode::format, "non-finite pair score");
    edges.push_back({p.score, sources.intern(p.source_doc_id), targets.intern(p.target_doc_id),
                     static_cast<std::uint32_t>(i)});
  }
  sources.finalize();
  targets.finalize();
  for (auto &e : edges) {
    e.source = sources.rank[e.source];
    e.target = targets.rank[e.target];
  }
  auto t1 = clock::now();

  std::sort(edges.begin(), edges.end(), [](const Edge &a, const Edge &b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.source != b.source) return a.source < b.source;
    return a.target < b.target;
  });
  auto t2 = clock::now();

  Alignment out;
  const std::size_t limit = std::min(sources.ids.size(), targets.ids.size());
  std::vector<bool> used_source(sources.ids.size(), false);
  std::vector<bool> used_target(targets.ids.size(), false);
  for (const auto &e : edges) {
    if (out.pairs.size() == limit) break;
    if (used_source[e.source] || used_target[e.target]) continue;
    used_source[e.source] = true;
    used_target[e.target] = true;
    out.pairs.push_back(pairs[e.input]);
  }
  auto t3 = clock::now();

  if (profile) {
    profile->index = t1 - t0;
    profile->sort = t2 - t1;
    profile->scan = t3 - t2;
  }
  return out;
}

}  // namespace ccalign
