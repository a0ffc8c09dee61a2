#include "ccalign/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>

#include <fmt/format.h>

#include "ccalign/corpus.hpp"
#include "ccalign/doc_embed.hpp"
#include "ccalign/embedding_io.hpp"
#include "ccalign/error.hpp"
#include "ccalign/eval.hpp"
#include "ccalign/langid.hpp"
#include "ccalign/languages.hpp"
#include "ccalign/matcher.hpp"
#include "ccalign/miner.hpp"
#include "ccalign/url_match.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::pair<Stage, std::string_view> kStageNames[] = {
    {Stage::dedup, "dedup"},         {Stage::langid, "langid"},       {Stage::match_urls, "match-urls"},
    {Stage::align, "align"},         {Stage::eval, "eval"},           {Stage::mine, "mine"},
    {Stage::agreement, "agreement"}, {Stage::sentences, "sentences"}, {Stage::embed_hash, "embed-hash"},
    {Stage::build_profile, "build-profile"},
};

const std::string &require(const std::string &value, std::string_view flag) {
  if (value.empty()) throw Error(ErrorCode::usage, "missing required option --" + std::string(flag));
  return value;
}

void require_file(const std::string &path, std::string_view flag) {
  require(path, flag);
  if (!fs::exists(path)) throw Error(ErrorCode::io, "--" + std::string(flag) + ": no such file " + path);
}

json stage_dedup(const PipelineConfig &c) {
  require_file(c.in, "in");
  require(c.out, "out");
  Deduplicator dd;
  std::size_t line_no = 0;
  for (const auto &line : read_lines(c.in)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      dd.add(raw_document_from_json(json::parse(line)));
    } catch (const json::exception &e) {
      throw Error(ErrorCode::format, c.in + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  const auto stats = dd.stats();
  auto docs = std::move(dd).finish();
  write_file_atomic(c.out, documents_to_jsonl(docs));
  return {{"in", stats.raw_records},
          {"out", docs.size()},
          {"raw_records", stats.raw_records},
          {"malformed_skipped", stats.malformed},
          {"distinct_urls", stats.distinct_urls},
          {"reduction_percent", stats.reduction_percent()}};
}

json stage_langid(const PipelineConfig &c) {
  require_file(c.in, "in");
  require(c.out, "out");
  auto docs = load_documents(c.in);
  std::vector<LangProfile> profiles;
  bool need_profiles = std::any_of(docs.begin(), docs.end(), [](const Document &d) { return !d.lang; });
  if (need_profiles) profiles = load_profiles(require(c.profiles, "profiles"));

  std::vector<std::optional<LangTag>> tags(docs.size());
  parallel_for(docs.size(), c.threads, [&](std::size_t i) {
    try {
      tags[i] = tag_language(docs[i], profiles);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::untaggable) throw;
    }
  });

  std::vector<Document> tagged;
  std::size_t passthrough = 0;
  std::map<std::string, std::size_t> per_language;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (!tags[i]) continue;
    if (docs[i].lang) ++passthrough;
    docs[i].lang = tags[i]->code;
    docs[i].lang_confidence = tags[i]->confidence;
    ++per_language[tags[i]->code];
    tagged.push_back(std::move(docs[i]));
  }
  write_file_atomic(c.out, documents_to_jsonl(tagged));
  return {{"in", docs.size()},
          {"out", tagged.size()},
          {"untaggable", docs.size() - tagged.size()},
          {"passthrough", passthrough},
          {"languages", per_language}};
}

json stage_match_urls(const PipelineConfig &c) {
  require_file(c.in, "in");
  require(c.out, "out");
  auto patterns = c.patterns.empty() ? PatternTable::builtin() : PatternTable::load(c.patterns);
  auto docs = load_documents(c.in);
  UrlMatchStats stats;
  auto pairs = match_candidates(docs, patterns, &stats);
  write_file_atomic(c.out, candidate_pairs_to_tsv(pairs, docs));
  return {{"in", docs.size()},
          {"out", pairs.size()},
          {"untagged", stats.untagged},
          {"buckets", stats.buckets},
          {"discarded_buckets", stats.discarded_buckets},
          {"verify_failures", stats.verify_failures},
          {"missing_tag", stats.missing_tag}};
}

json stage_align(const PipelineConfig &c) {
  const auto method = parse_embed_method(c.method);
  require_file(c.docs, "docs");
  require_file(c.embeddings, "embeddings");
  require(c.src_lang, "src-lang");
  require(c.tgt_lang, "tgt-lang");
  require(c.out, "out");
  const auto src_lang = canonical_language(c.src_lang);
  const auto tgt_lang = canonical_language(c.tgt_lang);
  if (src_lang == tgt_lang) throw Error(ErrorCode::usage, "--src-lang and --tgt-lang must differ");

  auto docs = load_documents(c.docs);
  const auto store = read_embedding_file(c.embeddings);

  std::map<std::string, std::vector<const Document *>> domains;
  for (const auto &d : docs) domains[d.domain].push_back(&d);
  std::vector<const std::pair<const std::string, std::vector<const Document *>> *> work;
  for (const auto &entry : domains) work.push_back(&entry);

  struct DomainResult {
    Alignment alignment;
    std::size_t dropped = 0;
    std::size_t scored = 0;
  };
  std::vector<DomainResult> results(work.size());
  parallel_for(work.size(), c.threads, [&](std::size_t w) {
    const auto &[domain, members] = *work[w];
    std::vector<std::vector<SentenceRecord>> segmented;
    segmented.reserve(members.size());
    for (const auto *d : members) segmented.push_back(segment(*d));
    const auto index = DomainIndex::build(domain, segmented);

    DocumentSet src{domain, src_lang, {}};
    DocumentSet tgt{domain, tgt_lang, {}};
    std::unordered_map<std::string, DocumentVector> vectors;
    auto &r = results[w];
    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto *d = members[i];
      if (!d->lang) continue;
      auto lang = canonical_language(*d->lang);
      DocumentSet *side = lang == src_lang ? &src : lang == tgt_lang ? &tgt : nullptr;
      if (!side) continue;
      try {
        vectors.emplace(d->doc_id, embed_segmented(d->doc_id, segmented[i], method, store, index));
        side->doc_ids.push_back(d->doc_id);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::missing_vectors && e.code() != ErrorCode::empty_document) throw;
        ++r.dropped;
      }
    }
    if (src.doc_ids.empty() || tgt.doc_ids.empty()) return;
    ScoreStats ss;
    auto scored = score_domain(src, tgt, vectors, 1, &ss);
    r.dropped += ss.dropped_source + ss.dropped_target;
    r.scored = scored.size();
    r.alignment = competitive_match(scored);
  });

  std::string out;
  std::size_t aligned = 0, dropped = 0, scored = 0, active_domains = 0;
  for (const auto &r : results) {
    dropped += r.dropped;
    scored += r.scored;
    if (!r.alignment.pairs.empty()) ++active_domains;
    for (const auto &p : r.alignment.pairs) {
      out += fmt::format("{}\t{}\t{:.6f}\n", p.source_doc_id, p.target_doc_id, p.score);
      ++aligned;
    }
  }
  write_file_atomic(c.out, out);
  return {{"in", docs.size()},        {"out", aligned},
          {"method", to_string(method)}, {"domains", domains.size()},
          {"aligned_domains", active_domains}, {"scored_pairs", scored},
          {"dropped_documents", dropped}};
}

// "lang=path" or plain "path" (labelled with `fallback`)
std::pair<std::string, std::string> labelled_path(const std::string &arg, const std::string &fallback) {
  auto eq = arg.find('=');
  if (eq != std::string::npos && eq > 0 && arg.find('/') > eq) return {arg.substr(0, eq), arg.substr(eq + 1)};
  return {fallback.empty() ? std::string("all") : fallback, arg};
}

json stage_eval(const PipelineConfig &c) {
  if (c.pred.empty()) throw Error(ErrorCode::usage, "missing required option --pred");
  if (c.gold.empty()) throw Error(ErrorCode::usage, "missing required option --gold");
  std::map<std::string, std::vector<UrlPair>> predicted;
  std::map<std::string, GoldSet> gold;
  for (const auto &arg : c.pred) {
    auto [lang, path] = labelled_path(arg, c.lang);
    require_file(path, "pred");
    auto pairs = load_url_pairs(path);
    auto &dst = predicted[lang];
    dst.insert(dst.end(), pairs.begin(), pairs.end());
  }
  for (const auto &arg : c.gold) {
    auto [lang, path] = labelled_path(arg, c.lang);
    require_file(path, "gold");
    auto set = make_gold_set(load_url_pairs(path), lang);
    auto &dst = gold[lang];
    dst.language = lang;
    dst.pairs.insert(set.pairs.begin(), set.pairs.end());
  }
  std::map<std::string, std::string> tiers;
  if (!c.tiers.empty()) {
    require_file(c.tiers, "tiers");
    for (const auto &line : read_lines(c.tiers)) {
      auto fields = split(line, ',');
      if (fields.size() == 2) tiers[std::string(trim(fields[0]))] = std::string(trim(fields[1]));
    }
  }
  auto report = evaluate(predicted, gold, tiers).to_json();
  if (c.report && *c.report != "-") write_file_atomic(*c.report, report.dump(2) + "\n");
  return report;
}

json stage_mine(const PipelineConfig &c) {
  require_file(c.aligned, "aligned");
  require_file(c.docs, "docs");
  require_file(c.embeddings, "embeddings");
  require(c.out, "out");
  if (c.k == 0) throw Error(ErrorCode::usage, "--k must be positive");
  if (!(c.threshold > 0.0)) throw Error(ErrorCode::usage, "--threshold must be positive");
  MarginParams params{c.k, c.threshold, c.intersect};

  auto docs = load_documents(c.docs);
  std::unordered_map<std::string, const Document *> by_url;
  for (const auto &d : docs) by_url.emplace(d.normalized_url, &d);
  const auto store = read_embedding_file(c.embeddings);

  std::vector<std::pair<std::string, std::string>> directed;
  for (const auto &line : read_lines(c.aligned)) {
    auto fields = split(line, '\t');
    if (fields.size() >= 2) directed.emplace_back(normalize_url(fields[0]), normalize_url(fields[1]));
  }

  std::vector<std::vector<BitextPair>> mined(directed.size());
  std::vector<char> skipped(directed.size(), 0);
  parallel_for(directed.size(), c.threads, [&](std::size_t i) {
    auto s = by_url.find(directed[i].first);
    auto t = by_url.find(directed[i].second);
    if (s == by_url.end() || t == by_url.end()) {
      skipped[i] = 1;
      return;
    }
    try {
      mined[i] = mine_sentences(*s->second, *t->second, store, params);
    } catch (const Error &e) {
      if (e.code() != ErrorCode::missing_vectors) throw;
      skipped[i] = 1;
    }
  });
  std::vector<BitextPair> all;
  for (auto &m : mined) all.insert(all.end(), std::make_move_iterator(m.begin()), std::make_move_iterator(m.end()));
  const auto raw = all.size();
  auto unique = dedup_bitext(std::move(all));
  write_file_atomic(c.out, bitext_to_tsv(unique));
  return {{"in", directed.size()},
          {"out", unique.size()},
          {"skipped_pairs", std::count(skipped.begin(), skipped.end(), 1)},
          {"mined_before_dedup", raw},
          {"k", c.k},
          {"threshold", c.threshold}};
}

json stage_agreement(const PipelineConfig &c) {
  require_file(c.in, "in");
  auto table = parse_annotation_csv(read_file(c.in));
  double alpha = krippendorff_alpha(table);
  json report{{"alpha", alpha}, {"units", table.units().size()}, {"raters", table.raters().size()},
              {"ratings", table.ratings.size()}};
  if (!c.out.empty()) write_file_atomic(c.out, report.dump(2) + "\n");
  return report;
}

json stage_sentences(const PipelineConfig &c) {
  require_file(c.docs, "docs");
  require(c.out, "out");
  auto docs = load_documents(c.docs);
  auto text = sentences_to_jsonl(docs);
  write_file_atomic(c.out, text);
  return {{"in", docs.size()}, {"out", static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'))}};
}

json stage_embed_hash(const PipelineConfig &c) {
  require_file(c.docs, "docs");
  require(c.out, "out");
  if (c.dim == 0) throw Error(ErrorCode::usage, "--dim must be positive");
  auto docs = load_documents(c.docs);
  auto exported = export_hash_embeddings(docs, c.dim);
  write_file_atomic(c.out, exported.bytes);
  write_file_atomic(c.out + ".offsets.jsonl", sidecar_to_jsonl(exported.sidecar));
  write_file_atomic(c.out + ".manifest.json", to_json(exported.manifest).dump(2) + "\n");
  return {{"in", docs.size()}, {"out", exported.store.size()}, {"dim", c.dim},
          {"checksum", exported.manifest.checksum}};
}

json stage_build_profile(const PipelineConfig &c) {
  require_file(c.in, "in");
  require(c.out, "out");
  auto profile = build_profile(require(c.lang, "lang"), read_file(c.in));
  write_file_atomic(c.out, to_json(profile).dump() + "\n");
  return {{"code", profile.code}, {"ngrams", profile.ngram_logprobs.size()}};
}

fs::path manifest_path(const PipelineConfig &c) {
  if (c.manifest == "none") return {};
  if (c.manifest != "auto") return c.manifest;
  std::string anchor = !c.out.empty() ? c.out : c.report && *c.report != "-" ? *c.report : std::string{};
  if (anchor.empty()) return {};
  return fs::path(anchor).parent_path() / "run_manifest.jsonl";
}

}  // namespace

std::string_view to_string(Stage s) {
  for (const auto &[stage, name] : kStageNames) {
    if (stage == s) return name;
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  for (const auto &[stage, n] : kStageNames) {
    if (n == name) return stage;
  }
  throw Error(ErrorCode::usage, "unknown stage '" + std::string(name) + "'");
}

StageResult run_stage(Stage stage, const PipelineConfig &config) {
  const auto start = std::chrono::steady_clock::now();
  json counts;
  switch (stage) {
    case Stage::dedup: counts = stage_dedup(config); break;
    case Stage::langid: counts = stage_langid(config); break;
    case Stage::match_urls: counts = stage_match_urls(config); break;
    case Stage::align: counts = stage_align(config); break;
    case Stage::eval: counts = stage_eval(config); break;
    case Stage::mine: counts = stage_mine(config); break;
    case Stage::agreement: counts = stage_agreement(config); break;
    case Stage::sentences: counts = stage_sentences(config); break;
    case Stage::embed_hash: counts = stage_embed_hash(config); break;
    case Stage::build_profile: counts = stage_build_profile(config); break;
  }
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  StageResult result;
  result.report = counts;
  if (auto path = manifest_path(config); !path.empty()) {
    json entry{{"stage", to_string(stage)}, {"report", counts}, {"elapsed_ms", elapsed}};
    std::ofstream manifest(path, std::ios::app);
    if (!manifest) throw Error(ErrorCode::io, "cannot append to run manifest " + path.string());
    manifest << entry.dump() << '\n';
  }
  return result;
}

}  // namespace ccalign
