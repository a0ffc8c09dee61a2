#include "ccalign/url_match.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

#include "ccalign/error.hpp"
#include "ccalign/langid.hpp"
#include "ccalign/languages.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

PairEvidence CandidatePair::evidence() const {
  if (!source_identifiers.empty() && !target_identifiers.empty()) return PairEvidence::both;
  return source_identifiers.empty() ? PairEvidence::target : PairEvidence::source;
}

std::string_view to_string(IdentifierPosition p) {
  switch (p) {
    case IdentifierPosition::subdomain: return "subdomain";
    case IdentifierPosition::path_segment: return "path-segment";
    case IdentifierPosition::query_param: return "query-param";
    case IdentifierPosition::joined_param: return "joined-param";
  }
  return "?";
}

std::string_view to_string(ValueClass c) {
  switch (c) {
    case ValueClass::iso_code: return "iso-code";
    case ValueClass::locale_code: return "locale-code";
    case ValueClass::language_name: return "language-name";
    case ValueClass::numeric: return "numeric";
  }
  return "?";
}

namespace {

IdentifierPosition parse_position(std::string_view s) {
  for (auto p : {IdentifierPosition::subdomain, IdentifierPosition::path_segment, IdentifierPosition::query_param,
                 IdentifierPosition::joined_param}) {
    if (to_string(p) == s) return p;
  }
  throw Error(ErrorCode::format, "unknown pattern position '" + std::string(s) + "'");
}

ValueClass parse_value_class(std::string_view s) {
  for (auto c : {ValueClass::iso_code, ValueClass::locale_code, ValueClass::language_name, ValueClass::numeric}) {
    if (to_string(c) == s) return c;
  }
  throw Error(ErrorCode::format, "unknown value class '" + std::string(s) + "'");
}

bool keyed(IdentifierPosition p) {
  return p == IdentifierPosition::query_param || p == IdentifierPosition::joined_param;
}

}  // namespace

PatternTable::PatternTable(std::vector<LangIdentifierPattern> patterns) : patterns_(std::move(patterns)) {
  for (auto &p : patterns_) {
    if (keyed(p.position)) {
      if (!p.key || p.key->empty()) {
        throw Error(ErrorCode::format, std::string(to_string(p.position)) + " pattern needs a key");
      }
      p.key = ascii_lower(*p.key);
    } else {
      p.key.reset();
    }
  }
}

PatternTable PatternTable::builtin() {
  std::vector<LangIdentifierPattern> patterns;
  for (auto pos : {IdentifierPosition::subdomain, IdentifierPosition::path_segment}) {
    for (auto cls : {ValueClass::iso_code, ValueClass::locale_code, ValueClass::language_name}) {
      patterns.push_back({pos, std::nullopt, cls});
    }
  }
  for (auto pos : {IdentifierPosition::query_param, IdentifierPosition::joined_param}) {
    for (const char *key : {"lang", "language", "locale", "l", "lng", "hl"}) {
      for (auto cls : {ValueClass::iso_code, ValueClass::locale_code, ValueClass::language_name, ValueClass::numeric}) {
        patterns.push_back({pos, std::string(key), cls});
      }
    }
  }
  return PatternTable(std::move(patterns));
}

PatternTable PatternTable::from_json(const nlohmann::json &j) {
  if (!j.is_array()) throw Error(ErrorCode::format, "pattern table must be a JSON list");
  std::vector<LangIdentifierPattern> patterns;
  try {
    for (const auto &item : j) {
      LangIdentifierPattern p{parse_position(item.at("position").get<std::string>()), std::nullopt,
                              parse_value_class(item.at("value_class").get<std::string>())};
      if (auto it = item.find("key"); it != item.end() && !it->is_null()) p.key = it->get<std::string>();
      patterns.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::format, std::string("pattern table: ") + e.what());
  }
  return PatternTable(std::move(patterns));
}

PatternTable PatternTable::load(const std::string &path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::format, path + ": " + e.what());
  }
}

nlohmann::json PatternTable::to_json() const {
  auto out = nlohmann::json::array();
  for (const auto &p : patterns_) {
    nlohmann::json item{{"position", to_string(p.position)}, {"value_class", to_string(p.value_class)}};
    if (p.key) item["key"] = *p.key;
    out.push_back(std::move(item));
  }
  return out;
}

bool PatternTable::accepts(IdentifierPosition position, std::string_view key, ValueClass value_class) const {
  auto lowered = ascii_lower(key);
  return std::any_of(patterns_.begin(), patterns_.end(), [&](const LangIdentifierPattern &p) {
    return p.position == position && p.value_class == value_class && (!keyed(position) || *p.key == lowered);
  });
}

std::optional<ClassifiedValue> classify_identifier_value(std::string_view value) {
  if (value.empty()) return std::nullopt;
  if (std::all_of(value.begin(), value.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    return ClassifiedValue{ValueClass::numeric, std::nullopt};
  }
  bool alpha = std::all_of(value.begin(), value.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
  if (alpha) {
    if (const auto *l = language_by_code(value)) return ClassifiedValue{ValueClass::iso_code, std::string(l->iso1)};
    if (const auto *l = language_by_name(value)) return ClassifiedValue{ValueClass::language_name, std::string(l->iso1)};
    return std::nullopt;
  }
  if (const auto *l = language_by_locale(value)) return ClassifiedValue{ValueClass::locale_code, std::string(l->iso1)};
  return std::nullopt;
}

bool is_ambiguous_code(std::string_view segment) {
  static const char *const kWords[] = {"am", "as", "be", "ga", "ha", "he", "hi", "id", "is", "it", "la", "ms",
                                       "my", "no", "or", "pa", "so", "ben", "bel", "cat", "est", "fil", "fin", "hat",
                                       "lat", "lit", "mal", "mar", "mon", "nor", "pan", "pol", "sin", "som", "sun",
                                       "tat", "tel"};
  auto lower = ascii_lower(segment);
  return std::any_of(std::begin(kWords), std::end(kWords), [&](const char *w) { return lower == w; });
}

namespace {

struct KeyValue {
  std::string_view key;
  std::string_view value;
};

std::optional<KeyValue> split_param(std::string_view param) {
  auto eq = param.find('=');
  if (eq == std::string_view::npos || eq == 0) return std::nullopt;
  return KeyValue{param.substr(0, eq), param.substr(eq + 1)};
}

std::optional<UrlIdentifier> keyed_identifier(std::string_view param, IdentifierPosition position,
                                              const PatternTable &patterns) {
  auto kv = split_param(param);
  if (!kv) return std::nullopt;
  auto cls = classify_identifier_value(kv->value);
  if (!cls || !patterns.accepts(position, kv->key, cls->value_class)) return std::nullopt;
  return UrlIdentifier{position, cls->value_class, std::string(param), cls->lang, 0, {}};
}

}  // namespace

StrippedUrl strip_language_identifiers(std::string_view url, const PatternTable &patterns) {
  std::vector<UrlIdentifier> found;

  auto host_end = std::min(url.find_first_of("/?&#"), url.size());
  auto fragment = std::min(url.find('#'), url.size());
  auto query = std::min(url.find('?'), fragment);

  // subdomain: first label, only when a registrable name remains
  {
    auto host = url.substr(0, host_end);
    auto labels = split(host.substr(0, host.find(':')), '.');
    if (labels.size() >= 3) {
      auto cls = classify_identifier_value(labels[0]);
      if (cls && cls->value_class != ValueClass::numeric &&
          patterns.accepts(IdentifierPosition::subdomain, {}, cls->value_class)) {
        found.push_back({IdentifierPosition::subdomain, cls->value_class, std::string(labels[0]), cls->lang, 0,
                         std::string(labels[0]) + "."});
      }
    }
  }

  // path segments up to the first "&", then "&"-joined parameters
  auto main_end = query;
  auto path_end = std::min(url.find('&', host_end), main_end);
  for (auto pos = host_end; pos < path_end && url[pos] == '/';) {
    auto next = std::min(url.find('/', pos + 1), path_end);
    auto segment = url.substr(pos + 1, next - pos - 1);
    bool closed = next < path_end;
    auto cls = classify_identifier_value(segment);
    if (cls && cls->value_class != ValueClass::numeric &&
        patterns.accepts(IdentifierPosition::path_segment, {}, cls->value_class) &&
        (closed || !is_ambiguous_code(segment))) {
      found.push_back({IdentifierPosition::path_segment, cls->value_class, std::string(segment), cls->lang, pos,
                       "/" + std::string(segment)});
    }
    pos = next;
  }
  for (auto pos = path_end; pos < main_end;) {
    auto next = std::min(url.find('&', pos + 1), main_end);
    auto param = url.substr(pos + 1, next - pos - 1);
    if (auto id = keyed_identifier(param, IdentifierPosition::joined_param, patterns)) {
      id->offset = pos;
      id->removed = "&" + std::string(param);
      found.push_back(std::move(*id));
    }
    pos = next;
  }

  // query string
  if (query < fragment) {
    struct Param {
      std::size_t start;
      std::string_view text;
      std::optional<UrlIdentifier> id;
    };
    std::vector<Param> params;
    for (auto start = query + 1;;) {
      auto end = std::min(url.find('&', start), fragment);
      auto text = url.substr(start, end - start);
      params.push_back({start, text, keyed_identifier(text, IdentifierPosition::query_param, patterns)});
      if (end >= fragment) break;
      start = end + 1;
    }
    bool any_kept = std::any_of(params.begin(), params.end(), [](const Param &p) { return !p.id; });
    bool kept_before = false;
    for (std::size_t i = 0; i < params.size(); ++i) {
      auto &p = params[i];
      if (!p.id) {
        kept_before = true;
        continue;
      }
      auto text = std::string(p.text);
      if (!any_kept && i == 0) {
        p.id->offset = query;
        p.id->removed = "?" + text;
      } else if (!any_kept || kept_before) {
        p.id->offset = p.start - 1;
        p.id->removed = "&" + text;
      } else {
        p.id->offset = p.start;
        p.id->removed = text + "&";
      }
      found.push_back(std::move(*p.id));
    }
  }

  std::sort(found.begin(), found.end(),
            [](const UrlIdentifier &a, const UrlIdentifier &b) { return a.offset < b.offset; });
  StrippedUrl out;
  std::size_t cursor = 0;
  for (const auto &id : found) {
    out.skeleton.append(url.substr(cursor, id.offset - cursor));
    cursor = id.offset + id.removed.size();
  }
  out.skeleton.append(url.substr(cursor));
  out.identifiers = std::move(found);
  return out;
}

std::string reconstruct_url(const StrippedUrl &stripped) {
  std::string out = stripped.skeleton;
  for (const auto &id : stripped.identifiers) {
    if (id.offset > out.size()) throw Error(ErrorCode::format, "identifier offset beyond skeleton");
    out.insert(id.offset, id.removed);
  }
  return out;
}

std::vector<CandidatePair> match_candidates(const std::vector<Document> &docs, const PatternTable &patterns,
                                            UrlMatchStats *stats) {
  UrlMatchStats local;
  local.documents = docs.size();

  std::vector<StrippedUrl> stripped;
  stripped.reserve(docs.size());
  std::map<std::string, std::vector<std::size_t>> buckets;
  std::unordered_map<std::string, LangTag> tags;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const auto &d = docs[i];
    stripped.push_back(strip_language_identifiers(d.normalized_url, patterns));
    buckets[stripped.back().skeleton].push_back(i);
    if (d.lang && !d.lang->empty()) {
      tags.emplace(d.doc_id, LangTag{*d.lang, d.lang_confidence.value_or(1.0)});
    } else {
      ++local.untagged;
    }
  }
  local.buckets = buckets.size();

  std::vector<CandidatePair> out;
  for (auto &[skeleton, members] : buckets) {
    if (members.size() < 2) continue;
    std::sort(members.begin(), members.end(),
              [&](std::size_t a, std::size_t b) { return docs[a].doc_id < docs[b].doc_id; });

    std::map<std::string, std::size_t> per_language;
    for (auto m : members) {
      if (docs[m].lang && !docs[m].lang->empty()) ++per_language[canonical_language(*docs[m].lang)];
    }
    if (std::any_of(per_language.begin(), per_language.end(), [](const auto &kv) { return kv.second > 1; })) {
      ++local.discarded_buckets;
      continue;
    }

    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const auto &sa = stripped[members[a]];
        const auto &sb = stripped[members[b]];
        if (sa.identifiers.empty() && sb.identifiers.empty()) continue;
        CandidatePair pair{docs[members[a]].doc_id, docs[members[b]].doc_id, skeleton, sa.identifiers,
                           sb.identifiers};
        switch (verify_pair_language_detail(pair, tags)) {
          case VerifyOutcome::accepted: out.push_back(std::move(pair)); break;
          case VerifyOutcome::missing_tag: ++local.missing_tag; break;
          case VerifyOutcome::no_identifier: break;
          case VerifyOutcome::same_language:
          case VerifyOutcome::identifier_mismatch: ++local.verify_failures; break;
        }
      }
    }
  }
  local.pairs = out.size();
  if (stats) *stats = local;
  return out;
}

std::string candidate_pairs_to_tsv(const std::vector<CandidatePair> &pairs, const std::vector<Document> &docs) {
  std::unordered_map<std::string_view, const Document *> by_id;
  for (const auto &d : docs) by_id.emplace(d.doc_id, &d);
  std::string out;
  for (const auto &p : pairs) {
    const auto *s = by_id.at(p.source_doc_id);
    const auto *t = by_id.at(p.target_doc_id);
    out += s->normalized_url + '\t' + t->normalized_url + '\t' + p.skeleton + '\t' + s->lang.value_or("") + '\t' +
           t->lang.value_or("") + '\n';
  }
  return out;
}

}  // namespace ccalign
