#include "ccalign/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "ccalign/error.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

namespace {

constexpr std::string_view kHostTerminators = "/?&#";

bool valid_scheme(std::string_view scheme) {
  if (scheme.empty() || !std::isalpha(static_cast<unsigned char>(scheme.front()))) return false;
  return std::all_of(scheme.begin(), scheme.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.';
  });
}

bool valid_host(std::string_view host) {
  if (host.empty()) return false;
  auto colon = host.find(':');
  auto name = host.substr(0, colon);
  if (name.empty() || name.find_first_not_of('.') == std::string_view::npos) return false;
  for (unsigned char c : name) {
    if (c >= 0x80) continue;
    if (!std::isalnum(c) && c != '.' && c != '-' && c != '_') return false;
  }
  if (colon != std::string_view::npos) {
    auto port = host.substr(colon + 1);
    if (port.empty() || !std::all_of(port.begin(), port.end(), [](char c) {
          return std::isdigit(static_cast<unsigned char>(c));
        }))
      return false;
  }
  return true;
}

}  // namespace

std::string normalize_url(std::string_view url) {
  std::string_view rest = trim(url);
  if (rest.empty()) throw Error(ErrorCode::malformed_url, "empty URL");
  for (unsigned char c : rest) {
    if (c <= 0x20 || c == 0x7F) {
      throw Error(ErrorCode::malformed_url, "whitespace or control byte in '" + std::string(url) + "'");
    }
  }

  if (auto sep = rest.find("://"); sep != std::string_view::npos) {
    if (!valid_scheme(rest.substr(0, sep))) {
      throw Error(ErrorCode::malformed_url, "bad scheme in '" + std::string(url) + "'");
    }
    rest.remove_prefix(sep + 3);
  } else if (rest.substr(0, 2) == "//") {
    rest.remove_prefix(2);
  }

  auto host_end = rest.find_first_of(kHostTerminators);
  auto host_raw = rest.substr(0, host_end);
  auto tail = host_end == std::string_view::npos ? std::string_view{} : rest.substr(host_end);

  if (auto at = host_raw.rfind('@'); at != std::string_view::npos) host_raw.remove_prefix(at + 1);
  std::string host = ascii_lower(host_raw);
  // "www.com" keeps its name; only strip when a registrable remainder exists.
  while (host.size() > 4 && host.compare(0, 4, "www.") == 0 &&
         host.find('.', 4) != std::string::npos) {
    host.erase(0, 4);
  }
  if (!valid_host(host)) throw Error(ErrorCode::malformed_url, "bad host in '" + std::string(url) + "'");

  if (tail == "/") tail = {};
  host.append(tail);
  return host;
}

std::string extract_domain(std::string_view normalized_url) {
  auto host = normalized_url.substr(0, normalized_url.find_first_of(kHostTerminators));
  host = host.substr(0, host.find(':'));
  if (host.empty()) throw Error(ErrorCode::malformed_url, "empty host in '" + std::string(normalized_url) + "'");
  return std::string(host);
}

double DedupStats::reduction_percent() const {
  if (raw_records == 0) return 0.0;
  return 100.0 * (1.0 - static_cast<double>(distinct_urls) / static_cast<double>(raw_records));
}

bool prefer_record(const RawDocument &candidate, const RawDocument &incumbent) {
  // Longest content wins; remaining keys only make the choice order-free.
  auto key = [](const RawDocument &r) {
    return std::make_tuple(r.content.size(), ~fnv1a64(r.content));
  };
  auto a = key(candidate);
  auto b = key(incumbent);
  if (a != b) return a > b;
  auto rest = [](const RawDocument &r) {
    return std::tie(r.content, r.url, r.snapshot_id, r.lang);
  };
  return rest(candidate) < rest(incumbent);
}

bool Deduplicator::add(RawDocument record) {
  ++stats_.raw_records;
  std::string key;
  try {
    key = normalize_url(record.url);
  } catch (const Error &) {
    ++stats_.malformed;
    return false;
  }
  auto [it, inserted] = best_.try_emplace(std::move(key), std::move(record));
  if (!inserted && prefer_record(record, it->second)) it->second = std::move(record);
  stats_.distinct_urls = best_.size();
  return true;
}

void Deduplicator::merge(Deduplicator &&other) {
  stats_.raw_records += other.stats_.raw_records;
  stats_.malformed += other.stats_.malformed;
  for (auto &[key, record] : other.best_) {
    auto [it, inserted] = best_.try_emplace(key, std::move(record));
    if (!inserted && prefer_record(record, it->second)) it->second = std::move(record);
  }
  other.best_.clear();
  stats_.distinct_urls = best_.size();
}

std::vector<Document> Deduplicator::finish() && {
  std::vector<Document> out;
  out.reserve(best_.size());
  for (auto &[key, record] : best_) {
    Document doc;
    doc.doc_id = key;
    doc.normalized_url = key;
    doc.domain = extract_domain(key);
    doc.url = std::move(record.url);
    doc.content = std::move(record.content);
    doc.lang = std::move(record.lang);
    doc.snapshot_id = std::move(record.snapshot_id);
    out.push_back(std::move(doc));
  }
  std::sort(out.begin(), out.end(),
            [](const Document &a, const Document &b) { return a.normalized_url < b.normalized_url; });
  best_.clear();
  return out;
}

std::vector<Document> dedup(std::vector<RawDocument> records, DedupStats *stats) {
  Deduplicator d;
  for (auto &r : records) d.add(std::move(r));
  if (stats) *stats = d.stats();
  return std::move(d).finish();
}

namespace {

std::optional<std::string> optional_string(const nlohmann::json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::format, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::string required_string(const nlohmann::json &j, const char *key) {
  auto v = optional_string(j, key);
  if (!v) throw Error(ErrorCode::format, std::string("missing field '") + key + "'");
  return *v;
}

}  // namespace

RawDocument raw_document_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw Error(ErrorCode::format, "document record must be a JSON object");
  RawDocument r;
  r.url = required_string(j, "url");
  r.content = optional_string(j, "content").value_or("");
  r.snapshot_id = optional_string(j, "snapshot");
  r.lang = optional_string(j, "lang");
  return r;
}

Document document_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw Error(ErrorCode::format, "document record must be a JSON object");
  Document d;
  d.url = required_string(j, "url");
  d.content = optional_string(j, "content").value_or("");
  d.normalized_url = optional_string(j, "normalized_url").value_or(normalize_url(d.url));
  d.doc_id = optional_string(j, "doc_id").value_or(d.normalized_url);
  d.domain = optional_string(j, "domain").value_or(extract_domain(d.normalized_url));
  d.lang = optional_string(j, "lang");
  d.snapshot_id = optional_string(j, "snapshot");
  if (auto it = j.find("lang_confidence"); it != j.end() && it->is_number()) {
    d.lang_confidence = it->get<double>();
  }
  return d;
}

nlohmann::json to_json(const Document &doc) {
  nlohmann::json j;
  j["doc_id"] = doc.doc_id;
  j["url"] = doc.url;
  j["normalized_url"] = doc.normalized_url;
  j["domain"] = doc.domain;
  j["content"] = doc.content;
  if (doc.lang) j["lang"] = *doc.lang;
  if (doc.lang_confidence) j["lang_confidence"] = *doc.lang_confidence;
  if (doc.snapshot_id) j["snapshot"] = *doc.snapshot_id;
  return j;
}

std::vector<Document> load_documents(const std::string &path) {
  std::vector<Document> docs;
  std::size_t line_no = 0;
  for (const auto &line : read_lines(path)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      docs.push_back(document_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::format, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

std::string documents_to_jsonl(const std::vector<Document> &docs) {
  std::string out;
  for (const auto &d : docs) {
    out += to_json(d).dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
    out += '\n';
  }
  return out;
}

}  // namespace ccalign
