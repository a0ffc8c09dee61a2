#include "ccalign/embedding_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include <openssl/evp.h>

#include "ccalign/error.hpp"
#include "ccalign/util.hpp"

namespace ccalign {

static_assert(std::endian::native == std::endian::little, "embedding IO assumes a little-endian host");
static_assert(sizeof(float) == 4 && std::numeric_limits<float>::is_iec559);

namespace {

template <typename T>
void put(std::string &out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

template <typename T>
T get(std::string_view bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

}  // namespace

std::string encode_embeddings(const EmbeddingStore &store) {
  std::string out;
  out.reserve(kEmbeddingHeaderSize + store.size() * (8 + 4ULL * store.dim()));
  out.append(kEmbeddingMagic);
  put<std::uint32_t>(out, store.dim());
  put<std::uint64_t>(out, store.size());
  for (auto key : store.keys()) {
    put<std::uint64_t>(out, key);
    for (float f : *store.find(key)) put<float>(out, f);
  }
  return out;
}

EmbeddingStore decode_embeddings(std::string_view bytes) {
  if (bytes.size() < kEmbeddingHeaderSize || bytes.substr(0, 8) != kEmbeddingMagic) {
    throw Error(ErrorCode::format, "not an embedding file (bad magic)");
  }
  const auto dim = get<std::uint32_t>(bytes, 8);
  const auto count = get<std::uint64_t>(bytes, 12);
  const std::uint64_t record = 8 + 4ULL * dim;
  if (dim == 0) throw Error(ErrorCode::format, "embedding dim is zero");
  if ((bytes.size() - kEmbeddingHeaderSize) / record < count ||
      bytes.size() != kEmbeddingHeaderSize + count * record) {
    throw Error(ErrorCode::format, "embedding file size does not match header (dim " + std::to_string(dim) +
                                       ", count " + std::to_string(count) + ")");
  }
  EmbeddingStore store(dim);
  std::vector<float> values(dim);
  for (std::uint64_t r = 0; r < count; ++r) {
    const auto base = kEmbeddingHeaderSize + r * record;
    const auto key = get<std::uint64_t>(bytes, base);
    std::memcpy(values.data(), bytes.data() + base + 8, 4ULL * dim);
    store.add(key, values);
  }
  return store;
}

void write_embedding_file(const std::filesystem::path &path, const EmbeddingStore &store) {
  write_file_atomic(path, encode_embeddings(store));
}

EmbeddingStore read_embedding_file(const std::filesystem::path &path) {
  return decode_embeddings(read_file(path));
}

std::vector<float> read_vector_at(const std::filesystem::path &path, std::uint64_t offset, std::uint32_t dim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open " + path.string());
  in.seekg(static_cast<std::streamoff>(offset + 8));
  std::vector<float> values(dim);
  in.read(reinterpret_cast<char *>(values.data()), static_cast<std::streamsize>(4ULL * dim));
  if (!in) throw Error(ErrorCode::format, "record at offset " + std::to_string(offset) + " is truncated");
  return values;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::io, "SHA-256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xF];
  }
  return out;
}

std::string payload_checksum(std::string_view file_bytes) {
  if (file_bytes.size() < kEmbeddingHeaderSize) throw Error(ErrorCode::format, "embedding file too short");
  return sha256_hex(file_bytes.substr(kEmbeddingHeaderSize));
}

std::string sidecar_to_jsonl(const std::vector<SidecarEntry> &entries) {
  std::string out;
  for (const auto &e : entries) {
    out += nlohmann::json{{"doc_id", e.doc_id}, {"index", e.index}, {"offset", e.offset}}.dump();
    out += '\n';
  }
  return out;
}

nlohmann::json to_json(const EmbeddingManifest &m) {
  return {{"encoder", m.encoder}, {"dim", m.dim},         {"truncation", m.truncation},
          {"count", m.count},     {"checksum", m.checksum}};
}

EmbeddingManifest manifest_from_json(const nlohmann::json &j) {
  try {
    return {j.at("encoder").get<std::string>(), j.at("dim").get<std::uint32_t>(),
            j.value("truncation", std::string{}), j.at("count").get<std::uint64_t>(),
            j.at("checksum").get<std::string>()};
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::format, std::string("embedding manifest: ") + e.what());
  }
}

void verify_manifest(const EmbeddingManifest &manifest, std::string_view file_bytes) {
  if (file_bytes.size() < kEmbeddingHeaderSize) throw Error(ErrorCode::format, "embedding file too short");
  if (get<std::uint32_t>(file_bytes, 8) != manifest.dim) throw Error(ErrorCode::format, "manifest dim mismatch");
  if (get<std::uint64_t>(file_bytes, 12) != manifest.count) throw Error(ErrorCode::format, "manifest count mismatch");
  if (payload_checksum(file_bytes) != manifest.checksum) throw Error(ErrorCode::format, "manifest checksum mismatch");
}

std::vector<float> hash_embedding(std::string_view text, std::uint32_t dim) {
  if (dim == 0) throw Error(ErrorCode::dimension_mismatch, "hash embedding dim must be positive");
  std::vector<double> raw;
  raw.reserve(dim);
  std::string buf(text);
  buf.append(4, '\0');
  for (std::uint32_t block = 0; raw.size() < dim; ++block) {
    std::memcpy(buf.data() + text.size(), &block, 4);
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(buf.data(), buf.size(), digest, &len, EVP_sha256(), nullptr);
    for (unsigned int w = 0; w + 4 <= len && raw.size() < dim; w += 4) {
      std::uint32_t word;
      std::memcpy(&word, digest + w, 4);
      raw.push_back((static_cast<double>(word) + 0.5) / 4294967296.0 * 2.0 - 1.0);
    }
  }
  double n = 0.0;
  for (double x : raw) n += x * x;
  n = std::sqrt(n);
  std::vector<float> out(dim);
  for (std::uint32_t i = 0; i < dim; ++i) out[i] = static_cast<float>(raw[i] / n);
  return out;
}

HashExport export_hash_embeddings(const std::vector<Document> &docs, std::uint32_t dim) {
  HashExport result{EmbeddingStore(dim), {}, {}, {}};
  const std::uint64_t record = 8 + 4ULL * dim;
  auto offset_of = [&] { return kEmbeddingHeaderSize + result.store.size() * record; };
  for (const auto &doc : docs) {
    for (const auto &s : segment(doc)) {
      result.sidecar.push_back({doc.doc_id, static_cast<std::int64_t>(s.index), offset_of()});
      result.store.add_sentence(doc.doc_id, s.index, hash_embedding(s.text, dim));
    }
    result.sidecar.push_back({doc.doc_id, -1, offset_of()});
    result.store.add_document(doc.doc_id, hash_embedding(doc.content, dim));
  }
  result.bytes = encode_embeddings(result.store);
  result.manifest = {"hash-sha256", dim, "none", result.store.size(), payload_checksum(result.bytes)};
  return result;
}

std::string sentences_to_jsonl(const std::vector<Document> &docs) {
  std::string out;
  for (const auto &doc : docs) {
    for (const auto &s : segment(doc)) {
      out += nlohmann::json{{"doc_id", s.doc_id}, {"index", s.index}, {"text", s.text}, {"tokens", s.token_count}}
                 .dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
      out += '\n';
    }
  }
  return out;
}

}  // namespace ccalign
