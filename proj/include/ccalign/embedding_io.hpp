#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccalign/corpus.hpp"
#include "ccalign/doc_embed.hpp"

namespace ccalign {

// Layout (little-endian):
//   "CCAEMB1\0" | u32 dim | u64 count | count x (u64 key | dim x f32)
inline constexpr std::string_view kEmbeddingMagic{"CCAEMB1\0", 8};
inline constexpr std::size_t kEmbeddingHeaderSize = 8 + 4 + 8;

/// Serializes the store in insertion order.
std::string encode_embeddings(const EmbeddingStore &store);
EmbeddingStore decode_embeddings(std::string_view bytes);

void write_embedding_file(const std::filesystem::path &path, const EmbeddingStore &store);
EmbeddingStore read_embedding_file(const std::filesystem::path &path);

/// Reads one record's vector at a byte offset taken from the sidecar index.
std::vector<float> read_vector_at(const std::filesystem::path &path, std::uint64_t offset, std::uint32_t dim);

/// Lowercase hex SHA-256 over everything after the header.
std::string payload_checksum(std::string_view file_bytes);
std::string sha256_hex(std::string_view bytes);

struct SidecarEntry {
  std::string doc_id;
  std::int64_t index;  // -1 for whole-document vectors
  std::uint64_t offset;
};

/// One JSON line per record: {"doc_id", "index", "offset"}.
std::string sidecar_to_jsonl(const std::vector<SidecarEntry> &entries);

struct EmbeddingManifest {
  std::string encoder;
  std::uint32_t dim = 0;
  std::string truncation;
  std::uint64_t count = 0;
  std::string checksum;
};

nlohmann::json to_json(const EmbeddingManifest &m);
EmbeddingManifest manifest_from_json(const nlohmann::json &j);

/// Throws Error(format) when dim, count or checksum disagree with the file.
void verify_manifest(const EmbeddingManifest &manifest, std::string_view file_bytes);

/// Deterministic unit vector for a text: SHA-256(text || u32le(block))
/// words mapped to [-1, 1), then L2-normalized. Byte-identical texts map to
/// identical vectors; anything else is effectively random.
std::vector<float> hash_embedding(std::string_view text, std::uint32_t dim);

struct HashExport {
  EmbeddingStore store;
  std::vector<SidecarEntry> sidecar;
  EmbeddingManifest manifest;
  std::string bytes;
};

/// Sentence vectors for every segment plus a whole-document vector from
/// the full content, for each document in order.
HashExport export_hash_embeddings(const std::vector<Document> &docs, std::uint32_t dim);

/// Sentences file: {"doc_id", "index", "text", "tokens"} per line.
std::string sentences_to_jsonl(const std::vector<Document> &docs);

}  // namespace ccalign
