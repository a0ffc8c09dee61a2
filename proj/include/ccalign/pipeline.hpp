#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ccalign {

inline constexpr std::string_view kToolkitVersion = "1.0.0";
inline constexpr std::string_view kFormatVersions = "embeddings CCAEMB1, documents jsonl/1, pairs tsv/1";

enum class Stage {
  dedup,
  langid,
  match_urls,
  align,
  eval,
  mine,
  agreement,
  sentences,
  embed_hash,
  build_profile,
};

std::string_view to_string(Stage s);
/// Throws Error(usage) for unknown names.
Stage parse_stage(std::string_view name);

/// Every stage's inputs, outputs and knobs. Keys mirror the CLI flags.
struct PipelineConfig {
  std::string in;
  std::string out;
  std::string docs;
  std::string embeddings;
  std::string profiles;
  std::string patterns;  // empty: built-in table
  std::string aligned;
  std::vector<std::string> pred;  // "path" or "lang=path"
  std::vector<std::string> gold;
  std::string tiers;               // CSV "lang,tier"
  std::optional<std::string> report;  // "-" prints to stdout
  std::string manifest = "auto";      // "auto": run_manifest.jsonl beside the output; "none": off
  std::string method = "slidf";
  std::string src_lang;
  std::string tgt_lang;
  std::string lang;  // eval label for unlabeled --pred/--gold, build-profile code
  std::size_t k = 4;
  double threshold = 1.06;
  bool intersect = false;
  std::uint32_t dim = 256;
  unsigned threads = 1;
};

struct StageResult {
  nlohmann::json report;
};

/// Runs one stage. Outputs are written atomically; the report (counts and
/// timing) is appended to the run manifest. Throws Error: code `usage` for
/// bad invocations, anything else for data or I/O problems.
StageResult run_stage(Stage stage, const PipelineConfig &config);

}  // namespace ccalign
