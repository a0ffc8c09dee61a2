#include <cctype>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "ccalign/error.hpp"
#include "ccalign/pipeline.hpp"

namespace {

std::string env_name(std::string flag) {
  std::string out = "CCALIGN_";
  for (char c : flag) out += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

void log_line(std::string_view level, std::string_view stage, const nlohmann::json &fields) {
  nlohmann::json line{{"level", level}, {"stage", stage}};
  line.update(fields);
  std::cerr << line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) << '\n';
}

}  // namespace

int main(int argc, char **argv) {
  using ccalign::Stage;
  CLI::App app{"Parallel document alignment toolkit"};
  app.set_config("--config", "", "key = value configuration file; flags override it");
  app.set_version_flag("--version", fmt::format("ccalign {} ({})", ccalign::kToolkitVersion, ccalign::kFormatVersions));
  app.require_subcommand(1, 1);
  app.fallthrough();

  ccalign::PipelineConfig cfg;
  std::string report_arg;
  auto add = [&](const std::string &name, auto &target, const std::string &help) {
    return app.add_option("--" + name, target, help)->envname(env_name(name));
  };
  add("in", cfg.in, "input file");
  add("out", cfg.out, "output file");
  add("docs", cfg.docs, "document JSONL");
  add("embeddings", cfg.embeddings, "binary embedding file");
  add("profiles", cfg.profiles, "language profile directory");
  add("patterns", cfg.patterns, "pattern table JSON (default: built-in)");
  add("aligned", cfg.aligned, "aligned document pairs TSV");
  add("pred", cfg.pred, "predicted pairs TSV, optionally lang=path");
  add("gold", cfg.gold, "gold pairs TSV, optionally lang=path");
  add("tiers", cfg.tiers, "lang,tier CSV");
  auto *report_opt = add("report", report_arg, "emit the stage report (to a file when a path is given)")->expected(0, 1);
  add("manifest", cfg.manifest, "run manifest path, auto or none")->capture_default_str();
  add("method", cfg.method, "de, sa, sl, idf or slidf")->capture_default_str();
  add("src-lang", cfg.src_lang, "source language");
  add("tgt-lang", cfg.tgt_lang, "target language");
  add("lang", cfg.lang, "language code");
  add("k", cfg.k, "margin neighbourhood size")->capture_default_str();
  add("threshold", cfg.threshold, "margin threshold")->capture_default_str();
  app.add_flag("--intersect", cfg.intersect, "keep only mutual best sentence pairs")->envname("CCALIGN_INTERSECT");
  add("dim", cfg.dim, "hash embedding dimension")->capture_default_str();
  add("threads", cfg.threads, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));

  Stage stage = Stage::dedup;
  auto sub = [&](Stage s, const std::string &help) {
    app.add_subcommand(std::string(ccalign::to_string(s)), help)->callback([&stage, s] { stage = s; });
  };
  sub(Stage::dedup, "normalize URLs and deduplicate raw records");
  sub(Stage::langid, "tag documents with a language");
  sub(Stage::match_urls, "pair documents whose URLs differ only in language identifiers");
  sub(Stage::align, "embed documents and align them within each domain");
  sub(Stage::eval, "recall of aligned pairs against a gold set");
  sub(Stage::mine, "margin-based sentence mining within aligned pairs");
  sub(Stage::agreement, "Krippendorff's alpha over an annotation CSV");
  sub(Stage::sentences, "write the sentence JSONL for embedding export");
  sub(Stage::embed_hash, "deterministic hash embeddings for every sentence and document");
  sub(Stage::build_profile, "build a trigram profile from training text");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (report_opt->count() > 0) cfg.report = report_arg.empty() ? std::string("-") : report_arg;
  const auto name = ccalign::to_string(stage);
  try {
    auto result = ccalign::run_stage(stage, cfg);
    bool to_stdout = (cfg.report && *cfg.report == "-") || stage == Stage::agreement;
    if (to_stdout) std::cout << result.report.dump(2) << '\n';
    log_line("info", name, {{"status", "ok"}, {"report", result.report}});
    return 0;
  } catch (const ccalign::Error &e) {
    log_line("error", name, {{"status", "failed"}, {"code", ccalign::to_string(e.code())}, {"message", e.what()}});
    return e.code() == ccalign::ErrorCode::usage ? 1 : 2;
  } catch (const std::exception &e) {
    log_line("error", name, {{"status", "failed"}, {"code", "internal"}, {"message", e.what()}});
    return 2;
  }
}
