#include "fixtures.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#ifndef CCALIGN_BINARY
#define CCALIGN_BINARY "ccalign"
#endif

namespace fixture {

namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "ccalign-test-XXXXXX").string();
  if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

std::string quote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

CliResult run_cli(const std::vector<std::string> &args) {
  std::string cmd = quote(CCALIGN_BINARY);
  for (const auto &a : args) cmd += " " + quote(a);
  cmd += " 2>/dev/null";
  CliResult r;
  FILE *pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

ccalign::Document make_doc(const std::string &url, const std::string &content, const std::string &lang) {
  ccalign::Document d;
  d.url = url;
  d.normalized_url = ccalign::normalize_url(url);
  d.doc_id = d.normalized_url;
  d.domain = ccalign::extract_domain(d.normalized_url);
  d.content = content;
  if (!lang.empty()) d.lang = lang;
  return d;
}

const std::vector<UrlRow> &identifier_examples() {
  static const std::vector<UrlRow> rows{
      {"eng.aaa.com", "en", "aaa.com", "fr"},
      {"aaa.com/en-gb/b", "en", "aaa.com/zh-cn/b", "zh"},
      {"aaa.com/English/b", "en", "aaa.com/Yoruba/b", "yo"},
      {"aaa.com/b/en", "en", "aaa.com/b/vi", "vi"},
      {"aaa.com/b/", "en", "thai.aaa.com/b/", "th"},
      {"aaa.com/b&lang=english", "en", "aaa.com/b&lang=arabic", "ar"},
      {"aaa.com/b?lang=en", "en", "aaa.com/b?lang=fr", "fr"},
      {"aaa.com/b", "en", "aaa.com/b?lang=1", "de"},
  };
  return rows;
}

namespace {

const std::vector<std::string> kEnglish{
    "the",     "house",   "water",   "morning", "children", "garden", "would",   "through", "weather", "people",
    "should",  "which",   "there",   "their",   "quickly",  "bright", "kitchen", "window",  "station", "together",
    "nothing", "thought", "brought", "evening", "with",     "this",   "what",    "where",   "when",    "always",
    "little",  "friend",  "school",  "market",  "highway",  "think",  "thank",   "earth",   "worth",   "slowly"};

const std::vector<std::string> kFrench{
    "le",       "la",      "les",     "maison",     "eau",       "matin",    "enfants",  "jardin",
    "aujourd",  "quelque", "beaucoup", "toujours",  "pourquoi",  "chose",    "fenetre",  "cuisine",
    "gare",     "ensemble", "rien",    "pensee",     "soir",      "avec",     "cette",    "quoi",
    "ou",       "quand",   "petite",  "ami",        "ecole",     "marche",   "route",    "penser",
    "merci",    "terre",   "valeur",  "lentement",  "nous",      "vous",     "qui",      "que"};

const std::vector<std::string> &lexicon(const std::string &lang) {
  if (lang == "en") return kEnglish;
  if (lang == "fr") return kFrench;
  throw std::invalid_argument("no lexicon for " + lang);
}

}  // namespace

std::string prose(const std::string &lang, std::size_t words, std::mt19937 &rng) {
  const auto &lex = lexicon(lang);
  std::uniform_int_distribution<std::size_t> pick(0, lex.size() - 1);
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    if (i) out += ' ';
    out += lex[pick(rng)];
  }
  return out;
}

std::string training_text(const std::string &lang, std::size_t lines, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::string out;
  for (std::size_t i = 0; i < lines; ++i) out += prose(lang, 10, rng) + "\n";
  return out;
}

PlantedCorpus planted_corpus() {
  struct Domain {
    std::string host;
    std::size_t pairs;
  };
  const std::vector<Domain> domains{{"site-a.com", 4}, {"site-b.org", 5}, {"shop.site-c.net", 6}};
  std::mt19937 rng(20200701);
  PlantedCorpus c;
  auto emit = [&](const std::string &url, const std::string &content) {
    c.raw_jsonl += nlohmann::json{{"url", url}, {"content", content}, {"snapshot", "CC-TEST"}}.dump() + "\n";
    ++c.raw_records;
  };

  for (std::size_t d = 0; d < domains.size(); ++d) {
    const auto &dom = domains[d];
    const std::string boiler1 = fmt::format("(+{}0) 555 0199 / 12:00 - 18:00", d);
    const std::string boiler2 = fmt::format("# {} 2019 - 2020 * 404 *", d + 1);
    for (std::size_t i = 0; i < dom.pairs; ++i) {
      const std::string anchor1 = fmt::format("#{}{}1 : 4471 / 9923 = 0.{}{}7", d, i, d, i);
      const std::string anchor2 = fmt::format("[{}-{}] 31.{}.{} % 8812 + 650", d, i, i, d);
      auto page = [&](const std::string &lang, bool inflated) {
        std::string content = prose(lang, 14, rng) + "\n" + anchor1 + "\n" + anchor2 + "\n";
        const std::size_t reps = inflated ? 20 : 1;
        for (std::size_t r = 0; r < reps; ++r) content += boiler1 + "\n";
        content += boiler2;
        return content;
      };
      const std::string en_url = fmt::format("https://www.{}/en/page-{}", dom.host, i);
      const std::string fr_url = fmt::format("http://{}/fr/page-{}", dom.host, i);
      // in the first domain, en page 0 and fr page 1 are boilerplate-heavy
      const std::string en = page("en", d == 0 && i == 0);
      const std::string fr = page("fr", d == 0 && i == 1);
      emit(en_url, en);
      emit(fr_url, fr);
      if (i % 2 == 0) {
        // shorter re-crawl of the same page, under a different scheme/host spelling
        emit(fmt::format("http://{}/en/page-{}", dom.host, i), en.substr(0, en.size() / 2));
      }
      c.gold.emplace_back(ccalign::normalize_url(en_url), ccalign::normalize_url(fr_url));
      c.distinct_urls += 2;
    }
    // an English page without a French counterpart
    emit(fmt::format("https://{}/en/about", dom.host), prose("en", 14, rng) + "\n" + boiler1 + "\n" + boiler2);
    ++c.distinct_urls;
  }
  c.raw_jsonl += "{\"url\": \"ht tp://bad url\", \"content\": \"x\"}\n";
  ++c.raw_records;
  return c;
}

PlantedRun run_planted_pipeline(const TempDir &dir, const PlantedCorpus &corpus) {
  PlantedRun run;
  fs::create_directories(dir.path() / "profiles");
  write_text(dir / "raw.jsonl", corpus.raw_jsonl);
  write_text(dir / "en.txt", training_text("en", 300, 1));
  write_text(dir / "fr.txt", training_text("fr", 300, 2));
  std::string gold;
  for (const auto &[en, fr] : corpus.gold) gold += en + "\t" + fr + "\n";
  write_text(dir / "planted.tsv", gold);

  const std::vector<std::pair<std::string, std::vector<std::string>>> steps{
      {"profile-en", {"build-profile", "--lang", "en", "--in", dir / "en.txt", "--out", dir / "profiles/en.json"}},
      {"profile-fr", {"build-profile", "--lang", "fr", "--in", dir / "fr.txt", "--out", dir / "profiles/fr.json"}},
      {"dedup", {"dedup", "--in", dir / "raw.jsonl", "--out", dir / "docs.jsonl"}},
      {"langid", {"langid", "--profiles", dir / "profiles", "--in", dir / "docs.jsonl", "--out", dir / "tagged.jsonl"}},
      {"match-urls", {"match-urls", "--in", dir / "tagged.jsonl", "--out", dir / "pairs.tsv"}},
      {"embed-hash", {"embed-hash", "--docs", dir / "tagged.jsonl", "--dim", "256", "--out", dir / "emb.bin"}},
      {"align-slidf",
       {"align", "--method", "slidf", "--embeddings", dir / "emb.bin", "--docs", dir / "tagged.jsonl", "--src-lang",
        "en", "--tgt-lang", "fr", "--out", dir / "aligned_slidf.tsv"}},
      {"eval-slidf",
       {"eval", "--pred", "fr=" + dir / "aligned_slidf.tsv", "--gold", "fr=" + dir / "pairs.tsv", "--report",
        dir / "eval_slidf.json"}},
      {"align-sa",
       {"align", "--method", "sa", "--embeddings", dir / "emb.bin", "--docs", dir / "tagged.jsonl", "--src-lang", "en",
        "--tgt-lang", "fr", "--out", dir / "aligned_sa.tsv"}},
      {"eval-sa",
       {"eval", "--pred", "fr=" + dir / "aligned_sa.tsv", "--gold", "fr=" + dir / "pairs.tsv", "--report",
        dir / "eval_sa.json"}},
  };
  for (const auto &[name, args] : steps) {
    if (run_cli(args).exit_code != 0) {
      run.failed_step = name;
      return run;
    }
  }
  auto recall_of = [&](const std::string &file) {
    return nlohmann::json::parse(slurp(dir / file))["languages"]["fr"]["recall"].get<double>();
  };
  run.slidf_recall = recall_of("eval_slidf.json");
  run.sa_recall = recall_of("eval_sa.json");
  run.gold_pairs = corpus.gold.size();
  const auto pairs = slurp(dir / "pairs.tsv");
  run.url_pairs = static_cast<std::size_t>(std::count(pairs.begin(), pairs.end(), '\n'));
  return run;
}

std::vector<ccalign::RawDocument> duplicate_heavy_records(std::size_t records, std::size_t distinct,
                                                          std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> which(0, distinct - 1);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> letter('a', 'z');
  std::vector<ccalign::RawDocument> out;
  out.reserve(records);
  for (std::size_t r = 0; r < records; ++r) {
    const auto u = which(rng);
    ccalign::RawDocument doc;
    const char *prefix = (r % 3 == 0) ? "https://www." : (r % 3 == 1) ? "http://" : "";
    doc.url = fmt::format("{}host{}.example.com/p/{}", prefix, u % 17, u);
    // short lengths so equal-length ties are common
    const int n = len(rng);
    for (int i = 0; i < n; ++i) doc.content += static_cast<char>(letter(rng));
    doc.snapshot_id = fmt::format("CC-{}", r % 5);
    out.push_back(std::move(doc));
  }
  return out;
}

}  // namespace fixture
