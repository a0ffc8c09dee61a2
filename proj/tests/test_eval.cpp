#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "ccalign/error.hpp"
#include "ccalign/eval.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ccalign;

namespace {

GoldSet gold4() {
  return make_gold_set({{"a.com/en/1", "a.com/fr/1"}, {"a.com/en/2", "a.com/fr/2"}, {"a.com/en/3", "a.com/fr/3"},
                        {"a.com/en/4", "a.com/fr/4"}},
                       "fr");
}

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::usage;
}

AnnotationTable table_of(const std::vector<std::array<std::string, 3>> &rows) {
  AnnotationTable t;
  for (const auto &r : rows) t.add(r[0], r[1], r[2]);
  return t;
}

std::vector<oracle::Rating> ratings_of(const AnnotationTable &t) {
  std::vector<oracle::Rating> out;
  for (const auto &[key, label] : t.ratings) out.push_back({key.first, label});
  return out;
}

}  // namespace

TEST_CASE("recall examples") {
  auto g = gold4();
  std::vector<UrlPair> all(g.pairs.begin(), g.pairs.end());
  all.emplace_back("a.com/en/9", "a.com/fr/9");
  CHECK(recall(all, g) == 1.0);
  std::vector<UrlPair> three(g.pairs.begin(), std::next(g.pairs.begin(), 3));
  CHECK(recall(three, g) == 0.75);
  CHECK(recall(std::vector<UrlPair>{}, g) == 0.0);
  CHECK(code_of([] { recall(std::vector<UrlPair>{}, GoldSet{}); }) == ErrorCode::undefined_metric);
}

TEST_CASE("pairs are unordered and counted once") {
  auto g = gold4();
  std::vector<UrlPair> flipped{{"a.com/fr/1", "a.com/en/1"}, {"a.com/en/1", "a.com/fr/1"}};
  CHECK(recall(flipped, g) == 0.25);
  Alignment a{{{"a.com/fr/2", "a.com/en/2", 0.9}}};
  CHECK(recall(a, g) == 0.25);
}

TEST_CASE("recall is monotone") {
  auto g = gold4();
  std::vector<UrlPair> pred;
  double last = recall(pred, g);
  for (const auto &p : g.pairs) {
    pred.emplace_back("x.com/a" + std::to_string(pred.size()), "x.com/b");
    CHECK(recall(pred, g) == last);
    pred.push_back(p);
    CHECK(recall(pred, g) >= last);
    last = recall(pred, g);
  }
  CHECK(last == 1.0);
}

TEST_CASE("macro_average") {
  CHECK(macro_average({{"fr", 0.84}}) == 0.84);
  CHECK(macro_average({{"a", 0.2}, {"b", 0.6}}) == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(code_of([] { macro_average({}); }) == ErrorCode::undefined_metric);
}

TEST_CASE("load_url_pairs normalizes and tolerates a score column") {
  fixture::TempDir dir;
  fixture::write_text(dir / "p.tsv", "https://www.a.com/en/1\thttp://a.com/fr/1\t0.91\n\nA.com/x\ta.com/y\n");
  auto pairs = load_url_pairs(dir / "p.tsv");
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0] == UrlPair("a.com/en/1", "a.com/fr/1"));
  CHECK(pairs[1] == UrlPair("a.com/y", "a.com/x"));
  fixture::write_text(dir / "bad.tsv", "only-one-column\n");
  CHECK(code_of([&] { load_url_pairs(dir / "bad.tsv"); }) == ErrorCode::format);
}

TEST_CASE("krippendorff alpha fixtures") {
  auto perfect = table_of({{"u1", "r1", "1"}, {"u1", "r2", "1"}, {"u2", "r1", "0"}, {"u2", "r2", "0"},
                           {"u3", "r1", "1"}, {"u3", "r2", "1"}, {"u3", "r3", "1"}});
  CHECK(krippendorff_alpha(perfect) == 1.0);
  auto opposed = table_of({{"u1", "r1", "0"}, {"u1", "r2", "1"}, {"u2", "r1", "1"}, {"u2", "r2", "0"}});
  CHECK(std::abs(krippendorff_alpha(opposed) - (-0.5)) <= 1e-12);
}

TEST_CASE("alpha agrees with pairwise counting") {
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> label(0, 2);
  std::bernoulli_distribution missing(0.2);
  for (int t = 0; t < 100; ++t) {
    AnnotationTable table;
    for (int u = 0; u < 12; ++u) {
      for (int r = 0; r < 3; ++r) {
        if (!missing(rng)) table.add("u" + std::to_string(u), "r" + std::to_string(r), std::to_string(label(rng)));
      }
    }
    double a;
    try {
      a = krippendorff_alpha(table);
    } catch (const Error &) {
      continue;
    }
    CHECK(std::abs(a - oracle::alpha_pairwise(ratings_of(table))) <= 1e-12);
    CHECK(a <= 1.0);
  }
}

TEST_CASE("alpha is invariant to relabeling and rater permutation") {
  auto base = table_of({{"u1", "r1", "a"}, {"u1", "r2", "b"}, {"u1", "r3", "a"}, {"u2", "r1", "b"},
                        {"u2", "r2", "b"}, {"u3", "r1", "c"}, {"u3", "r2", "a"}, {"u3", "r3", "c"},
                        {"u4", "r2", "a"}});
  auto relabeled = table_of({{"u1", "r1", "z"}, {"u1", "r2", "y"}, {"u1", "r3", "z"}, {"u2", "r1", "y"},
                             {"u2", "r2", "y"}, {"u3", "r1", "x"}, {"u3", "r2", "z"}, {"u3", "r3", "x"},
                             {"u4", "r2", "z"}});
  auto permuted = table_of({{"u1", "r3", "a"}, {"u1", "r1", "b"}, {"u1", "r2", "a"}, {"u2", "r3", "b"},
                            {"u2", "r1", "b"}, {"u3", "r3", "c"}, {"u3", "r1", "a"}, {"u3", "r2", "c"},
                            {"u4", "r1", "a"}});
  const double a = krippendorff_alpha(base);
  CHECK(std::abs(krippendorff_alpha(relabeled) - a) <= 1e-12);
  CHECK(std::abs(krippendorff_alpha(permuted) - a) <= 1e-12);
}

TEST_CASE("alpha preconditions") {
  CHECK(code_of([] { krippendorff_alpha(table_of({{"u1", "r1", "a"}, {"u2", "r1", "b"}})); }) ==
        ErrorCode::insufficient_data);
  CHECK(code_of([] { krippendorff_alpha(table_of({{"u1", "r1", "a"}, {"u1", "r2", "b"}, {"u2", "r1", "a"}})); }) ==
        ErrorCode::insufficient_data);
}

TEST_CASE("annotation CSV") {
  auto t = parse_annotation_csv("unit_id,rater_id,label\nu1, r1, yes\nu1,r2,no\n\n");
  CHECK(t.ratings.size() == 2);
  CHECK(t.units() == std::vector<std::string>{"u1"});
  CHECK(t.raters() == std::vector<std::string>{"r1", "r2"});
  CHECK(t.ratings.at({"u1", "r1"}) == "yes");
  CHECK(parse_annotation_csv("u1,r1,label\nu1,r2,label\n").ratings.size() == 1);
  CHECK(code_of([] { parse_annotation_csv("u1,r1\n"); }) == ErrorCode::format);
}

TEST_CASE("evaluate") {
  auto g = gold4();
  std::vector<UrlPair> perfect(g.pairs.begin(), g.pairs.end());
  auto one = evaluate({{"fr", perfect}}, {{"fr", g}});
  CHECK(one.languages.at("fr").recall == 1.0);
  CHECK(one.macro_average == 1.0);
  CHECK(one.warnings.empty());

  auto g5 = make_gold_set({{"b.com/1", "b.com/2"}, {"b.com/3", "b.com/4"}, {"b.com/5", "b.com/6"},
                           {"b.com/7", "b.com/8"}, {"b.com/9", "b.com/0"}},
                          "de");
  std::vector<UrlPair> three(g5.pairs.begin(), std::next(g5.pairs.begin(), 3));
  std::vector<UrlPair> one_of_five(g5.pairs.begin(), std::next(g5.pairs.begin(), 1));
  auto two = evaluate({{"de", three}, {"fr", one_of_five}},
                      {{"de", g5}, {"fr", make_gold_set({*g5.pairs.begin(), {"z.com/1", "z.com/2"},
                                                         {"z.com/3", "z.com/4"}, {"z.com/5", "z.com/6"},
                                                         {"z.com/7", "z.com/8"}},
                                                        "fr")}},
                      {{"de", "high"}, {"fr", "low"}});
  CHECK(two.languages.at("de").recall == doctest::Approx(0.6));
  CHECK(two.languages.at("fr").recall == doctest::Approx(0.2));
  CHECK(two.macro_average == doctest::Approx(0.4).epsilon(1e-15));
  CHECK(two.tier_macro_average.at("high") == doctest::Approx(0.6));
  CHECK(two.languages.at("de").found == 3);

  auto missing = evaluate({}, {{"fr", g}});
  CHECK(missing.languages.at("fr").recall == 0.0);
  CHECK(missing.warnings.size() == 1);

  auto j = two.to_json();
  CHECK(j["languages"]["de"]["gold"] == 5);
  CHECK(j["tiers"]["low"].get<double>() == doctest::Approx(0.2));
}
