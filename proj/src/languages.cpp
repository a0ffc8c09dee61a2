#include "ccalign/languages.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "ccalign/util.hpp"

namespace ccalign {

namespace {

// clang-format off
constexpr LanguageInfo kLanguages[] = {
  {"af", "afr", "afrikaans"},   {"am", "amh", "amharic"},     {"ar", "ara", "arabic"},
  {"as", "asm", "assamese"},    {"ay", "aym", "aymara"},      {"az", "aze", "azerbaijani"},
  {"ba", "bak", "bashkir"},     {"be", "bel", "belarusian"},  {"bg", "bul", "bulgarian"},
  {"bn", "ben", "bengali"},     {"bo", "bod", "tibetan"},     {"br", "bre", "breton"},
  {"bs", "bos", "bosnian"},     {"ca", "cat", "catalan"},     {"ceb", "ceb", "cebuano"},
  {"co", "cos", "corsican"},    {"cs", "ces", "czech"},       {"cv", "chv", "chuvash"},
  {"cy", "cym", "welsh"},       {"da", "dan", "danish"},      {"de", "deu", "german"},
  {"el", "ell", "greek"},       {"en", "eng", "english"},     {"eo", "epo", "esperanto"},
  {"es", "spa", "spanish"},     {"et", "est", "estonian"},    {"eu", "eus", "basque"},
  {"fa", "fas", "persian"},     {"fi", "fin", "finnish"},     {"fil", "fil", "filipino"},
  {"fo", "fao", "faroese"},     {"fr", "fra", "french"},      {"fy", "fry", "frisian"},
  {"ga", "gle", "irish"},       {"gd", "gla", "gaelic"},      {"gl", "glg", "galician"},
  {"gn", "grn", "guarani"},     {"gu", "guj", "gujarati"},    {"ha", "hau", "hausa"},
  {"haw", "haw", "hawaiian"},   {"he", "heb", "hebrew"},      {"hi", "hin", "hindi"},
  {"hr", "hrv", "croatian"},    {"ht", "hat", "haitian"},     {"hu", "hun", "hungarian"},
  {"hy", "hye", "armenian"},    {"id", "ind", "indonesian"},  {"ig", "ibo", "igbo"},
  {"is", "isl", "icelandic"},   {"it", "ita", "italian"},     {"ja", "jpn", "japanese"},
  {"jv", "jav", "javanese"},    {"ka", "kat", "georgian"},    {"kk", "kaz", "kazakh"},
  {"km", "khm", "khmer"},       {"kn", "kan", "kannada"},     {"ko", "kor", "korean"},
  {"ku", "kur", "kurdish"},     {"ky", "kir", "kyrgyz"},      {"la", "lat", "latin"},
  {"lb", "ltz", "luxembourgish"}, {"ln", "lin", "lingala"},   {"lo", "lao", "lao"},
  {"lt", "lit", "lithuanian"},  {"lv", "lav", "latvian"},     {"mg", "mlg", "malagasy"},
  {"mi", "mri", "maori"},       {"mk", "mkd", "macedonian"},  {"ml", "mal", "malayalam"},
  {"mn", "mon", "mongolian"},   {"mr", "mar", "marathi"},     {"ms", "msa", "malay"},
  {"mt", "mlt", "maltese"},     {"my", "mya", "burmese"},     {"ne", "nep", "nepali"},
  {"nl", "nld", "dutch"},       {"no", "nor", "norwegian"},   {"oc", "oci", "occitan"},
  {"or", "ori", "oriya"},       {"pa", "pan", "punjabi"},     {"pl", "pol", "polish"},
  {"ps", "pus", "pashto"},      {"pt", "por", "portuguese"},  {"qu", "que", "quechua"},
  {"ro", "ron", "romanian"},    {"ru", "rus", "russian"},     {"rw", "kin", "kinyarwanda"},
  {"sd", "snd", "sindhi"},      {"si", "sin", "sinhala"},     {"sk", "slk", "slovak"},
  {"sl", "slv", "slovenian"},   {"sm", "smo", "samoan"},      {"sn", "sna", "shona"},
  {"so", "som", "somali"},      {"sq", "sqi", "albanian"},    {"sr", "srp", "serbian"},
  {"st", "sot", "sotho"},       {"su", "sun", "sundanese"},   {"sv", "swe", "swedish"},
  {"sw", "swa", "swahili"},     {"ta", "tam", "tamil"},       {"te", "tel", "telugu"},
  {"tg", "tgk", "tajik"},       {"th", "tha", "thai"},        {"ti", "tir", "tigrinya"},
  {"tk", "tuk", "turkmen"},     {"tl", "tgl", "tagalog"},     {"tn", "tsn", "tswana"},
  {"tr", "tur", "turkish"},     {"tt", "tat", "tatar"},       {"ug", "uig", "uyghur"},
  {"uk", "ukr", "ukrainian"},   {"ur", "urd", "urdu"},        {"uz", "uzb", "uzbek"},
  {"vi", "vie", "vietnamese"},  {"wo", "wol", "wolof"},       {"xh", "xho", "xhosa"},
  {"yi", "yid", "yiddish"},     {"yo", "yor", "yoruba"},      {"zh", "zho", "chinese"},
  {"zu", "zul", "zulu"},
};

// Common alternates: bibliographic 639-2 codes and frequent English aliases.
struct Alias {
  std::string_view alias;
  std::string_view iso1;
};
constexpr Alias kCodeAliases[] = {
  {"ger", "de"}, {"fre", "fr"}, {"chi", "zh"}, {"cze", "cs"}, {"dut", "nl"}, {"gre", "el"},
  {"rum", "ro"}, {"slo", "sk"}, {"alb", "sq"}, {"arm", "hy"}, {"wel", "cy"}, {"baq", "eu"},
};
constexpr Alias kNameAliases[] = {
  {"farsi", "fa"}, {"mandarin", "zh"}, {"castellano", "es"}, {"espanol", "es"},
  {"francais", "fr"}, {"deutsch", "de"}, {"nederlands", "nl"}, {"italiano", "it"},
  {"portugues", "pt"}, {"myanmar", "my"},
};
// clang-format on

const LanguageInfo *find_iso1(std::string_view iso1) {
  auto it = std::find_if(std::begin(kLanguages), std::end(kLanguages),
                         [&](const LanguageInfo &l) { return l.iso1 == iso1; });
  return it == std::end(kLanguages) ? nullptr : &*it;
}

}  // namespace

const LanguageInfo *language_by_code(std::string_view code) {
  if (code.size() < 2 || code.size() > 3) return nullptr;
  auto lower = ascii_lower(code);
  for (const auto &l : kLanguages) {
    if (l.iso1 == lower || l.iso3 == lower) return &l;
  }
  for (const auto &a : kCodeAliases) {
    if (a.alias == lower) return find_iso1(a.iso1);
  }
  return nullptr;
}

const LanguageInfo *language_by_name(std::string_view name) {
  if (name.size() < 3) return nullptr;
  auto lower = ascii_lower(name);
  for (const auto &l : kLanguages) {
    if (l.name == lower) return &l;
  }
  for (const auto &a : kNameAliases) {
    if (a.alias == lower) return find_iso1(a.iso1);
  }
  return nullptr;
}

const LanguageInfo *language_by_locale(std::string_view locale) {
  auto sep = locale.find_first_of("-_");
  if (sep == std::string_view::npos) return nullptr;
  auto region = locale.substr(sep + 1);
  if (region.size() < 2 || region.size() > 4) return nullptr;
  if (!std::all_of(region.begin(), region.end(),
                   [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }))
    return nullptr;
  return language_by_code(locale.substr(0, sep));
}

std::string canonical_language(std::string_view code) {
  auto primary = code.substr(0, code.find_first_of("-_"));
  if (const auto *l = language_by_code(primary)) return std::string(l->iso1);
  return ascii_lower(primary);
}

}  // namespace ccalign
