#include "ufnd/preprocess.hpp"

#include "ufnd/utf8.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

namespace ufnd {

namespace {

std::ifstream open_resource(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open resource file " + path.string());
  return in;
}

bool skip_line(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line.empty() || line.front() == '#';
}

std::string nfc(std::string_view text) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw ConfigError("ICU NFC normalizer unavailable");
  const auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) return std::string(text);
  status = U_ZERO_ERROR;
  const icu::UnicodeString result = normalizer->normalize(source, status);
  if (U_FAILURE(status)) throw ConfigError("NFC normalization failed");
  std::string out;
  result.toUTF8String(out);
  return out;
}

}  // namespace

NormalizationMap::NormalizationMap(std::map<char32_t, char32_t> mapping) : mapping_(std::move(mapping)) {
  for (const auto& [source, target] : mapping_) {
    if (mapping_.count(target)) {
      throw ConfigError("cyclic normalization map: target " + utf8::format_code_point(target) +
                        " of " + utf8::format_code_point(source) + " is also a source");
    }
  }
}

NormalizationMap NormalizationMap::urdu_default() {
  return NormalizationMap({
      {0x064A, 0x06CC},  // ARABIC YEH -> FARSI YEH
      {0x0649, 0x06CC},  // ALEF MAKSURA -> FARSI YEH
      {0x06D0, 0x06CC},  // YEH E -> FARSI YEH
      {0x0643, 0x06A9},  // ARABIC KAF -> KEHEH
      {0x0647, 0x06C1},  // ARABIC HEH -> HEH GOAL
      {0x06D5, 0x06C1},  // AE -> HEH GOAL
      {0x06C0, 0x06C2},  // HEH WITH YEH ABOVE -> HEH GOAL WITH HAMZA ABOVE
      {0x0629, 0x06C3},  // TEH MARBUTA -> TEH MARBUTA GOAL
      {0x0671, 0x0627},  // ALEF WASLA -> ALEF
      {0x0672, 0x0627},  // ALEF WITH WAVY HAMZA ABOVE -> ALEF
      {0x0673, 0x0627},  // ALEF WITH WAVY HAMZA BELOW -> ALEF
      {0x0675, 0x0627},  // HIGH HAMZA ALEF -> ALEF
  });
}

NormalizationMap NormalizationMap::parse(std::istream& in, const std::string& source) {
  std::map<char32_t, char32_t> mapping;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected two tab-separated code points");
    }
    try {
      mapping[utf8::parse_code_point(utf8::trim(line.substr(0, tab)))] =
          utf8::parse_code_point(utf8::trim(line.substr(tab + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return NormalizationMap(std::move(mapping));
}

NormalizationMap NormalizationMap::load(const std::filesystem::path& path) {
  auto in = open_resource(path);
  return parse(in, path.string());
}

void NormalizationMap::write(std::ostream& out) const {
  for (const auto& [source, target] : mapping_) {
    out << utf8::format_code_point(source) << '\t' << utf8::format_code_point(target) << '\n';
  }
}

StopwordList StopwordList::parse(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    auto word = utf8::trim(line);
    if (!word.empty()) words.insert(std::move(word));
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::load(const std::filesystem::path& path) {
  auto in = open_resource(path);
  return parse(in);
}

std::vector<std::string> StopwordList::sorted() const {
  std::vector<std::string> out(words_.begin(), words_.end());
  std::sort(out.begin(), out.end());
  return out;
}

LemmaTable LemmaTable::parse(std::istream& in, const std::string& source) {
  std::unordered_map<std::string, std::string> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_line(line)) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'surface<TAB>lemma'");
    }
    auto surface = utf8::trim(line.substr(0, tab));
    auto lemma = utf8::trim(line.substr(tab + 1));
    if (surface.empty() || lemma.empty()) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": empty surface form or lemma");
    }
    if (tokenize(lemma).size() != 1) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": lemma contains whitespace");
    }
    entries[std::move(surface)] = std::move(lemma);
  }
  return LemmaTable(std::move(entries));
}

LemmaTable LemmaTable::load(const std::filesystem::path& path) {
  auto in = open_resource(path);
  return parse(in, path.string());
}

std::vector<std::pair<std::string, std::string>> LemmaTable::sorted() const {
  std::vector<std::pair<std::string, std::string>> out(entries_.begin(), entries_.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool is_strippable_mark(char32_t c) {
  return (c >= 0x0610 && c <= 0x061A) || (c >= 0x064B && c <= 0x065F) || c == 0x0670 ||
         (c >= 0x06D6 && c <= 0x06DC) || (c >= 0x06DF && c <= 0x06E4) || (c >= 0x06E7 && c <= 0x06E8) ||
         (c >= 0x06EA && c <= 0x06ED);
}

std::string remove_diacritics(std::string_view text) {
  auto cps = utf8::decode(text);
  std::erase_if(cps, is_strippable_mark);
  return utf8::encode(cps);
}

std::string normalize_chars(std::string_view text, const NormalizationMap& mapping) {
  // Substitution can place a base letter next to a combining mark that NFC
  // then composes (U+0647 U+0654 -> U+06C1 U+0654 -> U+06C2), so iterate.
  std::string current(text);
  for (int round = 0; round < 8; ++round) {
    auto cps = utf8::decode(nfc(current));
    for (auto& c : cps) c = mapping.apply(c);
    auto next = utf8::encode(cps);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string token;
  const auto* bytes = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c >= 0 && utf8::is_whitespace(static_cast<char32_t>(c))) {
      if (!token.empty()) tokens.push_back(std::move(token));
      token.clear();
    } else if (c < 0) {
      utf8::append(token, 0xFFFD);
    } else {
      token.append(text.substr(static_cast<size_t>(start), static_cast<size_t>(i - start)));
    }
  }
  if (!token.empty()) tokens.push_back(std::move(token));
  return tokens;
}

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const StopwordList& list) {
  std::erase_if(tokens, [&](const std::string& t) { return list.contains(t); });
  return tokens;
}

std::vector<std::string> lemmatize(std::vector<std::string> tokens, const LemmaTable& table) {
  for (auto& token : tokens) token = table.lookup(token);
  return tokens;
}

PreprocessedDoc preprocess(std::string_view text, const PreprocessConfig& config,
                           const PreprocessResources& resources) {
  std::string working(text);
  if (config.remove_diacritics) working = remove_diacritics(working);
  if (config.normalize) working = normalize_chars(working, resources.normalization);
  PreprocessedDoc doc;
  doc.tokens = tokenize(working);
  if (config.remove_stopwords) doc.tokens = remove_stopwords(std::move(doc.tokens), resources.stopwords);
  if (config.lemmatize) doc.tokens = lemmatize(std::move(doc.tokens), resources.lemmas);
  for (size_t i = 0; i < doc.tokens.size(); ++i) {
    if (i > 0) doc.char_stream.push_back(' ');
    doc.char_stream += doc.tokens[i];
  }
  return doc;
}

std::vector<PreprocessedDoc> preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config,
                                               const PreprocessResources& resources) {
  std::vector<PreprocessedDoc> out;
  out.reserve(corpus.size());
  for (const auto& doc : corpus.documents) out.push_back(preprocess(doc, config, resources));
  return out;
}

}  // namespace ufnd
