#pragma once

#include "ufnd/corpus.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ufnd {

struct PreprocessConfig {
  bool remove_diacritics = true;
  bool normalize = true;
  bool remove_stopwords = true;
  bool lemmatize = true;

  bool operator==(const PreprocessConfig&) const = default;
};

struct PreprocessedDoc {
  std::vector<std::string> tokens;
  std::string char_stream;  // tokens joined by single spaces

  bool operator==(const PreprocessedDoc&) const = default;
};

/// Code point substitution applied after NFC. No target may also be a source.
class NormalizationMap {
 public:
  NormalizationMap() = default;
  /// Throws ConfigError if the mapping is cyclic (some target is also a source).
  explicit NormalizationMap(std::map<char32_t, char32_t> mapping);

  /// Yeh, Kaf, Heh, Teh Marbuta and Alef variants folded to their Urdu forms.
  static NormalizationMap urdu_default();
  /// Two columns of U+XXXX code points; '#' comments and blank lines ignored.
  static NormalizationMap load(const std::filesystem::path& path);
  static NormalizationMap parse(std::istream& in, const std::string& source = "<stream>");
  void write(std::ostream& out) const;

  char32_t apply(char32_t c) const {
    const auto it = mapping_.find(c);
    return it == mapping_.end() ? c : it->second;
  }
  const std::map<char32_t, char32_t>& entries() const { return mapping_; }
  bool empty() const { return mapping_.empty(); }

 private:
  std::map<char32_t, char32_t> mapping_;
};

class StopwordList {
 public:
  StopwordList() = default;
  explicit StopwordList(std::unordered_set<std::string> words) : words_(std::move(words)) {}

  /// One token per line; lines starting with '#' are ignored.
  static StopwordList load(const std::filesystem::path& path);
  static StopwordList parse(std::istream& in);

  bool contains(const std::string& token) const { return words_.count(token) != 0; }
  size_t size() const { return words_.size(); }
  std::vector<std::string> sorted() const;

 private:
  std::unordered_set<std::string> words_;
};

/// Surface form -> lemma lookup with identity fallback.
class LemmaTable {
 public:
  LemmaTable() = default;
  explicit LemmaTable(std::unordered_map<std::string, std::string> entries) : entries_(std::move(entries)) {}

  /// surface TAB lemma per line; '#' comments and blank lines ignored.
  static LemmaTable load(const std::filesystem::path& path);
  static LemmaTable parse(std::istream& in, const std::string& source = "<stream>");

  const std::string& lookup(const std::string& surface) const {
    const auto it = entries_.find(surface);
    return it == entries_.end() ? surface : it->second;
  }
  size_t size() const { return entries_.size(); }
  std::vector<std::pair<std::string, std::string>> sorted() const;

 private:
  std::unordered_map<std::string, std::string> entries_;
};

struct PreprocessResources {
  StopwordList stopwords;
  LemmaTable lemmas;
  NormalizationMap normalization = NormalizationMap::urdu_default();
};

/// True for harakat, superscript alef and Quranic annotation marks.
bool is_strippable_mark(char32_t c);

std::string remove_diacritics(std::string_view text);
/// NFC, then code point substitution through `mapping`. The pair is repeated
/// until stable so the result is a fixed point of this function.
std::string normalize_chars(std::string_view text, const NormalizationMap& mapping);
std::vector<std::string> tokenize(std::string_view text);
std::vector<std::string> remove_stopwords(std::vector<std::string> tokens, const StopwordList& list);
std::vector<std::string> lemmatize(std::vector<std::string> tokens, const LemmaTable& table);

/// Stage order is fixed: diacritics, normalization, tokenization, stopwords,
/// lemmatization. Disabled stages are skipped; tokenization always runs.
PreprocessedDoc preprocess(std::string_view text, const PreprocessConfig& config,
                           const PreprocessResources& resources);
inline PreprocessedDoc preprocess(const Document& doc, const PreprocessConfig& config,
                                  const PreprocessResources& resources) {
  return preprocess(doc.text, config, resources);
}
std::vector<PreprocessedDoc> preprocess_corpus(const Corpus& corpus, const PreprocessConfig& config,
                                               const PreprocessResources& resources);

}  // namespace ufnd
