#pragma once

#include "ufnd/preprocess.hpp"
#include "ufnd/types.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace ufnd {

struct NgramSpec {
  std::set<int> word_orders;
  std::set<int> char_orders;
  /// Char n-grams run over the space-joined token stream when true, and
  /// within each token separately when false.
  bool char_across_tokens = true;

  /// Throws ConfigError unless at least one order set is non-empty and every
  /// order is in [1, 16].
  void validate() const;
  /// e.g. "w1,2,3,4+c2,3,4,5,6"
  std::string label() const;

  bool operator==(const NgramSpec&) const = default;
};

/// Word n-grams prefixed "w{n}:", ascending n then left to right.
std::vector<std::string> word_ngrams(std::span<const std::string> tokens, const std::set<int>& orders);
/// Code point windows prefixed "c{n}:", ascending n then left to right.
std::vector<std::string> char_ngrams(std::string_view char_stream, const std::set<int>& orders);
std::vector<std::string> extract_terms(const PreprocessedDoc& doc, const NgramSpec& spec);

/// Namespaced term -> column index. Indices follow lexicographic term order.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Throws ConfigError unless terms are strictly increasing and every
  /// df lies in [1, n_docs].
  Vocabulary(std::vector<std::string> terms, std::vector<int> doc_freq, size_t n_docs);

  size_t size() const { return terms_.size(); }
  size_t n_docs() const { return n_docs_; }
  const std::string& term(size_t index) const { return terms_[index]; }
  int doc_freq(size_t index) const { return doc_freq_[index]; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::vector<int>& doc_freqs() const { return doc_freq_; }
  std::optional<int> index_of(const std::string& term) const;

  /// term TAB index TAB df, sorted by index.
  void write_tsv(std::ostream& out) const;

  bool operator==(const Vocabulary& other) const {
    return n_docs_ == other.n_docs_ && terms_ == other.terms_ && doc_freq_ == other.doc_freq_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<int> doc_freq_;
  size_t n_docs_ = 0;
  std::unordered_map<std::string, int> index_;
};

/// Throws ConfigError if `docs` is empty or yields no terms at all.
Vocabulary build_vocabulary(std::span<const PreprocessedDoc> docs, const NgramSpec& spec);

struct TfIdfModel {
  Eigen::VectorXd idf;  // ln((1 + N) / (1 + df)) + 1
};

TfIdfModel fit_tfidf(const Vocabulary& vocabulary);

/// Raw counts times idf, then L2-normalized per row. Out-of-vocabulary terms
/// are ignored; rows without known terms stay empty.
SparseMatrix transform(std::span<const PreprocessedDoc> docs, const Vocabulary& vocabulary,
                       const TfIdfModel& model, const NgramSpec& spec);

}  // namespace ufnd
