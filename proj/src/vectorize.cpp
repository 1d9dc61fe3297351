#include "ufnd/vectorize.hpp"

#include "ufnd/utf8.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <unordered_set>

namespace ufnd {

void NgramSpec::validate() const {
  if (word_orders.empty() && char_orders.empty()) throw ConfigError("n-gram spec has no word or char orders");
  for (const auto* orders : {&word_orders, &char_orders}) {
    for (int n : *orders) {
      if (n < 1 || n > 16) throw ConfigError("n-gram order " + std::to_string(n) + " outside [1, 16]");
    }
  }
}

std::string NgramSpec::label() const {
  auto join = [](const std::set<int>& orders) {
    std::string out;
    for (int n : orders) {
      if (!out.empty()) out += ',';
      out += std::to_string(n);
    }
    return out;
  };
  std::string out;
  if (!word_orders.empty()) out += "w" + join(word_orders);
  if (!char_orders.empty()) out += (out.empty() ? "c" : "+c") + join(char_orders);
  return out;
}

std::vector<std::string> word_ngrams(std::span<const std::string> tokens, const std::set<int>& orders) {
  std::vector<std::string> terms;
  for (int n : orders) {
    const auto width = static_cast<size_t>(n);
    if (width == 0 || tokens.size() < width) continue;
    const std::string prefix = "w" + std::to_string(n) + ":";
    for (size_t i = 0; i + width <= tokens.size(); ++i) {
      std::string term = prefix;
      for (size_t j = 0; j < width; ++j) {
        if (j > 0) term.push_back(' ');
        term += tokens[i + j];
      }
      terms.push_back(std::move(term));
    }
  }
  return terms;
}

std::vector<std::string> char_ngrams(std::string_view char_stream, const std::set<int>& orders) {
  // Re-encode once, recording the byte offset of every code point boundary,
  // so each window is a plain substring.
  std::string normalized;
  std::vector<size_t> bounds{0};
  for (char32_t c : utf8::decode(char_stream)) {
    utf8::append(normalized, c);
    bounds.push_back(normalized.size());
  }
  const size_t length = bounds.size() - 1;
  std::vector<std::string> terms;
  for (int n : orders) {
    const auto width = static_cast<size_t>(n);
    if (width == 0 || length < width) continue;
    const std::string prefix = "c" + std::to_string(n) + ":";
    for (size_t i = 0; i + width <= length; ++i) {
      terms.push_back(prefix + normalized.substr(bounds[i], bounds[i + width] - bounds[i]));
    }
  }
  return terms;
}

std::vector<std::string> extract_terms(const PreprocessedDoc& doc, const NgramSpec& spec) {
  auto terms = word_ngrams(doc.tokens, spec.word_orders);
  if (spec.char_orders.empty()) return terms;
  if (spec.char_across_tokens) {
    auto chars = char_ngrams(doc.char_stream, spec.char_orders);
    terms.insert(terms.end(), std::make_move_iterator(chars.begin()), std::make_move_iterator(chars.end()));
  } else {
    for (const auto& token : doc.tokens) {
      auto chars = char_ngrams(token, spec.char_orders);
      terms.insert(terms.end(), std::make_move_iterator(chars.begin()), std::make_move_iterator(chars.end()));
    }
  }
  return terms;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<int> doc_freq, size_t n_docs)
    : terms_(std::move(terms)), doc_freq_(std::move(doc_freq)), n_docs_(n_docs) {
  if (terms_.size() != doc_freq_.size()) throw ConfigError("vocabulary term/df length mismatch");
  index_.reserve(terms_.size());
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (i > 0 && !(terms_[i - 1] < terms_[i])) throw ConfigError("vocabulary terms not strictly increasing");
    if (doc_freq_[i] < 1 || static_cast<size_t>(doc_freq_[i]) > n_docs_) {
      throw ConfigError("document frequency out of range for term '" + terms_[i] + "'");
    }
    index_.emplace(terms_[i], static_cast<int>(i));
  }
}

std::optional<int> Vocabulary::index_of(const std::string& term) const {
  const auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void Vocabulary::write_tsv(std::ostream& out) const {
  for (size_t i = 0; i < terms_.size(); ++i) out << terms_[i] << '\t' << i << '\t' << doc_freq_[i] << '\n';
}

Vocabulary build_vocabulary(std::span<const PreprocessedDoc> docs, const NgramSpec& spec) {
  spec.validate();
  if (docs.empty()) throw ConfigError("cannot build a vocabulary from an empty corpus");
  std::unordered_map<std::string, int> df;
  for (const auto& doc : docs) {
    auto terms = extract_terms(doc, spec);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& term : terms) ++df[std::move(term)];
  }
  if (df.empty()) throw ConfigError("vocabulary is empty: no document produced any n-gram");
  std::vector<std::pair<std::string, int>> entries(std::make_move_iterator(df.begin()),
                                                   std::make_move_iterator(df.end()));
  df.clear();
  std::sort(entries.begin(), entries.end());
  std::vector<std::string> terms;
  std::vector<int> freqs;
  terms.reserve(entries.size());
  freqs.reserve(entries.size());
  for (auto& [term, count] : entries) {
    terms.push_back(std::move(term));
    freqs.push_back(count);
  }
  return Vocabulary(std::move(terms), std::move(freqs), docs.size());
}

TfIdfModel fit_tfidf(const Vocabulary& vocabulary) {
  TfIdfModel model;
  const double n = static_cast<double>(vocabulary.n_docs());
  model.idf.resize(static_cast<Eigen::Index>(vocabulary.size()));
  for (size_t i = 0; i < vocabulary.size(); ++i) {
    model.idf[static_cast<Eigen::Index>(i)] = std::log((1.0 + n) / (1.0 + vocabulary.doc_freq(i))) + 1.0;
  }
  return model;
}

SparseMatrix transform(std::span<const PreprocessedDoc> docs, const Vocabulary& vocabulary,
                       const TfIdfModel& model, const NgramSpec& spec) {
  if (static_cast<size_t>(model.idf.size()) != vocabulary.size()) {
    throw ConfigError("tf-idf model does not match the vocabulary");
  }
  std::vector<std::vector<std::pair<int, double>>> rows(docs.size());
  size_t nnz = 0;
  for (size_t r = 0; r < docs.size(); ++r) {
    std::unordered_map<int, int> counts;
    for (const auto& term : extract_terms(docs[r], spec)) {
      if (const auto index = vocabulary.index_of(term)) ++counts[*index];
    }
    auto& row = rows[r];
    row.reserve(counts.size());
    for (const auto& [index, count] : counts) row.emplace_back(index, count * model.idf[index]);
    std::sort(row.begin(), row.end());
    double norm = 0.0;
    for (const auto& entry : row) norm += entry.second * entry.second;
    if (norm > 0.0) {
      norm = std::sqrt(norm);
      for (auto& entry : row) entry.second /= norm;
    }
    nnz += row.size();
  }

  SparseMatrix matrix(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(vocabulary.size()));
  matrix.reserve(static_cast<Eigen::Index>(nnz));
  for (size_t r = 0; r < rows.size(); ++r) {
    matrix.startVec(static_cast<Eigen::Index>(r));
    for (const auto& [col, value] : rows[r]) matrix.insertBack(static_cast<Eigen::Index>(r), col) = value;
  }
  matrix.finalize();
  return matrix;
}

}  // namespace ufnd
