#include "ufnd/vectorize.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

#include <random>

using namespace ufnd;

namespace {

PreprocessedDoc doc(std::vector<std::string> tokens) {
  PreprocessedDoc d;
  d.char_stream.clear();
  for (size_t i = 0; i < tokens.size(); ++i) d.char_stream += (i ? " " : "") + tokens[i];
  d.tokens = std::move(tokens);
  return d;
}

NgramSpec words(std::set<int> orders) { return {orders, {}, true}; }

double at(const SparseMatrix& m, Eigen::Index r, Eigen::Index c) { return m.coeff(r, c); }

}  // namespace

TEST_CASE("word n-grams") {
  const std::vector<std::string> abc{"a", "b", "c"};
  CHECK(word_ngrams(abc, {2}) == std::vector<std::string>{"w2:a b", "w2:b c"});
  CHECK(word_ngrams({}, {1, 2, 3}).empty());
  for (size_t m = 1; m < 8; ++m) {
    const std::vector<std::string> toks(m, "x");
    CHECK(word_ngrams(toks, {1, 2}).size() == 2 * m - 1);
  }
}

TEST_CASE("char n-grams") {
  CHECK(char_ngrams("ab", {2}) == std::vector<std::string>{"c2:ab"});
  CHECK(char_ngrams("abc", {2}) == std::vector<std::string>{"c2:ab", "c2:bc"});
  CHECK(char_ngrams("abcd", {2, 3, 4, 5, 6}).size() == 6);
  // Windows are code points, not bytes.
  CHECK(char_ngrams("خبر", {2}) == std::vector<std::string>{"c2:خب", "c2:بر"});
}

TEST_CASE("char n-grams within tokens") {
  PreprocessedDoc d = doc({"ab", "cd"});
  CHECK(extract_terms(d, {{}, {2}, true}) == std::vector<std::string>{"c2:ab", "c2:b ", "c2: c", "c2:cd"});
  CHECK(extract_terms(d, {{}, {2}, false}) == std::vector<std::string>{"c2:ab", "c2:cd"});
}

TEST_CASE("namespacing keeps word and char terms apart") {
  const std::vector<PreprocessedDoc> docs{doc({"ab"})};
  const Vocabulary v = build_vocabulary(docs, {{1}, {2}, true});
  CHECK(v.size() == 2);
  CHECK(v.index_of("w1:ab").has_value());
  CHECK(v.index_of("c2:ab").has_value());
}

TEST_CASE("build_vocabulary") {
  const std::vector<PreprocessedDoc> docs{doc({"a", "b"}), doc({"a"})};
  const Vocabulary v = build_vocabulary(docs, words({1}));
  REQUIRE(v.size() == 2);
  CHECK(v.term(0) == "w1:a");
  CHECK(v.doc_freq(0) == 2);
  CHECK(v.term(1) == "w1:b");
  CHECK(v.doc_freq(1) == 1);
  CHECK(build_vocabulary(docs, words({1})) == v);

  // Index order does not depend on document order.
  const std::vector<PreprocessedDoc> swapped{doc({"a"}), doc({"a", "b"})};
  CHECK(build_vocabulary(swapped, words({1})).terms() == v.terms());
}

TEST_CASE("vocabulary grows with the order sets") {
  std::vector<PreprocessedDoc> docs{doc({"x", "y", "z", "x"}), doc({"z", "z", "y"})};
  const NgramSpec small{{1}, {2, 3}, true};
  const NgramSpec big{{1, 2}, {2, 3, 4}, true};
  CHECK(build_vocabulary(docs, small).size() <= build_vocabulary(docs, big).size());
}

TEST_CASE("idf values") {
  const std::vector<PreprocessedDoc> docs{doc({"a", "b"}), doc({"a", "a"})};
  const Vocabulary v = build_vocabulary(docs, words({1}));
  const TfIdfModel m = fit_tfidf(v);
  CHECK(m.idf[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.idf[1] == doctest::Approx(1.405465).epsilon(1e-6));
  for (int n = 1; n < 30; ++n) {
    const Vocabulary all({"w1:t"}, {n}, static_cast<size_t>(n));
    CHECK(fit_tfidf(all).idf[0] == 1.0);
  }
}

TEST_CASE("transform hand example") {
  const std::vector<PreprocessedDoc> docs{doc({"a", "b"}), doc({"a", "a"})};
  const Vocabulary v = build_vocabulary(docs, words({1}));
  const SparseMatrix x = transform(docs, v, fit_tfidf(v), words({1}));
  // Row 0 holds counts (1, 1) weighted by idf (1, ln 1.5 + 1).
  const double idf_b = std::log(1.5) + 1.0;
  const double norm = std::sqrt(1.0 + idf_b * idf_b);
  CHECK(at(x, 0, 0) == doctest::Approx(1.0 / norm).epsilon(1e-12));
  CHECK(at(x, 0, 1) == doctest::Approx(idf_b / norm).epsilon(1e-12));
  CHECK(at(x, 1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x.row(1).nonZeros() == 1);
}

TEST_CASE("empty and out-of-vocabulary docs give zero rows") {
  const std::vector<PreprocessedDoc> train{doc({"a", "b"})};
  const Vocabulary v = build_vocabulary(train, words({1}));
  const std::vector<PreprocessedDoc> test{doc({}), doc({"q", "r"})};
  const SparseMatrix x = transform(test, v, fit_tfidf(v), words({1}));
  CHECK(x.rows() == 2);
  CHECK(x.cols() == 2);
  CHECK(x.nonZeros() == 0);
}

TEST_CASE("transform matches a dense oracle on random corpora") {
  std::mt19937 rng(5);
  const std::vector<std::string> alphabet{"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<PreprocessedDoc> docs;
    std::vector<std::vector<std::string>> terms;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> toks;
      const int len = 1 + static_cast<int>(rng() % 7);
      for (int t = 0; t < len; ++t) toks.push_back(alphabet[rng() % alphabet.size()]);
      docs.push_back(doc(toks));
      terms.push_back(word_ngrams(toks, {1, 2}));
    }
    const NgramSpec spec = words({1, 2});
    const Vocabulary v = build_vocabulary(docs, spec);
    const SparseMatrix x = transform(docs, v, fit_tfidf(v), spec);
    const auto expected = oracle::tfidf_dense(terms);
    CHECK(x.cols() == static_cast<Eigen::Index>(v.size()));
    for (int i = 0; i < n; ++i) {
      double norm = 0.0;
      for (SparseMatrix::InnerIterator it(x, i); it; ++it) {
        CHECK(it.value() > 0.0);
        CHECK(it.value() == doctest::Approx(expected[i].at(v.term(it.col()))).epsilon(1e-12));
        norm += it.value() * it.value();
      }
      CHECK(static_cast<size_t>(x.row(i).nonZeros()) == expected[i].size());
      CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("vocabulary ctor validates") {
  CHECK_THROWS_AS(Vocabulary({"b", "a"}, {1, 1}, 2), ConfigError);
  CHECK_THROWS_AS(Vocabulary({"a"}, {3}, 2), ConfigError);
  CHECK_THROWS_AS((NgramSpec{{}, {}, true}.validate()), ConfigError);
  CHECK_THROWS_AS((NgramSpec{{0}, {}, true}.validate()), ConfigError);
  CHECK(NgramSpec{{1, 2, 3, 4}, {2, 3, 4, 5, 6}, true}.label() == "w1,2,3,4+c2,3,4,5,6");
}
