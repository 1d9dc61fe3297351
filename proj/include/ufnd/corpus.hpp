#pragma once

#include "ufnd/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ufnd {

struct Document {
  std::string id;
  std::string text;
  std::optional<Label> label;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  Split split = Split::Train;

  size_t size() const { return documents.size(); }
  bool empty() const { return documents.empty(); }
  /// Throws if any document is unlabeled.
  std::vector<Label> labels() const;

  bool operator==(const Corpus&) const = default;
};

/// Reads a 3-column TSV (id, label, text). Labels are case-insensitive
/// "fake"/"real"; the label column may be empty only for Split::Unlabeled.
/// Empty lines are skipped. Errors carry the 1-based line number.
Corpus load_corpus(const std::filesystem::path& path, Split split);
Corpus parse_corpus(std::istream& in, Split split, const std::string& source = "<stream>");

/// Tabs and newlines inside text are replaced by spaces.
void write_corpus(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus);

struct SplitExpectation {
  size_t total = 0;
  std::map<Label, size_t> per_label;
};

/// Train/test counts of the 2021 shared-task release.
SplitExpectation shared_task_train_expectation();
SplitExpectation shared_task_test_expectation();

struct ValidationReport {
  enum class Status { Pass, Warn };

  struct Row {
    std::string name;
    size_t expected = 0;
    size_t actual = 0;
    long long delta() const { return static_cast<long long>(actual) - static_cast<long long>(expected); }
  };

  Status status = Status::Warn;
  std::vector<Row> rows;  // "total" first, then one row per label

  bool passed() const { return status == Status::Pass; }
  std::string to_text() const;
  std::string to_key_value() const;
};

ValidationReport validate_split(const Corpus& corpus, const SplitExpectation& expected);

struct SyntheticSpec {
  uint64_t seed = 7;
  size_t per_class = 50;
  std::vector<std::string> fake_pool;
  std::vector<std::string> real_pool;
  std::vector<std::string> noise_pool;
  size_t min_len = 12;
  size_t max_len = 30;
  double noise_rate = 0.15;

  /// Disjoint pseudo-Urdu pools built from non-overlapping letter sets.
  static SyntheticSpec with_default_pools(uint64_t seed, size_t per_class);
};

/// Documents alternate Fake, Real, Fake, ... so that a prefix of 2n documents
/// holds n per class. Throws ConfigError if the class pools overlap or are empty.
Corpus generate_synthetic(const SyntheticSpec& spec, Split split = Split::Train);

/// Splits an alternating synthetic corpus into its first `head_per_class`
/// documents of each label and the rest.
std::pair<Corpus, Corpus> split_per_class(const Corpus& corpus, size_t head_per_class);

}  // namespace ufnd
