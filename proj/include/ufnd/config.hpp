#pragma once

#include "ufnd/cnn.hpp"
#include "ufnd/preprocess.hpp"
#include "ufnd/vectorize.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ufnd {

enum class ClassifierKind { Svm, Cnn };

std::string_view classifier_name(ClassifierKind kind);

struct SvmParams {
  double C = 1.0;
  double gamma = 0.0;  // 0 selects 1 / (number of selected features)
  double coef0 = 0.0;
  int degree = 1;
  double tol = 1e-3;
  int max_passes = 200;
  size_t cache_mb = 256;

  bool operator==(const SvmParams&) const = default;
};

struct CnnParams {
  SequenceUnit unit = SequenceUnit::Word;
  std::vector<int> channels{1, 2, 3, 4};
  int embed_dim = 100;
  int filters = 32;
  int hidden = 10;
  int pool = 2;
  size_t max_len = 0;  // 0 = min(longest training doc, unit cap)
  int epochs = 7;
  int batch_size = 16;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  double embedding_dropout = 0.0;

  TrainConfig train_config(uint64_t seed) const;
  bool operator==(const CnnParams&) const = default;
};

/// One [experiment] block. An SVM block yields one result row per K value;
/// a CNN block yields a single row and ignores `k_values`.
struct ExperimentConfig {
  std::string name;
  PreprocessConfig preprocess;
  NgramSpec ngrams{{1, 2, 3, 4}, {2, 3, 4, 5, 6}, true};
  std::vector<size_t> k_values{20000};
  ClassifierKind classifier = ClassifierKind::Svm;
  SvmParams svm;
  CnnParams cnn;
  uint64_t seed = 42;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Flat `key = value` lines. Keys before the first [experiment] header are
/// defaults inherited by every block; with no header the defaults form a
/// single experiment. '#' starts a comment line. Throws ConfigError with the
/// line number on unknown keys or malformed values.
std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& source = "<stream>");
std::vector<ExperimentConfig> load_config(const std::filesystem::path& path);

/// Every key of every block is written, so parse_config(write_config(x)) == x.
std::string write_config(std::span<const ExperimentConfig> configs);

/// FNV-1a 64 of the canonical single-block text, as 16 hex digits.
std::string config_digest(const ExperimentConfig& config);

}  // namespace ufnd
