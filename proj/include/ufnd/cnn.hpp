#pragma once

#include "ufnd/preprocess.hpp"
#include "ufnd/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <string>
#include <vector>

namespace ufnd {

enum class SequenceUnit { Word, Char };

std::string_view unit_name(SequenceUnit unit);

using IdMatrix = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr size_t kWordMaxLenCap = 2000;
inline constexpr size_t kCharMaxLenCap = 8000;

/// Maps words (or code points) to ids 1..V; 0 is both padding and unknown.
/// Ids are assigned by descending training frequency, ties in byte order.
class SequenceEncoder {
 public:
  SequenceEncoder() = default;
  /// `terms[i]` receives id i + 1.
  SequenceEncoder(SequenceUnit unit, std::vector<std::string> terms, size_t max_len);

  /// max_len == 0 picks min(longest training sequence, unit cap).
  static SequenceEncoder fit(std::span<const PreprocessedDoc> train, SequenceUnit unit, size_t max_len = 0);

  std::vector<std::string> units(const PreprocessedDoc& doc) const;
  /// n_docs x max_len; post-padded with 0, truncated keeping the head.
  IdMatrix encode(std::span<const PreprocessedDoc> docs) const;

  SequenceUnit unit() const { return unit_; }
  size_t max_len() const { return max_len_; }
  size_t vocab_size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }

  bool operator==(const SequenceEncoder& other) const {
    return unit_ == other.unit_ && max_len_ == other.max_len_ && terms_ == other.terms_;
  }

 private:
  SequenceUnit unit_ = SequenceUnit::Word;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, int> ids_;
  size_t max_len_ = 0;
};

struct CnnShape {
  size_t vocab_size = 0;  // known terms; embedding tables hold vocab_size + 1 rows
  size_t max_len = 0;
  std::vector<int> kernel_sizes{1, 2, 3, 4};
  int embed_dim = 100;
  int filters = 32;
  int hidden = 10;
  int pool = 2;

  /// Throws ConfigError, e.g. when max_len is shorter than the widest kernel.
  void validate() const;
  Eigen::Index conv_length(int kernel) const { return static_cast<Eigen::Index>(max_len) - kernel + 1; }
  Eigen::Index pooled_length(int kernel) const { return conv_length(kernel) / pool; }
  Eigen::Index flat_size() const;

  bool operator==(const CnnShape&) const = default;
};

/// One embedding + convolution branch per kernel size, concatenated into a
/// ReLU dense layer and a logistic output unit.
template <typename Scalar>
struct CnnModel {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  struct Channel {
    int kernel_size = 1;
    RowMatrix embedding;  // (vocab_size + 1) x embed_dim
    Matrix filters;       // filters x (kernel_size * embed_dim)
    Vector bias;          // filters
  };

  CnnShape shape;
  std::vector<Channel> channels;
  Matrix dense_weight;  // hidden x flat_size
  Vector dense_bias;
  Vector output_weight;  // hidden
  Vector output_bias;    // 1

  CnnModel zeros_like() const;
  template <typename Other>
  CnnModel<Other> cast() const;
  bool all_finite() const;
};

/// Flat view of one parameter block, in storage order.
template <typename Scalar>
struct ParamGroup {
  std::string name;
  Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>> values;
};

template <typename Scalar>
std::vector<ParamGroup<Scalar>> parameter_groups(CnnModel<Scalar>& model);

/// Embeddings ~ U(-0.05, 0.05); convolution and dense weights Glorot-uniform;
/// biases zero. Identical draws for every Scalar given the same seed.
template <typename Scalar>
CnnModel<Scalar> init_cnn(const CnnShape& shape, uint64_t seed);

/// Probability of Fake per row, clipped to [1e-7, 1 - 1e-7].
template <typename Scalar>
Eigen::VectorXd predict_proba(const CnnModel<Scalar>& model, const IdMatrix& batch);

template <typename Scalar>
std::vector<Label> predict_cnn(const CnnModel<Scalar>& model, const IdMatrix& batch, double threshold = 0.5);

/// Mean binary cross-entropy over the rows of `batch`. When `gradient` is
/// non-null it receives d(loss)/d(parameter) and must be shaped like `model`.
template <typename Scalar>
double loss_and_gradient(const CnnModel<Scalar>& model, const IdMatrix& batch, std::span<const int> targets,
                         CnnModel<Scalar>* gradient);

struct TrainConfig {
  int epochs = 7;
  int batch_size = 16;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  uint64_t seed = 42;
  double embedding_dropout = 0.0;

  bool operator==(const TrainConfig&) const = default;
};

struct EpochStats {
  int epoch = 0;
  double loss = 0.0;
  double accuracy = 0.0;
};

template <typename Scalar>
struct CnnTrainResult {
  CnnModel<Scalar> model;
  std::vector<EpochStats> history;
};

/// Mini-batch Adam on mean binary cross-entropy. Targets are 1 (Fake) / 0.
/// Rows are reshuffled every epoch from `config.seed`. Throws
/// std::runtime_error if the loss becomes non-finite.
template <typename Scalar>
CnnTrainResult<Scalar> train_cnn(CnnModel<Scalar> model, const IdMatrix& inputs, std::span<const int> targets,
                                 const TrainConfig& config);

void write_history_tsv(std::ostream& out, std::span<const EpochStats> history);

struct GradCheckOptions {
  size_t samples_per_group = 24;
  double step = 1e-5;
  uint64_t seed = 0;
  /// Applied to the analytic gradient before comparison; used to check the checker.
  std::function<void(CnnModel<double>&)> tamper;
};

struct GradCheckGroup {
  std::string name;
  size_t checked = 0;
  double max_relative_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckGroup> groups;
  size_t checked = 0;
  double max_relative_error = 0.0;
};

/// Central differences on a sampled subset of every parameter group.
/// Relative error is |analytic - numeric| / max(|numeric|, 1e-6).
GradCheckReport grad_check(const CnnModel<double>& model, const IdMatrix& batch, std::span<const int> targets,
                           const GradCheckOptions& options = {});

}  // namespace ufnd
