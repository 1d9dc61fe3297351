#pragma once

#include <Eigen/SparseCore>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ufnd {

/// Binary class label. Fake is the positive class throughout (+1 for the SVM,
/// 1 for the CNN, the "positive" column set of every report).
enum class Label { Fake, Real };

enum class Split { Train, Test, Unlabeled };

inline int to_sign(Label label) { return label == Label::Fake ? +1 : -1; }
inline int to_binary(Label label) { return label == Label::Fake ? 1 : 0; }
inline Label from_sign(double decision) { return decision >= 0.0 ? Label::Fake : Label::Real; }

std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view token);
std::string_view split_name(Split split);
std::optional<Split> parse_split(std::string_view token);

/// Row-major CSR storage. Column indices are sorted within each row and no
/// explicit zeros are stored.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ufnd
