#pragma once

#include "ufnd/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace ufnd {

/// Chi-squared statistic of every column against the class labels, computed
/// on the (weighted) values directly: observed O_cj is the class-c column sum,
/// expected E_cj = (N_c / N) * sum_c O_cj. Columns with zero mass score 0.
/// Throws std::invalid_argument on negative values, a label/row count
/// mismatch, or fewer than two classes.
Eigen::VectorXd chi2_scores(const SparseMatrix& features, std::span<const Label> labels);

struct SelectionMask {
  std::vector<int> kept;            // ascending column indices
  std::vector<double> kept_scores;  // score of each kept column, same order
  size_t n_features = 0;
  size_t requested_k = 0;

  size_t k() const { return kept.size(); }
  bool clamped() const { return requested_k > n_features; }
  bool operator==(const SelectionMask&) const = default;
};

/// The K highest-scoring columns; ties go to the lower index. K > V keeps all.
/// Throws std::invalid_argument if k == 0.
SelectionMask select_k_best(const Eigen::VectorXd& scores, size_t k);

/// Column slice re-indexed 0..K-1 in mask order. Throws std::out_of_range if a
/// kept index is not a column of `features`.
SparseMatrix apply_mask(const SparseMatrix& features, const SelectionMask& mask);

}  // namespace ufnd
