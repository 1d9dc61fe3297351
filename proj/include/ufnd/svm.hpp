#pragma once

#include "ufnd/types.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <vector>

namespace ufnd {

/// K(x, z) = (gamma * <x, z> + coef0)^degree
struct KernelParams {
  int degree = 1;
  double gamma = 1.0;
  double coef0 = 0.0;

  double apply(double dot) const;
  bool operator==(const KernelParams&) const = default;
};

double sparse_dot(const SparseMatrix& a, Eigen::Index row_a, const SparseMatrix& b, Eigen::Index row_b);
double kernel(const SparseMatrix& a, Eigen::Index row_a, const SparseMatrix& b, Eigen::Index row_b,
              const KernelParams& params);

struct SvmOptions {
  double C = 1.0;
  double tol = 1e-3;
  int max_passes = 200;
  /// Budget for cached kernel rows. At least two rows are always cached.
  size_t cache_bytes = size_t{256} << 20;
  KernelParams kernel;
};

struct SvmModel {
  SparseMatrix support_vectors;
  Eigen::VectorXd dual_coef;         // alpha_i * y_i of each support vector
  std::vector<int> support_indices;  // training row of each support vector
  double bias = 0.0;
  KernelParams kernel;
  double C = 1.0;
  bool converged = false;
  int passes = 0;

  Eigen::Index n_features() const { return support_vectors.cols(); }
  /// Dense alpha over the `n_train` training rows (zeros off the support set).
  Eigen::VectorXd alphas(size_t n_train) const;
};

/// SMO on the dual. Each step takes the row with the smallest gradient on the
/// up side, pairs it with the violating low-side row of largest second-order
/// gain, and solves the pair analytically. Ties go to the lower index, so the
/// run is deterministic. Training stops when the maximal violation is <= tol
/// or after max_passes * n steps, in which case `converged` is false.
/// Labels are +1 (Fake) / -1 (Real). Throws std::invalid_argument on a
/// single-class problem or a size mismatch.
SvmModel train_svm(const SparseMatrix& features, std::span<const int> labels, const SvmOptions& options);

/// sum_i coef_i * K(sv_i, x) + bias. Throws std::invalid_argument when the
/// column counts differ.
double decision_function(const SvmModel& model, const SparseMatrix& features, Eigen::Index row);
Eigen::VectorXd decision_function(const SvmModel& model, const SparseMatrix& features);

/// Fake when the decision value is >= 0.
std::vector<Label> predict_svm(const SvmModel& model, const SparseMatrix& features);

}  // namespace ufnd
