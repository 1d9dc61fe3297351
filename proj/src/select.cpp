#include "ufnd/select.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ufnd {

Eigen::VectorXd chi2_scores(const SparseMatrix& features, std::span<const Label> labels) {
  if (static_cast<size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("chi2: " + std::to_string(features.rows()) + " rows but " +
                                std::to_string(labels.size()) + " labels");
  }
  const Eigen::Index n_features = features.cols();
  Eigen::MatrixXd observed = Eigen::MatrixXd::Zero(2, n_features);
  Eigen::Vector2d class_count = Eigen::Vector2d::Zero();
  for (Eigen::Index row = 0; row < features.rows(); ++row) {
    const int c = to_binary(labels[static_cast<size_t>(row)]);
    class_count[c] += 1.0;
    for (SparseMatrix::InnerIterator it(features, row); it; ++it) {
      if (it.value() < 0.0) throw std::invalid_argument("chi2: negative feature value");
      observed(c, it.col()) += it.value();
    }
  }
  if (class_count.minCoeff() == 0.0) throw std::invalid_argument("chi2: need at least two classes");

  const Eigen::Vector2d prior = class_count / class_count.sum();
  const Eigen::RowVectorXd total = observed.colwise().sum();
  Eigen::VectorXd scores = Eigen::VectorXd::Zero(n_features);
  for (Eigen::Index j = 0; j < n_features; ++j) {
    if (total[j] <= 0.0) continue;
    double score = 0.0;
    for (int c = 0; c < 2; ++c) {
      const double expected = prior[c] * total[j];
      const double diff = observed(c, j) - expected;
      score += diff * diff / expected;
    }
    scores[j] = score;
  }
  return scores;
}

SelectionMask select_k_best(const Eigen::VectorXd& scores, size_t k) {
  if (k == 0) throw std::invalid_argument("select_k_best: K must be at least 1");
  const auto n = static_cast<size_t>(scores.size());
  SelectionMask mask;
  mask.n_features = n;
  mask.requested_k = k;
  const size_t keep = std::min(k, n);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto better = [&](int a, int b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(), better);
  order.resize(keep);
  std::sort(order.begin(), order.end());

  mask.kept = std::move(order);
  mask.kept_scores.reserve(keep);
  for (int index : mask.kept) mask.kept_scores.push_back(scores[index]);
  return mask;
}

SparseMatrix apply_mask(const SparseMatrix& features, const SelectionMask& mask) {
  std::vector<int> remap(static_cast<size_t>(features.cols()), -1);
  for (size_t i = 0; i < mask.kept.size(); ++i) {
    const int col = mask.kept[i];
    if (col < 0 || col >= features.cols()) {
      throw std::out_of_range("apply_mask: column " + std::to_string(col) + " outside [0, " +
                              std::to_string(features.cols()) + ")");
    }
    if (i > 0 && mask.kept[i - 1] >= col) throw std::invalid_argument("apply_mask: kept indices not ascending");
    remap[static_cast<size_t>(col)] = static_cast<int>(i);
  }
  SparseMatrix out(features.rows(), static_cast<Eigen::Index>(mask.kept.size()));
  out.reserve(features.nonZeros());
  for (Eigen::Index row = 0; row < features.rows(); ++row) {
    out.startVec(row);
    // Kept indices are ascending, so the remapped columns stay sorted.
    for (SparseMatrix::InnerIterator it(features, row); it; ++it) {
      const int target = remap[static_cast<size_t>(it.col())];
      if (target >= 0) out.insertBack(row, target) = it.value();
    }
  }
  out.finalize();
  return out;
}

}  // namespace ufnd
