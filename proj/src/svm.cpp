#include "ufnd/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <list>
#include <stdexcept>
#include <string>

namespace ufnd {

double KernelParams::apply(double dot) const {
  const double base = gamma * dot + coef0;
  if (degree == 1) return base;
  return std::pow(base, degree);
}

double sparse_dot(const SparseMatrix& a, Eigen::Index row_a, const SparseMatrix& b, Eigen::Index row_b) {
  SparseMatrix::InnerIterator ia(a, row_a);
  SparseMatrix::InnerIterator ib(b, row_b);
  double sum = 0.0;
  while (ia && ib) {
    if (ia.col() < ib.col()) {
      ++ia;
    } else if (ib.col() < ia.col()) {
      ++ib;
    } else {
      sum += ia.value() * ib.value();
      ++ia;
      ++ib;
    }
  }
  return sum;
}

double kernel(const SparseMatrix& a, Eigen::Index row_a, const SparseMatrix& b, Eigen::Index row_b,
              const KernelParams& params) {
  return params.apply(sparse_dot(a, row_a, b, row_b));
}

namespace {

/// LRU cache of kernel rows K(x_i, .) over the training set.
class KernelRowCache {
 public:
  KernelRowCache(const SparseMatrix& x, const KernelParams& params, size_t budget_bytes)
      : x_(x),
        params_(params),
        rows_(static_cast<size_t>(x.rows())),
        where_(static_cast<size_t>(x.rows()), lru_.end()),
        scratch_(Eigen::VectorXd::Zero(x.cols())) {
    const size_t row_bytes = std::max<size_t>(1, static_cast<size_t>(x.rows()) * sizeof(double));
    capacity_ = std::max<size_t>(2, budget_bytes / row_bytes);
  }

  const Eigen::VectorXd& row(int i) {
    auto& slot = where_[static_cast<size_t>(i)];
    if (slot != lru_.end()) {
      lru_.splice(lru_.begin(), lru_, slot);
      return rows_[static_cast<size_t>(i)];
    }
    if (lru_.size() >= capacity_) {
      const int victim = lru_.back();
      lru_.pop_back();
      where_[static_cast<size_t>(victim)] = lru_.end();
      rows_[static_cast<size_t>(victim)] = Eigen::VectorXd();
    }
    compute(i, rows_[static_cast<size_t>(i)]);
    lru_.push_front(i);
    slot = lru_.begin();
    return rows_[static_cast<size_t>(i)];
  }

 private:
  void compute(int i, Eigen::VectorXd& out) {
    for (SparseMatrix::InnerIterator it(x_, i); it; ++it) scratch_[it.col()] = it.value();
    out.resize(x_.rows());
    for (Eigen::Index k = 0; k < x_.rows(); ++k) {
      double dot = 0.0;
      for (SparseMatrix::InnerIterator it(x_, k); it; ++it) dot += it.value() * scratch_[it.col()];
      out[k] = params_.apply(dot);
    }
    for (SparseMatrix::InnerIterator it(x_, i); it; ++it) scratch_[it.col()] = 0.0;
  }

  const SparseMatrix& x_;
  KernelParams params_;
  size_t capacity_ = 2;
  std::list<int> lru_;
  std::vector<Eigen::VectorXd> rows_;
  std::vector<std::list<int>::iterator> where_;
  Eigen::VectorXd scratch_;
};

/// Dual state. grad_[k] = sum_j alpha_j y_j K(k, j) - y_k, so that the
/// decision value on a training row is grad_[k] + y_k + b.
class SmoSolver {
 public:
  SmoSolver(const SparseMatrix& x, std::span<const int> y, const SvmOptions& options)
      : y_(y),
        c_(options.C),
        tol_(options.tol),
        cache_(x, options.kernel, options.cache_bytes),
        alpha_(Eigen::VectorXd::Zero(x.rows())),
        grad_(x.rows()),
        diag_(x.rows()) {
    for (Eigen::Index k = 0; k < x.rows(); ++k) {
      grad_[k] = -y_[static_cast<size_t>(k)];
      const double sq = x.row(k).squaredNorm();
      diag_[k] = options.kernel.apply(sq);
    }
  }

  /// Returns {passes, converged}. One pass is n pair updates.
  std::pair<int, bool> solve(int max_passes) {
    const int n = static_cast<int>(alpha_.size());
    const long long budget = static_cast<long long>(max_passes) * n;
    long long steps = 0;
    const auto passes = [&] { return static_cast<int>(std::max<long long>(1, (steps + n - 1) / n)); };
    while (steps < budget) {
      const Extremes ext = extremes();
      if (ext.gap() <= tol_) return {passes(), true};
      const int i = ext.up_index;
      const int j = partner_for(i, ext.low_index);
      if (!take_step(i, j) && (j == ext.low_index || !take_step(i, ext.low_index))) break;
      ++steps;
    }
    return {passes(), extremes().gap() <= tol_};
  }

  double bias() const {
    double sum = 0.0;
    int free_count = 0;
    for (Eigen::Index k = 0; k < alpha_.size(); ++k) {
      if (alpha_[k] > 0.0 && alpha_[k] < c_) {
        sum += grad_[k];
        ++free_count;
      }
    }
    if (free_count > 0) return -sum / free_count;
    const Extremes ext = extremes();
    if (ext.up_index < 0) return -ext.low_value;
    if (ext.low_index < 0) return -ext.up_value;
    return -(ext.up_value + ext.low_value) / 2.0;
  }

  const Eigen::VectorXd& alpha() const { return alpha_; }

 private:
  struct Extremes {
    double up_value = std::numeric_limits<double>::infinity();
    double low_value = -std::numeric_limits<double>::infinity();
    int up_index = -1;
    int low_index = -1;
    double gap() const { return (up_index < 0 || low_index < 0) ? 0.0 : low_value - up_value; }
  };

  int y(int k) const { return y_[static_cast<size_t>(k)]; }
  bool in_up(int k) const { return (y(k) > 0 && alpha_[k] < c_) || (y(k) < 0 && alpha_[k] > 0.0); }
  bool in_low(int k) const { return (y(k) > 0 && alpha_[k] > 0.0) || (y(k) < 0 && alpha_[k] < c_); }

  Extremes extremes() const {
    Extremes ext;
    for (int k = 0; k < static_cast<int>(alpha_.size()); ++k) {
      if (in_up(k) && grad_[k] < ext.up_value) {
        ext.up_value = grad_[k];
        ext.up_index = k;
      }
      if (in_low(k) && grad_[k] > ext.low_value) {
        ext.low_value = grad_[k];
        ext.low_index = k;
      }
    }
    return ext;
  }

  // Second-order choice: among violating low-side rows, the one with the
  // largest guaranteed decrease for a step paired with i.
  int partner_for(int i, int fallback) {
    const Eigen::VectorXd& ki = cache_.row(i);
    int best = fallback;
    double best_gain = -1.0;
    for (int t = 0; t < static_cast<int>(alpha_.size()); ++t) {
      if (!in_low(t)) continue;
      const double b = grad_[t] - grad_[i];
      if (b <= 0.0) continue;
      double a = ki[i] + diag_[t] - 2.0 * ki[t];
      if (a <= 1e-12) a = 1e-12;
      const double gain = b * b / a;
      if (gain > best_gain) {
        best_gain = gain;
        best = t;
      }
    }
    return best;
  }

  bool take_step(int i, int j) {
    if (i == j) return false;
    const double ai = alpha_[i];
    const double aj = alpha_[j];
    const int yi = y(i);
    const int yj = y(j);
    const double s = yi * yj;
    double lo;
    double hi;
    if (yi != yj) {
      lo = std::max(0.0, aj - ai);
      hi = std::min(c_, c_ + aj - ai);
    } else {
      lo = std::max(0.0, ai + aj - c_);
      hi = std::min(c_, ai + aj);
    }
    if (hi - lo <= 1e-15 * c_) return false;

    const Eigen::VectorXd& ki = cache_.row(i);
    const Eigen::VectorXd& kj = cache_.row(j);
    const double eta = ki[i] + kj[j] - 2.0 * ki[j];
    const double slope = yj * (grad_[i] - grad_[j]);
    double aj_new;
    if (eta > 1e-12) {
      aj_new = std::clamp(aj + slope / eta, lo, hi);
    } else {
      aj_new = slope > 0.0 ? hi : lo;
    }
    if (aj_new < 1e-12 * c_) aj_new = 0.0;
    if (aj_new > c_ * (1.0 - 1e-12)) aj_new = c_;
    double ai_new = ai + s * (aj - aj_new);
    if (ai_new < 1e-12 * c_) ai_new = 0.0;
    if (ai_new > c_ * (1.0 - 1e-12)) ai_new = c_;
    if (ai_new == ai && aj_new == aj) return false;

    const double di = yi * (ai_new - ai);
    const double dj = yj * (aj_new - aj);
    grad_ += di * ki + dj * kj;
    alpha_[i] = ai_new;
    alpha_[j] = aj_new;
    return true;
  }

  std::span<const int> y_;
  double c_;
  double tol_;
  KernelRowCache cache_;
  Eigen::VectorXd alpha_;
  Eigen::VectorXd grad_;
  Eigen::VectorXd diag_;
};

}  // namespace

Eigen::VectorXd SvmModel::alphas(size_t n_train) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_train));
  for (size_t s = 0; s < support_indices.size(); ++s) {
    out[support_indices[s]] = std::abs(dual_coef[static_cast<Eigen::Index>(s)]);
  }
  return out;
}

SvmModel train_svm(const SparseMatrix& features, std::span<const int> labels, const SvmOptions& options) {
  if (static_cast<size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("train_svm: " + std::to_string(features.rows()) + " rows but " +
                                std::to_string(labels.size()) + " labels");
  }
  bool has_pos = false;
  bool has_neg = false;
  for (int label : labels) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw std::invalid_argument("train_svm: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw std::invalid_argument("train_svm: both classes must be present");
  if (!(options.C > 0.0) || !(options.tol > 0.0) || options.max_passes < 1 || options.kernel.degree < 1) {
    throw std::invalid_argument("train_svm: invalid options");
  }

  SmoSolver solver(features, labels, options);
  const auto [passes, converged] = solver.solve(options.max_passes);

  SvmModel model;
  model.kernel = options.kernel;
  model.C = options.C;
  model.passes = passes;
  model.converged = converged;
  model.bias = solver.bias();
  const Eigen::VectorXd& alpha = solver.alpha();
  std::vector<double> coef;
  for (Eigen::Index k = 0; k < alpha.size(); ++k) {
    if (alpha[k] > 0.0) {
      model.support_indices.push_back(static_cast<int>(k));
      coef.push_back(alpha[k] * labels[static_cast<size_t>(k)]);
    }
  }
  model.dual_coef = Eigen::Map<const Eigen::VectorXd>(coef.data(), static_cast<Eigen::Index>(coef.size()));

  SparseMatrix sv(static_cast<Eigen::Index>(model.support_indices.size()), features.cols());
  Eigen::Index nnz = 0;
  for (int k : model.support_indices) nnz += features.row(k).nonZeros();
  sv.reserve(nnz);
  for (size_t s = 0; s < model.support_indices.size(); ++s) {
    sv.startVec(static_cast<Eigen::Index>(s));
    for (SparseMatrix::InnerIterator it(features, model.support_indices[s]); it; ++it) {
      sv.insertBack(static_cast<Eigen::Index>(s), it.col()) = it.value();
    }
  }
  sv.finalize();
  model.support_vectors = std::move(sv);
  return model;
}

namespace {

void check_dimensions(const SvmModel& model, const SparseMatrix& features) {
  if (features.cols() != model.n_features()) {
    throw std::invalid_argument("svm: model expects " + std::to_string(model.n_features()) +
                                " features, input has " + std::to_string(features.cols()));
  }
}

}  // namespace

double decision_function(const SvmModel& model, const SparseMatrix& features, Eigen::Index row) {
  check_dimensions(model, features);
  double value = model.bias;
  for (Eigen::Index s = 0; s < model.support_vectors.rows(); ++s) {
    value += model.dual_coef[s] * kernel(model.support_vectors, s, features, row, model.kernel);
  }
  return value;
}

Eigen::VectorXd decision_function(const SvmModel& model, const SparseMatrix& features) {
  check_dimensions(model, features);
  Eigen::VectorXd out(features.rows());
  for (Eigen::Index r = 0; r < features.rows(); ++r) out[r] = decision_function(model, features, r);
  return out;
}

std::vector<Label> predict_svm(const SvmModel& model, const SparseMatrix& features) {
  const Eigen::VectorXd values = decision_function(model, features);
  std::vector<Label> out;
  out.reserve(static_cast<size_t>(values.size()));
  for (double v : values) out.push_back(from_sign(v));
  return out;
}

}  // namespace ufnd
