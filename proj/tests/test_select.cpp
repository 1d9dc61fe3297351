#include "ufnd/select.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace ufnd;

namespace {

SparseMatrix sparse(const std::vector<std::vector<double>>& dense) {
  const Eigen::Index rows = static_cast<Eigen::Index>(dense.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(dense[0].size()) : 0;
  SparseMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      if (dense[r][c] != 0.0) m.insert(r, c) = dense[r][c];
    }
  }
  m.makeCompressed();
  return m;
}

const Label F = Label::Fake;
const Label R = Label::Real;

}  // namespace

TEST_CASE("chi2 hand example") {
  // class A = Fake with values [1, 0], class B = Real with [1, 2]
  const SparseMatrix x = sparse({{1}, {0}, {1}, {2}});
  const std::vector<Label> y{F, F, R, R};
  CHECK(chi2_scores(x, y)[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi2 degenerate columns") {
  const SparseMatrix x = sparse({{1, 0}, {2, 0}, {2, 0}, {1, 0}});
  const std::vector<Label> y{F, F, R, R};
  const auto s = chi2_scores(x, y);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == 0.0);
}

TEST_CASE("chi2 input checks") {
  const SparseMatrix x = sparse({{1}, {2}});
  CHECK_THROWS_AS(chi2_scores(x, std::vector<Label>{F}), std::invalid_argument);
  CHECK_THROWS_AS(chi2_scores(x, std::vector<Label>{F, F}), std::invalid_argument);
  CHECK_THROWS_AS(chi2_scores(sparse({{-1}, {2}}), std::vector<Label>{F, R}), std::invalid_argument);
}

TEST_CASE("chi2 matches the dense oracle on random matrices") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> value(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const size_t n = 2 + rng() % 7;
    const size_t v = 1 + rng() % 10;
    std::vector<std::vector<double>> dense(n, std::vector<double>(v, 0.0));
    for (auto& row : dense) {
      for (auto& x : row) x = rng() % 3 == 0 ? 0.0 : value(rng);
    }
    std::vector<Label> y(n);
    std::vector<int> cls(n);
    for (size_t i = 0; i < n; ++i) {
      y[i] = i < 1 ? F : (i < 2 ? R : (rng() % 2 ? F : R));
      cls[i] = y[i] == F ? 1 : 0;
    }
    const auto got = chi2_scores(sparse(dense), y);
    const auto want = oracle::chi2_dense(dense, cls);
    for (size_t j = 0; j < v; ++j) REQUIRE(std::abs(got[j] - want[j]) <= 1e-9);
  }
}

TEST_CASE("chi2 ignores row order") {
  const std::vector<std::vector<double>> dense{{1, 0, 2}, {0, 3, 1}, {4, 0, 0}, {1, 1, 1}};
  const std::vector<Label> y{F, R, F, R};
  const auto a = chi2_scores(sparse(dense), y);
  const std::vector<std::vector<double>> flipped{dense[3], dense[2], dense[1], dense[0]};
  const std::vector<Label> yf{R, F, R, F};
  const auto b = chi2_scores(sparse(flipped), yf);
  for (int j = 0; j < 3; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-14));
}

TEST_CASE("select_k_best") {
  Eigen::VectorXd s(3);
  s << 5, 5, 1;
  const auto m = select_k_best(s, 1);
  CHECK(m.kept == std::vector<int>{0});
  CHECK(m.k() == 1);

  const auto all = select_k_best(s, 10);
  CHECK(all.k() == 3);
  CHECK(all.clamped());
  CHECK_THROWS_AS(select_k_best(s, 0), std::invalid_argument);
}

TEST_CASE("select_k_best keeps exactly K of a large score vector") {
  std::mt19937 rng(2);
  std::uniform_int_distribution<int> pick(0, 999);
  const Eigen::Index v = 1557000;
  Eigen::VectorXd s(v);
  for (Eigen::Index i = 0; i < v; ++i) s[i] = pick(rng);
  const auto m = select_k_best(s, 20000);
  REQUIRE(m.k() == 20000);
  CHECK(std::is_sorted(m.kept.begin(), m.kept.end()));
  // Kept scores dominate dropped ones; among equal scores lower indices win.
  std::vector<char> kept(v, 0);
  for (int j : m.kept) kept[j] = 1;
  double min_kept = 1e300;
  int max_kept_index_at_min = -1;
  for (int j : m.kept) min_kept = std::min(min_kept, s[j]);
  for (int j : m.kept) {
    if (s[j] == min_kept) max_kept_index_at_min = std::max(max_kept_index_at_min, j);
  }
  for (Eigen::Index j = 0; j < v; ++j) {
    if (kept[j]) continue;
    REQUIRE(s[j] <= min_kept);
    if (s[j] == min_kept) REQUIRE(j > max_kept_index_at_min);
  }
}

TEST_CASE("apply_mask") {
  const SparseMatrix x = sparse({{1, 0, 2}, {0, 0, 0}, {0, 3, 4}});
  Eigen::VectorXd s(3);
  s << 1, 2, 3;
  const SparseMatrix same = apply_mask(x, select_k_best(s, 3));
  CHECK(same.isApprox(x));
  CHECK((SparseMatrix(same - x)).norm() == 0.0);

  SelectionMask one{{2}, {3.0}, 3, 1};
  const SparseMatrix col = apply_mask(x, one);
  CHECK(col.cols() == 1);
  CHECK(col.coeff(0, 0) == 2);
  CHECK(col.coeff(2, 0) == 4);
  CHECK(col.row(1).nonZeros() == 0);

  SelectionMask bad{{5}, {1.0}, 6, 1};
  CHECK_THROWS_AS(apply_mask(x, bad), std::out_of_range);
}
