#include "ufnd/eval.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace ufnd;

namespace {

const Label F = Label::Fake;
const Label R = Label::Real;

ConfusionMatrix matrix(size_t tp, size_t fn, size_t fp, size_t tn) { return {tp, fn, fp, tn}; }

}  // namespace

TEST_CASE("confusion counts") {
  const std::vector<Label> gold{F, F, R, R};
  CHECK(confusion(gold, std::vector<Label>{F, R, R, R}) == matrix(1, 1, 0, 2));
  const auto same = confusion(gold, gold);
  CHECK(same.fn_fake == 0);
  CHECK(same.fp_fake == 0);
  const auto flipped = confusion(gold, std::vector<Label>{R, R, F, F});
  CHECK(flipped.tp_fake == 0);
  CHECK(flipped.tn_fake == 0);
  CHECK_THROWS_AS(confusion(gold, std::vector<Label>{F}), std::invalid_argument);
  CHECK_THROWS_AS(confusion(std::vector<Label>{}, std::vector<Label>{}), std::invalid_argument);
}

TEST_CASE("per-class metrics from reconstructed counts") {
  const auto m = matrix(47, 53, 30, 170);
  const auto fake = class_metrics(m, F);
  CHECK(fake.precision == doctest::Approx(47.0 / 77.0).epsilon(1e-15));
  CHECK(format_4dp(fake.precision) == "0.6104");
  CHECK(format_4dp(fake.recall) == "0.4700");
  CHECK(format_4dp(fake.f1) == "0.5311");
  const auto real = class_metrics(m, R);
  CHECK(real.precision == doctest::Approx(170.0 / 223.0).epsilon(1e-15));
  CHECK(format_4dp(real.precision) == "0.7623");
  CHECK(format_4dp(real.recall) == "0.8500");
  CHECK(format_4dp(real.f1) == "0.8038");
}

TEST_CASE("0/0 resolves to 0") {
  const auto m = matrix(0, 5, 0, 5);
  const auto fake = class_metrics(m, F);
  CHECK(fake.precision == 0.0);
  CHECK(fake.recall == 0.0);
  CHECK(fake.f1 == 0.0);
}

TEST_CASE("summaries") {
  const auto r7 = summarize(matrix(47, 53, 30, 170));
  CHECK(r7.f1_macro == doctest::Approx(0.667428).epsilon(1e-6));
  CHECK(format_4dp(r7.f1_macro) == "0.6674");
  CHECK(format_4dp(r7.accuracy) == "0.7233");
  const auto r1 = summarize(matrix(46, 54, 31, 169));
  CHECK(format_4dp(r1.f1_macro) == "0.6594");
  CHECK(format_4dp(r1.accuracy) == "0.7167");
  const auto perfect = summarize(matrix(3, 0, 0, 4));
  CHECK(perfect.f1_macro == 1.0);
  CHECK(perfect.accuracy == 1.0);
  CHECK(perfect.fake.precision == 1.0);
  CHECK(perfect.real.recall == 1.0);
}

TEST_CASE("report tsv fields") {
  CHECK(report_tsv_fields(summarize(matrix(47, 53, 30, 170))) ==
        "0.6104\t0.4700\t0.5311\t0.7623\t0.8500\t0.8038\t0.6674\t0.7233");
}

TEST_CASE("round half to even") {
  CHECK(round_half_even(0.5, 0) == 0.0);
  CHECK(round_half_even(1.5, 0) == 2.0);
  CHECK(round_half_even(2.5, 0) == 2.0);
  CHECK(format_4dp(0.03125) == "0.0312");
  CHECK(format_4dp(0.09375) == "0.0938");
  CHECK(format_4dp(1.0) == "1.0000");
}

TEST_CASE("metrics agree with the count oracle and swap symmetrically") {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = matrix(rng() % 20, rng() % 20, rng() % 20, 1 + rng() % 20);
    const auto rep = summarize(m);
    const auto f = oracle::prf(m.tp_fake, m.fp_fake, m.fn_fake);
    const auto r = oracle::prf(m.tn_fake, m.fn_fake, m.fp_fake);
    CHECK(rep.fake.precision == doctest::Approx(f.p).epsilon(1e-12));
    CHECK(rep.fake.recall == doctest::Approx(f.r).epsilon(1e-12));
    CHECK(rep.fake.f1 == doctest::Approx(f.f).epsilon(1e-12));
    CHECK(rep.real.f1 == doctest::Approx(r.f).epsilon(1e-12));
    CHECK((rep.fake.f1 == 0.0) == (m.tp_fake == 0));
    CHECK(rep.fake.f1 >= 0.0);
    CHECK(rep.fake.f1 <= 1.0);

    const auto swapped = summarize(matrix(m.tn_fake, m.fp_fake, m.fn_fake, m.tp_fake));
    CHECK(swapped.fake.f1 == doctest::Approx(rep.real.f1));
    CHECK(swapped.real.precision == doctest::Approx(rep.fake.precision));
    CHECK(swapped.f1_macro == doctest::Approx(rep.f1_macro));
    CHECK(swapped.accuracy == doctest::Approx(rep.accuracy));
    CHECK(format_4dp(rep.f1_macro) == format_4dp(round_half_even(rep.f1_macro, 4)));
  }
}
