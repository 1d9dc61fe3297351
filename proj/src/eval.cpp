#include "ufnd/eval.hpp"

#include <cfenv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ufnd {

ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> predicted) {
  if (gold.size() != predicted.size()) {
    throw std::invalid_argument("confusion: " + std::to_string(gold.size()) + " gold labels but " +
                                std::to_string(predicted.size()) + " predictions");
  }
  if (gold.empty()) throw std::invalid_argument("confusion: no labels");
  ConfusionMatrix m;
  for (size_t i = 0; i < gold.size(); ++i) {
    const bool gold_fake = gold[i] == Label::Fake;
    const bool pred_fake = predicted[i] == Label::Fake;
    if (gold_fake && pred_fake) {
      ++m.tp_fake;
    } else if (gold_fake) {
      ++m.fn_fake;
    } else if (pred_fake) {
      ++m.fp_fake;
    } else {
      ++m.tn_fake;
    }
  }
  return m;
}

namespace {

double ratio(size_t num, size_t den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

ClassMetrics class_metrics(const ConfusionMatrix& m, Label positive) {
  const bool fake = positive == Label::Fake;
  const size_t tp = fake ? m.tp_fake : m.tn_fake;
  const size_t fp = fake ? m.fp_fake : m.fn_fake;
  const size_t fn = fake ? m.fn_fake : m.fp_fake;
  ClassMetrics out;
  out.precision = ratio(tp, tp + fp);
  out.recall = ratio(tp, tp + fn);
  const double sum = out.precision + out.recall;
  out.f1 = sum == 0.0 ? 0.0 : 2.0 * out.precision * out.recall / sum;
  return out;
}

EvalReport summarize(const ConfusionMatrix& m) {
  if (m.total() == 0) throw std::invalid_argument("summarize: empty confusion matrix");
  EvalReport report;
  report.fake = class_metrics(m, Label::Fake);
  report.real = class_metrics(m, Label::Real);
  report.f1_macro = (report.fake.f1 + report.real.f1) / 2.0;
  report.accuracy = ratio(m.tp_fake + m.tn_fake, m.total());
  return report;
}

double round_half_even(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  const int previous = std::fegetround();
  std::fesetround(FE_TONEAREST);
  const double rounded = std::nearbyint(value * scale) / scale;
  std::fesetround(previous);
  return rounded;
}

std::string format_4dp(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", round_half_even(value, 4));
  return buf;
}

std::string report_tsv_fields(const EvalReport& r) {
  std::string out;
  for (double v : {r.fake.precision, r.fake.recall, r.fake.f1, r.real.precision, r.real.recall, r.real.f1,
                   r.f1_macro, r.accuracy}) {
    if (!out.empty()) out += '\t';
    out += format_4dp(v);
  }
  return out;
}

}  // namespace ufnd
