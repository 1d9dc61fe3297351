#pragma once

#include "ufnd/types.hpp"

#include <cstddef>
#include <span>
#include <string>

namespace ufnd {

/// Counts with Fake as the positive class.
struct ConfusionMatrix {
  size_t tp_fake = 0;
  size_t fn_fake = 0;
  size_t fp_fake = 0;
  size_t tn_fake = 0;

  size_t total() const { return tp_fake + fn_fake + fp_fake + tn_fake; }
  bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  ClassMetrics fake;
  ClassMetrics real;
  double f1_macro = 0.0;
  double accuracy = 0.0;
};

/// Throws std::invalid_argument on empty or unequal-length inputs.
ConfusionMatrix confusion(std::span<const Label> gold, std::span<const Label> predicted);

/// 0/0 resolves to 0 for precision, recall and F1.
ClassMetrics class_metrics(const ConfusionMatrix& matrix, Label positive);

/// Throws std::invalid_argument on an empty matrix.
EvalReport summarize(const ConfusionMatrix& matrix);

/// Round half to even at `digits` decimals.
double round_half_even(double value, int digits);
/// Fixed 4-decimal text of round_half_even(value, 4).
std::string format_4dp(double value);

/// Result-row column order without the K column:
/// prec_f rec_f f1_f prec_r rec_r f1_r f1_macro accuracy (TAB-separated).
std::string report_tsv_fields(const EvalReport& report);
inline constexpr const char* kReportTsvHeader =
    "prec_f\trec_f\tf1_f\tprec_r\trec_r\tf1_r\tf1_macro\taccuracy";

}  // namespace ufnd
