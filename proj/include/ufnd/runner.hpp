#pragma once

#include "ufnd/config.hpp"
#include "ufnd/corpus.hpp"
#include "ufnd/eval.hpp"
#include "ufnd/pipeline.hpp"

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ufnd {

/// One (experiment block, K) result. Failed rows keep `error` and no report.
struct ResultRow {
  size_t sn = 0;  // 1-based over the whole grid
  std::string block;
  std::string digest;
  ClassifierKind classifier = ClassifierKind::Svm;
  size_t k_requested = 0;  // 0 for CNN rows
  size_t k_selected = 0;
  size_t total_features = 0;
  std::optional<EvalReport> report;
  std::optional<ConfusionMatrix> matrix;
  double seconds = 0.0;
  std::vector<std::string> warnings;
  std::string error;

  bool ok() const { return report.has_value(); }
};

struct RunOutput {
  ResultRow row;
  Pipeline pipeline;
};

/// Fits on `train` only, predicts and scores `test`. Stage errors are rethrown
/// as std::runtime_error prefixed with the stage name.
RunOutput run_config(const Corpus& train, const Corpus& test, const ExperimentConfig& config, size_t k,
                     const PreprocessResources& resources);

struct GridOptions {
  /// When set, each fitted pipeline is saved as row_NNN.ufnd (and CNN rows
  /// also write row_NNN.history.tsv).
  std::optional<std::filesystem::path> model_dir;
  std::function<void(const ResultRow&)> on_row;
};

/// One row per (block, K) in configured order; SVM blocks featurize the
/// training split once and reuse it for every K. A failing row is recorded
/// and the grid continues.
std::vector<ResultRow> run_grid(const Corpus& train, const Corpus& test, std::span<const ExperimentConfig> configs,
                                const PreprocessResources& resources, const GridOptions& options = {});

/// 1, 2, 3 for the best three successful rows by f1_macro (ties: lower sn),
/// 0 otherwise.
std::vector<int> rank_rows(std::span<const ResultRow> rows);

inline constexpr const char* kResultsTsvHeader =
    "sn\tblock\tK\tprec_f\trec_f\tf1_f\tprec_r\trec_r\tf1_r\tf1_macro\taccuracy\tV\tclassifier\trank\tstatus\t"
    "digest\tmessage";

/// Wall-clock time is left out so that identical runs give identical files.
std::string render_tsv(std::span<const ResultRow> rows);
/// Aligned markdown table with seconds; the top three f1_macro values are
/// bold and marked.
std::string render_markdown(std::span<const ResultRow> rows);

}  // namespace ufnd
