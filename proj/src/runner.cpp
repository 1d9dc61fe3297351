#include "ufnd/runner.hpp"

#include "ufnd/persist.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace ufnd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(stage) + ": " + e.what());
  }
}

ResultRow blank_row(const ExperimentConfig& config, size_t k) {
  ResultRow row;
  row.block = config.name;
  row.digest = config_digest(config);
  row.classifier = config.classifier;
  row.k_requested = config.classifier == ClassifierKind::Svm ? k : 0;
  return row;
}

void score(ResultRow& row, const Pipeline& pipeline, const Corpus& test) {
  const auto predicted = in_stage("predict", [&] { return pipeline.predict(test); });
  in_stage("evaluate", [&] {
    const auto gold = test.labels();
    row.matrix = confusion(gold, predicted);
    row.report = summarize(*row.matrix);
    return 0;
  });
  row.total_features = pipeline.total_features();
  row.k_selected = pipeline.selected_features();
}

RunOutput run_svm_row(const SvmFeatures& features, const Corpus& test, const ExperimentConfig& config, size_t k,
                      const PreprocessResources& resources) {
  RunOutput out{blank_row(config, k), {}};
  out.pipeline =
      in_stage("train", [&] { return fit_svm_pipeline(features, config, k, resources, out.row.warnings); });
  score(out.row, out.pipeline, test);
  return out;
}

RunOutput run_cnn_row(const Corpus& train, const Corpus& test, const ExperimentConfig& config,
                      const PreprocessResources& resources) {
  RunOutput out{blank_row(config, 0), {}};
  out.pipeline = in_stage("train", [&] { return fit_cnn_pipeline(train, config, resources, out.row.warnings); });
  score(out.row, out.pipeline, test);
  return out;
}

std::string pad_sn(size_t sn) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", sn);
  return buf;
}

void save_artifacts(const std::filesystem::path& dir, const ResultRow& row, const Pipeline& pipeline) {
  std::filesystem::create_directories(dir);
  const std::string stem = "row_" + pad_sn(row.sn);
  save_model(dir / (stem + ".ufnd"), pipeline);
  if (const auto* cnn = std::get_if<CnnStage>(&pipeline.stage)) {
    std::ofstream out(dir / (stem + ".history.tsv"));
    write_history_tsv(out, cnn->history);
  }
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string sanitize(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r' || c == '|'; }, ' ');
  return s;
}

std::string status_of(const ResultRow& row) {
  if (!row.ok()) return "error";
  return row.warnings.empty() ? "ok" : "warn";
}

std::string message_of(const ResultRow& row) {
  return sanitize(row.ok() ? join(row.warnings, "; ") : row.error);
}

}  // namespace

RunOutput run_config(const Corpus& train, const Corpus& test, const ExperimentConfig& config, size_t k,
                     const PreprocessResources& resources) {
  const auto start = Clock::now();
  RunOutput out;
  if (config.classifier == ClassifierKind::Cnn) {
    out = run_cnn_row(train, test, config, resources);
  } else {
    const SvmFeatures features = in_stage(
        "featurize", [&] { return featurize_train(train, config.preprocess, config.ngrams, resources); });
    out = run_svm_row(features, test, config, k, resources);
  }
  out.row.seconds = seconds_since(start);
  return out;
}

std::vector<ResultRow> run_grid(const Corpus& train, const Corpus& test, std::span<const ExperimentConfig> configs,
                                const PreprocessResources& resources, const GridOptions& options) {
  if (configs.empty()) throw std::invalid_argument("run_grid: no experiment configured");
  std::vector<ResultRow> rows;

  auto finish = [&](ResultRow row, const Pipeline* pipeline) {
    row.sn = rows.size() + 1;
    if (pipeline && options.model_dir) {
      try {
        save_artifacts(*options.model_dir, row, *pipeline);
      } catch (const std::exception& e) {
        row.warnings.push_back(std::string("save: ") + e.what());
      }
    }
    if (options.on_row) options.on_row(row);
    rows.push_back(std::move(row));
  };
  auto fail = [&](const ExperimentConfig& config, size_t k, const std::string& what, double seconds) {
    ResultRow row = blank_row(config, k);
    row.error = what;
    row.seconds = seconds;
    finish(std::move(row), nullptr);
  };

  for (const auto& config : configs) {
    if (config.classifier == ClassifierKind::Cnn) {
      const auto start = Clock::now();
      try {
        RunOutput out = run_cnn_row(train, test, config, resources);
        out.row.seconds = seconds_since(start);
        finish(std::move(out.row), &out.pipeline);
      } catch (const std::exception& e) {
        fail(config, 0, e.what(), seconds_since(start));
      }
      continue;
    }

    const auto featurize_start = Clock::now();
    std::optional<SvmFeatures> features;
    std::string featurize_error;
    try {
      features = in_stage("featurize",
                          [&] { return featurize_train(train, config.preprocess, config.ngrams, resources); });
    } catch (const std::exception& e) {
      featurize_error = e.what();
    }
    const double featurize_seconds = seconds_since(featurize_start);

    for (size_t k : config.k_values) {
      if (!features) {
        fail(config, k, featurize_error, featurize_seconds);
        continue;
      }
      const auto start = Clock::now();
      try {
        RunOutput out = run_svm_row(*features, test, config, k, resources);
        out.row.seconds = featurize_seconds + seconds_since(start);
        finish(std::move(out.row), &out.pipeline);
      } catch (const std::exception& e) {
        fail(config, k, e.what(), featurize_seconds + seconds_since(start));
      }
    }
  }
  return rows;
}

std::vector<int> rank_rows(std::span<const ResultRow> rows) {
  std::vector<size_t> order;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].ok()) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return rows[a].report->f1_macro > rows[b].report->f1_macro; });
  std::vector<int> rank(rows.size(), 0);
  for (size_t r = 0; r < order.size() && r < 3; ++r) rank[order[r]] = static_cast<int>(r + 1);
  return rank;
}

std::string render_tsv(std::span<const ResultRow> rows) {
  const auto rank = rank_rows(rows);
  std::ostringstream out;
  out << kResultsTsvHeader << '\n';
  for (size_t i = 0; i < rows.size(); ++i) {
    const ResultRow& row = rows[i];
    out << row.sn << '\t' << sanitize(row.block) << '\t';
    out << (row.classifier == ClassifierKind::Svm ? std::to_string(row.k_requested) : "-") << '\t';
    if (row.ok()) {
      out << report_tsv_fields(*row.report);
    } else {
      for (int c = 0; c < 8; ++c) out << (c ? "\t" : "") << "NA";
    }
    out << '\t' << (row.ok() ? std::to_string(row.total_features) : "NA");
    out << '\t' << classifier_name(row.classifier) << '\t' << rank[i] << '\t' << status_of(row) << '\t'
        << row.digest << '\t' << message_of(row) << '\n';
  }
  return out.str();
}

std::string render_markdown(std::span<const ResultRow> rows) {
  const auto rank = rank_rows(rows);
  const std::vector<std::string> header = {"SN",   "Block", "K",     "Prec F",   "Rec F",    "F1 F",
                                           "Prec R", "Rec R", "F1 R", "F1 macro", "Accuracy", "V",
                                           "Clf",  "Seconds", "Rank"};
  std::vector<std::vector<std::string>> cells;
  for (size_t i = 0; i < rows.size(); ++i) {
    const ResultRow& row = rows[i];
    std::vector<std::string> line;
    line.push_back(std::to_string(row.sn));
    line.push_back(sanitize(row.block));
    line.push_back(row.classifier == ClassifierKind::Svm ? std::to_string(row.k_requested) : "-");
    if (row.ok()) {
      const EvalReport& r = *row.report;
      for (double v : {r.fake.precision, r.fake.recall, r.fake.f1, r.real.precision, r.real.recall, r.real.f1}) {
        line.push_back(format_4dp(v));
      }
      std::string macro = format_4dp(r.f1_macro);
      if (rank[i] > 0) macro = "**" + macro + "**";
      line.push_back(macro);
      line.push_back(format_4dp(r.accuracy));
      line.push_back(std::to_string(row.total_features));
    } else {
      for (int c = 0; c < 9; ++c) line.push_back("error");
    }
    line.push_back(std::string(classifier_name(row.classifier)));
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", row.seconds);
    line.push_back(secs);
    static const char* const kRankNames[] = {"", "best", "second", "third"};
    line.push_back(kRankNames[rank[i]]);
    cells.push_back(std::move(line));
  }

  // Width in code points so Urdu block names still line up.
  auto width = [](const std::string& s) {
    return static_cast<size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
  };
  std::vector<size_t> widths(header.size());
  for (size_t c = 0; c < header.size(); ++c) {
    widths[c] = width(header[c]);
    for (const auto& line : cells) widths[c] = std::max(widths[c], width(line[c]));
  }
  auto emit = [&](std::ostringstream& out, const std::vector<std::string>& line) {
    out << '|';
    for (size_t c = 0; c < line.size(); ++c) out << ' ' << line[c] << std::string(widths[c] - width(line[c]), ' ') << " |";
    out << '\n';
  };

  std::ostringstream out;
  emit(out, header);
  out << '|';
  for (size_t c = 0; c < header.size(); ++c) out << std::string(widths[c] + 2, '-') << '|';
  out << '\n';
  for (const auto& line : cells) emit(out, line);

  bool notes = false;
  for (const auto& row : rows) {
    const std::string msg = message_of(row);
    if (msg.empty()) continue;
    if (!notes) out << "\nNotes:\n\n";
    notes = true;
    out << "- row " << row.sn << " (" << status_of(row) << "): " << msg << '\n';
  }
  return out.str();
}

}  // namespace ufnd
