#include "ufnd/runner.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace ufnd;
namespace fs = std::filesystem;

namespace {

std::string tsv(const std::vector<ResultRow>& rows) { return render_tsv(rows); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("ufnd_runner_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("separable synthetic corpus with the default svm config") {
  auto [train, test] = fixture::synthetic(7, 100, 50);
  const auto out = run_config(train, test, fixture::svm_config(), 20000, PreprocessResources{});
  REQUIRE(out.row.ok());
  CHECK(out.row.report->f1_macro >= 0.95);
  CHECK(out.row.total_features > 1000);
  CHECK(out.row.matrix->total() == test.size());
}

TEST_CASE("K above V is clamped with a warning") {
  auto [train, test] = fixture::synthetic(7, 20, 5);
  ExperimentConfig cfg = fixture::svm_config();
  cfg.ngrams = {{1}, {}, true};
  const auto out = run_config(train, test, cfg, 1000000, PreprocessResources{});
  REQUIRE(out.row.ok());
  CHECK(out.row.k_selected == out.row.total_features);
  CHECK(out.row.k_requested == 1000000);
  REQUIRE(out.row.warnings.size() == 1);
  CHECK(out.row.warnings[0].find("exceeds") != std::string::npos);
}

TEST_CASE("same config twice gives the same row") {
  auto [train, test] = fixture::synthetic(2, 30, 10);
  for (const auto& cfg : {fixture::svm_config(500), fixture::cnn_config(2)}) {
    const auto a = run_config(train, test, cfg, 500, PreprocessResources{});
    const auto b = run_config(train, test, cfg, 500, PreprocessResources{});
    CHECK(tsv({a.row}) == tsv({b.row}));
    CHECK(a.pipeline.scores(test) == b.pipeline.scores(test));
  }
}

TEST_CASE("fitting never looks at the test split") {
  auto [train, test] = fixture::synthetic(5, 30, 10);
  auto [other_train, other_test] = fixture::synthetic(99, 10, 25);
  const auto cfg = fixture::svm_config(300);
  const auto a = run_config(train, test, cfg, 300, PreprocessResources{});
  const auto b = run_config(train, other_test, cfg, 300, PreprocessResources{});
  const auto& sa = std::get<SvmStage>(a.pipeline.stage);
  const auto& sb = std::get<SvmStage>(b.pipeline.stage);
  CHECK(sa.vocabulary == sb.vocabulary);
  CHECK(sa.tfidf.idf == sb.tfidf.idf);
  CHECK(sa.mask == sb.mask);
  CHECK(sa.model.dual_coef == sb.model.dual_coef);
}

TEST_CASE("cnn rows") {
  auto [train, test] = fixture::synthetic(7, 40, 20);
  const auto out = run_config(train, test, fixture::cnn_config(10), 0, PreprocessResources{});
  REQUIRE(out.row.ok());
  CHECK(out.row.k_requested == 0);
  CHECK(out.row.classifier == ClassifierKind::Cnn);
  CHECK(out.row.report->f1_macro >= 0.9);
}

TEST_CASE("grid shaped like the shipped svm grid") {
  auto [train, test] = fixture::synthetic(7, 30, 10);
  const auto configs = load_config(fs::path(UFND_DATA_DIR).parent_path() / "configs" / "svm_grid.conf");
  const auto rows = run_grid(train, test, configs, PreprocessResources{});
  REQUIRE(rows.size() == 9);
  const std::vector<std::string> blocks{"w1-2+c2-6", "w1-3+c2-5", "w1-3+c2-5", "w1-4+c2-6", "w1-4+c2-6",
                                        "w1-4+c2-6", "w1-4+c2-6", "w1-4+c2-6", "w1-4+c3-6"};
  const std::vector<size_t> ks{20000, 50000, 20000, 70000, 50000, 25000, 20000, 10000, 20000};
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].sn == i + 1);
    CHECK(rows[i].block == blocks[i]);
    CHECK(rows[i].k_requested == ks[i]);
    CHECK(rows[i].ok());
  }
  // Rows of one block share the featurization.
  CHECK(rows[3].total_features == rows[7].total_features);

  const std::string text = render_tsv(rows);
  std::istringstream lines(text);
  std::string line;
  std::getline(lines, line);
  CHECK(line == kResultsTsvHeader);
  size_t count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 9);

  const std::string md = render_markdown(rows);
  CHECK(md.find("best") != std::string::npos);
  CHECK(md.find("**") != std::string::npos);
}

TEST_CASE("single config and a failing row") {
  auto [train, test] = fixture::synthetic(7, 20, 5);
  auto small = fixture::svm_config(200);
  CHECK(run_grid(train, test, std::vector<ExperimentConfig>{small}, PreprocessResources{}).size() == 1);

  ExperimentConfig broken = small;
  broken.name = "broken";
  broken.ngrams = {{}, {}, true};
  const std::vector<ExperimentConfig> three{small, broken, small};
  const auto rows = run_grid(train, test, three, PreprocessResources{});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].ok());
  CHECK_FALSE(rows[1].ok());
  CHECK(rows[1].error.rfind("featurize:", 0) == 0);
  CHECK(rows[2].ok());
  const std::string text = render_tsv(rows);
  CHECK(text.find("\terror\t") != std::string::npos);
  CHECK(rank_rows(rows)[1] == 0);
  CHECK_THROWS_AS(run_grid(train, test, std::vector<ExperimentConfig>{}, PreprocessResources{}),
                  std::invalid_argument);
}

TEST_CASE("ranking and rounding in the rendered tables") {
  ResultRow a, b, c, d;
  a.sn = 1;
  b.sn = 2;
  c.sn = 3;
  d.sn = 4;
  for (auto* r : {&a, &b, &c, &d}) r->report = EvalReport{};
  a.report->f1_macro = 0.5;
  b.report->f1_macro = 0.66745;
  c.report->f1_macro = 0.7;
  d.report->f1_macro = 0.6;
  const std::vector<ResultRow> rows{a, b, c, d};
  CHECK(rank_rows(rows) == std::vector<int>{0, 2, 1, 3});
  const std::string text = render_tsv(rows);
  CHECK(text.find(format_4dp(0.66745)) != std::string::npos);
}

TEST_CASE("two identical grid runs write identical files") {
  auto [train, test] = fixture::synthetic(7, 25, 10);
  const std::vector<ExperimentConfig> configs{fixture::svm_config(300), fixture::cnn_config(2)};
  std::string tables[2];
  fs::path dirs[2] = {fresh_dir("a"), fresh_dir("b")};
  for (int run = 0; run < 2; ++run) {
    GridOptions opt;
    opt.model_dir = dirs[run];
    tables[run] = render_tsv(run_grid(train, test, configs, PreprocessResources{}, opt));
  }
  CHECK(tables[0] == tables[1]);
  for (const char* name : {"row_001.ufnd", "row_002.ufnd", "row_002.history.tsv"}) {
    const std::string a = slurp(dirs[0] / name);
    CHECK(!a.empty());
    CHECK(a == slurp(dirs[1] / name));
  }
  for (const auto& d : dirs) fs::remove_all(d);
}
