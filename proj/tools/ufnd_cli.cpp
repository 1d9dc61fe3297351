// ufnd: command-line front end for the Urdu fake-news detection pipeline.

#include "ufnd/config.hpp"
#include "ufnd/corpus.hpp"
#include "ufnd/eval.hpp"
#include "ufnd/persist.hpp"
#include "ufnd/pipeline.hpp"
#include "ufnd/preprocess.hpp"
#include "ufnd/runner.hpp"
#include "ufnd/select.hpp"
#include "ufnd/vectorize.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace ufnd;

namespace {

struct Globals {
  std::optional<uint64_t> seed;
  std::string config;
  std::string stopwords;
  std::string lemmas;
  std::string normmap;
  std::string out_dir = ".";
  bool no_default_resources = false;
};

std::string default_resource(const char* name) {
  const fs::path p = fs::path(UFND_DATA_DIR) / name;
  return fs::exists(p) ? p.string() : std::string();
}

PreprocessResources load_resources(const Globals& g) {
  PreprocessResources res;
  auto pick = [&](const std::string& given, const char* name) {
    if (!given.empty()) return given;
    return g.no_default_resources ? std::string() : default_resource(name);
  };
  if (const auto p = pick(g.stopwords, "stopwords.txt"); !p.empty()) res.stopwords = StopwordList::load(p);
  if (const auto p = pick(g.lemmas, "lemmas.tsv"); !p.empty()) res.lemmas = LemmaTable::load(p);
  if (const auto p = pick(g.normmap, "normmap.tsv"); !p.empty()) res.normalization = NormalizationMap::load(p);
  return res;
}

std::vector<ExperimentConfig> load_configs(const Globals& g) {
  std::vector<ExperimentConfig> configs;
  if (g.config.empty()) {
    configs.emplace_back();
    configs.back().name = "default";
  } else {
    configs = load_config(g.config);
  }
  if (g.seed) {
    for (auto& c : configs) c.seed = *g.seed;
  }
  return configs;
}

ExperimentConfig pick_block(const Globals& g, const std::string& block) {
  const auto configs = load_configs(g);
  if (block.empty()) return configs.front();
  for (const auto& c : configs) {
    if (c.name == block) return c;
  }
  throw ConfigError("no experiment block named '" + block + "' in " + g.config);
}

fs::path out_path(const Globals& g, const std::string& name) {
  fs::create_directories(g.out_dir);
  return fs::path(g.out_dir) / name;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string s;
  for (size_t i = 0; i < tokens.size(); ++i) s += (i ? " " : "") + tokens[i];
  return s;
}

Split split_arg(const std::string& s) {
  const auto split = parse_split(s);
  if (!split) throw ConfigError("unknown split '" + s + "' (expected train, test or unlabeled)");
  return *split;
}

void cmd_preprocess(const Globals& g, const std::string& input, const std::string& output,
                    const std::string& block) {
  const auto config = pick_block(g, block);
  const auto resources = load_resources(g);
  const Corpus corpus = load_corpus(input, Split::Unlabeled);
  Corpus processed = corpus;
  for (auto& doc : processed.documents) doc.text = join_tokens(preprocess(doc, config.preprocess, resources).tokens);
  auto out = open_out(out_path(g, output));
  write_corpus(out, processed);
  std::cout << "preprocessed " << corpus.size() << " documents -> " << out_path(g, output).string() << '\n';
}

void cmd_featurize(const Globals& g, const std::string& train_path, const std::string& block, size_t top) {
  const auto config = pick_block(g, block);
  const auto resources = load_resources(g);
  const Corpus train = load_corpus(train_path, Split::Train);
  const SvmFeatures f = featurize_train(train, config.preprocess, config.ngrams, resources);

  auto vocab_out = open_out(out_path(g, "vocabulary.tsv"));
  f.vocabulary.write_tsv(vocab_out);

  std::vector<size_t> order(f.vocabulary.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return f.chi2[a] > f.chi2[b]; });
  auto chi_out = open_out(out_path(g, "chi2.tsv"));
  chi_out << "rank\tterm\tindex\tchi2\tdf\tidf\n";
  char buf[64];
  for (size_t r = 0; r < order.size(); ++r) {
    const size_t j = order[r];
    std::snprintf(buf, sizeof buf, "%.9g\t%d\t%.9g", f.chi2[j], f.vocabulary.doc_freq(j), f.tfidf.idf[j]);
    chi_out << r + 1 << '\t' << f.vocabulary.term(j) << '\t' << j << '\t' << buf << '\n';
  }
  std::cout << "documents\t" << train.size() << "\nfeatures\t" << f.vocabulary.size() << "\nngrams\t"
            << config.ngrams.label() << '\n';
  for (size_t r = 0; r < std::min(top, order.size()); ++r) {
    std::cout << "top" << r + 1 << '\t' << f.vocabulary.term(order[r]) << '\t' << f.chi2[order[r]] << '\n';
  }
}

void cmd_train(const Globals& g, const std::string& train_path, const std::string& block, size_t k,
               const std::string& model_name) {
  const auto config = pick_block(g, block);
  const auto resources = load_resources(g);
  const Corpus train = load_corpus(train_path, Split::Train);
  const size_t use_k = k ? k : config.k_values.front();
  std::vector<std::string> warnings;
  const Pipeline pipeline = fit_pipeline(train, config, use_k, resources, warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  const fs::path path = out_path(g, model_name);
  save_model(path, pipeline);
  if (const auto* cnn = std::get_if<CnnStage>(&pipeline.stage)) {
    auto out = open_out(out_path(g, fs::path(model_name).stem().string() + ".history.tsv"));
    write_history_tsv(out, cnn->history);
  }
  std::cout << "classifier\t" << classifier_name(pipeline.kind()) << "\nfeatures\t" << pipeline.total_features()
            << "\nselected\t" << pipeline.selected_features() << "\nmodel\t" << path.string() << '\n';
}

void cmd_predict(const Globals& g, const std::string& model_path, const std::string& input,
                 const std::string& output) {
  const Pipeline pipeline = load_model(model_path);
  const Corpus corpus = load_corpus(input, Split::Unlabeled);
  const Eigen::VectorXd scores = pipeline.scores(corpus);
  const auto labels = pipeline.labels_from_scores(scores);
  auto out = open_out(out_path(g, output));
  out << "id\tlabel\tscore\n";
  char buf[32];
  for (size_t i = 0; i < corpus.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", scores[static_cast<Eigen::Index>(i)]);
    out << corpus.documents[i].id << '\t' << label_name(labels[i]) << '\t' << buf << '\n';
  }
  std::cout << "predicted " << corpus.size() << " documents -> " << out_path(g, output).string() << '\n';
}

void print_report(const ConfusionMatrix& m) {
  const EvalReport r = summarize(m);
  std::cout << "tp_fake\t" << m.tp_fake << "\nfn_fake\t" << m.fn_fake << "\nfp_fake\t" << m.fp_fake << "\ntn_fake\t"
            << m.tn_fake << '\n';
  std::cout << kReportTsvHeader << '\n' << report_tsv_fields(r) << '\n';
}

void cmd_evaluate(const Globals& g, const std::string& gold_path, const std::string& pred_path,
                  const std::string& model_path) {
  const Corpus gold = load_corpus(gold_path, Split::Test);
  std::vector<Label> predicted;
  if (!model_path.empty()) {
    predicted = load_model(model_path).predict(gold);
  } else {
    std::ifstream in(pred_path);
    if (!in) throw LoadError("cannot open predictions " + pred_path);
    std::map<std::string, Label> by_id;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || (line_no == 1 && line.rfind("id\t", 0) == 0)) continue;
      std::istringstream fields(line);
      std::string id, label;
      std::getline(fields, id, '\t');
      std::getline(fields, label, '\t');
      const auto parsed = parse_label(label);
      if (!parsed) throw LoadError(pred_path + ":" + std::to_string(line_no) + ": unknown label '" + label + "'");
      by_id[id] = *parsed;
    }
    for (const auto& doc : gold.documents) {
      const auto it = by_id.find(doc.id);
      if (it == by_id.end()) throw LoadError("no prediction for document '" + doc.id + "'");
      predicted.push_back(it->second);
    }
  }
  (void)g;
  print_report(confusion(gold.labels(), predicted));
}

void cmd_experiment(const Globals& g, const std::string& train_path, const std::string& test_path, bool save_models) {
  if (g.config.empty()) throw ConfigError("experiment requires --config");
  const auto configs = load_configs(g);
  const auto resources = load_resources(g);
  const Corpus train = load_corpus(train_path, Split::Train);
  const Corpus test = load_corpus(test_path, Split::Test);

  GridOptions options;
  if (save_models) options.model_dir = out_path(g, "models");
  options.on_row = [](const ResultRow& row) {
    std::cerr << "row " << row.sn << " [" << row.block << "] ";
    if (row.ok()) {
      std::cerr << "f1_macro=" << format_4dp(row.report->f1_macro) << " V=" << row.total_features;
    } else {
      std::cerr << "error: " << row.error;
    }
    std::fprintf(stderr, " (%.2fs)\n", row.seconds);
  };
  const auto rows = run_grid(train, test, configs, resources, options);

  open_out(out_path(g, "results.tsv")) << render_tsv(rows);
  open_out(out_path(g, "results.md")) << render_markdown(rows);
  open_out(out_path(g, "config.used.conf")) << write_config(configs);
  std::cout << render_markdown(rows);
}

void cmd_inspect(const std::string& model_path, size_t top) {
  const Pipeline p = load_model(model_path);
  std::cout << "format\t" << kModelMajorVersion << '.' << kModelMinorVersion << '\n';
  std::cout << "classifier\t" << classifier_name(p.kind()) << '\n';
  std::cout << "preprocess\tdiacritics=" << p.preprocess.remove_diacritics << " normalize=" << p.preprocess.normalize
            << " stopwords=" << p.preprocess.remove_stopwords << " lemmatize=" << p.preprocess.lemmatize << '\n';
  std::cout << "resources\tstopwords=" << p.resources.stopwords.size() << " lemmas=" << p.resources.lemmas.size()
            << " normmap=" << p.resources.normalization.entries().size() << '\n';
  std::cout << "features\t" << p.total_features() << "\nselected\t" << p.selected_features() << '\n';
  if (const auto* svm = std::get_if<SvmStage>(&p.stage)) {
    std::cout << "ngrams\t" << p.ngrams.label() << '\n';
    std::cout << "kernel\tdegree=" << svm->model.kernel.degree << " gamma=" << svm->model.kernel.gamma
              << " coef0=" << svm->model.kernel.coef0 << "\nC\t" << svm->model.C << "\nbias\t" << svm->model.bias
              << "\nsupport_vectors\t" << svm->model.support_indices.size() << "\nconverged\t"
              << (svm->model.converged ? "yes" : "no") << "\npasses\t" << svm->model.passes << '\n';
    std::vector<size_t> order(svm->mask.k());
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return svm->mask.kept_scores[a] > svm->mask.kept_scores[b]; });
    // Top features follow as their own TSV block.
    if (top > 0) std::cout << "\nrank\tterm\tchi2\n";
    for (size_t r = 0; r < std::min(top, order.size()); ++r) {
      const size_t col = static_cast<size_t>(svm->mask.kept[order[r]]);
      std::cout << r + 1 << '\t' << svm->vocabulary.term(col) << '\t' << svm->mask.kept_scores[order[r]]
                << '\n';
    }
  } else {
    const auto& cnn = std::get<CnnStage>(p.stage);
    const auto& s = cnn.model.shape;
    std::cout << "unit\t" << unit_name(cnn.encoder.unit()) << "\nmax_len\t" << s.max_len << "\nchannels\t";
    for (size_t i = 0; i < s.kernel_sizes.size(); ++i) std::cout << (i ? "," : "") << s.kernel_sizes[i];
    std::cout << "\nembed_dim\t" << s.embed_dim << "\nfilters\t" << s.filters << "\nhidden\t" << s.hidden
              << "\nepochs_trained\t" << cnn.history.size() << '\n';
    if (!cnn.history.empty()) std::cout << "final_loss\t" << cnn.history.back().loss << '\n';
  }
}

void cmd_validate(const std::string& input, const std::string& split_name_arg) {
  const Split split = split_arg(split_name_arg);
  const Corpus corpus = load_corpus(input, split);
  const auto expected =
      split == Split::Test ? shared_task_test_expectation() : shared_task_train_expectation();
  std::cout << validate_split(corpus, expected).to_text();
}

void cmd_synth(const Globals& g, uint64_t seed, size_t train_per_class, size_t test_per_class) {
  const uint64_t use_seed = g.seed.value_or(seed);
  const Corpus all = generate_synthetic(SyntheticSpec::with_default_pools(use_seed, train_per_class + test_per_class));
  auto [train, test] = split_per_class(all, train_per_class);
  test.split = Split::Test;
  save_corpus(out_path(g, "train.tsv"), train);
  save_corpus(out_path(g, "test.tsv"), test);
  std::cout << "train\t" << train.size() << "\ntest\t" << test.size() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Urdu fake-news detection: preprocessing, n-gram TF-IDF + chi2 + SVM, multichannel CNN"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Override the seed of every experiment block");
  app.add_option("--config", g.config, "Experiment config file");
  app.add_option("--stopwords", g.stopwords, "Stopword list (one per line)");
  app.add_option("--lemmas", g.lemmas, "Lemma table (surface TAB lemma)");
  app.add_option("--normmap", g.normmap, "Normalization map (U+XXXX TAB U+YYYY)");
  app.add_option("--out-dir", g.out_dir, "Directory for all outputs")->capture_default_str();
  app.add_flag("--no-default-resources", g.no_default_resources,
               "Do not fall back to the bundled data/ resources");

  std::string input, train_path, test_path, block, model, pred, split = "train";
  std::string pre_output, predict_output, train_model;
  size_t k = 0, top = 10, per_class = 200, test_per_class = 50;
  uint64_t synth_seed = 7;
  bool save_models = false;

  auto* pre = app.add_subcommand("preprocess", "Write the normalized token stream of a corpus");
  pre->add_option("input", input, "Corpus TSV")->required();
  pre->add_option("-o,--output", pre_output, "Output TSV name")->default_val("preprocessed.tsv");
  pre->add_option("--block", block, "Experiment block to take preprocess flags from");

  auto* feat = app.add_subcommand("featurize", "Build vocabulary, idf and chi2 scores on a training corpus");
  feat->add_option("train", train_path, "Training corpus TSV")->required();
  feat->add_option("--block", block, "Experiment block");
  feat->add_option("--top", top, "Print the N highest chi2 terms")->capture_default_str();

  auto* train = app.add_subcommand("train", "Fit one pipeline and save it");
  train->add_option("train", train_path, "Training corpus TSV")->required();
  train->add_option("--block", block, "Experiment block");
  train->add_option("-k,--k", k, "Selected features (default: first K of the block)");
  train->add_option("-m,--model", train_model, "Model file name")->default_val("model.ufnd");

  auto* predict = app.add_subcommand("predict", "Label a corpus with a saved model");
  predict->add_option("model", model, "Model file")->required();
  predict->add_option("input", input, "Corpus TSV (labels optional)")->required();
  predict->add_option("-o,--output", predict_output, "Predictions TSV name")->default_val("predictions.tsv");

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions against gold labels");
  evaluate->add_option("gold", input, "Gold corpus TSV")->required();
  auto* pred_opt = evaluate->add_option("--predictions", pred, "Predictions TSV from 'predict'");
  auto* model_opt = evaluate->add_option("--model", model, "Predict with this model instead");
  pred_opt->excludes(model_opt);

  auto* experiment = app.add_subcommand("experiment", "Run the configured grid and write results.tsv/results.md");
  experiment->add_option("train", train_path, "Training corpus TSV")->required();
  experiment->add_option("test", test_path, "Test corpus TSV")->required();
  experiment->add_flag("--save-models", save_models, "Save every fitted pipeline under models/");

  auto* inspect = app.add_subcommand("inspect", "Describe a saved model");
  inspect->add_option("model", model, "Model file")->required();
  inspect->add_option("--top", top, "Show the N highest-scoring selected features")->capture_default_str();

  auto* validate = app.add_subcommand("validate", "Compare split sizes with the shared-task counts");
  validate->add_option("input", input, "Corpus TSV")->required();
  validate->add_option("--split", split, "train or test")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Write a separable synthetic train/test pair");
  synth->add_option("--synth-seed", synth_seed, "Generator seed (--seed overrides)")->capture_default_str();
  synth->add_option("--train-per-class", per_class)->capture_default_str();
  synth->add_option("--test-per-class", test_per_class)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*pre) cmd_preprocess(g, input, pre_output, block);
    if (*feat) cmd_featurize(g, train_path, block, top);
    if (*train) cmd_train(g, train_path, block, k, train_model);
    if (*predict) cmd_predict(g, model, input, predict_output);
    if (*evaluate) {
      if (pred.empty() && model.empty()) throw ConfigError("evaluate needs --predictions or --model");
      cmd_evaluate(g, input, pred, model);
    }
    if (*experiment) cmd_experiment(g, train_path, test_path, save_models);
    if (*inspect) cmd_inspect(model, top);
    if (*validate) cmd_validate(input, split);
    if (*synth) cmd_synth(g, synth_seed, per_class, test_per_class);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
