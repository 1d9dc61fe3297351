#include "ufnd/pipeline.hpp"

#include <stdexcept>

namespace ufnd {

namespace {

std::vector<int> signs(std::span<const Label> labels) {
  std::vector<int> out;
  out.reserve(labels.size());
  for (Label l : labels) out.push_back(to_sign(l));
  return out;
}

}  // namespace

size_t Pipeline::total_features() const {
  if (const auto* svm = std::get_if<SvmStage>(&stage)) return svm->vocabulary.size();
  return std::get<CnnStage>(stage).encoder.vocab_size();
}

size_t Pipeline::selected_features() const {
  if (const auto* svm = std::get_if<SvmStage>(&stage)) return svm->mask.k();
  return std::get<CnnStage>(stage).encoder.vocab_size();
}

Eigen::VectorXd Pipeline::scores(const Corpus& corpus) const {
  const auto docs = preprocess_corpus(corpus, preprocess, resources);
  if (const auto* svm = std::get_if<SvmStage>(&stage)) {
    const SparseMatrix full = transform(docs, svm->vocabulary, svm->tfidf, ngrams);
    return decision_function(svm->model, apply_mask(full, svm->mask));
  }
  const auto& cnn = std::get<CnnStage>(stage);
  return predict_proba(cnn.model, cnn.encoder.encode(docs));
}

std::vector<Label> Pipeline::labels_from_scores(const Eigen::VectorXd& values) const {
  const double threshold = kind() == ClassifierKind::Svm ? 0.0 : 0.5;
  std::vector<Label> out;
  out.reserve(static_cast<size_t>(values.size()));
  for (double v : values) out.push_back(v >= threshold ? Label::Fake : Label::Real);
  return out;
}

std::vector<Label> Pipeline::predict(const Corpus& corpus) const { return labels_from_scores(scores(corpus)); }

SvmFeatures featurize_train(const Corpus& train, const PreprocessConfig& preprocess, const NgramSpec& ngrams,
                            const PreprocessResources& resources) {
  SvmFeatures out;
  out.train_labels = train.labels();
  const auto docs = preprocess_corpus(train, preprocess, resources);
  out.vocabulary = build_vocabulary(docs, ngrams);
  out.tfidf = fit_tfidf(out.vocabulary);
  out.train_matrix = transform(docs, out.vocabulary, out.tfidf, ngrams);
  out.chi2 = chi2_scores(out.train_matrix, out.train_labels);
  return out;
}

Pipeline fit_svm_pipeline(const SvmFeatures& features, const ExperimentConfig& config, size_t k,
                          const PreprocessResources& resources, std::vector<std::string>& warnings) {
  Pipeline pipeline;
  pipeline.preprocess = config.preprocess;
  pipeline.resources = resources;
  pipeline.ngrams = config.ngrams;

  SvmStage stage;
  stage.vocabulary = features.vocabulary;
  stage.tfidf = features.tfidf;
  stage.mask = select_k_best(features.chi2, k);
  if (stage.mask.clamped()) {
    warnings.push_back("K=" + std::to_string(k) + " exceeds " + std::to_string(stage.mask.n_features) +
                       " features; keeping all");
  }
  const SparseMatrix selected = apply_mask(features.train_matrix, stage.mask);

  SvmOptions options;
  options.C = config.svm.C;
  options.tol = config.svm.tol;
  options.max_passes = config.svm.max_passes;
  options.cache_bytes = config.svm.cache_mb << 20;
  options.kernel.degree = config.svm.degree;
  options.kernel.coef0 = config.svm.coef0;
  options.kernel.gamma = config.svm.gamma > 0.0 ? config.svm.gamma : 1.0 / static_cast<double>(stage.mask.k());
  const auto y = signs(features.train_labels);
  stage.model = train_svm(selected, y, options);
  if (!stage.model.converged) {
    warnings.push_back("SMO stopped after " + std::to_string(stage.model.passes) + " passes without converging");
  }
  pipeline.stage = std::move(stage);
  return pipeline;
}

Pipeline fit_cnn_pipeline(const Corpus& train, const ExperimentConfig& config, const PreprocessResources& resources,
                          std::vector<std::string>& warnings) {
  Pipeline pipeline;
  pipeline.preprocess = config.preprocess;
  pipeline.resources = resources;
  pipeline.ngrams = config.ngrams;

  const auto labels = train.labels();
  const auto docs = preprocess_corpus(train, config.preprocess, resources);
  CnnStage stage;
  stage.encoder = SequenceEncoder::fit(docs, config.cnn.unit, config.cnn.max_len);

  CnnShape shape;
  shape.vocab_size = stage.encoder.vocab_size();
  shape.max_len = stage.encoder.max_len();
  shape.kernel_sizes = config.cnn.channels;
  shape.embed_dim = config.cnn.embed_dim;
  shape.filters = config.cnn.filters;
  shape.hidden = config.cnn.hidden;
  shape.pool = config.cnn.pool;

  std::vector<int> targets;
  targets.reserve(labels.size());
  for (Label l : labels) targets.push_back(to_binary(l));
  auto result = train_cnn(init_cnn<float>(shape, config.seed), stage.encoder.encode(docs), targets,
                          config.cnn.train_config(config.seed));
  if (!result.model.all_finite()) warnings.push_back("CNN parameters became non-finite");
  stage.model = std::move(result.model);
  stage.history = std::move(result.history);
  pipeline.stage = std::move(stage);
  return pipeline;
}

Pipeline fit_pipeline(const Corpus& train, const ExperimentConfig& config, size_t k,
                      const PreprocessResources& resources, std::vector<std::string>& warnings) {
  if (config.classifier == ClassifierKind::Cnn) return fit_cnn_pipeline(train, config, resources, warnings);
  const SvmFeatures features = featurize_train(train, config.preprocess, config.ngrams, resources);
  return fit_svm_pipeline(features, config, k, resources, warnings);
}

}  // namespace ufnd
