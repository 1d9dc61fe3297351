#pragma once

#include "ufnd/cnn.hpp"
#include "ufnd/config.hpp"
#include "ufnd/corpus.hpp"
#include "ufnd/preprocess.hpp"
#include "ufnd/select.hpp"
#include "ufnd/svm.hpp"
#include "ufnd/vectorize.hpp"

#include <Eigen/Core>

#include <string>
#include <variant>
#include <vector>

namespace ufnd {

struct SvmStage {
  Vocabulary vocabulary;
  TfIdfModel tfidf;
  SelectionMask mask;
  SvmModel model;
};

struct CnnStage {
  SequenceEncoder encoder;
  CnnModel<float> model;
  std::vector<EpochStats> history;
};

/// Everything fitted on a training split: resources, preprocessing, features
/// and the classifier. Self-contained for prediction.
struct Pipeline {
  PreprocessConfig preprocess;
  PreprocessResources resources;
  NgramSpec ngrams;
  std::variant<SvmStage, CnnStage> stage;

  ClassifierKind kind() const { return std::holds_alternative<SvmStage>(stage) ? ClassifierKind::Svm : ClassifierKind::Cnn; }
  /// Vocabulary size before selection (SVM) or sequence vocabulary (CNN).
  size_t total_features() const;
  size_t selected_features() const;

  /// SVM decision values, or CNN probabilities of Fake.
  Eigen::VectorXd scores(const Corpus& corpus) const;
  std::vector<Label> predict(const Corpus& corpus) const;
  std::vector<Label> labels_from_scores(const Eigen::VectorXd& scores) const;
};

/// Train-split featurization shared by every K of one SVM block.
struct SvmFeatures {
  Vocabulary vocabulary;
  TfIdfModel tfidf;
  SparseMatrix train_matrix;
  Eigen::VectorXd chi2;
  std::vector<Label> train_labels;
};

SvmFeatures featurize_train(const Corpus& train, const PreprocessConfig& preprocess, const NgramSpec& ngrams,
                            const PreprocessResources& resources);

/// Selection + SVM on precomputed features. `warnings` collects K clamping
/// and non-convergence notices.
Pipeline fit_svm_pipeline(const SvmFeatures& features, const ExperimentConfig& config, size_t k,
                          const PreprocessResources& resources, std::vector<std::string>& warnings);

Pipeline fit_cnn_pipeline(const Corpus& train, const ExperimentConfig& config, const PreprocessResources& resources,
                          std::vector<std::string>& warnings);

/// Fits on `train` only. `k` is ignored for the CNN.
Pipeline fit_pipeline(const Corpus& train, const ExperimentConfig& config, size_t k,
                      const PreprocessResources& resources, std::vector<std::string>& warnings);

}  // namespace ufnd
