#pragma once

#include "ufnd/config.hpp"
#include "ufnd/corpus.hpp"

#include <utility>

namespace fixture {

/// Disjoint-pool synthetic corpus split into train/test per class.
inline std::pair<ufnd::Corpus, ufnd::Corpus> synthetic(uint64_t seed, size_t train_per_class, size_t test_per_class) {
  const auto all = ufnd::generate_synthetic(
      ufnd::SyntheticSpec::with_default_pools(seed, train_per_class + test_per_class));
  auto split = ufnd::split_per_class(all, train_per_class);
  split.second.split = ufnd::Split::Test;
  return split;
}

inline ufnd::ExperimentConfig svm_config(size_t k = 20000) {
  ufnd::ExperimentConfig c;
  c.name = "svm";
  c.k_values = {k};
  return c;
}

inline ufnd::ExperimentConfig cnn_config(int epochs = 10) {
  ufnd::ExperimentConfig c;
  c.name = "cnn";
  c.classifier = ufnd::ClassifierKind::Cnn;
  c.cnn.embed_dim = 16;
  c.cnn.filters = 8;
  c.cnn.epochs = epochs;
  return c;
}

}  // namespace fixture
