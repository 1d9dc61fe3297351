#include "ufnd/cnn.hpp"

#include "ufnd/utf8.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>

namespace ufnd {

std::string_view unit_name(SequenceUnit unit) { return unit == SequenceUnit::Word ? "word" : "char"; }

// ---------------------------------------------------------------------------
// SequenceEncoder

SequenceEncoder::SequenceEncoder(SequenceUnit unit, std::vector<std::string> terms, size_t max_len)
    : unit_(unit), terms_(std::move(terms)), max_len_(max_len) {
  ids_.reserve(terms_.size());
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (!ids_.emplace(terms_[i], static_cast<int>(i + 1)).second) {
      throw ConfigError("sequence encoder has duplicate term '" + terms_[i] + "'");
    }
  }
}

std::vector<std::string> SequenceEncoder::units(const PreprocessedDoc& doc) const {
  if (unit_ == SequenceUnit::Word) return doc.tokens;
  std::vector<std::string> out;
  for (char32_t c : utf8::decode(doc.char_stream)) {
    std::string s;
    utf8::append(s, c);
    out.push_back(std::move(s));
  }
  return out;
}

SequenceEncoder SequenceEncoder::fit(std::span<const PreprocessedDoc> train, SequenceUnit unit, size_t max_len) {
  SequenceEncoder probe(unit, {}, 0);
  std::map<std::string, size_t> counts;
  size_t longest = 0;
  for (const auto& doc : train) {
    const auto seq = probe.units(doc);
    longest = std::max(longest, seq.size());
    for (const auto& u : seq) ++counts[u];
  }
  std::vector<std::pair<std::string, size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> terms;
  terms.reserve(ranked.size());
  for (auto& entry : ranked) terms.push_back(std::move(entry.first));
  if (max_len == 0) max_len = std::min(longest, unit == SequenceUnit::Word ? kWordMaxLenCap : kCharMaxLenCap);
  return SequenceEncoder(unit, std::move(terms), max_len);
}

IdMatrix SequenceEncoder::encode(std::span<const PreprocessedDoc> docs) const {
  IdMatrix out = IdMatrix::Zero(static_cast<Eigen::Index>(docs.size()), static_cast<Eigen::Index>(max_len_));
  for (size_t r = 0; r < docs.size(); ++r) {
    const auto seq = units(docs[r]);
    const size_t n = std::min(seq.size(), max_len_);
    for (size_t t = 0; t < n; ++t) {
      const auto it = ids_.find(seq[t]);
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) = it == ids_.end() ? 0 : it->second;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Shape and parameters

void CnnShape::validate() const {
  if (kernel_sizes.empty()) throw ConfigError("cnn: at least one channel is required");
  if (embed_dim < 1 || filters < 1 || hidden < 1 || pool < 1) throw ConfigError("cnn: layer sizes must be positive");
  for (int k : kernel_sizes) {
    if (k < 1) throw ConfigError("cnn: kernel sizes must be positive");
  }
  const int widest = *std::max_element(kernel_sizes.begin(), kernel_sizes.end());
  if (max_len < static_cast<size_t>(widest)) {
    throw ConfigError("cnn: max_len " + std::to_string(max_len) + " is shorter than kernel size " +
                      std::to_string(widest));
  }
  if (flat_size() == 0) throw ConfigError("cnn: max_len " + std::to_string(max_len) + " leaves nothing to pool");
}

Eigen::Index CnnShape::flat_size() const {
  Eigen::Index total = 0;
  for (int k : kernel_sizes) total += filters * pooled_length(k);
  return total;
}

template <typename Scalar>
CnnModel<Scalar> CnnModel<Scalar>::zeros_like() const {
  CnnModel out;
  out.shape = shape;
  for (const auto& ch : channels) {
    out.channels.push_back({ch.kernel_size, RowMatrix::Zero(ch.embedding.rows(), ch.embedding.cols()),
                            Matrix::Zero(ch.filters.rows(), ch.filters.cols()), Vector::Zero(ch.bias.size())});
  }
  out.dense_weight = Matrix::Zero(dense_weight.rows(), dense_weight.cols());
  out.dense_bias = Vector::Zero(dense_bias.size());
  out.output_weight = Vector::Zero(output_weight.size());
  out.output_bias = Vector::Zero(output_bias.size());
  return out;
}

template <typename Scalar>
template <typename Other>
CnnModel<Other> CnnModel<Scalar>::cast() const {
  CnnModel<Other> out;
  out.shape = shape;
  for (const auto& ch : channels) {
    out.channels.push_back({ch.kernel_size, ch.embedding.template cast<Other>(), ch.filters.template cast<Other>(),
                            ch.bias.template cast<Other>()});
  }
  out.dense_weight = dense_weight.template cast<Other>();
  out.dense_bias = dense_bias.template cast<Other>();
  out.output_weight = output_weight.template cast<Other>();
  out.output_bias = output_bias.template cast<Other>();
  return out;
}

template <typename Scalar>
bool CnnModel<Scalar>::all_finite() const {
  for (const auto& ch : channels) {
    if (!ch.embedding.allFinite() || !ch.filters.allFinite() || !ch.bias.allFinite()) return false;
  }
  return dense_weight.allFinite() && dense_bias.allFinite() && output_weight.allFinite() && output_bias.allFinite();
}

template <typename Scalar>
std::vector<ParamGroup<Scalar>> parameter_groups(CnnModel<Scalar>& model) {
  using Flat = Eigen::Map<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>;
  std::vector<ParamGroup<Scalar>> groups;
  for (auto& ch : model.channels) {
    const std::string suffix = "[k=" + std::to_string(ch.kernel_size) + "]";
    groups.push_back({"embedding" + suffix, Flat(ch.embedding.data(), ch.embedding.size())});
    groups.push_back({"conv_weight" + suffix, Flat(ch.filters.data(), ch.filters.size())});
    groups.push_back({"conv_bias" + suffix, Flat(ch.bias.data(), ch.bias.size())});
  }
  groups.push_back({"dense_weight", Flat(model.dense_weight.data(), model.dense_weight.size())});
  groups.push_back({"dense_bias", Flat(model.dense_bias.data(), model.dense_bias.size())});
  groups.push_back({"output_weight", Flat(model.output_weight.data(), model.output_weight.size())});
  groups.push_back({"output_bias", Flat(model.output_bias.data(), model.output_bias.size())});
  return groups;
}

template <typename Scalar>
CnnModel<Scalar> init_cnn(const CnnShape& shape, uint64_t seed) {
  shape.validate();
  using Model = CnnModel<Scalar>;
  std::mt19937_64 rng(seed);
  auto fill_uniform = [&rng](auto& m, double limit) {
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = static_cast<Scalar>(dist(rng));
  };
  const auto rows = static_cast<Eigen::Index>(shape.vocab_size + 1);
  Model model;
  model.shape = shape;
  for (int k : shape.kernel_sizes) {
    typename Model::Channel ch;
    ch.kernel_size = k;
    ch.embedding.resize(rows, shape.embed_dim);
    fill_uniform(ch.embedding, 0.05);
    ch.filters.resize(shape.filters, k * shape.embed_dim);
    fill_uniform(ch.filters, std::sqrt(6.0 / (k * shape.embed_dim + k * shape.filters)));
    ch.bias = Model::Vector::Zero(shape.filters);
    model.channels.push_back(std::move(ch));
  }
  const Eigen::Index flat = shape.flat_size();
  model.dense_weight.resize(shape.hidden, flat);
  fill_uniform(model.dense_weight, std::sqrt(6.0 / static_cast<double>(flat + shape.hidden)));
  model.dense_bias = Model::Vector::Zero(shape.hidden);
  model.output_weight.resize(shape.hidden);
  fill_uniform(model.output_weight, std::sqrt(6.0 / (shape.hidden + 1.0)));
  model.output_bias = Model::Vector::Zero(1);
  return model;
}

// ---------------------------------------------------------------------------
// Forward / backward

namespace {

double sigmoid(double z) { return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z)); }

/// -log p(target | logit), computed without forming p.
double bce_from_logit(double z, int target) {
  const double softplus_neg = std::log1p(std::exp(-std::abs(z))) + std::max(-z, 0.0);  // -log sigmoid(z)
  return target == 1 ? softplus_neg : softplus_neg + z;
}

template <typename Scalar>
struct SampleTrace {
  using Matrix = typename CnnModel<Scalar>::Matrix;
  using RowMatrix = typename CnnModel<Scalar>::RowMatrix;
  using Vector = typename CnnModel<Scalar>::Vector;

  struct ChannelTrace {
    RowMatrix inputs;       // max_len x embed_dim, after dropout
    RowMatrix keep;         // dropout scale per input element (empty when off)
    Matrix pre;             // filters x conv_length, before ReLU
    Eigen::MatrixXi argmax;  // filters x pooled_length, column of pre that won
  };

  std::vector<ChannelTrace> channels;
  Vector flat;
  Vector hidden_pre;
  Vector hidden;
};

template <typename Scalar>
using WindowMap = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>, 0, Eigen::OuterStride<>>;

/// Column t is the flattened window inputs[t .. t + k - 1] (overlapping views).
template <typename Scalar>
WindowMap<Scalar> windows(const typename CnnModel<Scalar>::RowMatrix& inputs, int kernel) {
  const Eigen::Index dim = inputs.cols();
  return WindowMap<Scalar>(inputs.data(), kernel * dim, inputs.rows() - kernel + 1, Eigen::OuterStride<>(dim));
}

struct Dropout {
  double rate = 0.0;
  std::mt19937_64* rng = nullptr;
};

template <typename Scalar>
Scalar forward_sample(const CnnModel<Scalar>& model, const int* ids, SampleTrace<Scalar>& trace,
                      const Dropout& dropout = {}) {
  const CnnShape& shape = model.shape;
  const auto length = static_cast<Eigen::Index>(shape.max_len);
  const Eigen::Index filters = shape.filters;
  trace.channels.resize(model.channels.size());
  trace.flat.resize(shape.flat_size());
  Eigen::Index offset = 0;
  for (size_t c = 0; c < model.channels.size(); ++c) {
    const auto& ch = model.channels[c];
    auto& tr = trace.channels[c];
    tr.inputs.resize(length, shape.embed_dim);
    for (Eigen::Index t = 0; t < length; ++t) tr.inputs.row(t) = ch.embedding.row(ids[t]);
    if (dropout.rate > 0.0 && dropout.rng != nullptr) {
      std::bernoulli_distribution drop(dropout.rate);
      const auto scale = static_cast<Scalar>(1.0 / (1.0 - dropout.rate));
      tr.keep.resize(length, shape.embed_dim);
      for (Eigen::Index i = 0; i < tr.keep.size(); ++i) tr.keep.data()[i] = drop(*dropout.rng) ? Scalar(0) : scale;
      tr.inputs.array() *= tr.keep.array();
    } else {
      tr.keep.resize(0, 0);
    }

    tr.pre.noalias() = ch.filters * windows<Scalar>(tr.inputs, ch.kernel_size);
    tr.pre.colwise() += ch.bias;

    const Eigen::Index pooled = shape.pooled_length(ch.kernel_size);
    tr.argmax.resize(filters, pooled);
    for (Eigen::Index s = 0; s < pooled; ++s) {
      for (Eigen::Index f = 0; f < filters; ++f) {
        Eigen::Index best = s * shape.pool;
        Scalar best_value = std::max(tr.pre(f, best), Scalar(0));
        for (int w = 1; w < shape.pool; ++w) {
          const Scalar v = std::max(tr.pre(f, s * shape.pool + w), Scalar(0));
          if (v > best_value) {
            best_value = v;
            best = s * shape.pool + w;
          }
        }
        tr.argmax(f, s) = static_cast<int>(best);
        trace.flat[offset + s * filters + f] = best_value;
      }
    }
    offset += pooled * filters;
  }
  trace.hidden_pre.noalias() = model.dense_weight * trace.flat;
  trace.hidden_pre += model.dense_bias;
  trace.hidden = trace.hidden_pre.cwiseMax(Scalar(0));
  return model.output_weight.dot(trace.hidden) + model.output_bias[0];
}

template <typename Scalar>
void backward_sample(const CnnModel<Scalar>& model, const int* ids, const SampleTrace<Scalar>& trace, Scalar dlogit,
                     CnnModel<Scalar>& grad) {
  using Matrix = typename CnnModel<Scalar>::Matrix;
  using RowMatrix = typename CnnModel<Scalar>::RowMatrix;
  using Vector = typename CnnModel<Scalar>::Vector;
  const CnnShape& shape = model.shape;
  const Eigen::Index filters = shape.filters;
  const Eigen::Index dim = shape.embed_dim;

  grad.output_weight += dlogit * trace.hidden;
  grad.output_bias[0] += dlogit;
  const Vector dhidden =
      (dlogit * model.output_weight).cwiseProduct((trace.hidden_pre.array() > Scalar(0)).template cast<Scalar>().matrix());
  grad.dense_weight.noalias() += dhidden * trace.flat.transpose();
  grad.dense_bias += dhidden;
  const Vector dflat = model.dense_weight.transpose() * dhidden;

  Eigen::Index offset = 0;
  for (size_t c = 0; c < model.channels.size(); ++c) {
    const auto& ch = model.channels[c];
    const auto& tr = trace.channels[c];
    auto& g = grad.channels[c];
    const Eigen::Index pooled = tr.argmax.cols();
    Matrix dpre = Matrix::Zero(tr.pre.rows(), tr.pre.cols());
    for (Eigen::Index s = 0; s < pooled; ++s) {
      for (Eigen::Index f = 0; f < filters; ++f) {
        const int col = tr.argmax(f, s);
        if (tr.pre(f, col) > Scalar(0)) dpre(f, col) += dflat[offset + s * filters + f];
      }
    }
    offset += pooled * filters;

    const auto win = windows<Scalar>(tr.inputs, ch.kernel_size);
    g.filters.noalias() += dpre * win.transpose();
    g.bias += dpre.rowwise().sum();
    const Matrix dwin = ch.filters.transpose() * dpre;
    RowMatrix dinputs = RowMatrix::Zero(tr.inputs.rows(), dim);
    for (Eigen::Index t = 0; t < dwin.cols(); ++t) {
      Eigen::Map<Vector>(dinputs.data() + t * dim, ch.kernel_size * dim) += dwin.col(t);
    }
    if (tr.keep.size() > 0) dinputs.array() *= tr.keep.array();
    for (Eigen::Index t = 0; t < dinputs.rows(); ++t) g.embedding.row(ids[t]) += dinputs.row(t);
  }
}

void check_batch(const CnnShape& shape, const IdMatrix& batch) {
  if (batch.cols() != static_cast<Eigen::Index>(shape.max_len)) {
    throw std::invalid_argument("cnn: batch width " + std::to_string(batch.cols()) + " != max_len " +
                                std::to_string(shape.max_len));
  }
  if (batch.size() > 0 && (batch.minCoeff() < 0 || static_cast<size_t>(batch.maxCoeff()) > shape.vocab_size)) {
    throw std::invalid_argument("cnn: token id outside the embedding table");
  }
}

}  // namespace

template <typename Scalar>
Eigen::VectorXd predict_proba(const CnnModel<Scalar>& model, const IdMatrix& batch) {
  check_batch(model.shape, batch);
  SampleTrace<Scalar> trace;
  Eigen::VectorXd out(batch.rows());
  for (Eigen::Index r = 0; r < batch.rows(); ++r) {
    const double logit = static_cast<double>(forward_sample(model, batch.row(r).data(), trace));
    out[r] = std::clamp(sigmoid(logit), 1e-7, 1.0 - 1e-7);
  }
  return out;
}

template <typename Scalar>
std::vector<Label> predict_cnn(const CnnModel<Scalar>& model, const IdMatrix& batch, double threshold) {
  const Eigen::VectorXd p = predict_proba(model, batch);
  std::vector<Label> out;
  out.reserve(static_cast<size_t>(p.size()));
  for (double v : p) out.push_back(v >= threshold ? Label::Fake : Label::Real);
  return out;
}

namespace {

template <typename Scalar>
double batch_loss_and_gradient(const CnnModel<Scalar>& model, const IdMatrix& inputs, std::span<const int> targets,
                               std::span<const Eigen::Index> rows, CnnModel<Scalar>* grad, const Dropout& dropout,
                               size_t* correct) {
  SampleTrace<Scalar> trace;
  const double scale = 1.0 / static_cast<double>(rows.size());
  double total = 0.0;
  for (Eigen::Index r : rows) {
    const int* ids = inputs.row(r).data();
    const int target = targets[static_cast<size_t>(r)];
    const double logit = static_cast<double>(forward_sample(model, ids, trace, dropout));
    total += bce_from_logit(logit, target);
    const double p = sigmoid(logit);
    if (correct != nullptr && (p >= 0.5 ? 1 : 0) == target) ++*correct;
    if (grad != nullptr) backward_sample(model, ids, trace, static_cast<Scalar>((p - target) * scale), *grad);
  }
  return total * scale;
}

}  // namespace

template <typename Scalar>
double loss_and_gradient(const CnnModel<Scalar>& model, const IdMatrix& batch, std::span<const int> targets,
                         CnnModel<Scalar>* gradient) {
  check_batch(model.shape, batch);
  if (static_cast<size_t>(batch.rows()) != targets.size() || targets.empty()) {
    throw std::invalid_argument("cnn: batch rows and targets differ or are empty");
  }
  std::vector<Eigen::Index> rows(targets.size());
  std::iota(rows.begin(), rows.end(), Eigen::Index{0});
  return batch_loss_and_gradient(model, batch, targets, rows, gradient, {}, nullptr);
}

template <typename Scalar>
CnnTrainResult<Scalar> train_cnn(CnnModel<Scalar> model, const IdMatrix& inputs, std::span<const int> targets,
                                 const TrainConfig& config) {
  check_batch(model.shape, inputs);
  if (static_cast<size_t>(inputs.rows()) != targets.size() || targets.empty()) {
    throw std::invalid_argument("train_cnn: inputs and targets differ or are empty");
  }
  for (int t : targets) {
    if (t != 0 && t != 1) throw std::invalid_argument("train_cnn: targets must be 0 or 1");
  }
  if (config.epochs < 1 || config.batch_size < 1 || config.learning_rate < 0.0 || config.embedding_dropout < 0.0 ||
      config.embedding_dropout >= 1.0) {
    throw ConfigError("train_cnn: invalid training configuration");
  }

  CnnModel<Scalar> grad = model.zeros_like();
  CnnModel<Scalar> first_moment = model.zeros_like();
  CnnModel<Scalar> second_moment = model.zeros_like();
  auto params = parameter_groups(model);
  auto grads = parameter_groups(grad);
  auto m = parameter_groups(first_moment);
  auto v = parameter_groups(second_moment);

  std::mt19937_64 shuffle_rng(config.seed);
  std::mt19937_64 dropout_rng(config.seed ^ 0xd1b54a32d192ed03ULL);
  const Dropout dropout{config.embedding_dropout, &dropout_rng};
  std::vector<Eigen::Index> order(targets.size());
  std::iota(order.begin(), order.end(), Eigen::Index{0});

  const auto lr = static_cast<Scalar>(config.learning_rate);
  const auto b1 = static_cast<Scalar>(config.beta1);
  const auto b2 = static_cast<Scalar>(config.beta2);
  const auto eps = static_cast<Scalar>(config.epsilon);
  long long step = 0;

  CnnTrainResult<Scalar> result;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    size_t correct = 0;
    for (size_t start = 0; start < order.size(); start += static_cast<size_t>(config.batch_size)) {
      const size_t end = std::min(order.size(), start + static_cast<size_t>(config.batch_size));
      const std::span<const Eigen::Index> rows(order.data() + start, end - start);
      for (auto& g : grads) g.values.setZero();
      const double loss = batch_loss_and_gradient(model, inputs, targets, rows, &grad, dropout, &correct);
      if (!std::isfinite(loss)) {
        throw std::runtime_error("train_cnn: non-finite loss at epoch " + std::to_string(epoch + 1) +
                                 ", batch starting at row " + std::to_string(start));
      }
      epoch_loss += loss * static_cast<double>(rows.size());

      ++step;
      const auto c1 = static_cast<Scalar>(1.0 - std::pow(config.beta1, static_cast<double>(step)));
      const auto c2 = static_cast<Scalar>(1.0 - std::pow(config.beta2, static_cast<double>(step)));
      for (size_t i = 0; i < params.size(); ++i) {
        m[i].values = b1 * m[i].values + (Scalar(1) - b1) * grads[i].values;
        v[i].values = b2 * v[i].values + (Scalar(1) - b2) * grads[i].values.cwiseAbs2();
        params[i].values.array() -=
            lr * (m[i].values.array() / c1) / ((v[i].values.array() / c2).sqrt() + eps);
      }
    }
    result.history.push_back({epoch + 1, epoch_loss / static_cast<double>(order.size()),
                              static_cast<double>(correct) / static_cast<double>(order.size())});
  }
  result.model = std::move(model);
  return result;
}

void write_history_tsv(std::ostream& out, std::span<const EpochStats> history) {
  out << "epoch\tloss\taccuracy\n";
  char buf[64];
  for (const auto& e : history) {
    std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.4f\n", e.epoch, e.loss, e.accuracy);
    out << buf;
  }
}

GradCheckReport grad_check(const CnnModel<double>& model, const IdMatrix& batch, std::span<const int> targets,
                           const GradCheckOptions& options) {
  CnnModel<double> analytic = model.zeros_like();
  loss_and_gradient(model, batch, targets, &analytic);
  if (options.tamper) options.tamper(analytic);

  CnnModel<double> probe = model;
  auto params = parameter_groups(probe);
  auto grads = parameter_groups(analytic);
  std::mt19937_64 rng(options.seed);

  // Embedding rows outside the batch have zero gradient on both sides.
  std::vector<int> used_rows(batch.data(), batch.data() + batch.size());
  std::sort(used_rows.begin(), used_rows.end());
  used_rows.erase(std::unique(used_rows.begin(), used_rows.end()), used_rows.end());
  const auto dim = static_cast<Eigen::Index>(model.shape.embed_dim);

  GradCheckReport report;
  if (options.samples_per_group == 0) return report;
  for (size_t g = 0; g < params.size(); ++g) {
    std::vector<Eigen::Index> candidates;
    if (params[g].name.starts_with("embedding")) {
      for (int row : used_rows) {
        for (Eigen::Index d = 0; d < dim; ++d) candidates.push_back(row * dim + d);
      }
    } else {
      candidates.resize(static_cast<size_t>(params[g].values.size()));
      std::iota(candidates.begin(), candidates.end(), Eigen::Index{0});
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(std::min(candidates.size(), options.samples_per_group));

    GradCheckGroup entry{params[g].name, 0, 0.0};
    for (Eigen::Index index : candidates) {
      double& value = params[g].values[index];
      const double original = value;
      value = original + options.step;
      const double plus = loss_and_gradient<double>(probe, batch, targets, nullptr);
      value = original - options.step;
      const double minus = loss_and_gradient<double>(probe, batch, targets, nullptr);
      value = original;
      const double numeric = (plus - minus) / (2.0 * options.step);
      const double error = std::abs(grads[g].values[index] - numeric) / std::max(std::abs(numeric), 1e-6);
      entry.max_relative_error = std::max(entry.max_relative_error, error);
      ++entry.checked;
    }
    report.checked += entry.checked;
    report.max_relative_error = std::max(report.max_relative_error, entry.max_relative_error);
    report.groups.push_back(std::move(entry));
  }
  return report;
}

#define UFND_INSTANTIATE_CNN(Scalar)                                                                             \
  template struct CnnModel<Scalar>;                                                                            \
  template std::vector<ParamGroup<Scalar>> parameter_groups(CnnModel<Scalar>&);                                \
  template CnnModel<Scalar> init_cnn<Scalar>(const CnnShape&, uint64_t);                                       \
  template Eigen::VectorXd predict_proba(const CnnModel<Scalar>&, const IdMatrix&);                            \
  template std::vector<Label> predict_cnn(const CnnModel<Scalar>&, const IdMatrix&, double);                   \
  template double loss_and_gradient(const CnnModel<Scalar>&, const IdMatrix&, std::span<const int>,            \
                                    CnnModel<Scalar>*);                                                        \
  template CnnTrainResult<Scalar> train_cnn(CnnModel<Scalar>, const IdMatrix&, std::span<const int>,           \
                                            const TrainConfig&);

UFND_INSTANTIATE_CNN(float)
UFND_INSTANTIATE_CNN(double)
#undef UFND_INSTANTIATE_CNN

template CnnModel<double> CnnModel<float>::cast<double>() const;
template CnnModel<float> CnnModel<double>::cast<float>() const;
template CnnModel<float> CnnModel<float>::cast<float>() const;
template CnnModel<double> CnnModel<double>::cast<double>() const;

}  // namespace ufnd
