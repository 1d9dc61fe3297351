#include "ufnd/persist.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>

namespace ufnd {

namespace {

constexpr char kTrailer[4] = {'D', 'N', 'F', 'U'};
constexpr uint64_t kMaxCount = uint64_t{1} << 36;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void bytes(const char* data, size_t n) { out_.write(data, static_cast<std::streamsize>(n)); }
  void u8(uint8_t v) { out_.put(static_cast<char>(v)); }
  void u16(uint16_t v) { le(v, 2); }
  void u32(uint32_t v) { le(v, 4); }
  void u64(uint64_t v) { le(v, 8); }
  void i32(int32_t v) { u32(static_cast<uint32_t>(v)); }
  void i64(int64_t v) { u64(static_cast<uint64_t>(v)); }
  void f64(double v) { u64(std::bit_cast<uint64_t>(v)); }
  void f32(float v) { u32(std::bit_cast<uint32_t>(v)); }
  void boolean(bool v) { u8(v ? 1 : 0); }
  void string(const std::string& s) {
    u64(s.size());
    bytes(s.data(), s.size());
  }
  void orders(const std::set<int>& values) {
    u64(values.size());
    for (int v : values) i32(v);
  }

 private:
  void le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.put(static_cast<char>((v >> (8 * i)) & 0xFF));
  }
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* data, size_t n) {
    in_.read(data, static_cast<std::streamsize>(n));
    if (static_cast<size_t>(in_.gcount()) != n) throw ModelFormatError("truncated model file");
  }
  uint8_t u8() {
    char c;
    bytes(&c, 1);
    return static_cast<uint8_t>(c);
  }
  uint16_t u16() { return static_cast<uint16_t>(le(2)); }
  uint32_t u32() { return static_cast<uint32_t>(le(4)); }
  uint64_t u64() { return le(8); }
  int32_t i32() { return static_cast<int32_t>(u32()); }
  int64_t i64() { return static_cast<int64_t>(u64()); }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() { return std::bit_cast<float>(u32()); }
  bool boolean() {
    const uint8_t v = u8();
    if (v > 1) throw ModelFormatError("corrupt boolean in model file");
    return v == 1;
  }
  uint64_t count() {
    const uint64_t n = u64();
    if (n > kMaxCount) throw ModelFormatError("implausible element count in model file");
    return n;
  }
  std::string string() {
    std::string s(count(), '\0');
    if (!s.empty()) bytes(s.data(), s.size());
    return s;
  }
  std::set<int> orders() {
    std::set<int> values;
    const uint64_t n = count();
    for (uint64_t i = 0; i < n; ++i) values.insert(i32());
    return values;
  }

 private:
  uint64_t le(int n) {
    unsigned char buf[8];
    bytes(reinterpret_cast<char*>(buf), static_cast<size_t>(n));
    uint64_t v = 0;
    for (int i = n - 1; i >= 0; --i) v = (v << 8) | buf[i];
    return v;
  }
  std::istream& in_;
};

void write_sparse(Writer& w, const SparseMatrix& m) {
  SparseMatrix compressed = m;
  compressed.makeCompressed();
  w.i64(compressed.rows());
  w.i64(compressed.cols());
  w.i64(compressed.nonZeros());
  for (Eigen::Index r = 0; r <= compressed.rows(); ++r) w.i64(compressed.outerIndexPtr()[r]);
  for (Eigen::Index i = 0; i < compressed.nonZeros(); ++i) w.i32(compressed.innerIndexPtr()[i]);
  for (Eigen::Index i = 0; i < compressed.nonZeros(); ++i) w.f64(compressed.valuePtr()[i]);
}

SparseMatrix read_sparse(Reader& r) {
  const int64_t rows = r.i64();
  const int64_t cols = r.i64();
  const int64_t nnz = r.i64();
  if (rows < 0 || cols < 0 || nnz < 0 || static_cast<uint64_t>(nnz) > kMaxCount ||
      static_cast<uint64_t>(rows) > kMaxCount) {
    throw ModelFormatError("corrupt sparse matrix header");
  }
  std::vector<int64_t> outer(static_cast<size_t>(rows) + 1);
  for (auto& o : outer) o = r.i64();
  std::vector<int32_t> inner(static_cast<size_t>(nnz));
  for (auto& i : inner) i = r.i32();
  std::vector<double> values(static_cast<size_t>(nnz));
  for (auto& v : values) v = r.f64();
  if (outer.front() != 0 || outer.back() != nnz) throw ModelFormatError("corrupt sparse matrix offsets");

  SparseMatrix m(rows, cols);
  m.reserve(nnz);
  for (int64_t row = 0; row < rows; ++row) {
    if (outer[row + 1] < outer[row]) throw ModelFormatError("corrupt sparse matrix offsets");
    m.startVec(row);
    for (int64_t k = outer[row]; k < outer[row + 1]; ++k) {
      if (inner[k] < 0 || inner[k] >= cols || (k > outer[row] && inner[k] <= inner[k - 1])) {
        throw ModelFormatError("corrupt sparse matrix column index");
      }
      m.insertBack(row, inner[k]) = values[static_cast<size_t>(k)];
    }
  }
  m.finalize();
  return m;
}

void write_resources(Writer& w, const PreprocessResources& res) {
  const auto stopwords = res.stopwords.sorted();
  w.u64(stopwords.size());
  for (const auto& s : stopwords) w.string(s);
  const auto lemmas = res.lemmas.sorted();
  w.u64(lemmas.size());
  for (const auto& [surface, lemma] : lemmas) {
    w.string(surface);
    w.string(lemma);
  }
  w.u64(res.normalization.entries().size());
  for (const auto& [from, to] : res.normalization.entries()) {
    w.u32(static_cast<uint32_t>(from));
    w.u32(static_cast<uint32_t>(to));
  }
}

PreprocessResources read_resources(Reader& r) {
  PreprocessResources res;
  std::unordered_set<std::string> stopwords;
  for (uint64_t i = 0, n = r.count(); i < n; ++i) stopwords.insert(r.string());
  res.stopwords = StopwordList(std::move(stopwords));
  std::unordered_map<std::string, std::string> lemmas;
  for (uint64_t i = 0, n = r.count(); i < n; ++i) {
    auto surface = r.string();
    lemmas[std::move(surface)] = r.string();
  }
  res.lemmas = LemmaTable(std::move(lemmas));
  std::map<char32_t, char32_t> mapping;
  for (uint64_t i = 0, n = r.count(); i < n; ++i) {
    const auto from = static_cast<char32_t>(r.u32());
    mapping[from] = static_cast<char32_t>(r.u32());
  }
  try {
    res.normalization = NormalizationMap(std::move(mapping));
  } catch (const ConfigError& e) {
    throw ModelFormatError(std::string("corrupt normalization map: ") + e.what());
  }
  return res;
}

void write_svm(Writer& w, const SvmStage& s) {
  w.u64(s.vocabulary.n_docs());
  w.u64(s.vocabulary.size());
  for (size_t i = 0; i < s.vocabulary.size(); ++i) {
    w.string(s.vocabulary.term(i));
    w.i32(s.vocabulary.doc_freq(i));
  }
  w.u64(static_cast<uint64_t>(s.tfidf.idf.size()));
  for (double v : s.tfidf.idf) w.f64(v);

  w.u64(s.mask.n_features);
  w.u64(s.mask.requested_k);
  w.u64(s.mask.kept.size());
  for (int i : s.mask.kept) w.i32(i);
  for (double v : s.mask.kept_scores) w.f64(v);

  const SvmModel& m = s.model;
  w.i32(m.kernel.degree);
  w.f64(m.kernel.gamma);
  w.f64(m.kernel.coef0);
  w.f64(m.C);
  w.f64(m.bias);
  w.boolean(m.converged);
  w.i32(m.passes);
  w.u64(m.support_indices.size());
  for (int i : m.support_indices) w.i32(i);
  for (double v : m.dual_coef) w.f64(v);
  write_sparse(w, m.support_vectors);
}

SvmStage read_svm(Reader& r) {
  SvmStage s;
  const uint64_t n_docs = r.count();
  const uint64_t vocab = r.count();
  std::vector<std::string> terms;
  std::vector<int> df;
  terms.reserve(vocab);
  df.reserve(vocab);
  for (uint64_t i = 0; i < vocab; ++i) {
    terms.push_back(r.string());
    df.push_back(r.i32());
  }
  try {
    s.vocabulary = Vocabulary(std::move(terms), std::move(df), n_docs);
  } catch (const ConfigError& e) {
    throw ModelFormatError(std::string("corrupt vocabulary: ") + e.what());
  }
  const uint64_t n_idf = r.count();
  if (n_idf != vocab) throw ModelFormatError("idf length does not match vocabulary");
  s.tfidf.idf.resize(static_cast<Eigen::Index>(n_idf));
  for (auto& v : s.tfidf.idf) v = r.f64();

  s.mask.n_features = r.count();
  s.mask.requested_k = r.count();
  const uint64_t kept = r.count();
  if (s.mask.n_features != vocab || kept > vocab) throw ModelFormatError("selection mask does not match vocabulary");
  s.mask.kept.resize(kept);
  for (auto& i : s.mask.kept) {
    i = r.i32();
    if (i < 0 || static_cast<uint64_t>(i) >= vocab) throw ModelFormatError("selection index out of range");
  }
  s.mask.kept_scores.resize(kept);
  for (auto& v : s.mask.kept_scores) v = r.f64();

  SvmModel& m = s.model;
  m.kernel.degree = r.i32();
  m.kernel.gamma = r.f64();
  m.kernel.coef0 = r.f64();
  m.C = r.f64();
  m.bias = r.f64();
  m.converged = r.boolean();
  m.passes = r.i32();
  const uint64_t n_sv = r.count();
  m.support_indices.resize(n_sv);
  for (auto& i : m.support_indices) i = r.i32();
  m.dual_coef.resize(static_cast<Eigen::Index>(n_sv));
  for (auto& v : m.dual_coef) v = r.f64();
  m.support_vectors = read_sparse(r);
  if (static_cast<uint64_t>(m.support_vectors.rows()) != n_sv ||
      static_cast<uint64_t>(m.support_vectors.cols()) != kept) {
    throw ModelFormatError("support vectors do not match the selection mask");
  }
  return s;
}

void write_cnn(Writer& w, const CnnStage& s) {
  w.u8(s.encoder.unit() == SequenceUnit::Word ? 0 : 1);
  w.u64(s.encoder.max_len());
  w.u64(s.encoder.vocab_size());
  for (const auto& t : s.encoder.terms()) w.string(t);

  const CnnShape& shape = s.model.shape;
  w.u64(shape.vocab_size);
  w.u64(shape.max_len);
  w.u64(shape.kernel_sizes.size());
  for (int k : shape.kernel_sizes) w.i32(k);
  w.i32(shape.embed_dim);
  w.i32(shape.filters);
  w.i32(shape.hidden);
  w.i32(shape.pool);
  auto model = s.model;
  for (const auto& group : parameter_groups(model)) {
    w.u64(static_cast<uint64_t>(group.values.size()));
    for (Eigen::Index i = 0; i < group.values.size(); ++i) w.f32(group.values[i]);
  }
  w.u64(s.history.size());
  for (const auto& e : s.history) {
    w.i32(e.epoch);
    w.f64(e.loss);
    w.f64(e.accuracy);
  }
}

CnnStage read_cnn(Reader& r) {
  CnnStage s;
  const uint8_t unit = r.u8();
  if (unit > 1) throw ModelFormatError("unknown sequence unit");
  const uint64_t max_len = r.count();
  std::vector<std::string> terms(r.count());
  for (auto& t : terms) t = r.string();
  try {
    s.encoder = SequenceEncoder(unit == 0 ? SequenceUnit::Word : SequenceUnit::Char, std::move(terms), max_len);
  } catch (const ConfigError& e) {
    throw ModelFormatError(std::string("corrupt sequence encoder: ") + e.what());
  }

  CnnShape shape;
  shape.vocab_size = r.count();
  shape.max_len = r.count();
  shape.kernel_sizes.resize(r.count());
  for (auto& k : shape.kernel_sizes) k = r.i32();
  shape.embed_dim = r.i32();
  shape.filters = r.i32();
  shape.hidden = r.i32();
  shape.pool = r.i32();
  if (shape.vocab_size != s.encoder.vocab_size() || shape.max_len != s.encoder.max_len()) {
    throw ModelFormatError("CNN shape does not match its sequence encoder");
  }
  try {
    s.model = init_cnn<float>(shape, 0);
  } catch (const ConfigError& e) {
    throw ModelFormatError(std::string("corrupt CNN shape: ") + e.what());
  }
  for (auto& group : parameter_groups(s.model)) {
    if (r.count() != static_cast<uint64_t>(group.values.size())) {
      throw ModelFormatError("CNN parameter block '" + group.name + "' has the wrong size");
    }
    for (Eigen::Index i = 0; i < group.values.size(); ++i) group.values[i] = r.f32();
  }
  s.history.resize(r.count());
  for (auto& e : s.history) {
    e.epoch = r.i32();
    e.loss = r.f64();
    e.accuracy = r.f64();
  }
  return s;
}

}  // namespace

void write_model(std::ostream& out, const Pipeline& pipeline) {
  Writer w(out);
  w.bytes(kModelMagic, sizeof kModelMagic);
  w.u16(kModelMajorVersion);
  w.u16(kModelMinorVersion);
  w.u8(pipeline.kind() == ClassifierKind::Svm ? 0 : 1);
  w.boolean(pipeline.preprocess.remove_diacritics);
  w.boolean(pipeline.preprocess.normalize);
  w.boolean(pipeline.preprocess.remove_stopwords);
  w.boolean(pipeline.preprocess.lemmatize);
  write_resources(w, pipeline.resources);
  w.orders(pipeline.ngrams.word_orders);
  w.orders(pipeline.ngrams.char_orders);
  w.boolean(pipeline.ngrams.char_across_tokens);
  if (const auto* svm = std::get_if<SvmStage>(&pipeline.stage)) {
    write_svm(w, *svm);
  } else {
    write_cnn(w, std::get<CnnStage>(pipeline.stage));
  }
  w.bytes(kTrailer, sizeof kTrailer);
}

Pipeline read_model(std::istream& in) {
  Reader r(in);
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || !std::equal(magic, magic + 4, kModelMagic)) {
    throw ModelFormatError("not a model file: magic bytes \"UFND\" not found");
  }
  const uint16_t major = r.u16();
  const uint16_t minor = r.u16();
  if (major != kModelMajorVersion) {
    throw ModelFormatError("unsupported model format version " + std::to_string(major) + "." +
                           std::to_string(minor) + " (this build reads major version " +
                           std::to_string(kModelMajorVersion) + ")");
  }
  const uint8_t kind = r.u8();
  if (kind > 1) throw ModelFormatError("unknown classifier kind in model file");

  Pipeline pipeline;
  pipeline.preprocess.remove_diacritics = r.boolean();
  pipeline.preprocess.normalize = r.boolean();
  pipeline.preprocess.remove_stopwords = r.boolean();
  pipeline.preprocess.lemmatize = r.boolean();
  pipeline.resources = read_resources(r);
  pipeline.ngrams.word_orders = r.orders();
  pipeline.ngrams.char_orders = r.orders();
  pipeline.ngrams.char_across_tokens = r.boolean();
  if (kind == 0) {
    pipeline.stage = read_svm(r);
  } else {
    pipeline.stage = read_cnn(r);
  }
  char trailer[4] = {};
  r.bytes(trailer, 4);
  if (!std::equal(trailer, trailer + 4, kTrailer)) throw ModelFormatError("model file trailer missing or corrupt");
  return pipeline;
}

void save_model(const std::filesystem::path& path, const Pipeline& pipeline) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelFormatError("cannot write model file " + path.string());
  write_model(out, pipeline);
  if (!out) throw ModelFormatError("failed writing model file " + path.string());
}

Pipeline load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFormatError("cannot open model file " + path.string());
  return read_model(in);
}

}  // namespace ufnd
