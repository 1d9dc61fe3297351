#include "ufnd/corpus.hpp"

#include "ufnd/utf8.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <random>
#include <set>
#include <sstream>
#include <unordered_set>

namespace ufnd {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t start = 0;
  while (true) {
    const size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::string sanitize_field(std::string_view text) {
  std::string out(text);
  std::replace_if(out.begin(), out.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return out;
}

}  // namespace

std::vector<Label> Corpus::labels() const {
  std::vector<Label> out;
  out.reserve(documents.size());
  for (const auto& doc : documents) {
    if (!doc.label) throw LoadError("document '" + doc.id + "' has no label");
    out.push_back(*doc.label);
  }
  return out;
}

Corpus parse_corpus(std::istream& in, Split split, const std::string& source) {
  Corpus corpus;
  corpus.split = split;
  std::unordered_set<std::string> seen;
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw LoadError(source + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      fail("expected 3 tab-separated columns (id, label, text), found " + std::to_string(fields.size()));
    }
    if (line_no == 1 && fields[0] == "id" && fields[1] == "label" && fields[2] == "text") continue;

    Document doc;
    doc.id = std::string(fields[0]);
    if (doc.id.empty()) fail("empty id");
    if (!fields[1].empty()) {
      doc.label = parse_label(fields[1]);
      if (!doc.label) fail("unknown label '" + std::string(fields[1]) + "' (expected Fake or Real)");
    } else if (split != Split::Unlabeled) {
      fail("missing label for " + std::string(split_name(split)) + " split");
    }
    doc.text = std::string(fields[2]);
    if (utf8::trim(doc.text).empty()) fail("empty text for id '" + doc.id + "'");
    if (!seen.insert(doc.id).second) fail("duplicate id '" + doc.id + "'");
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open corpus file " + path.string());
  return parse_corpus(in, split, path.string());
}

void write_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.documents) {
    out << sanitize_field(doc.id) << '\t' << (doc.label ? label_name(*doc.label) : "") << '\t'
        << sanitize_field(doc.text) << '\n';
  }
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write corpus file " + path.string());
  write_corpus(out, corpus);
}

SplitExpectation shared_task_train_expectation() {
  return {1300, {{Label::Real, 750}, {Label::Fake, 550}}};
}

SplitExpectation shared_task_test_expectation() {
  return {300, {{Label::Real, 200}, {Label::Fake, 100}}};
}

ValidationReport validate_split(const Corpus& corpus, const SplitExpectation& expected) {
  std::map<Label, size_t> actual;
  for (const auto& doc : corpus.documents) {
    if (doc.label) ++actual[*doc.label];
  }
  ValidationReport report;
  report.rows.push_back({"total", expected.total, corpus.size()});
  for (Label label : {Label::Fake, Label::Real}) {
    const auto e = expected.per_label.find(label);
    const auto a = actual.find(label);
    report.rows.push_back({std::string(label_name(label)), e == expected.per_label.end() ? 0 : e->second,
                           a == actual.end() ? 0 : a->second});
  }
  const bool all_match = std::all_of(report.rows.begin(), report.rows.end(),
                                     [](const auto& row) { return row.delta() == 0; });
  report.status = all_match ? ValidationReport::Status::Pass : ValidationReport::Status::Warn;
  return report;
}

std::string ValidationReport::to_text() const {
  std::ostringstream out;
  out << std::left << std::setw(8) << "count" << std::right << std::setw(10) << "expected" << std::setw(10)
      << "actual" << std::setw(8) << "delta" << '\n';
  for (const auto& row : rows) {
    std::ostringstream delta;
    delta << std::showpos << row.delta();
    out << std::left << std::setw(8) << row.name << std::right << std::setw(10) << row.expected << std::setw(10)
        << row.actual << std::setw(8) << delta.str() << '\n';
  }
  out << "status: " << (passed() ? "pass" : "warn") << '\n';
  return out.str();
}

std::string ValidationReport::to_key_value() const {
  std::ostringstream out;
  out << "status=" << (passed() ? "pass" : "warn") << '\n';
  for (const auto& row : rows) {
    out << row.name << ".expected=" << row.expected << '\n'
        << row.name << ".actual=" << row.actual << '\n'
        << row.name << ".delta=" << row.delta() << '\n';
  }
  return out.str();
}

namespace {

std::vector<std::string> make_pool(std::mt19937_64& rng, std::u32string_view letters, size_t count) {
  std::uniform_int_distribution<size_t> length(3, 5);
  std::uniform_int_distribution<size_t> pick(0, letters.size() - 1);
  std::set<std::string> unique;
  std::vector<std::string> pool;
  while (pool.size() < count) {
    std::u32string word;
    const size_t n = length(rng);
    for (size_t i = 0; i < n; ++i) word.push_back(letters[pick(rng)]);
    auto encoded = utf8::encode(word);
    if (unique.insert(encoded).second) pool.push_back(std::move(encoded));
  }
  return pool;
}

}  // namespace

SyntheticSpec SyntheticSpec::with_default_pools(uint64_t seed, size_t per_class) {
  SyntheticSpec spec;
  spec.seed = seed;
  spec.per_class = per_class;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  spec.fake_pool = make_pool(rng, U"بپتٹثجچ", 60);
  spec.real_pool = make_pool(rng, U"حخدڈذرڑ", 60);
  spec.noise_pool = make_pool(rng, U"زژسشصضط", 20);
  return spec;
}

Corpus generate_synthetic(const SyntheticSpec& spec, Split split) {
  if (spec.fake_pool.empty() || spec.real_pool.empty()) throw ConfigError("synthetic class pools must be non-empty");
  if (spec.min_len == 0 || spec.min_len > spec.max_len) throw ConfigError("synthetic doc_len range is invalid");
  const std::set<std::string> fake(spec.fake_pool.begin(), spec.fake_pool.end());
  for (const auto& term : spec.real_pool) {
    if (fake.count(term)) throw ConfigError("synthetic class pools overlap on term '" + term + "'");
  }
  const bool use_noise = !spec.noise_pool.empty() && spec.noise_rate > 0.0;

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<size_t> length(spec.min_len, spec.max_len);
  std::bernoulli_distribution noise(use_noise ? spec.noise_rate : 0.0);
  Corpus corpus;
  corpus.split = split;
  corpus.documents.reserve(2 * spec.per_class);
  for (size_t i = 0; i < 2 * spec.per_class; ++i) {
    const Label label = i % 2 == 0 ? Label::Fake : Label::Real;
    const auto& pool = label == Label::Fake ? spec.fake_pool : spec.real_pool;
    const size_t n = length(rng);
    std::string text;
    for (size_t t = 0; t < n; ++t) {
      const bool from_noise = use_noise && noise(rng);
      const auto& source = from_noise ? spec.noise_pool : pool;
      std::uniform_int_distribution<size_t> pick(0, source.size() - 1);
      if (t > 0) text.push_back(' ');
      text += source[pick(rng)];
    }
    std::ostringstream id;
    id << "syn" << spec.seed << '-' << std::setw(5) << std::setfill('0') << i;
    corpus.documents.push_back({id.str(), std::move(text), label});
  }
  return corpus;
}

std::pair<Corpus, Corpus> split_per_class(const Corpus& corpus, size_t head_per_class) {
  Corpus head;
  Corpus tail;
  head.split = Split::Train;
  tail.split = Split::Test;
  std::map<Label, size_t> taken;
  for (const auto& doc : corpus.documents) {
    const Label label = doc.label.value_or(Label::Real);
    if (taken[label] < head_per_class) {
      ++taken[label];
      head.documents.push_back(doc);
    } else {
      tail.documents.push_back(doc);
    }
  }
  return {std::move(head), std::move(tail)};
}

}  // namespace ufnd
