#include "ufnd/config.hpp"

#include "ufnd/utf8.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace ufnd {

std::string_view classifier_name(ClassifierKind kind) { return kind == ClassifierKind::Svm ? "svm" : "cnn"; }

TrainConfig CnnParams::train_config(uint64_t seed) const {
  TrainConfig config;
  config.epochs = epochs;
  config.batch_size = batch_size;
  config.learning_rate = learning_rate;
  config.beta1 = beta1;
  config.beta2 = beta2;
  config.epsilon = epsilon;
  config.embedding_dropout = embedding_dropout;
  config.seed = seed;
  return config;
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item = utf8::trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

long long parse_integer(const std::string& text) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("expected an integer, got '" + text + "'");
  }
  return value;
}

size_t parse_count(const std::string& text) {
  const long long value = parse_integer(text);
  if (value < 0) throw ConfigError("expected a non-negative integer, got '" + text + "'");
  return static_cast<size_t>(value);
}

int parse_int(const std::string& text) { return static_cast<int>(parse_integer(text)); }

double parse_double(const std::string& text) {
  try {
    size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw ConfigError("");
    return value;
  } catch (const std::exception&) {
    throw ConfigError("expected a number, got '" + text + "'");
  }
}

bool parse_bool(const std::string& text) {
  if (text == "true" || text == "yes" || text == "on" || text == "1") return true;
  if (text == "false" || text == "no" || text == "off" || text == "0") return false;
  throw ConfigError("expected true/false, got '" + text + "'");
}

/// "1,2,3", "1-4" or "none".
std::set<int> parse_orders(const std::string& text) {
  std::set<int> orders;
  if (text.empty() || text == "none") return orders;
  for (const auto& item : split_list(text)) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int lo = parse_int(utf8::trim(item.substr(0, dash)));
      const int hi = parse_int(utf8::trim(item.substr(dash + 1)));
      if (lo > hi) throw ConfigError("empty order range '" + item + "'");
      for (int n = lo; n <= hi; ++n) orders.insert(n);
    } else {
      orders.insert(parse_int(item));
    }
  }
  return orders;
}

/// "20000", "20K" or "20k".
size_t parse_k(const std::string& text) {
  if (!text.empty() && (text.back() == 'K' || text.back() == 'k')) {
    return parse_count(text.substr(0, text.size() - 1)) * 1000;
  }
  return parse_count(text);
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

template <typename T>
std::string join(const T& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ',';
    out += std::to_string(v);
  }
  return out;
}

std::string orders_text(const std::set<int>& orders) { return orders.empty() ? "none" : join(orders); }

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](auto& c, const auto& v) { c.name = v; }},
      {"seed", [](auto& c, const auto& v) { c.seed = static_cast<uint64_t>(parse_count(v)); }},
      {"classifier",
       [](auto& c, const auto& v) {
         if (v == "svm") {
           c.classifier = ClassifierKind::Svm;
         } else if (v == "cnn") {
           c.classifier = ClassifierKind::Cnn;
         } else {
           throw ConfigError("classifier must be svm or cnn, got '" + v + "'");
         }
       }},
      {"remove_diacritics", [](auto& c, const auto& v) { c.preprocess.remove_diacritics = parse_bool(v); }},
      {"normalize", [](auto& c, const auto& v) { c.preprocess.normalize = parse_bool(v); }},
      {"remove_stopwords", [](auto& c, const auto& v) { c.preprocess.remove_stopwords = parse_bool(v); }},
      {"lemmatize", [](auto& c, const auto& v) { c.preprocess.lemmatize = parse_bool(v); }},
      {"word_orders", [](auto& c, const auto& v) { c.ngrams.word_orders = parse_orders(v); }},
      {"char_orders", [](auto& c, const auto& v) { c.ngrams.char_orders = parse_orders(v); }},
      {"char_across_tokens", [](auto& c, const auto& v) { c.ngrams.char_across_tokens = parse_bool(v); }},
      {"k",
       [](auto& c, const auto& v) {
         c.k_values.clear();
         for (const auto& item : split_list(v)) c.k_values.push_back(parse_k(item));
       }},
      {"svm.C", [](auto& c, const auto& v) { c.svm.C = parse_double(v); }},
      {"svm.gamma", [](auto& c, const auto& v) { c.svm.gamma = parse_double(v); }},
      {"svm.coef0", [](auto& c, const auto& v) { c.svm.coef0 = parse_double(v); }},
      {"svm.degree", [](auto& c, const auto& v) { c.svm.degree = parse_int(v); }},
      {"svm.tol", [](auto& c, const auto& v) { c.svm.tol = parse_double(v); }},
      {"svm.max_passes", [](auto& c, const auto& v) { c.svm.max_passes = parse_int(v); }},
      {"svm.cache_mb", [](auto& c, const auto& v) { c.svm.cache_mb = parse_count(v); }},
      {"cnn.unit",
       [](auto& c, const auto& v) {
         if (v == "word") {
           c.cnn.unit = SequenceUnit::Word;
         } else if (v == "char") {
           c.cnn.unit = SequenceUnit::Char;
         } else {
           throw ConfigError("cnn.unit must be word or char, got '" + v + "'");
         }
       }},
      {"cnn.channels",
       [](auto& c, const auto& v) {
         const auto orders = parse_orders(v);
         c.cnn.channels.assign(orders.begin(), orders.end());
       }},
      {"cnn.embed_dim", [](auto& c, const auto& v) { c.cnn.embed_dim = parse_int(v); }},
      {"cnn.filters", [](auto& c, const auto& v) { c.cnn.filters = parse_int(v); }},
      {"cnn.hidden", [](auto& c, const auto& v) { c.cnn.hidden = parse_int(v); }},
      {"cnn.pool", [](auto& c, const auto& v) { c.cnn.pool = parse_int(v); }},
      {"cnn.max_len", [](auto& c, const auto& v) { c.cnn.max_len = parse_count(v); }},
      {"cnn.epochs", [](auto& c, const auto& v) { c.cnn.epochs = parse_int(v); }},
      {"cnn.batch_size", [](auto& c, const auto& v) { c.cnn.batch_size = parse_int(v); }},
      {"cnn.learning_rate", [](auto& c, const auto& v) { c.cnn.learning_rate = parse_double(v); }},
      {"cnn.beta1", [](auto& c, const auto& v) { c.cnn.beta1 = parse_double(v); }},
      {"cnn.beta2", [](auto& c, const auto& v) { c.cnn.beta2 = parse_double(v); }},
      {"cnn.epsilon", [](auto& c, const auto& v) { c.cnn.epsilon = parse_double(v); }},
      {"cnn.embedding_dropout", [](auto& c, const auto& v) { c.cnn.embedding_dropout = parse_double(v); }},
  };
  return table;
}

void write_block(std::ostream& out, const ExperimentConfig& c) {
  out << "[experiment]\n"
      << "name = " << c.name << '\n'
      << "seed = " << c.seed << '\n'
      << "classifier = " << classifier_name(c.classifier) << '\n'
      << "remove_diacritics = " << (c.preprocess.remove_diacritics ? "true" : "false") << '\n'
      << "normalize = " << (c.preprocess.normalize ? "true" : "false") << '\n'
      << "remove_stopwords = " << (c.preprocess.remove_stopwords ? "true" : "false") << '\n'
      << "lemmatize = " << (c.preprocess.lemmatize ? "true" : "false") << '\n'
      << "word_orders = " << orders_text(c.ngrams.word_orders) << '\n'
      << "char_orders = " << orders_text(c.ngrams.char_orders) << '\n'
      << "char_across_tokens = " << (c.ngrams.char_across_tokens ? "true" : "false") << '\n'
      << "k = " << join(c.k_values) << '\n'
      << "svm.C = " << format_double(c.svm.C) << '\n'
      << "svm.gamma = " << format_double(c.svm.gamma) << '\n'
      << "svm.coef0 = " << format_double(c.svm.coef0) << '\n'
      << "svm.degree = " << c.svm.degree << '\n'
      << "svm.tol = " << format_double(c.svm.tol) << '\n'
      << "svm.max_passes = " << c.svm.max_passes << '\n'
      << "svm.cache_mb = " << c.svm.cache_mb << '\n'
      << "cnn.unit = " << unit_name(c.cnn.unit) << '\n'
      << "cnn.channels = " << join(c.cnn.channels) << '\n'
      << "cnn.embed_dim = " << c.cnn.embed_dim << '\n'
      << "cnn.filters = " << c.cnn.filters << '\n'
      << "cnn.hidden = " << c.cnn.hidden << '\n'
      << "cnn.pool = " << c.cnn.pool << '\n'
      << "cnn.max_len = " << c.cnn.max_len << '\n'
      << "cnn.epochs = " << c.cnn.epochs << '\n'
      << "cnn.batch_size = " << c.cnn.batch_size << '\n'
      << "cnn.learning_rate = " << format_double(c.cnn.learning_rate) << '\n'
      << "cnn.beta1 = " << format_double(c.cnn.beta1) << '\n'
      << "cnn.beta2 = " << format_double(c.cnn.beta2) << '\n'
      << "cnn.epsilon = " << format_double(c.cnn.epsilon) << '\n'
      << "cnn.embedding_dropout = " << format_double(c.cnn.embedding_dropout) << '\n';
}

}  // namespace

std::vector<ExperimentConfig> parse_config(std::istream& in, const std::string& source) {
  ExperimentConfig defaults;
  std::vector<ExperimentConfig> blocks;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = utf8::trim(line);
    if (text.empty() || text.front() == '#') continue;
    try {
      if (text == "[experiment]") {
        blocks.push_back(defaults);
        continue;
      }
      if (text.front() == '[') throw ConfigError("unknown section " + text);
      const auto eq = text.find('=');
      if (eq == std::string::npos) throw ConfigError("expected 'key = value'");
      const std::string key = utf8::trim(text.substr(0, eq));
      const std::string value = utf8::trim(text.substr(eq + 1));
      const auto it = setters().find(key);
      if (it == setters().end()) throw ConfigError("unknown key '" + key + "'");
      it->second(blocks.empty() ? defaults : blocks.back(), value);
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (blocks.empty()) blocks.push_back(defaults);
  return blocks;
}

std::vector<ExperimentConfig> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.string());
}

std::string write_config(std::span<const ExperimentConfig> configs) {
  std::ostringstream out;
  for (size_t i = 0; i < configs.size(); ++i) {
    if (i > 0) out << '\n';
    write_block(out, configs[i]);
  }
  return out.str();
}

std::string config_digest(const ExperimentConfig& config) {
  const std::string text = write_config(std::span<const ExperimentConfig>(&config, 1));
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace ufnd
