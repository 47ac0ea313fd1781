#include "whguard/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "whguard/error.hpp"

namespace whguard {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view want) {
  throw Error(ErrorCode::InvalidConfig, std::string(key) + "='" + std::string(value) + "' is not " +
                                            std::string(want));
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(key, value, "a number");
  return out;
}

std::size_t parse_positive(std::string_view key, std::string_view value) {
  const auto v = parse_number<std::size_t>(key, value);
  if (v == 0) bad_value(key, value, "a positive integer");
  return v;
}

double parse_positive_real(std::string_view key, std::string_view value) {
  const auto v = parse_number<double>(key, value);
  if (!(v > 0.0)) bad_value(key, value, "a positive number");
  return v;
}

double parse_non_negative(std::string_view key, std::string_view value) {
  const auto v = parse_number<double>(key, value);
  if (!(v >= 0.0)) bad_value(key, value, "a non-negative number");
  return v;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "a boolean");
}

std::vector<std::string_view> split_list(std::string_view value) {
  std::vector<std::string_view> out;
  while (!value.empty()) {
    const auto comma = value.find(',');
    const auto item = trim(value.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    value.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::size_t> parse_widths(std::string_view key, std::string_view value) {
  std::vector<std::size_t> out;
  for (const auto item : split_list(value)) out.push_back(parse_positive(key, item));
  if (out.empty()) bad_value(key, value, "a comma-separated list of layer widths");
  return out;
}

using Setter = std::function<void(PipelineConfig&, std::string_view, std::string_view)>;

const std::vector<std::pair<std::string_view, Setter>>& setters() {
  static const std::vector<std::pair<std::string_view, Setter>> table = {
      {"data", [](auto& c, auto, auto v) { c.data = std::string(v); }},
      {"model", [](auto& c, auto, auto v) { c.model = std::string(v); }},
      {"out", [](auto& c, auto, auto v) { c.out = std::string(v); }},
      {"urls", [](auto& c, auto, auto v) { c.urls = std::string(v); }},
      {"safe_list", [](auto& c, auto, auto v) { c.safe_list = std::string(v); }},
      {"seed",
       [](auto& c, auto k, auto v) {
         const auto seed = parse_number<std::uint64_t>(k, v);
         c.split.seed = seed;
         c.autoencoder.seed = seed;
         c.classifiers.set_seed(seed);
       }},
      {"threshold",
       [](auto& c, auto k, auto v) {
         const auto t = parse_number<double>(k, v);
         if (!(t >= 0.0 && t <= 1.0)) {
           throw Error(ErrorCode::ThresholdOutOfRange, std::string(v) + " is outside [0, 1]");
         }
         c.threshold = t;
       }},
      {"features",
       [](auto& c, auto k, auto v) {
         if (v == "raw") c.features = FeatureMode::raw;
         else if (v == "latent") c.features = FeatureMode::latent;
         else bad_value(k, v, "raw or latent");
       }},
      {"classifier",
       [](auto& c, auto k, auto v) {
         if (v == "all") {
           c.classifier.reset();
         } else if (const auto kind = parse_classifier_kind(v)) {
           c.classifier = kind;
         } else {
           bad_value(k, v, "one of mlp, knn, xgb, gb, rf, all");
         }
       }},
      {"test_fraction",
       [](auto& c, auto k, auto v) {
         const auto f = parse_number<double>(k, v);
         if (!(f > 0.0 && f < 1.0)) bad_value(k, v, "in (0, 1)");
         c.split.test_fraction = f;
       }},
      {"stratified", [](auto& c, auto k, auto v) { c.split.stratified = parse_bool(k, v); }},
      {"max_rows", [](auto& c, auto k, auto v) { c.max_rows = parse_number<std::size_t>(k, v); }},
      {"keywords",
       [](auto& c, auto, auto v) {
         c.extra_keywords.clear();
         for (const auto item : split_list(v)) c.extra_keywords.emplace_back(item);
         (void)c.feature_spec();
       }},
      {"label_map",
       [](auto& c, auto k, auto v) {
         LabelMapping mapping;
         for (const auto item : split_list(v)) {
           const auto colon = item.rfind(':');
           if (colon == std::string_view::npos) bad_value(k, v, "a list of label:0|1 pairs");
           const auto cls = trim(item.substr(colon + 1));
           if (cls != "0" && cls != "1") bad_value(k, v, "a list of label:0|1 pairs");
           mapping[std::string(trim(item.substr(0, colon)))] = cls == "1" ? 1 : 0;
         }
         if (mapping.empty()) bad_value(k, v, "a non-empty label mapping");
         c.labels = std::move(mapping);
       }},
      {"mlp_hidden", [](auto& c, auto k, auto v) { c.classifiers.mlp.hidden_sizes = parse_widths(k, v); }},
      {"mlp_epochs", [](auto& c, auto k, auto v) { c.classifiers.mlp.epochs = parse_number<std::size_t>(k, v); }},
      {"mlp_batch_size", [](auto& c, auto k, auto v) { c.classifiers.mlp.batch_size = parse_positive(k, v); }},
      {"mlp_learning_rate", [](auto& c, auto k, auto v) { c.classifiers.mlp.learning_rate = parse_positive_real(k, v); }},
      {"ae_hidden", [](auto& c, auto k, auto v) { c.autoencoder.hidden_sizes = parse_widths(k, v); }},
      {"ae_epochs", [](auto& c, auto k, auto v) { c.autoencoder.epochs = parse_number<std::size_t>(k, v); }},
      {"ae_batch_size", [](auto& c, auto k, auto v) { c.autoencoder.batch_size = parse_positive(k, v); }},
      {"ae_learning_rate", [](auto& c, auto k, auto v) { c.autoencoder.learning_rate = parse_positive_real(k, v); }},
      {"knn_k", [](auto& c, auto k, auto v) { c.classifiers.knn_k = parse_positive(k, v); }},
      {"rf_trees", [](auto& c, auto k, auto v) { c.classifiers.forest.n_trees = parse_positive(k, v); }},
      {"rf_max_depth", [](auto& c, auto k, auto v) { c.classifiers.forest.max_depth = parse_number<std::size_t>(k, v); }},
      {"rf_m_features", [](auto& c, auto k, auto v) { c.classifiers.forest.m_features = parse_number<std::size_t>(k, v); }},
      {"rf_bootstrap", [](auto& c, auto k, auto v) { c.classifiers.forest.bootstrap = parse_bool(k, v); }},
      {"rf_min_samples_leaf", [](auto& c, auto k, auto v) { c.classifiers.forest.min_samples_leaf = parse_positive(k, v); }},
      {"gb_rounds", [](auto& c, auto k, auto v) { c.classifiers.gradient_boosting.n_rounds = parse_number<std::size_t>(k, v); }},
      {"gb_learning_rate", [](auto& c, auto k, auto v) { c.classifiers.gradient_boosting.learning_rate = parse_positive_real(k, v); }},
      {"gb_max_depth", [](auto& c, auto k, auto v) { c.classifiers.gradient_boosting.max_depth = parse_number<std::size_t>(k, v); }},
      {"gb_min_samples_leaf", [](auto& c, auto k, auto v) { c.classifiers.gradient_boosting.min_samples_leaf = parse_positive(k, v); }},
      {"xgb_rounds", [](auto& c, auto k, auto v) { c.classifiers.xgb.n_rounds = parse_number<std::size_t>(k, v); }},
      {"xgb_eta", [](auto& c, auto k, auto v) { c.classifiers.xgb.eta = parse_positive_real(k, v); }},
      {"xgb_max_depth", [](auto& c, auto k, auto v) { c.classifiers.xgb.max_depth = parse_number<std::size_t>(k, v); }},
      {"xgb_lambda", [](auto& c, auto k, auto v) { c.classifiers.xgb.lambda = parse_non_negative(k, v); }},
      {"xgb_gamma", [](auto& c, auto k, auto v) { c.classifiers.xgb.gamma = parse_non_negative(k, v); }},
      {"xgb_min_samples_leaf", [](auto& c, auto k, auto v) { c.classifiers.xgb.min_samples_leaf = parse_positive(k, v); }},
  };
  return table;
}

}  // namespace

std::string_view to_string(FeatureMode mode) noexcept {
  return mode == FeatureMode::raw ? "raw" : "latent";
}

const std::vector<std::string_view>& config_keys() {
  static const std::vector<std::string_view> keys = [] {
    std::vector<std::string_view> k;
    for (const auto& [name, setter] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  for (const auto& [name, setter] : setters()) {
    if (name == key) {
      try {
        setter(cfg, key, value);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::InvalidConfig || e.code() == ErrorCode::ThresholdOutOfRange) throw;
        throw Error(ErrorCode::InvalidConfig, std::string(key) + ": " + e.what());
      }
      return;
    }
  }
  throw Error(ErrorCode::InvalidConfig, "unknown key '" + std::string(key) + "'");
}

void apply_config_text(PipelineConfig& cfg, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(cfg, t.substr(0, eq), t.substr(eq + 1));
  }
}

void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  apply_config_text(cfg, buf.str());
}

}  // namespace whguard
