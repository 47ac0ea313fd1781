#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whguard/classifiers.hpp"
#include "whguard/data_pipeline.hpp"
#include "whguard/neural.hpp"
#include "whguard/url_features.hpp"

namespace whguard {

enum class FeatureMode { raw, latent };

std::string_view to_string(FeatureMode mode) noexcept;

struct PipelineConfig {
  FeatureMode features = FeatureMode::latent;
  std::optional<ClassifierKind> classifier;  // empty means all five
  ClassifierParams classifiers;
  TrainConfig autoencoder = TrainConfig::autoencoder_defaults();
  SplitConfig split;
  double threshold = 0.5;
  std::size_t max_rows = 50000;  // stratified subsample cap, 0 disables
  std::vector<std::string> extra_keywords;
  LabelMapping labels = default_label_mapping();

  std::filesystem::path data;
  std::filesystem::path model;
  std::filesystem::path out = ".";
  std::filesystem::path urls;
  std::filesystem::path safe_list;

  std::uint64_t seed() const noexcept { return split.seed; }
  FeatureSpec feature_spec() const { return FeatureSpec::with_extra_keywords(extra_keywords); }
  std::filesystem::path model_path() const { return model.empty() ? out / "model.json" : model; }
  std::filesystem::path safe_list_path() const {
    return safe_list.empty() ? out / "safe_urls.txt" : safe_list;
  }
};

// Every key accepted by apply_setting, in documentation order.
const std::vector<std::string_view>& config_keys();

// Sets one key. "seed" seeds the split, the autoencoder and every trainer.
// Unknown keys and unparsable values throw InvalidConfig; a threshold
// outside [0, 1] throws ThresholdOutOfRange.
void apply_setting(PipelineConfig& cfg, std::string_view key, std::string_view value);

// Flat "key = value" lines; blank lines and lines starting with '#' are skipped.
void apply_config_text(PipelineConfig& cfg, std::string_view text);
void apply_config_file(PipelineConfig& cfg, const std::filesystem::path& path);

}  // namespace whguard
