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

inline constexpr int kArtifactFormatVersion = 1;

struct TrainingMetadata {
  std::uint64_t seed = 0;
  std::string dataset_fingerprint;  // sha256 of the training CSV bytes
  std::size_t rows = 0;
  std::size_t malicious_rows = 0;
  std::string created_at;  // excluded from the checksum

  friend bool operator==(const TrainingMetadata&, const TrainingMetadata&) = default;
};

// Everything needed to score a raw URL: featurize, clip to the training
// bounds, min-max scale, optionally encode, classify.
struct ModelArtifact {
  FeatureSpec spec;
  OutlierBounds bounds;
  Scaler scaler;
  std::optional<AutoencoderModel> encoder;
  ClassifierModel classifier;
  TrainingMetadata metadata;

  ClassifierKind kind() const noexcept { return kind_of(classifier); }
};

// Applies bounds, scaling and the optional encoder to one raw feature row.
std::vector<double> transform_features(const ModelArtifact& artifact, std::span<const double> raw);
Matrix transform_rows(const ModelArtifact& artifact, const Matrix& raw_features);

// Malicious probability of a URL. Throws EmptyUrl for blank input.
double predict_url(const ModelArtifact& artifact, std::string_view url);

std::string sha256_hex(std::string_view bytes);

// Single-line JSON document:
//   {"checksum":"<sha256 of payload>","created_at":"...","format_version":1,"payload":{...}}
// Doubles are written in shortest round-trip form.
std::string serialize_artifact(const ModelArtifact& artifact);
// Throws UnsupportedVersion or CorruptArtifact.
ModelArtifact deserialize_artifact(std::string_view text);

void save_model(const ModelArtifact& artifact, const std::filesystem::path& path);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace whguard
