#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "whguard/artifact.hpp"
#include "whguard/config.hpp"
#include "whguard/data_pipeline.hpp"

namespace whguard {

// Output of the preprocessing chain, ready for classifier training.
struct PreparedData {
  FeatureSpec spec;
  OutlierBounds bounds;
  Scaler scaler;
  std::optional<AutoencoderModel> encoder;
  Dataset train;  // transformed: clipped, scaled, encoded when latent
  Dataset test;
  CleanReport cleaning;
  std::size_t rows_loaded = 0;
  std::size_t rows_used = 0;  // after cleaning and subsampling
};

// clean -> map labels -> subsample -> featurize -> split -> winsorize ->
// scale -> (autoencoder). Every fitted step sees training rows only.
PreparedData prepare_data(std::vector<RawRecord> records, const PipelineConfig& cfg);

ModelArtifact make_artifact(const PreparedData& data, ClassifierModel classifier,
                            TrainingMetadata metadata);

enum class VerdictLabel { safe, flagged };

struct Verdict {
  std::string url;
  double confidence = 0.0;  // malicious probability
  VerdictLabel label = VerdictLabel::safe;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

struct FilterResult {
  std::vector<Verdict> safe;
  std::vector<Verdict> flagged;
};

// flagged = confidence >= threshold; both lists keep input order.
// Throws ThresholdOutOfRange unless 0 <= threshold <= 1, and
// InvalidArgument for a confidence outside [0, 1].
FilterResult filter_predictions(std::span<const std::pair<std::string, double>> scored,
                                double threshold);

}  // namespace whguard
