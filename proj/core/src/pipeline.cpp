#include "whguard/pipeline.hpp"

#include <cmath>

#include "whguard/error.hpp"

namespace whguard {

PreparedData prepare_data(std::vector<RawRecord> records, const PipelineConfig& cfg) {
  PreparedData out;
  out.rows_loaded = records.size();
  out.spec = cfg.feature_spec();

  const auto cleaned = clean(std::move(records), &out.cleaning);
  const auto labeled = stratified_subsample(map_labels(cleaned, cfg.labels), cfg.max_rows, cfg.seed());
  out.rows_used = labeled.size();

  auto [train, test] = stratified_split(featurize(labeled, out.spec), cfg.split);

  auto [bounds, clipped] = bound_outliers(train.features);
  out.bounds = std::move(bounds);
  out.scaler = fit_scaler(clipped);
  train.features = apply_scaler(out.scaler, clipped);
  test.features = apply_scaler(out.scaler, apply_bounds(out.bounds, test.features));

  if (cfg.features == FeatureMode::latent) {
    out.encoder = train_autoencoder(train.features, cfg.autoencoder);
    train.features = encode_rows(*out.encoder, train.features);
    test.features = encode_rows(*out.encoder, test.features);
  }
  out.train = std::move(train);
  out.test = std::move(test);
  return out;
}

ModelArtifact make_artifact(const PreparedData& data, ClassifierModel classifier,
                            TrainingMetadata metadata) {
  return ModelArtifact{data.spec,    data.bounds,           data.scaler,
                       data.encoder, std::move(classifier), std::move(metadata)};
}

FilterResult filter_predictions(std::span<const std::pair<std::string, double>> scored,
                                double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::ThresholdOutOfRange, std::to_string(threshold));
  }
  FilterResult result;
  for (const auto& [url, confidence] : scored) {
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "confidence " + std::to_string(confidence) + " for '" + url + "' is outside [0, 1]");
    }
    if (confidence >= threshold) {
      result.flagged.push_back({url, confidence, VerdictLabel::flagged});
    } else {
      result.safe.push_back({url, confidence, VerdictLabel::safe});
    }
  }
  return result;
}

}  // namespace whguard
