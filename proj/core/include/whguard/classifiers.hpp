#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "whguard/data_pipeline.hpp"
#include "whguard/evaluation.hpp"
#include "whguard/knn.hpp"
#include "whguard/neural.hpp"
#include "whguard/trees.hpp"

namespace whguard {

// Declaration order is the comparison table order.
enum class ClassifierKind { mlp, knn, xgb, gradient_boosting, random_forest };

inline constexpr std::array<ClassifierKind, 5> kAllClassifiers = {
    ClassifierKind::mlp, ClassifierKind::knn, ClassifierKind::xgb,
    ClassifierKind::gradient_boosting, ClassifierKind::random_forest};

// "MLP", "K-NN", "XGB", "Gradient Boosting", "Random Forest"
std::string_view display_name(ClassifierKind kind) noexcept;
// "mlp", "knn", "xgb", "gb", "rf"
std::string_view short_name(ClassifierKind kind) noexcept;
std::optional<ClassifierKind> parse_classifier_kind(std::string_view name) noexcept;

struct ClassifierParams {
  TrainConfig mlp = TrainConfig::mlp_defaults();
  std::size_t knn_k = 5;
  ForestParams forest;
  GradientBoostingParams gradient_boosting;
  XgbParams xgb;

  // Seeds every stochastic trainer.
  void set_seed(std::uint64_t seed);
};

using ClassifierModel = std::variant<MlpModel, KnnModel, ForestModel, BoostedModel>;

ClassifierModel train_classifier(ClassifierKind kind, const Dataset& train,
                                 const ClassifierParams& params);

// Malicious-class probability in [0, 1].
double predict_proba(const ClassifierModel& model, std::span<const double> x);
Prediction predict(const ClassifierModel& model, std::span<const double> x);

std::vector<Prediction> predict_rows(const ClassifierModel& model, const Matrix& features);

ClassifierKind kind_of(const ClassifierModel& model) noexcept;

struct ComparisonResult {
  ComparisonTable table;
  std::vector<ConfusionMatrix> matrices;  // aligned with table.rows
};

// Trains every requested classifier on the same train matrix and scores it
// on the same test matrix. Rows follow kAllClassifiers order.
ComparisonResult compare_classifiers(const Dataset& train, const Dataset& test,
                                     const ClassifierParams& params,
                                     std::span<const ClassifierKind> kinds = kAllClassifiers);

}  // namespace whguard
