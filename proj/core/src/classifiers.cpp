#include "whguard/classifiers.hpp"

#include <algorithm>
#include <string>

#include "whguard/error.hpp"
#include "whguard/parallel.hpp"

namespace whguard {

std::string_view display_name(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::mlp: return "MLP";
    case ClassifierKind::knn: return "K-NN";
    case ClassifierKind::xgb: return "XGB";
    case ClassifierKind::gradient_boosting: return "Gradient Boosting";
    case ClassifierKind::random_forest: return "Random Forest";
  }
  return "?";
}

std::string_view short_name(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::mlp: return "mlp";
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::xgb: return "xgb";
    case ClassifierKind::gradient_boosting: return "gb";
    case ClassifierKind::random_forest: return "rf";
  }
  return "?";
}

std::optional<ClassifierKind> parse_classifier_kind(std::string_view name) noexcept {
  for (const auto kind : kAllClassifiers) {
    if (short_name(kind) == name || display_name(kind) == name) return kind;
  }
  return std::nullopt;
}

void ClassifierParams::set_seed(std::uint64_t seed) {
  mlp.seed = seed;
  forest.seed = seed;
}

ClassifierModel train_classifier(ClassifierKind kind, const Dataset& train,
                                 const ClassifierParams& params) {
  switch (kind) {
    case ClassifierKind::mlp:
      return train_mlp(train.features, train.labels, params.mlp);
    case ClassifierKind::knn:
      return make_knn(train.features, train.labels, params.knn_k);
    case ClassifierKind::xgb:
      return train_xgb(train.features, train.labels, params.xgb);
    case ClassifierKind::gradient_boosting:
      return train_gradient_boosting(train.features, train.labels, params.gradient_boosting);
    case ClassifierKind::random_forest:
      return train_random_forest(train.features, train.labels, params.forest);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown classifier kind");
}

Prediction predict(const ClassifierModel& model, std::span<const double> x) {
  return std::visit(
      [&](const auto& m) -> Prediction {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MlpModel>) {
          const double p = predict_proba_mlp(m, x);
          return {p >= 0.5 ? 1 : 0, p};
        } else if constexpr (std::is_same_v<M, KnnModel>) {
          return predict_knn(m, x);
        } else if constexpr (std::is_same_v<M, ForestModel>) {
          return predict_forest(m, x);
        } else {
          return predict_boosted(m, x);
        }
      },
      model);
}

double predict_proba(const ClassifierModel& model, std::span<const double> x) {
  return predict(model, x).confidence;
}

std::vector<Prediction> predict_rows(const ClassifierModel& model, const Matrix& features) {
  std::vector<Prediction> out(features.rows());
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (features.rows() + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t stop = std::min(features.rows(), (c + 1) * kChunk);
    for (std::size_t r = c * kChunk; r < stop; ++r) out[r] = predict(model, features.row(r));
  });
  return out;
}

ClassifierKind kind_of(const ClassifierModel& model) noexcept {
  return std::visit(
      [](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, MlpModel>) {
          return ClassifierKind::mlp;
        } else if constexpr (std::is_same_v<M, KnnModel>) {
          return ClassifierKind::knn;
        } else if constexpr (std::is_same_v<M, ForestModel>) {
          return ClassifierKind::random_forest;
        } else {
          return m.variant == BoostingVariant::xgboost_style ? ClassifierKind::xgb
                                                             : ClassifierKind::gradient_boosting;
        }
      },
      model);
}

ComparisonResult compare_classifiers(const Dataset& train, const Dataset& test,
                                     const ClassifierParams& params,
                                     std::span<const ClassifierKind> kinds) {
  if (train.size() == 0 || test.size() == 0) {
    throw Error(ErrorCode::EmptyInput, "comparison needs non-empty train and test partitions");
  }
  if (train.features.cols() != test.features.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "train and test feature widths differ");
  }
  std::vector<ClassifierKind> ordered;
  for (const auto k : kAllClassifiers) {
    if (std::find(kinds.begin(), kinds.end(), k) != kinds.end()) ordered.push_back(k);
  }

  ComparisonResult result;
  result.table.rows.resize(ordered.size());
  result.matrices.resize(ordered.size());
  // Trainers share only immutable inputs; each writes its own slot.
  parallel_for(ordered.size(), [&](std::size_t i) {
    const auto model = train_classifier(ordered[i], train, params);
    std::vector<int> predicted;
    predicted.reserve(test.size());
    for (std::size_t r = 0; r < test.size(); ++r) {
      predicted.push_back(predict(model, test.features.row(r)).label);
    }
    result.matrices[i] = confusion_matrix(predicted, test.labels);
    result.table.rows[i] = {std::string(display_name(ordered[i])),
                            compute_metrics(result.matrices[i]).accuracy};
  });
  return result;
}

}  // namespace whguard
