#include "whguard/knn.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "whguard/error.hpp"

namespace whguard {

KnnModel make_knn(Matrix features, std::vector<int> labels, std::size_t default_k) {
  if (labels.size() != features.rows()) {
    throw Error(ErrorCode::LengthMismatch, "labels do not match stored rows");
  }
  if (default_k == 0 || default_k > features.rows()) {
    throw Error(ErrorCode::KOutOfRange, "k=" + std::to_string(default_k) + " with " +
                                            std::to_string(features.rows()) + " stored rows");
  }
  return KnnModel{std::move(features), std::move(labels), default_k};
}

std::vector<Neighbor> k_nearest(const KnnModel& model, std::span<const double> x, std::size_t k) {
  const auto& stored = model.stored_features;
  if (k == 0 || k > stored.rows()) {
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " with " + std::to_string(stored.rows()) + " stored rows");
  }
  if (x.size() != stored.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "query width " + std::to_string(x.size()) +
                                                  ", model width " + std::to_string(stored.cols()));
  }
  // (squared distance, index) pairs order exactly like the declared tie rule.
  std::vector<std::pair<double, std::size_t>> cand(stored.rows());
  for (std::size_t r = 0; r < stored.rows(); ++r) {
    const auto row = stored.row(r);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double diff = row[j] - x[j];
      acc += diff * diff;
    }
    cand[r] = {acc, r};
  }
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  std::vector<Neighbor> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = {cand[i].second, std::sqrt(cand[i].first)};
  return out;
}

Prediction predict_knn(const KnnModel& model, std::span<const double> x, std::size_t k) {
  const auto neighbors = k_nearest(model, x, k);
  std::size_t malicious = 0;
  for (const auto& n : neighbors) malicious += model.stored_labels[n.index] != 0;
  return {2 * malicious >= k ? 1 : 0, static_cast<double>(malicious) / static_cast<double>(k)};
}

Prediction predict_knn(const KnnModel& model, std::span<const double> x) {
  return predict_knn(model, x, model.default_k);
}

}  // namespace whguard
