#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "whguard/matrix.hpp"

namespace whguard {

struct Prediction {
  int label = 0;
  double confidence = 0.0;  // probability of the malicious class

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct KnnModel {
  Matrix stored_features;
  std::vector<int> stored_labels;
  std::size_t default_k = 5;

  friend bool operator==(const KnnModel&, const KnnModel&) = default;
};

// Throws KOutOfRange unless 1 <= default_k <= rows.
KnnModel make_knn(Matrix features, std::vector<int> labels, std::size_t default_k = 5);

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Exact Euclidean search. Ascending distance; equal distances keep the
// lower stored index first.
std::vector<Neighbor> k_nearest(const KnnModel& model, std::span<const double> x, std::size_t k);

// Majority vote; confidence is the malicious vote fraction and an exact
// vote tie resolves to malicious.
Prediction predict_knn(const KnnModel& model, std::span<const double> x, std::size_t k);
Prediction predict_knn(const KnnModel& model, std::span<const double> x);

}  // namespace whguard
