#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "whguard/knn.hpp"
#include "whguard/matrix.hpp"
#include "whguard/random.hpp"

namespace whguard {

// 1 - p0^2 - p1^2. Throws EmptyNode when both counts are zero.
double gini(std::size_t negatives, std::size_t positives);

enum class SplitCriterion {
  gini,           // class labels in {0, 1}
  squared_error,  // regression on residuals; leaves take a Newton step
  second_order,   // gradient/hessian statistics with lambda/gamma regularization
};

// Gains at or below this are treated as no improvement.
inline constexpr double kMinSplitGain = 1e-12;

// Gains closer than this (relative) count as a tie, so mirror-image
// partitions that differ only by rounding fall to the ordering rule.
inline constexpr double kGainTieTolerance = 1e-12;

inline bool beats_gain(double candidate, double incumbent) noexcept {
  const double scale = incumbent < 0 ? -incumbent : incumbent;
  return candidate > incumbent + kGainTieTolerance * (scale > 1.0 ? scale : 1.0);
}

struct SplitDecision {
  std::size_t feature = 0;
  double threshold = 0.0;
  double gain = 0.0;

  friend bool operator==(const SplitDecision&, const SplitDecision&) = default;
};

// Per-row statistics indexed by row number of the feature matrix.
//   gini:          primary = label
//   squared_error: primary = residual, secondary = hessian (leaf denominator)
//   second_order:  primary = gradient, secondary = hessian
struct SplitTargets {
  std::span<const double> primary;
  std::span<const double> secondary;
};

struct SplitOptions {
  SplitCriterion criterion = SplitCriterion::gini;
  std::size_t min_samples_leaf = 1;
  double lambda = 1.0;
  double gamma = 0.0;
};

// Half the regularized score improvement minus gamma.
double second_order_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                         double lambda, double gamma) noexcept;
double second_order_leaf_weight(double grad_sum, double hess_sum, double lambda) noexcept;

// Scans every candidate feature at every midpoint between consecutive
// distinct values of the given rows. Highest gain wins; ties go to the lower
// feature index, then the lower threshold. Throws TooFewRows for fewer than
// two rows.
std::optional<SplitDecision> best_split(const Matrix& x, std::span<const std::size_t> rows,
                                        const SplitTargets& targets,
                                        std::span<const std::size_t> candidate_features,
                                        const SplitOptions& options);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  double value = 0.0;
  int left = -1;
  int right = -1;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

// Flat preorder node array; nodes[0] is the root. x[feature] < threshold
// routes left, everything else (ties included) routes right.
struct Tree {
  std::vector<TreeNode> nodes;

  static Tree leaf(double value) { return Tree{{TreeNode{-1, 0.0, value, -1, -1}}}; }
  friend bool operator==(const Tree&, const Tree&) = default;
};

double predict_tree(const Tree& tree, std::span<const double> x);
std::size_t tree_depth(const Tree& tree);

struct GrowParams {
  std::size_t max_depth = 12;
  std::size_t min_samples_leaf = 1;
  SplitCriterion criterion = SplitCriterion::gini;
  std::size_t m_features = 0;  // 0 or >= d: every feature at every node
  double lambda = 1.0;
  double gamma = 0.0;
};

// rows may repeat (bootstrap samples). feature_sampler is only drawn from
// when m_features < d.
Tree grow_tree(const Matrix& x, std::span<const std::size_t> rows, const SplitTargets& targets,
               const GrowParams& params, Rng& feature_sampler);

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 12;
  std::size_t m_features = 0;  // 0: ceil(sqrt(d))
  bool bootstrap = true;
  std::size_t min_samples_leaf = 1;
  std::uint64_t seed = 42;

  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

struct ForestModel {
  std::vector<Tree> trees;
  ForestParams params;  // m_features resolved
  std::size_t n_features = 0;

  friend bool operator==(const ForestModel&, const ForestModel&) = default;
};

// Tree t draws its bootstrap sample and feature subsets from seed + t, so the
// result does not depend on how many threads grow the trees.
ForestModel train_random_forest(const Matrix& x, std::span<const int> labels,
                                const ForestParams& params);

// Confidence is the mean leaf fraction; label 1 iff confidence >= 0.5.
Prediction predict_forest(const ForestModel& model, std::span<const double> x);

enum class BoostingVariant { gradient_boosting, xgboost_style };

struct BoostedModel {
  BoostingVariant variant = BoostingVariant::gradient_boosting;
  double init_score = 0.0;  // log-odds of the training base rate
  std::vector<Tree> trees;
  double learning_rate = 0.1;
  double lambda = 0.0;
  double gamma = 0.0;
  std::size_t n_features = 0;

  friend bool operator==(const BoostedModel&, const BoostedModel&) = default;
};

struct GradientBoostingParams {
  std::size_t n_rounds = 100;
  double learning_rate = 0.1;
  std::size_t max_depth = 3;
  std::size_t min_samples_leaf = 1;
};

struct XgbParams {
  std::size_t n_rounds = 100;
  double eta = 0.3;
  std::size_t max_depth = 6;
  double lambda = 1.0;
  double gamma = 0.0;
  std::size_t min_samples_leaf = 1;
};

// Each round fits a squared-error tree to y - p and sets every leaf to
// sum(y - p) / sum(p (1 - p)) over its members.
BoostedModel train_gradient_boosting(const Matrix& x, std::span<const int> labels,
                                     const GradientBoostingParams& params);

// Each round grows on g = p - y, h = p (1 - p) with the regularized gain;
// leaves hold -G / (H + lambda).
BoostedModel train_xgb(const Matrix& x, std::span<const int> labels, const XgbParams& params);

// init_score + learning_rate * sum of tree outputs.
double boosted_score(const BoostedModel& model, std::span<const double> x);
Prediction predict_boosted(const BoostedModel& model, std::span<const double> x);

// Mean negative log-likelihood, probabilities clipped to [1e-15, 1 - 1e-15].
double log_loss(std::span<const double> probabilities, std::span<const int> labels);

}  // namespace whguard
