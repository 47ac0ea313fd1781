#include "whguard/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "whguard/error.hpp"
#include "whguard/neural.hpp"
#include "whguard/parallel.hpp"

namespace whguard {
namespace {

struct SortedEntry {
  double value;
  std::size_t row;

  bool operator<(const SortedEntry& o) const noexcept {
    return value < o.value || (value == o.value && row < o.row);
  }
};

double gini_gain(std::size_t l0, std::size_t l1, std::size_t r0, std::size_t r1) {
  const double nl = static_cast<double>(l0 + l1);
  const double nr = static_cast<double>(r0 + r1);
  const double n = nl + nr;
  return gini(l0 + r0, l1 + r1) - (nl / n) * gini(l0, l1) - (nr / n) * gini(r0, r1);
}

double squared_error_gain(double sum_left, double n_left, double sum_right, double n_right) {
  const double total = sum_left + sum_right;
  return sum_left * sum_left / n_left + sum_right * sum_right / n_right -
         total * total / (n_left + n_right);
}

void require_binary(std::span<const int> labels, std::string_view who) {
  const bool pos = std::find(labels.begin(), labels.end(), 1) != labels.end();
  const bool neg = std::find(labels.begin(), labels.end(), 0) != labels.end();
  if (!pos || !neg) {
    throw Error(ErrorCode::SingleClassTrainingSet, std::string(who) + " needs both classes");
  }
}

void check_shapes(const Matrix& x, std::span<const int> labels) {
  if (x.rows() == 0) throw Error(ErrorCode::EmptyMatrix, "empty training set");
  if (labels.size() != x.rows()) {
    throw Error(ErrorCode::LengthMismatch, "labels do not match feature rows");
  }
}

class TreeGrower {
 public:
  TreeGrower(const Matrix& x, const SplitTargets& targets, const GrowParams& params, Rng& rng)
      : x_(x), targets_(targets), params_(params), rng_(rng), all_features_(x.cols()) {
    std::iota(all_features_.begin(), all_features_.end(), std::size_t{0});
  }

  Tree grow(std::span<const std::size_t> rows) {
    build(std::vector<std::size_t>(rows.begin(), rows.end()), 0);
    return Tree{std::move(nodes_)};
  }

 private:
  int build(std::vector<std::size_t> rows, std::size_t depth) {
    const int index = static_cast<int>(nodes_.size());
    nodes_.push_back(TreeNode{-1, 0.0, leaf_value(rows), -1, -1});

    if (depth >= params_.max_depth || rows.size() < 2 ||
        rows.size() < 2 * std::max<std::size_t>(params_.min_samples_leaf, 1) || is_pure(rows)) {
      return index;
    }
    const auto split = best_split(x_, rows, targets_, candidates(),
                                  {params_.criterion, params_.min_samples_leaf, params_.lambda,
                                   params_.gamma});
    if (!split) return index;

    std::vector<std::size_t> left, right;
    for (const auto r : rows) {
      (x_(r, split->feature) < split->threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    nodes_[index].feature = static_cast<int>(split->feature);
    nodes_[index].threshold = split->threshold;
    const int l = build(std::move(left), depth + 1);
    const int r = build(std::move(right), depth + 1);
    nodes_[index].left = l;
    nodes_[index].right = r;
    return index;
  }

  std::vector<std::size_t> candidates() {
    const std::size_t d = all_features_.size();
    if (params_.m_features == 0 || params_.m_features >= d) return all_features_;
    std::vector<std::size_t> pool = all_features_;
    for (std::size_t i = 0; i < params_.m_features; ++i) {
      std::swap(pool[i], pool[i + rng_.below(d - i)]);
    }
    pool.resize(params_.m_features);
    std::sort(pool.begin(), pool.end());
    return pool;
  }

  bool is_pure(const std::vector<std::size_t>& rows) const {
    if (params_.criterion != SplitCriterion::gini) return false;
    const double first = targets_.primary[rows.front()];
    return std::all_of(rows.begin(), rows.end(),
                       [&](std::size_t r) { return targets_.primary[r] == first; });
  }

  double leaf_value(const std::vector<std::size_t>& rows) const {
    if (rows.empty()) return 0.0;
    double a = 0.0, b = 0.0;
    for (const auto r : rows) {
      a += targets_.primary[r];
      if (!targets_.secondary.empty()) b += targets_.secondary[r];
    }
    switch (params_.criterion) {
      case SplitCriterion::gini:
        return a / static_cast<double>(rows.size());
      case SplitCriterion::squared_error:
        if (targets_.secondary.empty()) return a / static_cast<double>(rows.size());
        return b > 1e-300 ? a / b : 0.0;
      case SplitCriterion::second_order:
        return second_order_leaf_weight(a, b, params_.lambda);
    }
    return 0.0;
  }

  const Matrix& x_;
  const SplitTargets& targets_;
  const GrowParams& params_;
  Rng& rng_;
  std::vector<std::size_t> all_features_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

double gini(std::size_t negatives, std::size_t positives) {
  const std::size_t total = negatives + positives;
  if (total == 0) throw Error(ErrorCode::EmptyNode, "Gini impurity of an empty node");
  const double p0 = static_cast<double>(negatives) / static_cast<double>(total);
  const double p1 = static_cast<double>(positives) / static_cast<double>(total);
  return 1.0 - p0 * p0 - p1 * p1;
}

double second_order_gain(double grad_left, double hess_left, double grad_right, double hess_right,
                         double lambda, double gamma) noexcept {
  const double g = grad_left + grad_right;
  const double h = hess_left + hess_right;
  return 0.5 * (grad_left * grad_left / (hess_left + lambda) +
                grad_right * grad_right / (hess_right + lambda) - g * g / (h + lambda)) -
         gamma;
}

double second_order_leaf_weight(double grad_sum, double hess_sum, double lambda) noexcept {
  if (grad_sum == 0.0) return 0.0;
  return -grad_sum / (hess_sum + lambda);
}

std::optional<SplitDecision> best_split(const Matrix& x, std::span<const std::size_t> rows,
                                        const SplitTargets& targets,
                                        std::span<const std::size_t> candidate_features,
                                        const SplitOptions& options) {
  if (rows.size() < 2) {
    throw Error(ErrorCode::TooFewRows, std::to_string(rows.size()) + " row(s) cannot be split");
  }
  const bool needs_secondary = options.criterion == SplitCriterion::second_order;
  if (targets.primary.size() != x.rows() ||
      (needs_secondary && targets.secondary.size() != x.rows())) {
    throw Error(ErrorCode::DimensionMismatch, "split targets do not cover the feature rows");
  }
  const std::size_t n = rows.size();
  const std::size_t min_leaf = std::max<std::size_t>(options.min_samples_leaf, 1);

  std::vector<std::size_t> features(candidate_features.begin(), candidate_features.end());
  std::sort(features.begin(), features.end());

  std::size_t total_pos = 0;
  double total_primary = 0.0, total_secondary = 0.0;
  for (const auto r : rows) {
    total_pos += targets.primary[r] > 0.5;
    total_primary += targets.primary[r];
    if (needs_secondary) total_secondary += targets.secondary[r];
  }
  if (options.criterion == SplitCriterion::gini && (total_pos == 0 || total_pos == n)) {
    return std::nullopt;
  }

  std::optional<SplitDecision> best;
  std::vector<SortedEntry> sorted(n);
  for (const auto f : features) {
    if (f >= x.cols()) {
      throw Error(ErrorCode::DimensionMismatch, "candidate feature " + std::to_string(f) +
                                                    " outside width " + std::to_string(x.cols()));
    }
    for (std::size_t i = 0; i < n; ++i) sorted[i] = {x(rows[i], f), rows[i]};
    std::sort(sorted.begin(), sorted.end());

    std::size_t left_pos = 0;
    double left_primary = 0.0, left_secondary = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t r = sorted[i].row;
      left_pos += targets.primary[r] > 0.5;
      left_primary += targets.primary[r];
      if (needs_secondary) left_secondary += targets.secondary[r];

      const std::size_t n_left = i + 1;
      const std::size_t n_right = n - n_left;
      if (sorted[i].value == sorted[i + 1].value) continue;
      if (n_left < min_leaf || n_right < min_leaf) continue;

      double gain = 0.0;
      switch (options.criterion) {
        case SplitCriterion::gini:
          gain = gini_gain(n_left - left_pos, left_pos, n_right - (total_pos - left_pos),
                           total_pos - left_pos);
          break;
        case SplitCriterion::squared_error:
          gain = squared_error_gain(left_primary, static_cast<double>(n_left),
                                    total_primary - left_primary, static_cast<double>(n_right));
          break;
        case SplitCriterion::second_order:
          gain = second_order_gain(left_primary, left_secondary, total_primary - left_primary,
                                   total_secondary - left_secondary, options.lambda, options.gamma);
          break;
      }
      if (gain > kMinSplitGain && (!best || beats_gain(gain, best->gain))) {
        best = SplitDecision{f, 0.5 * (sorted[i].value + sorted[i + 1].value), gain};
      }
    }
  }
  return best;
}

double predict_tree(const Tree& tree, std::span<const double> x) {
  if (tree.nodes.empty()) throw Error(ErrorCode::InvalidArgument, "tree has no nodes");
  std::size_t i = 0;
  while (!tree.nodes[i].is_leaf()) {
    const auto& node = tree.nodes[i];
    const auto f = static_cast<std::size_t>(node.feature);
    if (f >= x.size()) {
      throw Error(ErrorCode::DimensionMismatch, "tree reads feature " + std::to_string(f) +
                                                    " of a " + std::to_string(x.size()) +
                                                    "-wide input");
    }
    i = static_cast<std::size_t>(x[f] < node.threshold ? node.left : node.right);
  }
  return tree.nodes[i].value;
}

std::size_t tree_depth(const Tree& tree) {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    const auto [i, depth] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, depth);
    const auto& node = tree.nodes.at(i);
    if (!node.is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(node.left), depth + 1);
      stack.emplace_back(static_cast<std::size_t>(node.right), depth + 1);
    }
  }
  return deepest;
}

Tree grow_tree(const Matrix& x, std::span<const std::size_t> rows, const SplitTargets& targets,
               const GrowParams& params, Rng& feature_sampler) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "cannot grow a tree on zero rows");
  return TreeGrower(x, targets, params, feature_sampler).grow(rows);
}

ForestModel train_random_forest(const Matrix& x, std::span<const int> labels,
                                const ForestParams& params) {
  check_shapes(x, labels);
  if (params.n_trees == 0) throw Error(ErrorCode::InvalidArgument, "n_trees must be positive");
  const std::size_t d = x.cols();
  ForestModel model;
  model.params = params;
  model.n_features = d;
  if (model.params.m_features == 0) {
    model.params.m_features =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d))));
  }
  model.params.m_features = std::min(model.params.m_features, d);

  std::vector<double> y(labels.size());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = labels[i] != 0 ? 1.0 : 0.0;
  const SplitTargets targets{y, {}};
  const GrowParams grow{model.params.max_depth, model.params.min_samples_leaf, SplitCriterion::gini,
                        model.params.m_features, 0.0, 0.0};

  model.trees.resize(params.n_trees);
  parallel_for(params.n_trees, [&](std::size_t t) {
    Rng rng(params.seed + t);
    std::vector<std::size_t> rows(x.rows());
    if (params.bootstrap) {
      for (auto& r : rows) r = rng.below(x.rows());
    } else {
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    model.trees[t] = grow_tree(x, rows, targets, grow, rng);
  });
  return model;
}

Prediction predict_forest(const ForestModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "forest expects " + std::to_string(model.n_features) +
                                                  " features, got " + std::to_string(x.size()));
  }
  if (model.trees.empty()) throw Error(ErrorCode::InvalidArgument, "forest has no trees");
  double sum = 0.0;
  for (const auto& t : model.trees) sum += predict_tree(t, x);
  const double confidence = sum / static_cast<double>(model.trees.size());
  return {confidence >= 0.5 ? 1 : 0, confidence};
}

namespace {

double base_log_odds(std::span<const int> labels) {
  const double pos = static_cast<double>(std::count(labels.begin(), labels.end(), 1));
  const double p = pos / static_cast<double>(labels.size());
  return std::log(p / (1.0 - p));
}

template <typename RoundStats, typename Grow>
BoostedModel boost(const Matrix& x, std::span<const int> labels, std::size_t rounds,
                   BoostedModel model, RoundStats&& stats, Grow&& grow) {
  std::vector<double> score(x.rows(), model.init_score);
  std::vector<double> primary(x.rows()), secondary(x.rows());
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  Rng unused(0);
  for (std::size_t round = 0; round < rounds; ++round) {
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const double p = sigmoid(score[i]);
      std::tie(primary[i], secondary[i]) = stats(p, labels[i] != 0 ? 1.0 : 0.0);
    }
    Tree tree = grow_tree(x, rows, SplitTargets{primary, secondary}, grow, unused);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      score[i] += model.learning_rate * predict_tree(tree, x.row(i));
    }
    model.trees.push_back(std::move(tree));
  }
  return model;
}

}  // namespace

BoostedModel train_gradient_boosting(const Matrix& x, std::span<const int> labels,
                                     const GradientBoostingParams& params) {
  check_shapes(x, labels);
  require_binary(labels, "gradient boosting");
  BoostedModel model;
  model.variant = BoostingVariant::gradient_boosting;
  model.init_score = base_log_odds(labels);
  model.learning_rate = params.learning_rate;
  model.n_features = x.cols();
  const GrowParams grow{params.max_depth, params.min_samples_leaf, SplitCriterion::squared_error,
                        0, 0.0, 0.0};
  return boost(
      x, labels, params.n_rounds, std::move(model),
      [](double p, double y) { return std::pair{y - p, p * (1.0 - p)}; }, grow);
}

BoostedModel train_xgb(const Matrix& x, std::span<const int> labels, const XgbParams& params) {
  check_shapes(x, labels);
  require_binary(labels, "xgboost-style boosting");
  if (params.lambda < 0.0 || params.gamma < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "lambda and gamma must be non-negative");
  }
  BoostedModel model;
  model.variant = BoostingVariant::xgboost_style;
  model.init_score = base_log_odds(labels);
  model.learning_rate = params.eta;
  model.lambda = params.lambda;
  model.gamma = params.gamma;
  model.n_features = x.cols();
  const GrowParams grow{params.max_depth, params.min_samples_leaf, SplitCriterion::second_order, 0,
                        params.lambda, params.gamma};
  return boost(
      x, labels, params.n_rounds, std::move(model),
      [](double p, double y) { return std::pair{p - y, p * (1.0 - p)}; }, grow);
}

double boosted_score(const BoostedModel& model, std::span<const double> x) {
  if (x.size() != model.n_features) {
    throw Error(ErrorCode::DimensionMismatch, "boosted model expects " +
                                                  std::to_string(model.n_features) +
                                                  " features, got " + std::to_string(x.size()));
  }
  double sum = 0.0;
  for (const auto& t : model.trees) sum += predict_tree(t, x);
  return model.init_score + model.learning_rate * sum;
}

Prediction predict_boosted(const BoostedModel& model, std::span<const double> x) {
  const double p = sigmoid(boosted_score(model, x));
  return {p >= 0.5 ? 1 : 0, p};
}

double log_loss(std::span<const double> probabilities, std::span<const int> labels) {
  if (probabilities.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "probabilities do not match labels");
  }
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "log-loss of nothing");
  double total = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double p = std::clamp(probabilities[i], 1e-15, 1.0 - 1e-15);
    total -= labels[i] != 0 ? std::log(p) : std::log1p(-p);
  }
  return total / static_cast<double>(labels.size());
}

}  // namespace whguard
