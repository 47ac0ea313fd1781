#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace whguard {

// Positive class is malicious (label 1).
struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const noexcept { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> truth);

// A ratio whose denominator is zero is reported as 0 with its flag set.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double false_positive_rate = 0.0;
  double f1 = 0.0;
  bool precision_degenerate = false;
  bool recall_degenerate = false;
  bool false_positive_rate_degenerate = false;
  bool f1_degenerate = false;

  bool degenerate() const noexcept {
    return precision_degenerate || recall_degenerate || false_positive_rate_degenerate ||
           f1_degenerate;
  }
};

MetricsReport compute_metrics(const ConfusionMatrix& cm);

struct ComparisonRow {
  std::string classifier;
  double accuracy = 0.0;

  friend bool operator==(const ComparisonRow&, const ComparisonRow&) = default;
};

struct ComparisonTable {
  std::vector<ComparisonRow> rows;
  std::string split;  // e.g. "stratified 80/20, train=800, test=200"
  std::uint64_t seed = 0;

  friend bool operator==(const ComparisonTable&, const ComparisonTable&) = default;
};

// Reference accuracies the comparison is checked against, in table order.
inline constexpr std::string_view kReferenceClassifiers[] = {"MLP", "K-NN", "XGB",
                                                             "Gradient Boosting", "Random Forest"};
inline constexpr double kReferenceAccuracies[] = {0.977717, 0.991086, 0.929417, 0.960714, 0.955222};

// "classifier,accuracy" header, one row per classifier, six decimals.
std::string comparison_csv(const ComparisonTable& table);
ComparisonTable parse_comparison_csv(std::string_view text);

// SVG 1.1 bar chart, one <rect class="bar"> per row, y axis fixed to [0, 1].
// Throws EmptyInput for an empty table.
std::string bar_chart_svg(const ComparisonTable& table);
void render_bar_chart(const ComparisonTable& table, const std::filesystem::path& path);

// Fixed-width 2x2 grid: rows are truth, columns are predictions.
std::string render_confusion(const ConfusionMatrix& cm, std::string_view name);

// Metrics printed with 17 significant digits so they can be recomputed from
// the printed cells.
std::string render_metrics(const MetricsReport& metrics);

}  // namespace whguard
