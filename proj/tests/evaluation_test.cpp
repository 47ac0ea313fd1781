#include <gtest/gtest.h>

#include <regex>

#include "test_support.hpp"
#include "whguard/error.hpp"
#include "whguard/evaluation.hpp"

namespace whguard {
namespace {

TEST(Confusion, WorkedExample) {
  const std::vector<int> pred = {1, 1, 0, 1}, truth = {1, 0, 0, 1};
  const auto cm = confusion_matrix(pred, truth);
  EXPECT_EQ(cm, (ConfusionMatrix{2, 1, 1, 0}));
  const auto m = compute_metrics(cm);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.75);
  EXPECT_DOUBLE_EQ(m.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.false_positive_rate, 0.5);
  EXPECT_DOUBLE_EQ(m.f1, 0.8);
  EXPECT_FALSE(m.degenerate());
}

TEST(Confusion, InputErrors) {
  const std::vector<int> a = {1, 0}, b = {1};
  try {
    confusion_matrix(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LengthMismatch);
  }
  try {
    confusion_matrix({}, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyInput);
  }
}

TEST(Metrics, DegenerateRatiosAreFlagged) {
  // nothing predicted positive, no positives present
  const auto m = compute_metrics({0, 0, 5, 0});
  EXPECT_EQ(m.accuracy, 1.0);
  EXPECT_TRUE(m.precision_degenerate);
  EXPECT_TRUE(m.recall_degenerate);
  EXPECT_TRUE(m.f1_degenerate);
  EXPECT_FALSE(m.false_positive_rate_degenerate);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_THROW(compute_metrics({}), Error);
}

TEST(Metrics, PropertiesOverRandomPredictions) {
  Rng rng(80);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 1 + rng.below(60);
    std::vector<int> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = static_cast<int>(rng.below(2));
      truth[i] = static_cast<int>(rng.below(2));
    }
    const auto cm = confusion_matrix(pred, truth);
    EXPECT_EQ(cm.total(), n);
    std::size_t agree = 0;
    for (std::size_t i = 0; i < n; ++i) agree += pred[i] == truth[i];
    const auto m = compute_metrics(cm);
    EXPECT_DOUBLE_EQ(m.accuracy, static_cast<double>(agree) / static_cast<double>(n));
    for (double v : {m.accuracy, m.precision, m.recall, m.false_positive_rate, m.f1}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
    if (!m.precision_degenerate && !m.recall_degenerate && m.precision + m.recall > 0) {
      EXPECT_NEAR(m.f1, 2 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
    }
  }
}

TEST(Metrics, RenderedValuesRoundTrip) {
  const auto m = compute_metrics({7, 3, 11, 2});
  const auto text = render_metrics(m);
  std::smatch match;
  ASSERT_TRUE(std::regex_search(text, match, std::regex(R"(precision\s+(\S+))")));
  EXPECT_EQ(std::stod(match[1].str()), m.precision);
  const auto grid = render_confusion({7, 3, 11, 2}, "MLP");
  EXPECT_NE(grid.find("MLP"), std::string::npos);
  EXPECT_NE(grid.find("truth malicious"), std::string::npos);
}

TEST(ComparisonCsv, SixDecimalsAndRoundTrip) {
  const ComparisonTable t{{{"MLP", 0.9777171}, {"K-NN", 1.0}}, "s", 1};
  const auto csv = comparison_csv(t);
  EXPECT_EQ(csv, "classifier,accuracy\nMLP,0.977717\nK-NN,1.000000\n");
  const auto back = parse_comparison_csv(csv);
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[0].classifier, "MLP");
  EXPECT_DOUBLE_EQ(back.rows[0].accuracy, 0.977717);
  EXPECT_EQ(comparison_csv(back), csv);
}

TEST(ComparisonCsv, RejectsBadInput) {
  EXPECT_THROW(parse_comparison_csv("name,score\n"), Error);
  EXPECT_THROW(parse_comparison_csv("classifier,accuracy\nMLP;0.5\n"), Error);
  EXPECT_THROW(parse_comparison_csv("classifier,accuracy\nMLP,abc\n"), Error);
}

TEST(BarChart, OneBarPerRowHeightsProportional) {
  ComparisonTable t;
  for (std::size_t i = 0; i < 5; ++i) {
    t.rows.push_back({std::string(kReferenceClassifiers[i]), kReferenceAccuracies[i]});
  }
  const auto svg = bar_chart_svg(t);
  const std::regex rect(R"re(<rect class="bar"[^>]* height="([0-9.]+)")re");
  std::vector<double> heights;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), rect); it != std::sregex_iterator(); ++it) {
    heights.push_back(std::stod((*it)[1].str()));
  }
  ASSERT_EQ(heights.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(heights[i] / heights[0], kReferenceAccuracies[i] / kReferenceAccuracies[0], 1e-5);
  }
  EXPECT_NE(svg.find("Gradient Boosting"), std::string::npos);
  EXPECT_EQ(svg, bar_chart_svg(t));
  EXPECT_THROW(bar_chart_svg({}), Error);
}

TEST(BarChart, EscapesNames) {
  const ComparisonTable t{{{"A&B<", 0.5}}, "", 0};
  const auto svg = bar_chart_svg(t);
  EXPECT_NE(svg.find("A&amp;B&lt;"), std::string::npos);
}

}  // namespace
}  // namespace whguard
