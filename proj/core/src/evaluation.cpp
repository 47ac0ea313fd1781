#include "whguard/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "whguard/error.hpp"

namespace whguard {
namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

double ratio(std::size_t num, std::size_t den, bool& degenerate) {
  degenerate = den == 0;
  return degenerate ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ConfusionMatrix confusion_matrix(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(predicted.size()) + " predictions vs " +
                                               std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw Error(ErrorCode::EmptyInput, "no predictions to score");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t) ++cm.tp;
    else if (p) ++cm.fp;
    else if (t) ++cm.fn;
    else ++cm.tn;
  }
  return cm;
}

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorCode::EmptyMatrix, "confusion matrix has no entries");
  MetricsReport m;
  bool unused = false;
  m.accuracy = ratio(cm.tp + cm.tn, cm.total(), unused);
  m.precision = ratio(cm.tp, cm.tp + cm.fp, m.precision_degenerate);
  m.recall = ratio(cm.tp, cm.tp + cm.fn, m.recall_degenerate);
  m.false_positive_rate = ratio(cm.fp, cm.fp + cm.tn, m.false_positive_rate_degenerate);
  // 2PR / (P + R) == 2tp / (2tp + fp + fn)
  m.f1 = ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn, m.f1_degenerate);
  return m;
}

std::string comparison_csv(const ComparisonTable& table) {
  std::string out = "classifier,accuracy\n";
  for (const auto& row : table.rows) {
    out += row.classifier + "," + fixed6(row.accuracy) + "\n";
  }
  return out;
}

ComparisonTable parse_comparison_csv(std::string_view text) {
  ComparisonTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.rfind("classifier,accuracy", 0) != 0) {
    throw Error(ErrorCode::MissingColumn, "classifier,accuracy");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no));
    }
    try {
      table.rows.push_back({line.substr(0, comma), std::stod(line.substr(comma + 1))});
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no));
    }
  }
  return table;
}

std::string bar_chart_svg(const ComparisonTable& table) {
  if (table.rows.empty()) throw Error(ErrorCode::EmptyInput, "comparison table has no rows");
  constexpr int kLeft = 70, kTop = 40, kPlotH = 300, kBarW = 70, kGap = 30, kBottom = 60;
  const int plot_w = static_cast<int>(table.rows.size()) * (kBarW + kGap) + kGap;
  const int width = kLeft + plot_w + 20;
  const int height = kTop + kPlotH + kBottom;
  const int base_y = kTop + kPlotH;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<title>Classifier accuracy</title>\n"
      << "<g font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"16\">"
      << "Classifier accuracy</text>\n";
  for (int tick = 0; tick <= 10; ++tick) {
    const int y = base_y - kPlotH * tick / 10;
    svg << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
        << (tick == 10 ? "1.0" : "0." + std::to_string(tick)) << "</text>\n";
  }
  svg << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << base_y
      << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << base_y << "\" x2=\"" << kLeft + plot_w
      << "\" y2=\"" << base_y << "\" stroke=\"black\"/>\n";

  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const double acc = std::clamp(row.accuracy, 0.0, 1.0);
    const int x = kLeft + kGap + static_cast<int>(i) * (kBarW + kGap);
    const std::string h = fixed6(acc * kPlotH);
    const std::string y = fixed6(base_y - acc * kPlotH);
    svg << "<rect class=\"bar\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kBarW
        << "\" height=\"" << h << "\" fill=\"#4878a8\"/>\n"
        << "<text x=\"" << x + kBarW / 2 << "\" y=\"" << fixed6(base_y - acc * kPlotH - 6)
        << "\" text-anchor=\"middle\">" << fixed6(row.accuracy) << "</text>\n"
        << "<text x=\"" << x + kBarW / 2 << "\" y=\"" << base_y + 18
        << "\" text-anchor=\"middle\">" << xml_escape(row.classifier) << "</text>\n";
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

void render_bar_chart(const ComparisonTable& table, const std::filesystem::path& path) {
  const std::string svg = bar_chart_svg(table);
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << svg)) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
}

std::string render_confusion(const ConfusionMatrix& cm, std::string_view name) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "Confusion matrix: %.*s\n"
                "                    predicted benign  predicted malicious\n"
                "truth benign     %19zu  %19zu\n"
                "truth malicious  %19zu  %19zu\n",
                static_cast<int>(name.size()), name.data(), cm.tn, cm.fp, cm.fn, cm.tp);
  return buf;
}

std::string render_metrics(const MetricsReport& m) {
  const auto line = [](std::string_view label, double v, bool degenerate) {
    std::string s = "  ";
    s += label;
    s.append(22 - label.size(), ' ');
    s += full(v);
    if (degenerate) s += "  (degenerate: 0/0)";
    return s + "\n";
  };
  return line("accuracy", m.accuracy, false) + line("precision", m.precision, m.precision_degenerate) +
         line("recall", m.recall, m.recall_degenerate) +
         line("false_positive_rate", m.false_positive_rate, m.false_positive_rate_degenerate) +
         line("f1", m.f1, m.f1_degenerate);
}

}  // namespace whguard
