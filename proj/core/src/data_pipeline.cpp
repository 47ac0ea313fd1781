#include "whguard/data_pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "whguard/error.hpp"
#include "whguard/random.hpp"

namespace whguard {
namespace {

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line_no = 0;
};

// Returns false at end of input. Quoted fields may span lines and use ""
// for a literal quote; CRLF and LF are both accepted.
bool next_record(std::istream& in, std::size_t& line, CsvRecord& rec) {
  rec.fields.clear();
  if (in.peek() == std::char_traits<char>::eof()) return false;
  rec.line_no = ++line;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char c;
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      rec.fields.push_back(std::move(field));
      field.clear();
      field_started = false;
    } else if (c == '\n') {
      break;
    } else if (c == '\r') {
      if (in.peek() == '\n') in.get();
      break;
    } else {
      field += c;
      field_started = true;
    }
  }
  rec.fields.push_back(std::move(field));
  return true;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<RawRecord> read_csv(std::istream& in) {
  // UTF-8 byte order mark.
  if (in.peek() == 0xEF) {
    char bom[3];
    in.read(bom, 3);
  }
  std::size_t line = 0;
  CsvRecord rec;
  if (!next_record(in, line, rec)) {
    throw Error(ErrorCode::MissingColumn, "url");
  }
  const auto& header = rec.fields;
  const auto column = [&](std::string_view name) {
    const auto it = std::find_if(header.begin(), header.end(),
                                 [&](const std::string& h) { return trim(h) == name; });
    if (it == header.end()) throw Error(ErrorCode::MissingColumn, std::string(name));
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t url_col = column("url");
  const std::size_t type_col = column("type");
  const std::size_t width = header.size();

  std::vector<RawRecord> out;
  while (next_record(in, line, rec)) {
    if (rec.fields.size() != width) {
      // A trailing blank line is not a record.
      if (rec.fields.size() == 1 && rec.fields[0].empty() &&
          in.peek() == std::char_traits<char>::eof()) {
        break;
      }
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(rec.line_no) + ": expected " +
                                               std::to_string(width) + " fields, found " +
                                               std::to_string(rec.fields.size()));
    }
    out.push_back({std::move(rec.fields[url_col]), std::move(rec.fields[type_col])});
  }
  return out;
}

std::vector<RawRecord> load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::FileNotFound, path.string());
  }
  return read_csv(in);
}

LabelMapping default_label_mapping() {
  return {{"benign", 0}, {"phishing", 1}, {"defacement", 1}, {"malware", 1}};
}

LabeledUrls map_labels(std::span<const RawRecord> records, const LabelMapping& mapping) {
  LabeledUrls out;
  out.urls.reserve(records.size());
  out.labels.reserve(records.size());
  for (const auto& r : records) {
    const auto it = mapping.find(r.label_text);
    if (it == mapping.end()) {
      throw Error(ErrorCode::UnknownLabel, r.label_text);
    }
    out.urls.push_back(r.url);
    out.labels.push_back(it->second);
  }
  return out;
}

std::vector<RawRecord> clean(std::vector<RawRecord> records, CleanReport* report) {
  CleanReport counts;
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<RawRecord> kept;
  kept.reserve(records.size());
  for (auto& r : records) {
    r.url = std::string(trim(r.url));
    r.label_text = std::string(trim(r.label_text));
    if (r.url.empty() || r.label_text.empty()) {
      ++counts.empty_dropped;
      continue;
    }
    if (!seen.emplace(r.url, r.label_text).second) {
      ++counts.duplicates_dropped;
      continue;
    }
    kept.push_back(std::move(r));
  }
  if (report != nullptr) *report = counts;
  return kept;
}

std::size_t Dataset::count_label(int label) const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.features = features.select_rows(rows);
  out.labels.reserve(rows.size());
  out.urls.reserve(rows.size());
  for (const auto r : rows) {
    out.labels.push_back(labels[r]);
    if (!urls.empty()) out.urls.push_back(urls[r]);
  }
  return out;
}

Dataset featurize(const LabeledUrls& data, const FeatureSpec& spec) {
  Dataset ds;
  ds.features = Matrix(data.size(), spec.dimension());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto v = extract_features(data.urls[i], spec);
    std::copy(v.begin(), v.end(), ds.features.row(i).begin());
  }
  ds.labels = data.labels;
  ds.urls = data.urls;
  return ds;
}

Scaler fit_scaler(const Matrix& train_features) {
  if (train_features.empty()) {
    throw Error(ErrorCode::EmptyMatrix, "cannot fit a scaler on zero rows");
  }
  Scaler s;
  const auto first = train_features.row(0);
  s.min.assign(first.begin(), first.end());
  s.max.assign(first.begin(), first.end());
  for (std::size_t r = 1; r < train_features.rows(); ++r) {
    const auto row = train_features.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) {
      s.min[j] = std::min(s.min[j], row[j]);
      s.max[j] = std::max(s.max[j], row[j]);
    }
  }
  return s;
}

void apply_scaler(const Scaler& scaler, std::span<double> row) {
  if (row.size() != scaler.min.size()) {
    throw Error(ErrorCode::DimensionMismatch, "scaler width " + std::to_string(scaler.min.size()) +
                                                  " vs row width " + std::to_string(row.size()));
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double range = scaler.max[j] - scaler.min[j];
    row[j] = range > 0.0 ? (row[j] - scaler.min[j]) / range : 0.0;
  }
}

Matrix apply_scaler(const Scaler& scaler, const Matrix& features) {
  Matrix out = features;
  for (std::size_t r = 0; r < out.rows(); ++r) apply_scaler(scaler, out.row(r));
  return out;
}

double nearest_rank_percentile(std::vector<double> values, double pct) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptyMatrix, "percentile of an empty sample");
  }
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  const double rank = std::clamp(std::ceil(pct / 100.0 * n), 1.0, n);
  return values[static_cast<std::size_t>(rank) - 1];
}

std::pair<OutlierBounds, Matrix> bound_outliers(const Matrix& train_features) {
  if (train_features.empty()) {
    throw Error(ErrorCode::EmptyMatrix, "cannot bound outliers on zero rows");
  }
  OutlierBounds bounds;
  for (std::size_t j = 0; j < train_features.cols(); ++j) {
    const auto col = train_features.column(j);
    bounds.lower.push_back(nearest_rank_percentile(col, kLowerOutlierPercentile));
    bounds.upper.push_back(nearest_rank_percentile(col, kUpperOutlierPercentile));
  }
  Matrix clipped = apply_bounds(bounds, train_features);
  return {std::move(bounds), std::move(clipped)};
}

void apply_bounds(const OutlierBounds& bounds, std::span<double> row) {
  if (row.size() != bounds.lower.size()) {
    throw Error(ErrorCode::DimensionMismatch, "bounds width " + std::to_string(bounds.lower.size()) +
                                                  " vs row width " + std::to_string(row.size()));
  }
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = std::clamp(row[j], bounds.lower[j], bounds.upper[j]);
  }
}

Matrix apply_bounds(const OutlierBounds& bounds, const Matrix& features) {
  Matrix out = features;
  for (std::size_t r = 0; r < out.rows(); ++r) apply_bounds(bounds, out.row(r));
  return out;
}

SplitIndices split_indices(std::span<const int> labels, const SplitConfig& cfg) {
  if (!(cfg.test_fraction > 0.0 && cfg.test_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "test_fraction must lie in (0, 1)");
  }
  std::vector<std::vector<std::size_t>> groups;
  if (cfg.stratified) {
    groups.resize(2);
    for (std::size_t i = 0; i < labels.size(); ++i) {
      groups.at(static_cast<std::size_t>(labels[i] != 0)).push_back(i);
    }
    if (groups[0].empty() || groups[1].empty()) {
      throw Error(ErrorCode::DegenerateSplit, "stratified split needs both classes");
    }
  } else {
    groups.emplace_back(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) groups[0][i] = i;
  }

  Rng rng(cfg.seed);
  SplitIndices out;
  for (auto& g : groups) {
    const auto n_test =
        static_cast<std::size_t>(std::round(static_cast<double>(g.size()) * cfg.test_fraction));
    rng.shuffle(std::span<std::size_t>(g));
    out.test.insert(out.test.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train.insert(out.train.end(), g.begin() + static_cast<std::ptrdiff_t>(n_test), g.end());
  }
  if (out.test.empty() || out.train.empty()) {
    throw Error(ErrorCode::DegenerateSplit,
                std::to_string(labels.size()) + " rows give train=" + std::to_string(out.train.size()) +
                    ", test=" + std::to_string(out.test.size()));
  }
  std::sort(out.train.begin(), out.train.end());
  std::sort(out.test.begin(), out.test.end());
  return out;
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, const SplitConfig& cfg) {
  const auto idx = split_indices(ds.labels, cfg);
  return {ds.subset(idx.train), ds.subset(idx.test)};
}

LabeledUrls stratified_subsample(const LabeledUrls& data, std::size_t max_rows, std::uint64_t seed) {
  if (max_rows == 0 || data.size() <= max_rows) return data;
  SplitConfig cfg;
  cfg.seed = seed;
  cfg.test_fraction = static_cast<double>(max_rows) / static_cast<double>(data.size());
  cfg.stratified = std::count(data.labels.begin(), data.labels.end(), 1) > 0 &&
                   std::count(data.labels.begin(), data.labels.end(), 0) > 0;
  const auto idx = split_indices(data.labels, cfg);
  LabeledUrls out;
  for (const auto i : idx.test) {
    out.urls.push_back(data.urls[i]);
    out.labels.push_back(data.labels[i]);
  }
  return out;
}

}  // namespace whguard
