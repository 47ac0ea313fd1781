#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "whguard/matrix.hpp"
#include "whguard/url_features.hpp"

namespace whguard {

struct RawRecord {
  std::string url;
  std::string label_text;

  friend bool operator==(const RawRecord&, const RawRecord&) = default;
};

// RFC-4180 reader. The header must name the columns "url" and "type";
// other columns are ignored. Line numbers in MalformedRow are 1-based
// physical lines with the header on line 1.
std::vector<RawRecord> read_csv(std::istream& in);
std::vector<RawRecord> load_csv(const std::filesystem::path& path);

using LabelMapping = std::map<std::string, int, std::less<>>;

// benign -> 0; phishing, defacement, malware -> 1.
LabelMapping default_label_mapping();

struct LabeledUrls {
  std::vector<std::string> urls;
  std::vector<int> labels;

  std::size_t size() const noexcept { return urls.size(); }
};

LabeledUrls map_labels(std::span<const RawRecord> records, const LabelMapping& mapping);

struct CleanReport {
  std::size_t empty_dropped = 0;
  std::size_t duplicates_dropped = 0;
};

// Trims surrounding whitespace, drops rows with an empty field, then drops
// exact (url, label) duplicates keeping the first occurrence.
std::vector<RawRecord> clean(std::vector<RawRecord> records, CleanReport* report = nullptr);

struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::vector<std::string> urls;

  std::size_t size() const noexcept { return labels.size(); }
  std::size_t count_label(int label) const;
  Dataset subset(std::span<const std::size_t> rows) const;
};

Dataset featurize(const LabeledUrls& data, const FeatureSpec& spec);

struct Scaler {
  std::vector<double> min;
  std::vector<double> max;
};

Scaler fit_scaler(const Matrix& train_features);
Matrix apply_scaler(const Scaler& scaler, const Matrix& features);
void apply_scaler(const Scaler& scaler, std::span<double> row);

struct OutlierBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Nearest-rank percentile: the value at 1-based rank ceil(pct/100 * n) of
// the sorted sample (rank clamped to [1, n]).
double nearest_rank_percentile(std::vector<double> values, double pct);

inline constexpr double kLowerOutlierPercentile = 1.0;
inline constexpr double kUpperOutlierPercentile = 99.0;

// Winsorizes every column to its 1st/99th nearest-rank percentiles.
std::pair<OutlierBounds, Matrix> bound_outliers(const Matrix& train_features);
Matrix apply_bounds(const OutlierBounds& bounds, const Matrix& features);
void apply_bounds(const OutlierBounds& bounds, std::span<double> row);

struct SplitConfig {
  double test_fraction = 0.2;
  std::uint64_t seed = 42;
  bool stratified = true;
};

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Row assignment only; both index lists come back in ascending order.
SplitIndices split_indices(std::span<const int> labels, const SplitConfig& cfg);

std::pair<Dataset, Dataset> stratified_split(const Dataset& ds, const SplitConfig& cfg);

// Keeps at most max_rows rows, preserving class proportions. Returns the
// input unchanged when it is already small enough.
LabeledUrls stratified_subsample(const LabeledUrls& data, std::size_t max_rows, std::uint64_t seed);

}  // namespace whguard
