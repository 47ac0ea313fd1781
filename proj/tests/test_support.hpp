#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "whguard/data_pipeline.hpp"
#include "whguard/matrix.hpp"
#include "whguard/random.hpp"

namespace whguard::testing {

inline std::filesystem::path sample_csv() { return WHGUARD_SAMPLE_CSV; }

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("whguard_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

// Integer-valued coordinates in [0, levels) produce plenty of exact ties.
inline Matrix random_grid_matrix(Rng& rng, std::size_t rows, std::size_t cols, std::uint64_t levels) {
  Matrix m(rows, cols);
  for (auto& v : m.values()) v = static_cast<double>(rng.below(levels));
  return m;
}

inline std::vector<int> random_labels(Rng& rng, std::size_t n) {
  std::vector<int> labels(n);
  for (auto& l : labels) l = static_cast<int>(rng.below(2));
  labels[0] = 0;
  if (n > 1) labels[1] = 1;
  return labels;
}

// 20 points, two well separated blobs: label 1 iff x0 + x1 > 0.
inline Dataset separable_toy_set() {
  Dataset ds;
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    const int label = i % 2;
    const double cx = label ? 2.0 : -2.0;
    const double row[2] = {cx + rng.uniform(-0.5, 0.5), cx + rng.uniform(-0.5, 0.5)};
    ds.features.append_row(row);
    ds.labels.push_back(label);
    ds.urls.push_back("toy" + std::to_string(i));
  }
  return ds;
}

}  // namespace whguard::testing
