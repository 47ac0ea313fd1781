#include "whguard/matrix.hpp"

#include <algorithm>
#include <string>

#include "whguard/error.hpp"

namespace whguard {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  for (const auto& r : rows) {
    append_row(std::vector<double>(r));
  }
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  for (const auto& r : rows) {
    m.append_row(r);
  }
  return m;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    out[r] = (*this)(r, c);
  }
  return out;
}

void Matrix::append_row(std::span<const double> row) {
  if (rows_ == 0 && values_.empty()) {
    cols_ = row.size();
  } else if (row.size() != cols_) {
    throw Error(ErrorCode::DimensionMismatch,
                "row of width " + std::to_string(row.size()) + " appended to matrix of width " +
                    std::to_string(cols_));
  }
  values_.insert(values_.end(), row.begin(), row.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace whguard
