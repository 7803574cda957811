#pragma once

// Minimal dense row-major matrix used throughout the pipeline.

#include <algorithm>
#include <cstddef>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <type_traits>
#include <vector>

namespace terracini {

template <class T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  T* row(std::size_t r) { return data_.data() + r * cols_; }
  const T* row(std::size_t r) const { return data_.data() + r * cols_; }

  std::span<const T> data() const { return data_; }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    std::swap_ranges(row(a), row(a) + cols_, row(b));
  }

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Text dump: one row per line, space-separated entries. Prime-field entries
// are already canonical representatives in [0, p); doubles print with
// round-trip precision.
template <class T>
void dump_matrix(std::ostream& os, const DenseMatrix<T>& m) {
  if constexpr (std::is_floating_point_v<T>)
    os << std::setprecision(std::numeric_limits<T>::max_digits10);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const T* p = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << p[c];
    }
    os << '\n';
  }
}

}  // namespace terracini
