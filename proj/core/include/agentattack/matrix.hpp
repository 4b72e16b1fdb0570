#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace agentattack {

/// Dense row-major matrix with value semantics.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  /// Builds from nested rows; every row must have the same length.
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    Matrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cols) {
        throw std::invalid_argument("Matrix::from_rows: ragged rows");
      }
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
    }
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  const std::vector<T>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Joint state of all recipients: one state index per recipient.
using JointState = std::vector<int>;

/// Encodes a joint state in base `num_states`, recipient 0 most significant.
inline std::size_t encode_joint(std::span<const int> joint, int num_states) {
  std::size_t code = 0;
  for (int s : joint) code = code * static_cast<std::size_t>(num_states) + static_cast<std::size_t>(s);
  return code;
}

inline JointState decode_joint(std::size_t code, int num_states, int n) {
  JointState joint(static_cast<std::size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    joint[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<std::size_t>(num_states));
    code /= static_cast<std::size_t>(num_states);
  }
  return joint;
}

inline std::size_t int_pow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int k = 0; k < exp; ++k) r *= base;
  return r;
}

}  // namespace agentattack
