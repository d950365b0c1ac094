#pragma once

#include <cstdint>
#include <vector>

#include "moeflow/error.hpp"

namespace moeflow {

/// Dense row-major matrix of doubles. Small and value-semantic; every
/// routing problem in this library is desk-scale.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

  double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  std::vector<double> row(int i) const {
    return {data.begin() + static_cast<size_t>(i) * cols,
            data.begin() + static_cast<size_t>(i + 1) * cols};
  }

  void set_row(int i, const std::vector<double>& values) {
    if (static_cast<int>(values.size()) != cols)
      throw Error(ErrorCode::ShapeMismatch, "row length does not match matrix width");
    std::copy(values.begin(), values.end(), data.begin() + static_cast<size_t>(i) * cols);
  }

  bool same_shape(const Matrix& other) const {
    return rows == other.rows && cols == other.cols;
  }
};

/// Binary token-to-expert assignment. Entries live in {0,1}; row i lists the
/// experts serving token i.
struct AssignmentPlan {
  int rows = 0;
  int cols = 0;
  std::vector<uint8_t> cells;

  AssignmentPlan() = default;
  AssignmentPlan(int r, int c) : rows(r), cols(c), cells(static_cast<size_t>(r) * c, 0) {}

  bool get(int i, int j) const { return cells[static_cast<size_t>(i) * cols + j] != 0; }
  void set(int i, int j, bool value) {
    cells[static_cast<size_t>(i) * cols + j] = value ? 1 : 0;
  }

  int row_sum(int i) const {
    int s = 0;
    for (int j = 0; j < cols; ++j) s += get(i, j) ? 1 : 0;
    return s;
  }

  int col_sum(int j) const {
    int s = 0;
    for (int i = 0; i < rows; ++i) s += get(i, j) ? 1 : 0;
    return s;
  }

  int total() const {
    int s = 0;
    for (uint8_t c : cells) s += c;
    return s;
  }
};

/// Fractional transport plan, the relaxation an assignment is rounded from.
/// `max_violation` is the worst marginal mismatch measured on the padded
/// problem before any slack is stripped.
struct TransportPlan {
  Matrix matrix;
  bool converged = false;
  int iterations = 0;
  double max_violation = 0.0;
};

}  // namespace moeflow
