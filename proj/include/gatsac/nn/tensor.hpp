#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "gatsac/core/error.hpp"

namespace gatsac::nn {

using Vec = std::vector<double>;

// Dense row-major matrix; vectors are rows x 1.
struct Tensor {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Tensor() = default;
  Tensor(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

  double& operator()(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
  const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
  double* row(int r) { return data.data() + static_cast<std::size_t>(r) * cols; }

  int size() const { return rows * cols; }
  void zero() { std::fill(data.begin(), data.end(), 0.0); }
  bool same_shape(const Tensor& o) const { return rows == o.rows && cols == o.cols; }
  bool finite() const {
    for (double v : data)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

inline void require_shape(const Tensor& t, int rows, int cols, const std::string& what) {
  if (t.rows != rows || t.cols != cols)
    throw ShapeError(what + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", got " + std::to_string(t.rows) + "x" + std::to_string(t.cols));
}

}  // namespace gatsac::nn
