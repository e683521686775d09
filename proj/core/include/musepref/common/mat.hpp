#pragma once

#include <cstddef>
#include <vector>

namespace musepref {

// Row-major dense matrix. Deliberately minimal: the public API stays free of
// the linear-algebra backend used internally.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), v(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return v[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return v[r * cols + c]; }

  double* row_ptr(std::size_t r) { return v.data() + r * cols; }
  const double* row_ptr(std::size_t r) const { return v.data() + r * cols; }

  bool empty() const { return rows == 0 || cols == 0; }
};

}  // namespace musepref
