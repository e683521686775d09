#include "musepref/learn/dataset.hpp"

#include <cmath>
#include <stdexcept>

#include "musepref/common/error.hpp"

namespace musepref::learn {

bool Dataset::has_both_classes() const {
  bool pos = false, neg = false;
  for (int label : y) (label == 1 ? pos : neg) = true;
  return pos && neg;
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.feature_names = feature_names;
  out.x = Mat(indices.size(), dim());
  out.y.reserve(indices.size());
  for (std::size_t r = 0; r < indices.size(); ++r) {
    const std::size_t src = indices[r];
    for (std::size_t c = 0; c < dim(); ++c) out.x.at(r, c) = x.at(src, c);
    out.y.push_back(y[src]);
    if (!row_groups.empty()) out.row_groups.push_back(row_groups[src]);
  }
  return out;
}

void Dataset::validate() const {
  if (x.rows != y.size())
    throw std::invalid_argument("dataset: row/label count mismatch");
  if (!feature_names.empty() && feature_names.size() != x.cols)
    throw std::invalid_argument("dataset: feature name count mismatch");
  for (double v : x.v)
    if (!std::isfinite(v))
      throw std::invalid_argument("dataset: non-finite feature value");
}

void Scaler::apply(Mat& x) const {
  for (std::size_t r = 0; r < x.rows; ++r) {
    double* row = x.row_ptr(r);
    for (std::size_t c = 0; c < x.cols; ++c)
      row[c] = sd[c] > 0.0 ? (row[c] - mean[c]) / sd[c] : 0.0;
  }
}

std::vector<double> Scaler::apply(std::span<const double> row) const {
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c)
    out[c] = sd[c] > 0.0 ? (row[c] - mean[c]) / sd[c] : 0.0;
  return out;
}

Scaler fit_scaler(const Mat& x) {
  if (x.rows == 0) throw std::invalid_argument("fit_scaler: empty matrix");
  Scaler s;
  s.mean.assign(x.cols, 0.0);
  s.sd.assign(x.cols, 0.0);
  const double n = static_cast<double>(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) s.mean[c] += x.at(r, c);
  for (auto& m : s.mean) m /= n;
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < x.cols; ++c) {
      const double d = x.at(r, c) - s.mean[c];
      s.sd[c] += d * d;
    }
  for (auto& v : s.sd) v = std::sqrt(v / n);
  return s;
}

Standardized standardize(const Mat& train_x, const Mat& apply_x) {
  Standardized out;
  out.scaler = fit_scaler(train_x);
  out.train = train_x;
  out.apply = apply_x;
  out.scaler.apply(out.train);
  if (!out.apply.empty()) out.scaler.apply(out.apply);
  return out;
}

}  // namespace musepref::learn
