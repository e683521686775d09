#pragma once

#include <span>
#include <string>
#include <vector>

#include "musepref/common/mat.hpp"

namespace musepref::learn {

// Binary-labeled design matrix: y = 1 for Favored, 0 for NonFavored.
struct Dataset {
  Mat x;  // trials x features
  std::vector<int> y;
  std::vector<std::string> feature_names;
  // optional row grouping key (participant id) for grouped fold assignment
  std::vector<std::string> row_groups;

  std::size_t n() const { return x.rows; }
  std::size_t dim() const { return x.cols; }

  bool has_both_classes() const;
  Dataset subset(std::span<const std::size_t> indices) const;
  void validate() const;  // no NaN/Inf, aligned sizes
};

// Per-feature z-score fitted on training data only. Population standard
// deviation; zero-variance features map to 0.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> sd;

  void apply(Mat& x) const;
  std::vector<double> apply(std::span<const double> row) const;
};

Scaler fit_scaler(const Mat& x);

struct Standardized {
  Mat train;
  Mat apply;
  Scaler scaler;
};

Standardized standardize(const Mat& train_x, const Mat& apply_x);

}  // namespace musepref::learn
