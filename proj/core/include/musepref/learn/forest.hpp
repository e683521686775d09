#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "musepref/learn/dataset.hpp"

namespace musepref::learn {

struct ForestParams {
  int n_estimators = 100;
  int max_depth = 8;
  int min_samples_leaf = 2;
  int min_samples_split = 2;
  std::uint64_t seed = 0;
};

// Split features are addressed by their rank in the name-sorted feature
// list, so models are invariant to consistent column/name permutations of
// the training data.
struct TreeNode {
  int slot = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;
  int predict(std::span<const double> x,
              std::span<const std::size_t> col_of_slot) const;
};

struct ForestModel {
  ForestParams params;
  std::vector<Tree> trees;
  std::vector<std::size_t> col_of_slot;  // slot -> training column
  std::vector<std::string> feature_names;
  std::optional<double> oob_accuracy;

  int predict(std::span<const double> x) const;
  double positive_vote_fraction(std::span<const double> x) const;

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);
};

// Bootstrap-aggregated Gini CART trees over sqrt(d) feature subsets per
// node; deterministic given the seed (per-tree streams derived from it).
ForestModel forest_train(const Dataset& data, const ForestParams& params);

}  // namespace musepref::learn
