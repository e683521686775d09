#include "musepref/learn/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "musepref/common/error.hpp"
#include "musepref/common/parallel.hpp"
#include "musepref/common/rng.hpp"

namespace musepref::learn {

namespace {

struct Builder {
  const Dataset& data;
  const ForestParams& params;
  const std::vector<std::size_t>& col_of_slot;
  Rng& rng;
  std::vector<TreeNode> nodes;
  std::size_t mtry;

  int majority(std::span<const std::size_t> rows) const {
    std::size_t pos = 0;
    for (auto r : rows) pos += data.y[r] == 1 ? 1u : 0u;
    const std::size_t neg = rows.size() - pos;
    if (pos == neg) return 0;  // deterministic tie toward the lower label
    return pos > neg ? 1 : 0;
  }

  static double gini(std::size_t pos, std::size_t total) {
    if (total == 0) return 0.0;
    const double p = static_cast<double>(pos) / static_cast<double>(total);
    return 2.0 * p * (1.0 - p);
  }

  int make_leaf(std::span<const std::size_t> rows) {
    nodes.push_back(TreeNode{-1, 0.0, -1, -1, majority(rows)});
    return static_cast<int>(nodes.size() - 1);
  }

  // distinct slots, emitted in increasing order for deterministic tie-breaks
  std::vector<std::size_t> sample_slots() {
    const std::size_t d = col_of_slot.size();
    std::vector<std::size_t> all(d);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < mtry; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.bounded(d - i));
      std::swap(all[i], all[j]);
    }
    all.resize(mtry);
    std::sort(all.begin(), all.end());
    return all;
  }

  int build(std::vector<std::size_t>& rows, int depth) {
    std::size_t pos = 0;
    for (auto r : rows) pos += data.y[r] == 1 ? 1u : 0u;
    const bool pure = pos == 0 || pos == rows.size();
    if (pure || depth >= params.max_depth ||
        rows.size() < static_cast<std::size_t>(params.min_samples_split))
      return make_leaf(rows);

    const double parent_impurity = gini(pos, rows.size());
    double best_gain = 0.0;
    std::size_t best_slot = 0;
    double best_threshold = 0.0;

    std::vector<std::pair<double, int>> vals(rows.size());
    for (std::size_t slot : sample_slots()) {
      const std::size_t col = col_of_slot[slot];
      for (std::size_t i = 0; i < rows.size(); ++i)
        vals[i] = {data.x.at(rows[i], col), data.y[rows[i]]};
      std::sort(vals.begin(), vals.end());

      std::size_t left_pos = 0;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
        left_pos += vals[i].second == 1 ? 1u : 0u;
        if (vals[i].first == vals[i + 1].first) continue;
        const std::size_t nl = i + 1;
        const std::size_t nr = vals.size() - nl;
        if (nl < static_cast<std::size_t>(params.min_samples_leaf) ||
            nr < static_cast<std::size_t>(params.min_samples_leaf))
          continue;
        const double wl = static_cast<double>(nl) / static_cast<double>(vals.size());
        const double child =
            wl * gini(left_pos, nl) + (1.0 - wl) * gini(pos - left_pos, nr);
        const double gain = parent_impurity - child;
        if (gain > best_gain + 1e-15) {
          best_gain = gain;
          best_slot = slot;
          best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
        }
      }
    }

    if (best_gain <= 0.0) return make_leaf(rows);

    const std::size_t col = col_of_slot[best_slot];
    std::vector<std::size_t> left_rows, right_rows;
    for (auto r : rows)
      (data.x.at(r, col) <= best_threshold ? left_rows : right_rows).push_back(r);
    if (left_rows.empty() || right_rows.empty()) return make_leaf(rows);

    const int self = static_cast<int>(nodes.size());
    nodes.push_back(TreeNode{static_cast<int>(best_slot), best_threshold, -1, -1, 0});
    const int left = build(left_rows, depth + 1);
    const int right = build(right_rows, depth + 1);
    nodes[static_cast<std::size_t>(self)].left = left;
    nodes[static_cast<std::size_t>(self)].right = right;
    return self;
  }
};

}  // namespace

int Tree::predict(std::span<const double> x,
                  std::span<const std::size_t> col_of_slot) const {
  int idx = 0;
  while (nodes[static_cast<std::size_t>(idx)].slot >= 0) {
    const auto& node = nodes[static_cast<std::size_t>(idx)];
    const double v = x[col_of_slot[static_cast<std::size_t>(node.slot)]];
    idx = v <= node.threshold ? node.left : node.right;
  }
  return nodes[static_cast<std::size_t>(idx)].label;
}

ForestModel forest_train(const Dataset& data, const ForestParams& params) {
  data.validate();
  if (!data.has_both_classes())
    throw DegenerateData("forest_train needs both classes present");
  if (params.max_depth < 1 || params.min_samples_split < 2 ||
      params.n_estimators < 1)
    throw std::invalid_argument("forest: bad hyperparameters");

  ForestModel model;
  model.params = params;
  model.feature_names = data.feature_names;

  // canonical (name-sorted) slot order; falls back to column order when
  // names are absent
  std::vector<std::size_t> slots(data.dim());
  std::iota(slots.begin(), slots.end(), 0);
  if (!data.feature_names.empty()) {
    std::stable_sort(slots.begin(), slots.end(),
                     [&](std::size_t a, std::size_t b) {
                       return data.feature_names[a] < data.feature_names[b];
                     });
  }
  model.col_of_slot = slots;

  const std::size_t n = data.n();
  const auto mtry = static_cast<std::size_t>(
      std::max(1.0, std::floor(std::sqrt(static_cast<double>(data.dim())))));

  // trees train in parallel; each draws from its own seed-derived stream,
  // so scheduling cannot change the model
  const auto n_trees = static_cast<std::size_t>(params.n_estimators);
  model.trees.resize(n_trees);
  std::vector<std::vector<std::pair<std::size_t, int>>> oob_preds(n_trees);

  parallel_for(n_trees, [&](std::size_t t) {
    Rng rng(derive_seed(params.seed, t, 0x7265ULL));
    std::vector<std::size_t> sample(n);
    std::vector<bool> in_bag(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      sample[i] = static_cast<std::size_t>(rng.bounded(n));
      in_bag[sample[i]] = true;
    }

    Builder builder{data, params, model.col_of_slot, rng, {}, mtry};
    builder.build(sample, 0);
    Tree tree{std::move(builder.nodes)};

    for (std::size_t i = 0; i < n; ++i) {
      if (in_bag[i]) continue;
      auto row = std::span<const double>(data.x.row_ptr(i), data.dim());
      oob_preds[t].push_back({i, tree.predict(row, model.col_of_slot)});
    }
    model.trees[t] = std::move(tree);
  });

  std::vector<std::pair<std::size_t, std::size_t>> votes(n, {0, 0});  // pos, total
  for (const auto& per_tree : oob_preds) {
    for (const auto& [row, pred] : per_tree) {
      votes[row].first += pred == 1 ? 1u : 0u;
      ++votes[row].second;
    }
  }
  std::size_t correct = 0, counted = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [pos, total] = votes[i];
    if (total == 0) continue;
    const int pred = 2 * pos > total ? 1 : 0;  // ties go to the lower label
    ++counted;
    if (pred == data.y[i]) ++correct;
  }
  if (counted > 0)
    model.oob_accuracy = static_cast<double>(correct) / static_cast<double>(counted);
  return model;
}

double ForestModel::positive_vote_fraction(std::span<const double> x) const {
  std::size_t pos = 0;
  for (const auto& tree : trees) pos += tree.predict(x, col_of_slot) == 1 ? 1u : 0u;
  return static_cast<double>(pos) / static_cast<double>(trees.size());
}

int ForestModel::predict(std::span<const double> x) const {
  return positive_vote_fraction(x) > 0.5 ? 1 : 0;
}

nlohmann::json ForestModel::to_json() const {
  nlohmann::json j;
  j["format"] = "musepref-forest";
  j["version"] = 1;
  j["n_estimators"] = params.n_estimators;
  j["max_depth"] = params.max_depth;
  j["min_samples_leaf"] = params.min_samples_leaf;
  j["min_samples_split"] = params.min_samples_split;
  j["seed"] = params.seed;
  j["col_of_slot"] = col_of_slot;
  j["feature_names"] = feature_names;
  nlohmann::json jt = nlohmann::json::array();
  for (const auto& tree : trees) {
    nlohmann::json jn = nlohmann::json::array();
    for (const auto& n : tree.nodes)
      jn.push_back({n.slot, n.threshold, n.left, n.right, n.label});
    jt.push_back(std::move(jn));
  }
  j["trees"] = std::move(jt);
  return j;
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "musepref-forest" || j.value("version", 0) != 1)
    throw std::invalid_argument("not a musepref-forest v1 document");
  ForestModel m;
  m.params.n_estimators = j["n_estimators"].get<int>();
  m.params.max_depth = j["max_depth"].get<int>();
  m.params.min_samples_leaf = j["min_samples_leaf"].get<int>();
  m.params.min_samples_split = j["min_samples_split"].get<int>();
  m.params.seed = j["seed"].get<std::uint64_t>();
  m.col_of_slot = j["col_of_slot"].get<std::vector<std::size_t>>();
  m.feature_names = j["feature_names"].get<std::vector<std::string>>();
  for (const auto& jn : j["trees"]) {
    Tree tree;
    for (const auto& n : jn)
      tree.nodes.push_back(TreeNode{n[0].get<int>(), n[1].get<double>(),
                                    n[2].get<int>(), n[3].get<int>(),
                                    n[4].get<int>()});
    m.trees.push_back(std::move(tree));
  }
  return m;
}

}  // namespace musepref::learn
