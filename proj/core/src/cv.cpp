#include "musepref/modelsel/cv.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "musepref/common/error.hpp"
#include "musepref/common/parallel.hpp"
#include "musepref/common/rng.hpp"

namespace musepref::modelsel {

FoldAssignment stratified_folds(std::span<const int> labels, int k,
                                std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_folds: k must be >= 2");

  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < labels.size(); ++i)
    (labels[i] == 1 ? positives : negatives).push_back(i);
  for (const auto* cls : {&positives, &negatives}) {
    if (cls->size() < static_cast<std::size_t>(k))
      throw ClassTooSmall("a class has " + std::to_string(cls->size()) +
                          " members; need at least k=" + std::to_string(k));
  }

  FoldAssignment out;
  out.folds.resize(static_cast<std::size_t>(k));
  int cls_tag = 0;
  for (auto* cls : {&positives, &negatives}) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls_tag++), 0x666f6cULL));
    rng.shuffle(*cls);
    for (std::size_t j = 0; j < cls->size(); ++j)
      out.folds[j % static_cast<std::size_t>(k)].push_back((*cls)[j]);
  }
  for (auto& fold : out.folds) std::sort(fold.begin(), fold.end());
  return out;
}

FoldAssignment grouped_folds(std::span<const int> labels,
                             std::span<const std::string> groups, int k,
                             std::uint64_t seed) {
  if (labels.size() != groups.size())
    throw std::invalid_argument("grouped_folds: label/group size mismatch");
  if (k < 2) throw std::invalid_argument("grouped_folds: k must be >= 2");

  struct GroupInfo {
    std::string name;
    std::vector<std::size_t> indices;
    std::size_t positives = 0;
  };
  std::map<std::string, GroupInfo> by_name;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto& g = by_name[groups[i]];
    g.name = groups[i];
    g.indices.push_back(i);
    if (labels[i] == 1) ++g.positives;
  }
  if (by_name.size() < static_cast<std::size_t>(k))
    throw ClassTooSmall("fewer groups than folds");

  std::vector<GroupInfo> order;
  order.reserve(by_name.size());
  for (auto& [_, g] : by_name) order.push_back(std::move(g));
  std::sort(order.begin(), order.end(), [](const GroupInfo& a, const GroupInfo& b) {
    return a.indices.size() != b.indices.size()
               ? a.indices.size() > b.indices.size()
               : a.name < b.name;
  });
  Rng rng(derive_seed(seed, 0x67727075ULL));
  // jitter equal-size runs deterministically
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    if (order[i].indices.size() == order[i + 1].indices.size() &&
        rng.bounded(2) == 1)
      std::swap(order[i], order[i + 1]);
  }

  FoldAssignment out;
  out.folds.resize(static_cast<std::size_t>(k));
  std::vector<std::size_t> fold_pos(static_cast<std::size_t>(k), 0);
  std::vector<std::size_t> fold_n(static_cast<std::size_t>(k), 0);
  for (const auto& g : order) {
    // smallest fold first, positives as tie-break
    std::size_t best = 0;
    for (std::size_t f = 1; f < out.folds.size(); ++f) {
      if (fold_n[f] < fold_n[best] ||
          (fold_n[f] == fold_n[best] && fold_pos[f] < fold_pos[best]))
        best = f;
    }
    for (auto idx : g.indices) out.folds[best].push_back(idx);
    fold_n[best] += g.indices.size();
    fold_pos[best] += g.positives;
  }
  for (auto& fold : out.folds) std::sort(fold.begin(), fold.end());
  return out;
}

std::vector<int> fit_predict(const learn::Dataset& train, const Mat& eval_x,
                             const GridPoint& point, std::uint64_t model_seed) {
  std::vector<int> preds;
  preds.reserve(eval_x.rows);
  switch (point.family) {
    case ModelFamily::Svm: {
      learn::SvmModel model = learn::svm_train(train, point.svm);
      for (std::size_t r = 0; r < eval_x.rows; ++r)
        preds.push_back(model.predict({eval_x.row_ptr(r), eval_x.cols}));
      break;
    }
    case ModelFamily::Rf: {
      learn::ForestParams params = point.forest;
      params.seed = model_seed;
      learn::ForestModel model = learn::forest_train(train, params);
      for (std::size_t r = 0; r < eval_x.rows; ++r)
        preds.push_back(model.predict({eval_x.row_ptr(r), eval_x.cols}));
      break;
    }
    case ModelFamily::Knn: {
      for (std::size_t r = 0; r < eval_x.rows; ++r)
        preds.push_back(
            learn::knn_predict(train, point.knn, {eval_x.row_ptr(r), eval_x.cols})
                .label);
      break;
    }
  }
  return preds;
}

namespace {

struct FoldSplit {
  learn::Dataset train_scaled;
  Mat val_x_scaled;
  std::vector<int> val_y;
  std::vector<std::size_t> train_indices;
};

FoldSplit make_split(const learn::Dataset& data,
                     const std::vector<std::size_t>& eval_fold,
                     const std::vector<std::vector<std::size_t>>& folds,
                     std::size_t skip_a, std::size_t skip_b) {
  FoldSplit split;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    if (f == skip_a || f == skip_b) continue;
    split.train_indices.insert(split.train_indices.end(), folds[f].begin(),
                               folds[f].end());
  }
  std::sort(split.train_indices.begin(), split.train_indices.end());

  learn::Dataset train = data.subset(split.train_indices);
  Mat eval_x(eval_fold.size(), data.dim());
  split.val_y.reserve(eval_fold.size());
  for (std::size_t r = 0; r < eval_fold.size(); ++r) {
    for (std::size_t c = 0; c < data.dim(); ++c)
      eval_x.at(r, c) = data.x.at(eval_fold[r], c);
    split.val_y.push_back(data.y[eval_fold[r]]);
  }

  auto scaled = learn::standardize(train.x, eval_x);
  split.train_scaled = std::move(train);
  split.train_scaled.x = std::move(scaled.train);
  split.val_x_scaled = std::move(scaled.apply);
  return split;
}

double sample_se(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  if (xs.size() < 2) return 0.0;
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

struct PointOutcome {
  bool ok = false;
  double f1 = -1.0;
  std::string error;
};

// Evaluates every grid point on the validation split. Parallel across
// points; outputs are slot-addressed so the later reduction (and therefore
// tie-breaking) is order-independent.
std::vector<PointOutcome> evaluate_grid(const FoldSplit& split, const Grid& grid,
                                        std::size_t fold, const CvOptions& options) {
  std::vector<PointOutcome> outcomes(grid.size());
  parallel_for(grid.size(), [&](std::size_t g) {
    try {
      auto preds = fit_predict(split.train_scaled, split.val_x_scaled, grid[g],
                               derive_seed(options.seed, fold, g));
      outcomes[g] = {true, f1_score(preds, split.val_y, options.f1_average), ""};
    } catch (const DomainError& e) {
      outcomes[g] = {false, -1.0, grid[g].describe() + " -> " + e.code()};
    }
  });
  return outcomes;
}

}  // namespace

std::vector<int> select_hyperparams(const learn::Dataset& data, const Grid& grid,
                                    const FoldAssignment& folds,
                                    const CvOptions& options) {
  if (grid.empty()) throw std::invalid_argument("empty hyperparameter grid");
  const std::size_t k = folds.k();
  std::vector<int> chosen(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t val = (i + 1) % k;
    FoldSplit split = make_split(data, folds.folds[val], folds.folds, i, val);
    auto outcomes = evaluate_grid(split, grid, i, options);
    double best_f1 = -1.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (outcomes[g].ok && outcomes[g].f1 > best_f1) {
        best_f1 = outcomes[g].f1;
        chosen[i] = static_cast<int>(g);
      }
    }
    if (chosen[i] < 0)
      throw DegenerateData("every grid point failed on fold " + std::to_string(i));
  }
  return chosen;
}

CvReport nested_cv(const learn::Dataset& data, const Grid& grid,
                   const FoldAssignment& folds, const CvOptions& options) {
  data.validate();
  if (grid.empty()) throw std::invalid_argument("empty hyperparameter grid");
  const std::size_t k = folds.k();
  if (k < 3)
    throw std::invalid_argument("nested_cv needs k >= 3 (test/val/train roles)");

  CvReport report;
  report.family = grid.front().family;

  std::vector<double> f1s, accs;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t val = (i + 1) % k;

    FoldOutcome outcome;
    outcome.fold = static_cast<int>(i);

    // inner search on the validation fold
    FoldSplit inner = make_split(data, folds.folds[val], folds.folds, i, val);
    auto outcomes = evaluate_grid(inner, grid, i, options);
    double best_f1 = -1.0;
    int best_g = -1;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      if (!outcomes[g].ok) {
        outcome.failed_points.push_back(outcomes[g].error);
        continue;
      }
      if (outcomes[g].f1 > best_f1) {
        best_f1 = outcomes[g].f1;
        best_g = static_cast<int>(g);
      }
    }
    if (best_g < 0)
      throw DegenerateData("every grid point failed on fold " + std::to_string(i));
    outcome.chosen_grid_index = best_g;
    outcome.chosen_params = grid[static_cast<std::size_t>(best_g)].describe();

    // refit with the winner and score the test fold
    const std::size_t skip_val = options.retrain_with_validation ? i : val;
    FoldSplit outer = make_split(data, folds.folds[i], folds.folds, i, skip_val);
    std::vector<int> preds = fit_predict(
        outer.train_scaled, outer.val_x_scaled,
        grid[static_cast<std::size_t>(best_g)],
        derive_seed(options.seed, i, static_cast<std::size_t>(best_g)));
    outcome.f1 = f1_score(preds, outer.val_y, options.f1_average);
    outcome.accuracy = accuracy(preds, outer.val_y);

    f1s.push_back(outcome.f1);
    accs.push_back(outcome.accuracy);
    report.per_fold.push_back(std::move(outcome));
  }

  report.mean_f1 =
      std::accumulate(f1s.begin(), f1s.end(), 0.0) / static_cast<double>(k);
  report.mean_accuracy =
      std::accumulate(accs.begin(), accs.end(), 0.0) / static_cast<double>(k);
  report.se_f1 = sample_se(f1s);
  report.se_accuracy = sample_se(accs);
  return report;
}

CvReport nested_cv(const learn::Dataset& data, const Grid& grid,
                   const CvOptions& options) {
  FoldAssignment folds;
  if (options.group_by_participant) {
    if (data.row_groups.empty())
      throw std::invalid_argument("grouped folds need Dataset::row_groups");
    folds = grouped_folds(data.y, data.row_groups, options.k, options.seed);
  } else {
    folds = stratified_folds(data.y, options.k, options.seed);
  }
  return nested_cv(data, grid, folds, options);
}

}  // namespace musepref::modelsel
