#include "musepref/modelsel/metrics.hpp"

#include <stdexcept>

namespace musepref::modelsel {

std::string to_string(F1Average avg) {
  switch (avg) {
    case F1Average::Binary: return "binary";
    case F1Average::Macro: return "macro";
    case F1Average::Weighted: return "weighted";
  }
  return "?";
}

F1Average f1_average_from_string(const std::string& s) {
  if (s == "binary") return F1Average::Binary;
  if (s == "macro") return F1Average::Macro;
  if (s == "weighted") return F1Average::Weighted;
  throw std::invalid_argument("unknown F1 averaging: " + s);
}

namespace {

double class_f1(std::span<const int> predictions, std::span<const int> truths,
                int positive) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    const bool pred_pos = predictions[i] == positive;
    const bool true_pos = truths[i] == positive;
    if (pred_pos && true_pos) ++tp;
    if (pred_pos && !true_pos) ++fp;
    if (!pred_pos && true_pos) ++fn;
  }
  const double denom = 2.0 * static_cast<double>(tp) + static_cast<double>(fp) +
                       static_cast<double>(fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(tp) / denom;
}

}  // namespace

double f1_score(std::span<const int> predictions, std::span<const int> truths,
                F1Average average, int positive) {
  if (predictions.size() != truths.size() || truths.empty())
    throw std::invalid_argument("f1_score: empty or mismatched inputs");
  switch (average) {
    case F1Average::Binary:
      return class_f1(predictions, truths, positive);
    case F1Average::Macro:
      return 0.5 * (class_f1(predictions, truths, 1) +
                    class_f1(predictions, truths, 0));
    case F1Average::Weighted: {
      std::size_t n_pos = 0;
      for (int t : truths) n_pos += t == 1 ? 1u : 0u;
      const double w_pos = static_cast<double>(n_pos) / static_cast<double>(truths.size());
      return w_pos * class_f1(predictions, truths, 1) +
             (1.0 - w_pos) * class_f1(predictions, truths, 0);
    }
  }
  return 0.0;
}

double accuracy(std::span<const int> predictions, std::span<const int> truths) {
  if (predictions.size() != truths.size() || truths.empty())
    throw std::invalid_argument("accuracy: empty or mismatched inputs");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < truths.size(); ++i)
    if (predictions[i] == truths[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(truths.size());
}

}  // namespace musepref::modelsel
