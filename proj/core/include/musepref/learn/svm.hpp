#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "musepref/learn/dataset.hpp"

namespace musepref::learn {

enum class Kernel { Linear, Rbf, Poly };

std::string to_string(Kernel kernel);
Kernel kernel_from_string(const std::string& s);

struct SvmParams {
  double c = 1.0;
  double gamma = 0.1;  // Rbf/Poly only
  Kernel kernel = Kernel::Rbf;
  int degree = 3;      // Poly only
  double coef0 = 0.0;  // Poly only
  double kkt_eps = 1e-3;
  int max_pair_updates = 10000;
};

struct SvmModel {
  SvmParams params;
  Mat support_vectors;             // n_sv x dim
  std::vector<double> dual_coef;   // alpha_i * y_i per support vector
  double bias = 0.0;

  // training diagnostics
  double kkt_residual = 0.0;
  int pair_updates = 0;
  bool converged = false;
  std::vector<double> alpha;  // full dual solution, training order
  std::vector<int> train_y;   // +1 / -1 per training row

  double decision(std::span<const double> x) const;
  int predict(std::span<const double> x) const;

  // linear kernel only: primal weight vector
  std::vector<double> primal_weights() const;

  nlohmann::json to_json() const;
  static SvmModel from_json(const nlohmann::json& j);
};

double kernel_eval(const SvmParams& params, std::span<const double> a,
                   std::span<const double> b);

// Soft-margin dual via SMO with maximal-KKT-violating-pair selection.
// Stops when the violation drops below kkt_eps or after max_pair_updates.
// Features are expected standardized by the caller.
SvmModel svm_train(const Dataset& data, const SvmParams& params);

}  // namespace musepref::learn
