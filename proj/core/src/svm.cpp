#include "musepref/learn/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "musepref/common/error.hpp"

namespace musepref::learn {

namespace {

constexpr double kTau = 1e-12;

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace

std::string to_string(Kernel kernel) {
  switch (kernel) {
    case Kernel::Linear: return "linear";
    case Kernel::Rbf: return "rbf";
    case Kernel::Poly: return "poly";
  }
  return "?";
}

Kernel kernel_from_string(const std::string& s) {
  if (s == "linear") return Kernel::Linear;
  if (s == "rbf") return Kernel::Rbf;
  if (s == "poly") return Kernel::Poly;
  throw std::invalid_argument("unknown kernel: " + s);
}

double kernel_eval(const SvmParams& params, std::span<const double> a,
                   std::span<const double> b) {
  switch (params.kernel) {
    case Kernel::Linear:
      return dot(a, b);
    case Kernel::Rbf:
      return std::exp(-params.gamma * sq_dist(a, b));
    case Kernel::Poly:
      return std::pow(params.gamma * dot(a, b) + params.coef0, params.degree);
  }
  return 0.0;
}

SvmModel svm_train(const Dataset& data, const SvmParams& params) {
  data.validate();
  if (!data.has_both_classes())
    throw DegenerateData("svm_train needs both classes present");
  if (!(params.c > 0.0)) throw std::invalid_argument("svm: C must be > 0");

  const std::size_t n = data.n();
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = data.y[i] == 1 ? 1 : -1;

  // full kernel matrix; training sets here are small enough to cache
  std::vector<double> kmat(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = std::span<const double>(data.x.row_ptr(i), data.dim());
    for (std::size_t j = i; j < n; ++j) {
      auto xj = std::span<const double>(data.x.row_ptr(j), data.dim());
      const double k = kernel_eval(params, xi, xj);
      kmat[i * n + j] = k;
      kmat[j * n + i] = k;
    }
  }
  auto q = [&](std::size_t i, std::size_t j) {
    return y[i] * y[j] * kmat[i * n + j];
  };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  const double c = params.c;

  double violation = std::numeric_limits<double>::infinity();
  int updates = 0;
  for (; updates < params.max_pair_updates; ++updates) {
    // maximal violating pair
    double m_up = -std::numeric_limits<double>::infinity();
    double m_low = std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1, j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      const double v = -y[t] * grad[t];
      const bool in_up = (y[t] == 1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0);
      const bool in_low = (y[t] == 1 && alpha[t] > 0) || (y[t] == -1 && alpha[t] < c);
      if (in_up && v > m_up) {
        m_up = v;
        i = static_cast<std::ptrdiff_t>(t);
      }
      if (in_low && v < m_low) {
        m_low = v;
        j = static_cast<std::ptrdiff_t>(t);
      }
    }
    violation = m_up - m_low;
    if (i < 0 || j < 0 || violation < params.kkt_eps) break;

    const auto ii = static_cast<std::size_t>(i);
    const auto jj = static_cast<std::size_t>(j);
    const double old_ai = alpha[ii];
    const double old_aj = alpha[jj];

    if (y[ii] != y[jj]) {
      double quad = kmat[ii * n + ii] + kmat[jj * n + jj] - 2.0 * kmat[ii * n + jj];
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[ii] - grad[jj]) / quad;
      const double diff = alpha[ii] - alpha[jj];
      alpha[ii] += delta;
      alpha[jj] += delta;
      if (diff > 0.0) {
        if (alpha[jj] < 0.0) {
          alpha[jj] = 0.0;
          alpha[ii] = diff;
        }
      } else {
        if (alpha[ii] < 0.0) {
          alpha[ii] = 0.0;
          alpha[jj] = -diff;
        }
      }
      if (diff > 0.0) {
        if (alpha[ii] > c) {
          alpha[ii] = c;
          alpha[jj] = c - diff;
        }
      } else {
        if (alpha[jj] > c) {
          alpha[jj] = c;
          alpha[ii] = c + diff;
        }
      }
    } else {
      double quad = kmat[ii * n + ii] + kmat[jj * n + jj] - 2.0 * kmat[ii * n + jj];
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[ii] - grad[jj]) / quad;
      const double sum = alpha[ii] + alpha[jj];
      alpha[ii] -= delta;
      alpha[jj] += delta;
      if (sum > c) {
        if (alpha[ii] > c) {
          alpha[ii] = c;
          alpha[jj] = sum - c;
        }
      } else {
        if (alpha[jj] < 0.0) {
          alpha[jj] = 0.0;
          alpha[ii] = sum;
        }
      }
      if (sum > c) {
        if (alpha[jj] > c) {
          alpha[jj] = c;
          alpha[ii] = sum - c;
        }
      } else {
        if (alpha[ii] < 0.0) {
          alpha[ii] = 0.0;
          alpha[jj] = sum;
        }
      }
    }

    const double dai = alpha[ii] - old_ai;
    const double daj = alpha[jj] - old_aj;
    for (std::size_t t = 0; t < n; ++t)
      grad[t] += q(t, ii) * dai + q(t, jj) * daj;
  }

  // bias from free support vectors, midpoint fallback
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * grad[t];
    if (alpha[t] >= c) {
      if (y[t] == -1)
        upper = std::min(upper, yg);
      else
        lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] == 1)
        upper = std::min(upper, yg);
      else
        lower = std::max(lower, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free)
                                : (upper + lower) / 2.0;

  SvmModel model;
  model.params = params;
  model.bias = -rho;
  model.kkt_residual = violation;
  model.pair_updates = updates;
  model.converged = violation < params.kkt_eps;
  model.alpha = alpha;
  model.train_y = y;

  std::vector<std::size_t> sv;
  for (std::size_t t = 0; t < n; ++t)
    if (alpha[t] > 0.0) sv.push_back(t);
  model.support_vectors = Mat(sv.size(), data.dim());
  model.dual_coef.reserve(sv.size());
  for (std::size_t r = 0; r < sv.size(); ++r) {
    for (std::size_t cidx = 0; cidx < data.dim(); ++cidx)
      model.support_vectors.at(r, cidx) = data.x.at(sv[r], cidx);
    model.dual_coef.push_back(alpha[sv[r]] * y[sv[r]]);
  }
  return model;
}

double SvmModel::decision(std::span<const double> x) const {
  double f = bias;
  for (std::size_t r = 0; r < support_vectors.rows; ++r) {
    auto sv = std::span<const double>(support_vectors.row_ptr(r),
                                      support_vectors.cols);
    f += dual_coef[r] * kernel_eval(params, sv, x);
  }
  return f;
}

int SvmModel::predict(std::span<const double> x) const {
  return decision(x) > 0.0 ? 1 : 0;
}

std::vector<double> SvmModel::primal_weights() const {
  if (params.kernel != Kernel::Linear)
    throw std::invalid_argument("primal weights only exist for linear kernels");
  std::vector<double> w(support_vectors.cols, 0.0);
  for (std::size_t r = 0; r < support_vectors.rows; ++r)
    for (std::size_t c = 0; c < support_vectors.cols; ++c)
      w[c] += dual_coef[r] * support_vectors.at(r, c);
  return w;
}

nlohmann::json SvmModel::to_json() const {
  nlohmann::json j;
  j["format"] = "musepref-svm";
  j["version"] = 1;
  j["kernel"] = to_string(params.kernel);
  j["c"] = params.c;
  j["gamma"] = params.gamma;
  j["degree"] = params.degree;
  j["coef0"] = params.coef0;
  j["bias"] = bias;
  j["dim"] = support_vectors.cols;
  j["dual_coef"] = dual_coef;
  j["support_vectors"] = support_vectors.v;
  return j;
}

SvmModel SvmModel::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "musepref-svm" || j.value("version", 0) != 1)
    throw std::invalid_argument("not a musepref-svm v1 document");
  SvmModel m;
  m.params.kernel = kernel_from_string(j["kernel"].get<std::string>());
  m.params.c = j["c"].get<double>();
  m.params.gamma = j["gamma"].get<double>();
  m.params.degree = j["degree"].get<int>();
  m.params.coef0 = j["coef0"].get<double>();
  m.bias = j["bias"].get<double>();
  m.dual_coef = j["dual_coef"].get<std::vector<double>>();
  const auto dim = j["dim"].get<std::size_t>();
  m.support_vectors = Mat(m.dual_coef.size(), dim);
  m.support_vectors.v = j["support_vectors"].get<std::vector<double>>();
  return m;
}

}  // namespace musepref::learn
