#include "musepref/stats/mann_whitney.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "musepref/common/error.hpp"

namespace musepref::stats {

double median(std::span<const double> values) {
  if (values.empty()) throw EmptySample("median of empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

UPair u_statistics(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw EmptySample("mann-whitney needs non-empty samples");

  struct Tagged {
    double value;
    bool from_a;
  };
  std::vector<Tagged> pooled;
  pooled.reserve(a.size() + b.size());
  for (double v : a) pooled.push_back({v, true});
  for (double v : b) pooled.push_back({v, false});
  std::sort(pooled.begin(), pooled.end(),
            [](const Tagged& x, const Tagged& y) { return x.value < y.value; });

  UPair out;
  double rank_sum_a = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    const std::size_t tie = j - i;
    if (tie > 1) out.has_ties = true;
    // midrank for positions i..j-1 (1-based ranks)
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k)
      if (pooled[k].from_a) rank_sum_a += rank;
    i = j;
  }

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  out.u_a = rank_sum_a - na * (na + 1.0) / 2.0;
  out.u_b = na * nb - out.u_a;
  return out;
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

// Counts rank subsets of size n_a (out of ranks 1..n) whose U is <= u_max.
// Exhaustive enumeration; intended for n <= 12.
void count_subsets(std::size_t next_rank, std::size_t remaining, std::size_t n,
                   double rank_sum, double u_max, double offset, double& count) {
  if (remaining == 0) {
    if (rank_sum - offset <= u_max) count += 1.0;
    return;
  }
  if (next_rank + remaining - 1 > n) return;
  // prune: even the smallest achievable completion overshoots
  double min_tail = 0.0;
  for (std::size_t r = 0; r < remaining; ++r)
    min_tail += static_cast<double>(next_rank + r);
  if (rank_sum + min_tail - offset > u_max) return;
  count_subsets(next_rank + 1, remaining - 1, n,
                rank_sum + static_cast<double>(next_rank), u_max, offset, count);
  count_subsets(next_rank + 1, remaining, n, rank_sum, u_max, offset, count);
}

double phi_upper(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

}  // namespace

double exact_two_sided_p(std::span<const double> a, std::span<const double> b) {
  UPair u = u_statistics(a, b);
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;
  const double u_min = std::min(u.u_a, u.u_b);
  const double offset = static_cast<double>(na) * (static_cast<double>(na) + 1.0) / 2.0;

  double count = 0.0;
  count_subsets(1, na, n, 0.0, u_min + 1e-9, offset, count);
  const double p = 2.0 * count / binomial(n, na);
  return std::min(1.0, p);
}

double normal_approx_two_sided_p(std::span<const double> a,
                                 std::span<const double> b) {
  UPair u = u_statistics(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;

  // tie correction: sum of t^3 - t over tie groups of the pooled sample
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  double tie_term = 0.0;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }

  const double mu = na * nb / 2.0;
  const double var =
      na * nb / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;  // all pooled values identical
  const double z = std::max(0.0, std::abs(u.u_a - mu) - 0.5) / std::sqrt(var);
  return std::min(1.0, 2.0 * phi_upper(z));
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          double alpha) {
  UPair u = u_statistics(a, b);

  TestResult r;
  r.u_statistic = u.u_a;
  r.n_a = a.size();
  r.n_b = b.size();
  r.median_a = median(a);
  r.median_b = median(b);
  r.alpha = alpha;
  if (a.size() + b.size() <= 12 && !u.has_ties) {
    r.method = PMethod::Exact;
    r.p_value = exact_two_sided_p(a, b);
  } else {
    r.method = PMethod::NormalApprox;
    r.p_value = normal_approx_two_sided_p(a, b);
  }
  r.significant = r.p_value < alpha;
  return r;
}

}  // namespace musepref::stats
