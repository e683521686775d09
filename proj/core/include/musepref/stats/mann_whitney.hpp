#pragma once

#include <cstddef>
#include <span>

namespace musepref::stats {

enum class PMethod { Exact, NormalApprox };

struct TestResult {
  double u_statistic = 0.0;  // U of the first sample
  double p_value = 1.0;
  PMethod method = PMethod::NormalApprox;
  double median_a = 0.0;
  double median_b = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  double alpha = 0.05;
  bool significant = false;
};

double median(std::span<const double> values);

// Two-sided Mann-Whitney U. Ranks use midranks for ties. The p-value comes
// from exhaustive enumeration when n_a + n_b <= 12 and the pooled sample is
// tie-free, otherwise from the normal approximation with tie-corrected
// variance and continuity correction.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          double alpha = 0.05);

// Route-forcing entry points so each side of the exact/approximate pair can
// be checked against the other.
double exact_two_sided_p(std::span<const double> a, std::span<const double> b);
double normal_approx_two_sided_p(std::span<const double> a,
                                 std::span<const double> b);

// Rank-sum U statistics (U_a, U_b); U_a + U_b == n_a * n_b.
struct UPair {
  double u_a = 0.0;
  double u_b = 0.0;
  bool has_ties = false;
};
UPair u_statistics(std::span<const double> a, std::span<const double> b);

}  // namespace musepref::stats
