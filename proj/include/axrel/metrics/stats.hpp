#pragma once

#include <span>

namespace axrel::metrics {

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  std::size_t count = 0;
};

Summary summarize(std::span<const double> xs);

// One-sided z statistic for mean(b) - mean(a) > 0 using a Welch standard error.
// Sample sizes in the campaigns are >= 200, where the normal approximation holds.
double welch_z(std::span<const double> a, std::span<const double> b);

// One-sided z statistic for mean(d) > 0 over paired differences.
double paired_z(std::span<const double> diffs);

// Upper 95% one-sided normal quantile.
inline constexpr double kZ95 = 1.6448536269514722;

}  // namespace axrel::metrics
