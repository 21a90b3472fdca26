#include "axrel/metrics/stats.hpp"

#include <cmath>
#include <limits>

namespace axrel::metrics {

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double total = 0.0;
  for (double x : xs) total += x;
  s.mean = total / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return s;
}

double welch_z(std::span<const double> a, std::span<const double> b) {
  const Summary sa = summarize(a);
  const Summary sb = summarize(b);
  const double diff = sb.mean - sa.mean;
  const double se = std::sqrt(sa.stddev * sa.stddev / static_cast<double>(sa.count) +
                              sb.stddev * sb.stddev / static_cast<double>(sb.count));
  if (se == 0.0) {
    if (diff == 0.0) return 0.0;
    return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return diff / se;
}

double paired_z(std::span<const double> diffs) {
  const Summary s = summarize(diffs);
  const double se = s.stddev / std::sqrt(static_cast<double>(s.count));
  if (se == 0.0) {
    if (s.mean == 0.0) return 0.0;
    return s.mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return s.mean / se;
}

}  // namespace axrel::metrics
