#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace axrel::dse {

struct SearchConfig {
  double accuracy_threshold = 0.0;     // a: minimum golden accuracy, in [0, 1]
  double reliability_threshold = 0.0;  // b: maximum accuracy drop, percentage points
  unsigned min_bits = 2;               // m
  unsigned max_bits = 8;               // n
  std::vector<double> ber_grid;
  std::vector<std::uint64_t> seeds;

  void validate() const;  // throws InvalidConfig
};

// Measurement side of the search. The search itself never touches a model.
class WidthEvaluator {
 public:
  virtual ~WidthEvaluator() = default;
  virtual double golden_accuracy(unsigned bits) = 0;
  // Mean vulnerability (percentage points) per BER, protected weights.
  virtual std::vector<double> vulnerabilities(unsigned bits, const SearchConfig& cfg) = 0;
  virtual std::uint64_t memory_bits(unsigned bits) = 0;
  virtual double execution_cost(unsigned bits) = 0;
};

struct SearchStep {
  unsigned bit_width = 0;
  double golden_accuracy = 0.0;
  std::vector<double> vulnerability;  // empty when the accuracy check failed
  double accuracy_drop = 0.0;         // max over the BER grid
  std::uint64_t memory_bits = 0;
  double execution_cost = 0.0;
  bool passed = false;
  int next_bit_width = 0;
};

enum class Termination : std::uint8_t { AboveRange, BelowRange, Revisit };

struct SearchTrace {
  std::vector<SearchStep> steps;
  Termination termination = Termination::Revisit;
  std::optional<unsigned> selected_bits;  // lowest passing width

  bool found() const noexcept { return selected_bits.has_value(); }
  const SearchStep* selected_step() const;
};

// Starts at floor((m + n) / 2); on pass moves to w - floor((n - w) / 2), on
// fail to w + floor((n - w) / 2). Stops when the next width leaves [m, n] or
// repeats an earlier probe.
SearchTrace fortune_search(WidthEvaluator& evaluator, const SearchConfig& cfg);

std::string_view to_string(Termination t) noexcept;
std::string trace_csv(const SearchTrace& trace, const SearchConfig& cfg);

}  // namespace axrel::dse
