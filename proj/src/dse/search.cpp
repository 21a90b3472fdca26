#include "axrel/dse/search.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "axrel/error.hpp"

namespace axrel::dse {

void SearchConfig::validate() const {
  if (!(accuracy_threshold >= 0.0) || reliability_threshold < 0.0) {
    throw Error(Errc::InvalidConfig, "thresholds must be nonnegative");
  }
  if (min_bits < 2 || min_bits > max_bits || max_bits > 8) {
    throw Error(Errc::InvalidConfig, "bit-width range must satisfy 2 <= m <= n <= 8");
  }
  if (ber_grid.empty()) throw Error(Errc::InvalidConfig, "ber_grid must not be empty");
  if (seeds.empty()) throw Error(Errc::InvalidConfig, "at least one seed is required");
}

const SearchStep* SearchTrace::selected_step() const {
  if (!selected_bits) return nullptr;
  for (const auto& s : steps) {
    if (s.passed && s.bit_width == *selected_bits) return &s;
  }
  return nullptr;
}

SearchTrace fortune_search(WidthEvaluator& evaluator, const SearchConfig& cfg) {
  cfg.validate();
  const int m = static_cast<int>(cfg.min_bits);
  const int n = static_cast<int>(cfg.max_bits);
  SearchTrace trace;
  std::set<int> visited;
  int width = (n + m) / 2;

  while (true) {
    visited.insert(width);
    SearchStep step;
    step.bit_width = static_cast<unsigned>(width);
    step.golden_accuracy = evaluator.golden_accuracy(step.bit_width);
    step.memory_bits = evaluator.memory_bits(step.bit_width);
    step.execution_cost = evaluator.execution_cost(step.bit_width);
    if (step.golden_accuracy > cfg.accuracy_threshold) {
      step.vulnerability = evaluator.vulnerabilities(step.bit_width, cfg);
      step.accuracy_drop = *std::max_element(step.vulnerability.begin(), step.vulnerability.end());
      step.passed = step.accuracy_drop < cfg.reliability_threshold;
    }
    // Integer division of a nonnegative step is the floor.
    const int delta = (n - width) / 2;
    step.next_bit_width = step.passed ? width - delta : width + delta;
    if (step.passed && (!trace.selected_bits || step.bit_width < *trace.selected_bits)) {
      trace.selected_bits = step.bit_width;
    }
    const int next = step.next_bit_width;
    trace.steps.push_back(std::move(step));

    if (next > n) {
      trace.termination = Termination::AboveRange;
      break;
    }
    if (next < m) {
      trace.termination = Termination::BelowRange;
      break;
    }
    if (visited.contains(next)) {
      trace.termination = Termination::Revisit;
      break;
    }
    width = next;
  }
  return trace;
}

std::string_view to_string(Termination t) noexcept {
  switch (t) {
    case Termination::AboveRange: return "above_range";
    case Termination::BelowRange: return "below_range";
    case Termination::Revisit: return "revisit";
  }
  return "?";
}

std::string trace_csv(const SearchTrace& trace, const SearchConfig& cfg) {
  std::ostringstream os;
  char buf[64];
  os << "step,bit_width,golden_acc";
  for (double ber : cfg.ber_grid) {
    std::snprintf(buf, sizeof buf, "%g", ber);
    os << ",vulnerability@" << buf;
  }
  os << ",accuracy_drop,memory_bits,execution_cost,passed,next_bit_width\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    os << i << ',' << s.bit_width << ',';
    std::snprintf(buf, sizeof buf, "%.6f", s.golden_accuracy);
    os << buf;
    for (std::size_t b = 0; b < cfg.ber_grid.size(); ++b) {
      if (b < s.vulnerability.size()) {
        std::snprintf(buf, sizeof buf, "%.4f", s.vulnerability[b]);
        os << ',' << buf;
      } else {
        os << ",";
      }
    }
    std::snprintf(buf, sizeof buf, "%.4f", s.accuracy_drop);
    os << ',' << (s.vulnerability.empty() ? "" : buf) << ',' << s.memory_bits << ',';
    std::snprintf(buf, sizeof buf, "%.4f", s.execution_cost);
    os << buf << ',' << (s.passed ? "pass" : "fail") << ',' << s.next_bit_width << '\n';
  }
  return os.str();
}

}  // namespace axrel::dse
