// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "axrel/arith/coverage.hpp"
#include "axrel/arith/mare.hpp"
#include "axrel/arith/multiplier.hpp"
#include "axrel/campaign/campaign.hpp"
#include "axrel/dse/search.hpp"
#include "axrel/faults/plan.hpp"
#include "axrel/io/io.hpp"
#include "axrel/metrics/metrics.hpp"
#include "axrel/metrics/stats.hpp"
#include "axrel/quant/quant.hpp"
#include "oracles.hpp"

using namespace axrel;

namespace {

const std::string kDigits = std::string(AXREL_FIXTURES) + "/digits/";

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome memory_model() {
  const std::uint64_t n = 28'133'056;
  const std::uint64_t got[] = {quant::protected_memory_bits(n, 8, false), quant::protected_memory_bits(n, 5, true),
                               quant::protected_memory_bits(n, 4, true), quant::protected_memory_bits(n, 3, true)};
  const std::uint64_t want[] = {225'064'448, 196'931'392, 168'798'336, 140'665'280};
  bool ok = true;
  std::string d;
  for (int i = 0; i < 4; ++i) {
    ok = ok && got[i] == want[i];
    d += fmt("%llu%s", static_cast<unsigned long long>(got[i]), i < 3 ? "," : "");
  }
  return {ok, "bits " + d};
}

Outcome multiplier_accuracy() {
  struct Row {
    unsigned t, h;
    double published;
  };
  const Row rows[] = {{6, 7, 3.97}, {4, 7, 3.87}, {4, 4, 3.87}, {2, 7, 3.97}, {2, 4, 3.85}};
  const arith::Sampled policy{10'000'000, 1};
  bool ok = arith::mare(arith::MultConfig::exact(16), policy).percent == 0.0;
  std::string d = "Exact=0";
  for (const auto& r : rows) {
    const double got = arith::mare(arith::MultConfig::adam(16, r.t, r.h), policy).percent;
    ok = ok && std::fabs(got - r.published) <= 0.5;
    d += fmt(" AdAM(%u,%u)=%.4f/%.2f", r.t, r.h, got, r.published);
  }
  if (!ok) d = "out of tolerance: " + d;
  return {ok, d};
}

Outcome oracle_equivalence() {
  std::uint64_t pairs = 0;
  for (unsigned t = 0; t <= 6; ++t) {
    const auto mit = arith::MultConfig::mitchell(8, t);
    for (std::uint32_t a = 0; a < 256; ++a) {
      for (std::uint32_t b = 0; b < 256; ++b) {
        const arith::UWord ua(a, 8), ub(b, 8);
        const auto m = arith::mitchell_mul(ua, ub, mit);
        if (m.product != oracle::mitchell(a, b, 8, t)) return {false, fmt("oracle mismatch a=%u b=%u t=%u", a, b, t)};
        for (unsigned h = 0; h <= 7; ++h) {
          if (arith::adam_mul(ua, ub, arith::MultConfig::adam(8, t, h), faults::FaultPlan{}) != m) {
            return {false, fmt("AdAM differs a=%u b=%u t=%u h=%u", a, b, t, h)};
          }
        }
        ++pairs;
      }
    }
  }
  return {true, fmt("%llu (pair, t) cases, h in 0..7", static_cast<unsigned long long>(pairs))};
}

Outcome detection() {
  std::uint64_t flips = 0;
  for (unsigned t = 0; t <= 6; ++t) {
    for (unsigned h = 1; h <= 7; ++h) {
      const auto cfg = arith::MultConfig::adam(8, t, h);
      for (std::uint32_t a = 1; a < 256; ++a) {
        for (std::uint32_t b = 1; b < 256; ++b) {
          const arith::UWord ua(a, 8), ub(b, 8);
          const auto mask = arith::adam_layout(ua, ub, cfg).checked_mask();
          for (unsigned j = 0; j <= cfg.mantissa_width(); ++j) {
            if (!(mask >> j & 1U)) continue;
            if (!arith::adam_mul(ua, ub, cfg, 1U << j).fault_detected) {
              return {false, fmt("undetected flip a=%u b=%u t=%u h=%u bit=%u", a, b, t, h, j)};
            }
            ++flips;
          }
        }
      }
    }
  }
  std::string d = fmt("%llu checked-slice flips detected;", static_cast<unsigned long long>(flips));
  bool ok = true;
  for (unsigned t : {0U, 2U, 4U}) {
    const double mit = arith::adder_flip_campaign(arith::MultConfig::mitchell(8, t)).coverage_percent();
    for (unsigned h : {4U, 7U}) {
      const double adam = arith::adder_flip_campaign(arith::MultConfig::adam(8, t, h)).coverage_percent();
      ok = ok && adam > mit;
      d += fmt(" t=%u h=%u %.2f>%.2f", t, h, adam, mit);
    }
  }
  return {ok, d};
}

Outcome vote() {
  std::uint64_t cases = 0;
  for (unsigned b : {3U, 5U}) {
    for (quant::Word code = 0; code < (1U << b); ++code) {
      const auto stored = quant::protect(code, b).stored();
      for (unsigned bit : {b - 1, b, b + 1}) {
        const auto decoded = quant::majority_decode(quant::ProtectedWord::from_stored(stored ^ (1U << bit), b));
        if ((decoded >> (b - 1)) != (code >> (b - 1))) return {false, fmt("b=%u code=%u bit=%u", b, code, bit)};
        ++cases;
      }
    }
  }
  return {true, fmt("%llu single flips restored", static_cast<unsigned long long>(cases))};
}

std::vector<std::uint64_t> seed_range(std::uint64_t count) {
  std::vector<std::uint64_t> s(count);
  std::iota(s.begin(), s.end(), 1);
  return s;
}

Outcome protection_benefit() {
  const auto model = io::load_model(kDigits + "model.json");
  const auto test = io::load_dataset(kDigits + "test.axds");
  campaign::WeightCampaign c;
  c.bits = 8;
  c.ber_grid = {1e-3, 1e-2, 1e-1};
  c.seeds = seed_range(200);
  c.protections = {campaign::Protection::parse("none"), campaign::Protection::parse("msb")};
  const auto rows = campaign::run_weight_campaign(model, test, c);
  bool ok = true;
  std::string d;
  for (double ber : c.ber_grid) {
    std::vector<double> none, msb;
    for (const auto& r : rows) {
      if (*r.ber != ber) continue;
      (r.protection == "none" ? none : msb).push_back(r.vulnerability);
    }
    const double mn = metrics::summarize(none).mean, mm = metrics::summarize(msb).mean;
    const double z = metrics::welch_z(msb, none);
    ok = ok && mm <= mn && z > metrics::kZ95;
    d += fmt(" ber=%g none=%.3f msb=%.3f z=%.2f;", ber, mn, mm, z);
  }
  return {ok, "200 seeds" + d};
}

Outcome clamp_benefit() {
  const auto model = net::quantize_model(io::load_model(kDigits + "model.json"), 8);
  const auto test = io::load_dataset(kDigits + "test.axds");
  const auto bounds = net::profile_ranges(model, io::load_dataset(kDigits + "calib.axds"));
  campaign::ActivationCampaign c;
  c.seeds = seed_range(200);
  c.protections = {campaign::Protection::parse("none"), campaign::Protection::parse("clamp:m3")};
  c.bits = {6, 7};
  const auto rows = campaign::run_activation_campaign(model, test, c, bounds);
  std::vector<double> diffs;
  bool in_bounds = true;
  std::size_t altered = 0;
  double none_sum = 0.0, m3_sum = 0.0;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    in_bounds = in_bounds && rows[i].within_bounds && rows[i + 1].within_bounds;
    none_sum += rows[i].faulty_acc;
    m3_sum += rows[i + 1].faulty_acc;
    diffs.push_back(100.0 * (rows[i + 1].faulty_acc - rows[i].faulty_acc));
    if (rows[i + 1].faulty_acc != rows[i].faulty_acc) ++altered;
  }
  const auto s = metrics::summarize(diffs);
  const double lower = s.mean - metrics::kZ95 * s.stddev / std::sqrt(static_cast<double>(s.count));
  const bool ok = in_bounds && lower >= 0.0;
  return {ok, fmt("%zu seeds mean_acc none=%.4f m3=%.4f diff=%.4fpp lower95=%.4f trials_changed=%zu within_bounds=%s",
                  s.count, none_sum / s.count, m3_sum / s.count, s.mean, lower, altered, in_bounds ? "all" : "NO")};
}

Outcome formulas() {
  using metrics::p_drop;
  using metrics::rap;
  struct P {
    metrics::PDropInputs in;
    double want;
  };
  // Expected values are written out factor by factor in formula order.
  const P pcases[] = {
      {{10, 8, 1, 1, 1e-9, 1e-5, 0.5}, 10.0 * 10.0 * 8.0 * 8.0 * 1.0 / 1.0 * 1e-9 * 1e-5 * 0.5},
      {{10, 8, 1, 1, 1e-9, 1e-5, 0.0}, 0.0},
      {{10, 16, 1, 1, 1e-9, 1e-5, 0.5}, 10.0 * 10.0 * 16.0 * 16.0 * 1.0 / 1.0 * 1e-9 * 1e-5 * 0.5},
      {{4, 2, 8, 2, 0.5, 0.25, 0.125}, 16.0 * 4.0 * 4.0 * 0.5 * 0.25 * 0.125},
      {{28133056, 10, 87600, 24, 1e-12, 3e-4, 0.0123},
       28133056.0 * 28133056.0 * 10.0 * 10.0 * 87600.0 / 24.0 * 1e-12 * 3e-4 * 0.0123},
  };
  struct R {
    metrics::RapInputs in;
    double want;
  };
  const R rcases[] = {
      {{0.02, 1.1, 1.2}, 0.02 * 1.1 * 1.2},
      {{0.3, 1.0, 1.7}, 0.3 * 1.7},
      {{0.15, 1.25, 1.0}, 0.15 * 1.25},
      {{0.5, 1.25, 1.5}, 0.9375},
      {{0.0, 1.25, 1.25}, 0.0},
  };
  bool ok = std::fabs(p_drop(pcases[0].in) - 3.2e-11) <= 1e-25 && std::fabs(rap(rcases[0].in) - 0.0264) <= 1e-17 &&
            p_drop(pcases[2].in) / p_drop(pcases[0].in) == 4.0;
  for (const auto& c : pcases) ok = ok && p_drop(c.in) == c.want;
  for (const auto& c : rcases) ok = ok && rap(c.in) == c.want;

  std::uint64_t checks = 0;
  for (std::uint64_t i = 0; i < 10000; ++i) {
    auto u = [&](int k) { return faults::draw_unit({i, 77}, k) * 10.0; };
    const metrics::PDropInputs p{u(0), u(1), u(2), u(3) + 0.1, u(4), u(5), u(6)};
    for (double metrics::PDropInputs::*f : {&metrics::PDropInputs::params, &metrics::PDropInputs::bit_width,
                                            &metrics::PDropInputs::lifetime, &metrics::PDropInputs::p_single,
                                            &metrics::PDropInputs::ber, &metrics::PDropInputs::acc_drop}) {
      auto q = p;
      q.*f += u(7);
      ok = ok && p_drop(q) >= p_drop(p);
      ++checks;
    }
    const metrics::RapInputs r{u(8), u(9) + 0.01, u(10) + 0.01};
    for (double metrics::RapInputs::*f :
         {&metrics::RapInputs::acc_drop, &metrics::RapInputs::mem_ovh, &metrics::RapInputs::perf_ovh}) {
      auto q = r;
      q.*f += u(11);
      ok = ok && rap(q) >= rap(r);
      ++checks;
    }
  }
  return {ok, fmt("10 exact cases, %llu monotonicity checks", static_cast<unsigned long long>(checks))};
}

class Stub : public dse::WidthEvaluator {
 public:
  Stub(unsigned good_from, bool fail_accuracy) : good_from_(good_from), fail_accuracy_(fail_accuracy) {}
  double golden_accuracy(unsigned bits) override { return fail_accuracy_ && bits < good_from_ ? 0.1 : 0.9; }
  std::vector<double> vulnerabilities(unsigned bits, const dse::SearchConfig& cfg) override {
    return std::vector<double>(cfg.ber_grid.size(), bits >= good_from_ ? 1.0 : 50.0);
  }
  std::uint64_t memory_bits(unsigned bits) override { return 1000ULL * (bits + 2); }
  double execution_cost(unsigned bits) override { return bits; }

 private:
  unsigned good_from_;
  bool fail_accuracy_;
};

Outcome search() {
  std::size_t runs = 0, max_steps = 0;
  for (unsigned m = 2; m <= 8; ++m) {
    for (unsigned n = m; n <= 8; ++n) {
      dse::SearchConfig cfg{0.5, 5.0, m, n, {1e-3}, {1}};
      for (unsigned good = 1; good <= 10; ++good) {
        for (bool acc : {false, true}) {
          Stub a(good, acc), b(good, acc);
          const auto t1 = dse::fortune_search(a, cfg);
          const auto t2 = dse::fortune_search(b, cfg);
          if (t1.steps.front().bit_width != (m + n) / 2) return {false, fmt("first probe m=%u n=%u", m, n)};
          if (t1.steps.size() > 2 * (n - m + 2)) return {false, fmt("%zu steps m=%u n=%u", t1.steps.size(), m, n)};
          if (dse::trace_csv(t1, cfg) != dse::trace_csv(t2, cfg)) return {false, fmt("trace differs m=%u n=%u", m, n)};
          max_steps = std::max(max_steps, t1.steps.size());
          ++runs;
        }
      }
    }
  }
  const auto model = io::load_model(kDigits + "model.json");
  const auto test = io::load_dataset(kDigits + "test.axds");
  const dse::SearchConfig cfg{0.8, 5.0, 2, 8, {1e-3, 1e-2}, {1, 2, 3}};
  campaign::ModelEvaluator e1(model, test), e2(model, test);
  const auto real1 = dse::trace_csv(dse::fortune_search(e1, cfg), cfg);
  const auto real2 = dse::trace_csv(dse::fortune_search(e2, cfg), cfg);
  return {real1 == real2, fmt("%zu stub searches, max %zu steps; model trace bytes %s", runs, max_steps,
                              real1 == real2 ? "identical" : "DIFFER")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"memory model", memory_model},
      {"multiplier MARE", multiplier_accuracy},
      {"Mitchell oracle equivalence", oracle_equivalence},
      {"AdAM detection", detection},
      {"MSB vote", vote},
      {"MSB triplication benefit", protection_benefit},
      {"Method 3 clamp benefit", clamp_benefit},
      {"P_drop and RAP formulas", formulas},
      {"bit-width search", search},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
