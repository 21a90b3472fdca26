#include <doctest.h>

#include <cmath>
#include <vector>

#include "axrel/error.hpp"
#include "axrel/faults/rng.hpp"
#include "axrel/metrics/metrics.hpp"
#include "axrel/metrics/stats.hpp"

using namespace axrel;
using namespace axrel::metrics;

TEST_CASE("vulnerability is signed") {
  CHECK(vulnerability(0.90, 0.82) == doctest::Approx(8.0));
  CHECK(vulnerability(0.5, 0.5) == 0.0);
  CHECK(vulnerability(0.80, 0.85) == doctest::Approx(-5.0));
}

TEST_CASE("sdc examples") {
  const std::vector<Logits> g{{0.1, 2.0, 0.3}, {1.0, 0.0, 0.0}};
  auto r = sdc_rates(g, g);
  CHECK(r.sdc1 == 0.0);
  CHECK(r.sdc10 == 0.0);

  std::vector<Logits> one_g{Logits(10, 0.0)}, one_f{Logits(10, 0.0)};
  one_g[0][3] = 5.0;
  one_f[0][5] = 5.0;
  CHECK(sdc_rates(one_g, one_f).sdc1 == 100.0);

  // Two classes; logit gaps chosen so the top-1 probabilities are 0.90 and 0.75.
  const std::vector<Logits> pg{{std::log(9.0), 0.0}}, pf{{std::log(3.0), 0.0}};
  r = sdc_rates(pg, pf);
  CHECK(r.sdc1 == 0.0);
  CHECK(r.sdc10 == 100.0);

  // 0.90 -> 0.85 is a 5.6% relative drop.
  const std::vector<Logits> small{{std::log(0.85 / 0.15), 0.0}};
  CHECK(sdc_rates(pg, small).sdc10 == 0.0);
}

TEST_CASE("sdc shape errors") {
  const std::vector<Logits> a{{1.0, 2.0}}, b{{1.0, 2.0}, {0.0, 1.0}}, c{{1.0, 2.0, 3.0}};
  CHECK_THROWS_AS(sdc_rates(a, b), Error);
  CHECK_THROWS_AS(sdc_rates(a, c), Error);
}

TEST_CASE("sdc categories are disjoint and coverage of identical logits is full") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::vector<Logits> g, f;
    for (int i = 0; i < 20; ++i) {
      Logits x(5), y(5);
      for (int k = 0; k < 5; ++k) {
        x[k] = faults::draw_unit({seed, 1}, i * 5 + k) * 4;
        y[k] = x[k] + (faults::draw_unit({seed, 2}, i * 5 + k) - 0.5) * 2;
      }
      g.push_back(x);
      f.push_back(y);
    }
    const auto r = sdc_rates(g, f);
    REQUIRE(r.sdc1 + r.sdc10 <= 100.0);
    REQUIRE(fault_coverage(sdc_rates(g, g).sdc1) == 100.0);
  }
}

TEST_CASE("fault coverage") {
  CHECK(fault_coverage(0) == 100);
  CHECK(fault_coverage(100) == 0);
  CHECK(fault_coverage(22.3) == doctest::Approx(77.7));
}

TEST_CASE("p_drop examples") {
  CHECK(p_drop({10, 8, 1, 1, 1e-9, 1e-5, 0.0}) == 0.0);
  CHECK(p_drop({10, 8, 1, 1, 1e-9, 1e-5, 0.5}) == doctest::Approx(3.2e-11).epsilon(1e-15));
  const PDropInputs base{1234, 5, 10, 2, 1e-6, 1e-4, 0.25};
  PDropInputs dbl = base;
  dbl.bit_width *= 2;
  CHECK(p_drop(dbl) / p_drop(base) == 4.0);
}

TEST_CASE("rap examples") {
  CHECK(rap({0.02, 1.1, 1.2}) == doctest::Approx(0.0264).epsilon(1e-15));
  CHECK(rap({0.3, 1.0, 1.7}) == 0.3 * 1.7);
  CHECK(rap({0.3, 1.25, 1.0}) == 0.3 * 1.25);
  CHECK(rap({0.15, 1.1, 1.2}) / rap({0.3, 1.1, 1.2}) == 0.5);
  CHECK_THROWS_AS(rap({0.1, 0.0, 1.0}), Error);
}

TEST_CASE("p_drop and rap are monotone in each factor") {
  for (std::uint64_t i = 0; i < 2000; ++i) {
    auto u = [&](int k) { return faults::draw_unit({i, 3}, k) * 10; };
    const PDropInputs p{u(0), u(1), u(2), u(3) + 0.1, u(4), u(5), u(6)};
    for (double PDropInputs::*field : {&PDropInputs::params, &PDropInputs::bit_width, &PDropInputs::lifetime,
                                       &PDropInputs::p_single, &PDropInputs::ber, &PDropInputs::acc_drop}) {
      PDropInputs q = p;
      q.*field += u(7);
      REQUIRE(p_drop(q) >= p_drop(p));
    }
    const RapInputs r{u(8), u(9) + 0.01, u(10) + 0.01};
    REQUIRE(rap({r.acc_drop + u(11), r.mem_ovh, r.perf_ovh}) >= rap(r));
    REQUIRE(rap({r.acc_drop, r.mem_ovh + u(11), r.perf_ovh}) >= rap(r));
    REQUIRE(rap({r.acc_drop, r.mem_ovh, r.perf_ovh + u(11)}) >= rap(r));
  }
}

TEST_CASE("argmax and softmax") {
  const std::vector<double> v{1.0, 3.0, 3.0, -2.0};
  CHECK(argmax(v) == 1);
  const auto p = softmax(v);
  double sum = 0;
  for (double x : p) sum += x;
  CHECK(sum == doctest::Approx(1.0));
  CHECK(p[1] == doctest::Approx(p[2]));
  const auto big = softmax(std::vector<double>{1000.0, 0.0});
  CHECK(big[0] == doctest::Approx(1.0));
}

TEST_CASE("summary statistics") {
  const std::vector<double> a{1, 2, 3, 4}, b{3, 4, 5, 6};
  const auto s = summarize(a);
  CHECK(s.mean == 2.5);
  CHECK(s.stddev == doctest::Approx(std::sqrt(5.0 / 3.0)));
  CHECK(welch_z(a, b) > 0);
  CHECK(welch_z(b, a) < 0);
  CHECK(welch_z(a, b) == doctest::Approx(2.0 / std::sqrt(5.0 / 3.0 / 4 * 2)));
  const std::vector<double> d{1, 1, 2, 2};
  CHECK(paired_z(d) == doctest::Approx(1.5 / (std::sqrt(1.0 / 3.0) / 2)));
}
