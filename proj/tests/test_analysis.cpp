// Copyright 2026 The chiralsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "chiral/analysis.hpp"

#include <doctest.h>

#include <cmath>

using namespace chiral;

namespace {

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * static_cast<double>(i) / (n - 1);
  return v;
}

// Ideal three-site circulation: site s peaks at (s + k) * T / 3 for
// forward hopping.
std::array<std::vector<double>, 3> circulating(const std::vector<double>& t, double period,
                                               bool forward) {
  std::array<std::vector<double>, 3> c;
  for (int s = 0; s < 3; ++s) {
    const int shift = forward ? s : (3 - s) % 3;
    for (double x : t) {
      const double phase = kTwoPi * (x / period - shift / 3.0);
      c[static_cast<std::size_t>(s)].push_back(std::pow(0.5 + 0.5 * std::cos(phase), 4));
    }
  }
  return c;
}

}  // namespace

TEST_CASE("chirality of forward and backward circulation") {
  const auto t = linspace(0.0, 90.0, 901);
  const ChiralityReport fwd = detect_chirality(t, circulating(t, 60.0, true));
  CHECK(fwd.direction == +1);
  CHECK(fwd.diagnostic == "ok");
  CHECK(fwd.peak_times[1] == doctest::Approx(20.0).epsilon(1e-3));
  CHECK(fwd.peak_times[2] == doctest::Approx(40.0).epsilon(1e-3));
  CHECK(fwd.peak_times[0] == doctest::Approx(60.0).epsilon(1e-3));

  const ChiralityReport bwd = detect_chirality(t, circulating(t, 60.0, false));
  CHECK(bwd.direction == -1);
  CHECK(bwd.peak_times[2] == doctest::Approx(20.0).epsilon(1e-3));
  CHECK(bwd.peak_times[1] == doctest::Approx(40.0).epsilon(1e-3));
}

TEST_CASE("chirality is undetermined without peaks") {
  const auto t = linspace(0.0, 10.0, 101);
  std::array<std::vector<double>, 3> flat;
  flat[0] = std::vector<double>(t.size(), 1.0);
  flat[1] = std::vector<double>(t.size(), 0.0);
  flat[2] = std::vector<double>(t.size(), 0.0);
  const ChiralityReport r = detect_chirality(t, flat);
  CHECK(r.direction == 0);
  CHECK(r.diagnostic != "ok");
  CHECK(std::isnan(r.peak_times[1]));

  // A window shorter than one hop.
  const auto short_t = linspace(0.0, 15.0, 151);
  CHECK(detect_chirality(short_t, circulating(short_t, 60.0, true)).direction == 0);
}

TEST_CASE("maxima and period of a sinusoid") {
  const auto t = linspace(0.0, 10.0, 1001);
  std::vector<double> y;
  for (double x : t) y.push_back(std::sin(kTwoPi * x / 2.5 - 0.3));
  const auto peaks = find_maxima(t, y);
  REQUIRE(peaks.size() == 4);
  CHECK(peaks[0] == doctest::Approx((0.25 + 0.3 / kTwoPi) * 2.5).epsilon(1e-4));
  // An excursion already open at the window start is not counted.
  std::vector<double> shifted;
  for (double x : t) shifted.push_back(std::sin(kTwoPi * x / 2.5 + 0.3));
  CHECK(find_maxima(t, shifted).size() == 3);
  CHECK(oscillation_period(t, y) == doctest::Approx(2.5).epsilon(1e-5));

  const std::vector<double> flat(t.size(), 0.3);
  CHECK(find_maxima(t, flat).empty());
  CHECK_THROWS_AS(oscillation_period(t, flat), std::domain_error);
}

TEST_CASE("coherence time of a damped oscillation") {
  // Times in µs: period 9.17 ms, envelope 105.5 ms.
  const double period = 9170.0, tau = 105500.0;
  const auto t = linspace(0.0, 300000.0, 30001);
  std::vector<double> y;
  for (double x : t) y.push_back(0.5 + 0.5 * std::exp(-x / tau) * std::cos(kTwoPi * x / period));
  const CoherenceReport r = coherence_time(y, t);
  CHECK(r.bounded);
  CHECK(r.period_ms == doctest::Approx(9.17).epsilon(1e-3));
  CHECK(r.t_1e_ms == doctest::Approx(105.5).epsilon(1e-2));
  CHECK(r.n_osc == doctest::Approx(105.5 / 9.17).epsilon(1e-2));
  CHECK(r.offset == doctest::Approx(0.5).epsilon(1e-2));
}

TEST_CASE("undamped oscillation has an unbounded coherence time") {
  const auto t = linspace(0.0, 1000.0, 10001);
  std::vector<double> y;
  for (double x : t) y.push_back(0.5 + 0.5 * std::cos(kTwoPi * x / 50.0));
  const CoherenceReport r = coherence_time(y, t);
  CHECK_FALSE(r.bounded);
  CHECK(std::isinf(r.t_1e_ms));
}

TEST_CASE("oscillation that dies within the window") {
  const auto t = linspace(0.0, 20000.0, 2001);
  std::vector<double> y;
  for (double x : t) y.push_back(0.05 + 0.95 * std::exp(-x / 400.0) * std::pow(std::cos(kPi * x / 700.0), 2));
  const CoherenceReport r = coherence_time(y, t);
  CHECK(r.bounded);
  CHECK(r.n_maxima >= 3);
  CHECK(r.t_1e_ms == doctest::Approx(0.4).epsilon(0.05));
}

TEST_CASE("series comparison") {
  TimeSeries a, b;
  a.times = {0.0, 1.0, 2.0};
  a.labels = {"egg", "geg"};
  a.populations = {{1.0, 0.5, 0.0}, {0.0, 0.5, 1.0}};
  b.times = {0.0, 0.5, 1.0, 1.5, 3.0};
  b.labels = {"geg"};
  b.populations = {{0.0, 0.25, 0.5, 0.8, 1.0}};
  // At t = 2, a is 1 and b interpolates to 0.8 + 0.2 / 3.
  CHECK(compare_series(a, b) == doctest::Approx(2.0 / 15.0));

  TimeSeries c = b;
  c.labels = {"gge"};
  CHECK_THROWS_AS(compare_series(a, c), std::invalid_argument);
  TimeSeries d = b;
  d.times = {5.0, 6.0, 7.0, 8.0, 9.0};
  CHECK_THROWS_AS(compare_series(a, d), std::invalid_argument);
}
