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

// analysis.hpp: observables extracted from population time series.

#pragma once

#include "chiral/dynamics.hpp"

#include <array>
#include <string>
#include <vector>

namespace chiral {

struct ChiralityReport {
  int direction = 0;  // +1 for 1->2->3->1, -1 for 1->3->2->1, 0 undetermined
  // First peak per site curve in µs; for the initial site this is the first
  // return. NaN when no qualifying peak exists.
  std::array<double, 3> peak_times{};
  std::string diagnostic;
};

// A peak qualifies when the curve rises above threshold times the largest
// value over all three curves. Site 1 must start above the threshold; its
// first excursion is skipped.
ChiralityReport detect_chirality(const std::vector<double>& times,
                                 const std::array<std::vector<double>, 3>& curves,
                                 double threshold = 0.5);
ChiralityReport detect_chirality(const TimeSeries& series,
                                 const std::array<std::string, 3>& site_order,
                                 double threshold = 0.5);

// Times of the curve's maxima, one per excursion above the midline of its
// range (with 10% hysteresis), refined by a parabola through the three
// samples around each maximum. Excursions that touch either end of the
// window are dropped.
std::vector<double> find_maxima(const std::vector<double>& times,
                                const std::vector<double>& curve);

// Mean spacing of successive maxima in µs. Throws std::domain_error when
// fewer than two maxima exist.
double oscillation_period(const std::vector<double>& times, const std::vector<double>& curve);

struct CoherenceReport {
  double t_1e_ms = 0.0;  // envelope decay time; +inf when unbounded
  double n_osc = 0.0;    // t_1e / period
  double period_ms = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
  double fit_residual = 0.0;  // RMS of the envelope fit
  std::size_t n_maxima = 0;
  bool bounded = true;
  std::string diagnostic;
};

// Fits A exp(-t/τ) + C to the local maxima of an oscillating curve by least
// squares (linear in A and C, golden-section search in log τ). Times are in
// µs; the report is in ms. A best τ at the search ceiling, or a growing
// envelope, is reported as unbounded.
CoherenceReport coherence_time(const std::vector<double>& curve, const std::vector<double>& times);

// Largest |P_a - P_b| over the states both series track, comparing their
// linear interpolants on the union of sample times within the common time
// range. Throws std::invalid_argument when the ranges do not overlap or no
// state is shared.
double compare_series(const TimeSeries& a, const TimeSeries& b);

}  // namespace chiral
