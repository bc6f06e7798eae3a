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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace chiral {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Peak {
  double t;
  double value;
};

// Vertex of the parabola through samples i-1, i, i+1; falls back to the
// sample itself at the boundaries or for a flat top.
Peak refine_peak(const std::vector<double>& t, const std::vector<double>& y, std::size_t i) {
  if (i == 0 || i + 1 >= y.size()) return {t[i], y[i]};
  const double x0 = t[i - 1] - t[i], x2 = t[i + 1] - t[i];
  const double d0 = y[i - 1] - y[i], d2 = y[i + 1] - y[i];
  // y - y_i = a x^2 + b x through (x0, d0) and (x2, d2).
  const double det = x0 * x0 * x2 - x2 * x2 * x0;
  if (det == 0.0) return {t[i], y[i]};
  const double a = (d0 * x2 - d2 * x0) / det;
  const double b = (x0 * x0 * d2 - x2 * x2 * d0) / det;
  if (!(a < 0.0)) return {t[i], y[i]};
  double xv = -b / (2.0 * a);
  xv = std::clamp(xv, x0, x2);
  return {t[i] + xv, y[i] + a * xv * xv + b * xv};
}

double median_spacing(const std::vector<double>& t) {
  if (t.size() < 2) return 0.0;
  std::vector<double> d(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) d[i] = t[i + 1] - t[i];
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.end());
  return d[d.size() / 2];
}

// First excursion above `level` that starts after the curve has been below
// it; returns the refined maximum or NaN.
double first_peak(const std::vector<double>& t, const std::vector<double>& y, double level) {
  std::size_t i = 0;
  while (i < y.size() && y[i] > level) ++i;  // skip an excursion that touches t_start
  while (i < y.size() && y[i] <= level) ++i;
  if (i >= y.size()) return kNaN;
  std::size_t best = i;
  while (i < y.size() && y[i] > level) {
    if (y[i] > y[best]) best = i;
    ++i;
  }
  if (best + 1 >= y.size()) return kNaN;  // still rising at the window edge
  return refine_peak(t, y, best).t;
}

std::vector<Peak> excursion_maxima(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<Peak> out;
  if (y.size() < 3) return out;
  const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
  const double lo = *lo_it, hi = *hi_it;
  const double range = hi - lo;
  if (!(range > 1e-12 * std::max(1.0, std::abs(hi)))) return out;
  const double mid = 0.5 * (lo + hi);
  const double upper = mid + 0.1 * range, lower = mid - 0.1 * range;

  bool inside = y[0] >= lower;  // an excursion already open at t_start is dropped
  bool counted = false;
  std::size_t best = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (inside) {
      if (y[i] > y[best]) best = i;
      if (y[i] < lower) {
        if (counted) out.push_back(refine_peak(t, y, best));
        inside = false;
      }
    } else if (y[i] > upper) {
      inside = true;
      counted = true;
      best = i;
    }
  }
  return out;
}

// Samples that are the largest within +-half_window, refined.
std::vector<Peak> windowed_maxima(const std::vector<double>& t, const std::vector<double>& y,
                                  double half_window) {
  std::vector<Peak> out;
  const std::size_t n = y.size();
  std::size_t lo = 0, hi = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (t[i] - half_window < t.front() || t[i] + half_window > t.back()) continue;
    while (t[lo] < t[i] - half_window) ++lo;
    if (hi < i) hi = i;
    while (hi + 1 < n && t[hi + 1] <= t[i] + half_window) ++hi;
    bool is_max = true;
    for (std::size_t k = lo; k <= hi && is_max; ++k) {
      if (y[k] > y[i] || (y[k] == y[i] && k < i)) is_max = false;
    }
    if (is_max) out.push_back(refine_peak(t, y, i));
  }
  return out;
}

// Local maxima whose topographic prominence reaches min_prominence. A
// curve that starts by falling counts its first sample as a maximum.
std::vector<Peak> prominent_maxima(const std::vector<double>& t, const std::vector<double>& y,
                                   double min_prominence) {
  std::vector<Peak> out;
  const std::size_t n = y.size();
  if (n < 3) return out;
  const double floor = *std::min_element(y.begin(), y.end());
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const bool left_ok = i == 0 || y[i - 1] < y[i];
    if (!left_ok || !(y[i] >= y[i + 1]) || y[i] - floor < min_prominence) continue;
    // Bases run to the first higher sample or the window edge.
    double left_min = y[i], right_min = y[i];
    for (std::size_t k = i; k-- > 0 && y[k] <= y[i];) left_min = std::min(left_min, y[k]);
    for (std::size_t k = i + 1; k < n && y[k] <= y[i]; ++k) right_min = std::min(right_min, y[k]);
    const double base = i == 0 ? right_min : std::max(left_min, right_min);
    if (y[i] - base >= min_prominence) out.push_back(i == 0 ? Peak{t[0], y[0]} : refine_peak(t, y, i));
  }
  return out;
}

struct EnvelopeFit {
  double a = 0.0, c = 0.0, sse = 0.0;
};

EnvelopeFit fit_fixed_tau(const std::vector<Peak>& peaks, double tau) {
  // Least squares for v = a * e + c with e = exp(-t/tau).
  double se = 0, see = 0, sv = 0, sev = 0;
  const double n = static_cast<double>(peaks.size());
  const double t0 = peaks.front().t;
  for (const Peak& p : peaks) {
    const double e = std::exp(-(p.t - t0) / tau);
    se += e;
    see += e * e;
    sv += p.value;
    sev += e * p.value;
  }
  const double det = n * see - se * se;
  EnvelopeFit f;
  if (std::abs(det) < 1e-300) {
    f.c = sv / n;
  } else {
    f.a = (n * sev - se * sv) / det;
    f.c = (see * sv - se * sev) / det;
  }
  for (const Peak& p : peaks) {
    const double r = f.a * std::exp(-(p.t - t0) / tau) + f.c - p.value;
    f.sse += r * r;
  }
  // Report the amplitude at t = 0 rather than at the first maximum.
  f.a *= std::exp(t0 / tau);
  return f;
}

double interpolate(const std::vector<double>& t, const std::vector<double>& y, double x) {
  auto it = std::lower_bound(t.begin(), t.end(), x);
  if (it == t.end()) return y.back();
  const auto k = static_cast<std::size_t>(it - t.begin());
  if (*it == x || k == 0) return y[k];
  const double w = (x - t[k - 1]) / (t[k] - t[k - 1]);
  return (1.0 - w) * y[k - 1] + w * y[k];
}

}  // namespace

ChiralityReport detect_chirality(const std::vector<double>& times,
                                 const std::array<std::vector<double>, 3>& curves,
                                 double threshold) {
  ChiralityReport r;
  r.peak_times = {kNaN, kNaN, kNaN};
  double gmax = -std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    if (c.size() != times.size()) throw std::invalid_argument("curve length mismatch");
    for (double v : c) gmax = std::max(gmax, v);
  }
  if (times.size() < 3 || !(gmax > 0.0)) {
    r.diagnostic = "no qualifying peaks: curves are empty or non-positive";
    return r;
  }
  const double level = threshold * gmax;
  if (!(curves[0].front() > level)) {
    r.diagnostic = "site 1 does not start above the peak threshold";
  }
  for (std::size_t s = 0; s < 3; ++s) r.peak_times[s] = first_peak(times, curves[s], level);

  for (std::size_t s = 0; s < 3; ++s) {
    if (std::isnan(r.peak_times[s])) {
      r.diagnostic = "no qualifying peak on site " + std::to_string(s + 1);
      return r;
    }
  }
  const double stride = median_spacing(times);
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return r.peak_times[static_cast<std::size_t>(a)] <
                                       r.peak_times[static_cast<std::size_t>(b)]; });
  for (std::size_t k = 0; k + 1 < 3; ++k) {
    const double gap = r.peak_times[static_cast<std::size_t>(order[k + 1])] -
                       r.peak_times[static_cast<std::size_t>(order[k])];
    if (!(gap > stride)) {
      r.diagnostic = "first peaks are not separated by more than one sample";
      return r;
    }
  }
  // Successor of each site in time order, read cyclically.
  const bool forward = (order[1] == (order[0] + 1) % 3);
  r.direction = forward ? +1 : -1;
  if (r.diagnostic.empty()) r.diagnostic = "ok";
  return r;
}

ChiralityReport detect_chirality(const TimeSeries& series,
                                 const std::array<std::string, 3>& site_order, double threshold) {
  return detect_chirality(series.times,
                          {series.curve(site_order[0]), series.curve(site_order[1]),
                           series.curve(site_order[2])},
                          threshold);
}

std::vector<double> find_maxima(const std::vector<double>& times,
                                const std::vector<double>& curve) {
  if (times.size() != curve.size()) throw std::invalid_argument("curve length mismatch");
  std::vector<double> out;
  for (const Peak& p : excursion_maxima(times, curve)) out.push_back(p.t);
  return out;
}

double oscillation_period(const std::vector<double>& times, const std::vector<double>& curve) {
  const std::vector<double> peaks = find_maxima(times, curve);
  if (peaks.size() < 2) {
    throw std::domain_error("oscillation period needs at least two maxima, found " +
                            std::to_string(peaks.size()));
  }
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

CoherenceReport coherence_time(const std::vector<double>& curve, const std::vector<double>& times) {
  CoherenceReport rep;
  if (times.size() != curve.size()) throw std::invalid_argument("curve length mismatch");
  double period_us = 0.0;
  std::vector<Peak> peaks;
  std::string method = "windowed maxima";
  try {
    period_us = oscillation_period(times, curve);
    peaks = windowed_maxima(times, curve, 0.5 * period_us);
  } catch (const std::domain_error&) {
    // Oscillations that die out early never cross the midline of the full
    // range; fall back to prominent local maxima from the first sample on.
    const auto [lo, hi] = std::minmax_element(curve.begin(), curve.end());
    peaks = prominent_maxima(times, curve, 0.005 * (*hi - *lo));
    if (peaks.size() < 2) {
      throw std::domain_error("oscillation period needs at least two maxima, found " +
                              std::to_string(peaks.size()));
    }
    period_us = (peaks.back().t - peaks.front().t) / static_cast<double>(peaks.size() - 1);
    method = "prominent maxima";
  }
  rep.period_ms = period_us / 1000.0;
  rep.n_maxima = peaks.size();
  if (peaks.size() < 3) {
    throw std::domain_error("envelope fit needs at least three maxima, found " +
                            std::to_string(peaks.size()));
  }

  const double span = peaks.back().t - peaks.front().t;
  const double tau_lo = span * 1e-3, tau_hi = span * 1e3;
  auto sse = [&](double log_tau) { return fit_fixed_tau(peaks, std::exp(log_tau)).sse; };

  // Coarse log-spaced scan, then golden-section refinement around the best.
  const int n_scan = 400;
  const double l0 = std::log(tau_lo), l1 = std::log(tau_hi);
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= n_scan; ++k) {
    const double v = sse(l0 + (l1 - l0) * k / n_scan);
    if (v < best_sse) {
      best_sse = v;
      best = k;
    }
  }
  double a = l0 + (l1 - l0) * std::max(0, best - 1) / n_scan;
  double b = l0 + (l1 - l0) * std::min(n_scan, best + 1) / n_scan;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  for (int it = 0; it < 200 && b - a > 1e-12; ++it) {
    if (sse(c) < sse(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - gr * (b - a);
    d = a + gr * (b - a);
  }
  const double tau = std::exp(0.5 * (a + b));
  const EnvelopeFit fit = fit_fixed_tau(peaks, tau);
  rep.amplitude = fit.a;
  rep.offset = fit.c;
  rep.fit_residual = std::sqrt(fit.sse / static_cast<double>(peaks.size()));

  const double decayed = fit.a * std::exp(-peaks.front().t / tau) * (1.0 - std::exp(-span / tau));
  const double scale = std::abs(fit.a) + std::abs(fit.c);
  if (best == n_scan || !(fit.a > 0.0) || !(decayed > 1e-3 * scale)) {
    rep.bounded = false;
    rep.t_1e_ms = std::numeric_limits<double>::infinity();
    rep.n_osc = std::numeric_limits<double>::infinity();
    rep.diagnostic = "envelope does not decay within the window: tau is unbounded";
    return rep;
  }
  rep.t_1e_ms = tau / 1000.0;
  rep.n_osc = rep.t_1e_ms / rep.period_ms;
  rep.diagnostic = "n_osc = t_1e / mean maxima spacing; " + method;
  return rep;
}

double compare_series(const TimeSeries& a, const TimeSeries& b) {
  if (a.times.empty() || b.times.empty()) throw std::invalid_argument("empty series");
  const double lo = std::max(a.times.front(), b.times.front());
  const double hi = std::min(a.times.back(), b.times.back());
  if (lo > hi) throw std::invalid_argument("series time ranges are disjoint");

  std::vector<double> grid;
  for (const auto* s : {&a, &b}) {
    for (double t : s->times) {
      if (t >= lo && t <= hi) grid.push_back(t);
    }
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  double worst = 0.0;
  bool shared = false;
  for (std::size_t k = 0; k < a.labels.size(); ++k) {
    if (!b.has(a.labels[k])) continue;
    shared = true;
    const auto& ya = a.populations[k];
    const auto& yb = b.curve(a.labels[k]);
    for (double t : grid) {
      worst = std::max(worst, std::abs(interpolate(a.times, ya, t) - interpolate(b.times, yb, t)));
    }
  }
  if (!shared) throw std::invalid_argument("series share no tracked state");
  return worst;
}

}  // namespace chiral
