#pragma once

// Peak search, parameter x time contours, disorder ensembles, threshold
// bisection and the t_MF power-law fit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwire/chain.hpp"
#include "spinwire/dynamics.hpp"
#include "spinwire/parallel.hpp"
#include "spinwire/random.hpp"

namespace spinwire {

/// Coarse grid resolution used when no step is given: T / 20000.
inline constexpr double kDefaultStepsPerWindow = 20000.0;
/// Values within this distance of the window maximum count as attaining it.
inline constexpr double kPeakAttainTolerance = 1e-3;

struct PeakResult {
  double f_max = 0.0;
  double t_mf = 0.0;
  bool at_boundary = false;  // the maximum sits on a window edge
};

namespace detail {

struct Refined {
  double t;
  double f;
};

/// Golden-section maximization of f on [a, b].
template <class F>
Refined golden_max(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  return f1 >= f2 ? Refined{x1, f1} : Refined{x2, f2};
}

inline double default_step(double t_max, double step) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("peak window: T must be > 0");
  if (step == 0.0) return t_max / kDefaultStepsPerWindow;
  if (!(step > 0.0) || step > t_max) throw std::invalid_argument("peak window: step must lie in (0, T]");
  return step;
}

/// Index of the local maximum reached by climbing right from `j`.
inline std::size_t climb(std::span<const double> f, std::size_t j) {
  while (j + 1 < f.size() && f[j + 1] > f[j]) ++j;
  return j;
}

}  // namespace detail

/// Peak of sampled fidelities without refinement.
inline PeakResult peak_from_samples(std::span<const double> times, std::span<const double> fid) {
  if (times.empty() || times.size() != fid.size()) throw std::invalid_argument("peak_from_samples: bad samples");
  const auto best = static_cast<std::size_t>(std::max_element(fid.begin(), fid.end()) - fid.begin());
  PeakResult out;
  out.f_max = fid[best];
  out.at_boundary = best == 0 || best + 1 == fid.size();
  std::size_t first = 0;
  while (fid[first] < out.f_max - kPeakAttainTolerance) ++first;
  out.t_mf = times[detail::climb(fid, first)];
  return out;
}

/// Maximum of a fidelity curve over [0, T]: coarse scan, then golden-section
/// refinement of the best sample and of the first local peak that comes within
/// kPeakAttainTolerance of the maximum (whose time is t_mf).
inline PeakResult find_peak(const std::function<double(double)>& fidelity, double t_max, double coarse_step,
                            double time_tol) {
  const double step = detail::default_step(t_max, coarse_step);
  const std::vector<double> grid = uniform_grid(t_max, step);
  std::vector<double> fid(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) fid[i] = fidelity(grid[i]);

  auto refine = [&](std::size_t j) {
    const double a = j == 0 ? grid[0] : grid[j - 1];
    const double b = j + 1 == grid.size() ? grid[j] : grid[j + 1];
    if (b - a <= time_tol) return detail::Refined{grid[j], fid[j]};
    const auto r = detail::golden_max(fidelity, a, b, time_tol);
    return r.f > fid[j] ? r : detail::Refined{grid[j], fid[j]};
  };

  const auto best = static_cast<std::size_t>(std::max_element(fid.begin(), fid.end()) - fid.begin());
  const auto top = refine(best);

  PeakResult out;
  out.f_max = top.f;
  out.at_boundary = best == 0 || best + 1 == grid.size();

  std::size_t first = 0;
  while (fid[first] < out.f_max - kPeakAttainTolerance) ++first;
  const std::size_t first_peak = detail::climb(fid, first);
  if (first_peak == best) {
    out.t_mf = top.t;
  } else {
    const auto early = refine(first_peak);
    out.t_mf = early.t;
    out.f_max = std::max(out.f_max, early.f);
  }
  return out;
}

/// Refinement tolerance 1e-4 / J with J the largest coupling magnitude.
inline double peak_time_tolerance(const ChainSpec& spec) {
  double j = 0.0;
  for (double c : spec.couplings) j = std::max(j, std::abs(c));
  return j > 0.0 ? 1e-4 / j : 1e-4;
}

inline PeakResult find_peak(const ChainSpec& spec, double t_max, double coarse_step = 0.0,
                            FidelityConvention convention = kDefaultConvention) {
  const TransferKernel kernel(spec);
  return find_peak([&](double t) { return kernel.fidelity(t, convention); }, t_max, coarse_step,
                   peak_time_tolerance(spec));
}

// ---------------------------------------------------------------------------
// Contours

struct ContourGrid {
  std::string parameter;
  std::vector<double> values;  // parameter value per row
  std::vector<double> times;
  std::vector<std::vector<double>> fidelity;  // [row][time]; empty row when failed
  std::vector<std::optional<std::string>> errors;

  bool row_ok(std::size_t r) const { return !errors[r].has_value(); }
};

/// F(param, t) for one chain per row. A row whose chain cannot be built or
/// solved is recorded with its error message; the other rows are unaffected.
inline ContourGrid contour_scan(std::string parameter, std::span<const double> values,
                                const std::function<ChainSpec(double)>& family, std::span<const double> times,
                                FidelityConvention convention = kDefaultConvention, std::size_t jobs = 1) {
  if (values.empty()) throw std::invalid_argument("contour_scan: parameter axis is empty");
  detail::check_grid(times);
  ContourGrid grid;
  grid.parameter = std::move(parameter);
  grid.values.assign(values.begin(), values.end());
  grid.times.assign(times.begin(), times.end());
  grid.fidelity.resize(values.size());
  grid.errors.resize(values.size());

  parallel_for(values.size(), jobs, [&](std::size_t r) {
    try {
      grid.fidelity[r] = fidelity_trace(family(values[r]), times).fidelities(convention);
    } catch (const std::exception& e) {
      grid.fidelity[r].clear();
      grid.errors[r] = e.what();
    }
  });
  return grid;
}

// ---------------------------------------------------------------------------
// Ensembles

struct EnsembleStats {
  std::size_t n_realizations = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 for a single realization
  double min = 0.0;
  double max = 0.0;
  double p05 = 0.0;
  double p50 = 0.0;
  double p95 = 0.0;
  std::vector<std::uint64_t> seeds;  // per realization
  std::vector<PeakResult> peaks;     // per realization, in realization order
};

/// Linear-interpolation percentile of sorted data, q in [0, 1].
inline double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::invalid_argument("percentile of empty data");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

/// Summary statistics of the peaks' f_max, computed from the sorted values so
/// the result does not depend on evaluation order.
inline void summarize(EnsembleStats& stats) {
  std::vector<double> f;
  f.reserve(stats.peaks.size());
  for (const auto& p : stats.peaks) f.push_back(p.f_max);
  std::sort(f.begin(), f.end());
  const double n = static_cast<double>(f.size());
  stats.n_realizations = f.size();
  // shifted by the minimum: identical samples give exactly mean = sample, std = 0
  const double shift = f.front();
  double sum = 0.0;
  for (double v : f) sum += v - shift;
  const double mean_shifted = sum / n;
  stats.mean = shift + mean_shifted;
  double ss = 0.0;
  for (double v : f) ss += (v - shift - mean_shifted) * (v - shift - mean_shifted);
  stats.std = f.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  stats.min = f.front();
  stats.max = f.back();
  stats.p05 = percentile_sorted(f, 0.05);
  stats.p50 = percentile_sorted(f, 0.50);
  stats.p95 = percentile_sorted(f, 0.95);
}

inline constexpr std::uint64_t kDefaultMaxTotalIntervals = 5'000'000;

struct EnsembleOptions {
  FidelityConvention convention = kDefaultConvention;
  std::size_t jobs = 1;
  std::uint64_t max_total_intervals = kDefaultMaxTotalIntervals;
};

/// Peak of one disorder realization. Static-only disorder uses the refined
/// peak search; dynamic noise is evolved piecewise and sampled on the grid.
inline PeakResult realization_peak(const ChainSpec& base, const DisorderSpec& disorder, std::uint64_t realization,
                                   double t_max, double step, FidelityConvention convention) {
  if (!disorder.has_dynamic()) return find_peak(sample_static_disorder(base, disorder, realization), t_max, step, convention);
  const auto grid = uniform_grid(t_max, detail::default_step(t_max, step));
  const auto trace = evolve_piecewise(base, disorder, realization, t_max, grid);
  const auto fid = trace.fidelities(convention);
  return peak_from_samples(trace.times, fid);
}

inline EnsembleStats ensemble_run(const ChainSpec& base, const DisorderSpec& disorder, std::size_t n, double t_max,
                                  double step = 0.0, const EnsembleOptions& options = {}) {
  if (n < 1) throw std::invalid_argument("ensemble_run: need at least one realization");
  base.validate();
  disorder.validate();
  if (disorder.has_dynamic()) {
    const double per_run = std::ceil(t_max / disorder.tau);
    if (per_run * static_cast<double>(n) > static_cast<double>(options.max_total_intervals))
      throw std::invalid_argument("ensemble_run: " + std::to_string(n) + " realizations x " +
                                  std::to_string(static_cast<std::uint64_t>(per_run)) +
                                  " intervals exceeds the cap of " + std::to_string(options.max_total_intervals) +
                                  " (raise max_total_intervals to override)");
  }

  EnsembleStats stats;
  stats.peaks.resize(n);
  stats.seeds.resize(n);
  parallel_for(n, options.jobs, [&](std::size_t r) {
    stats.seeds[r] = realization_seed(disorder.master_seed, r);
    stats.peaks[r] = realization_peak(base, disorder, r, t_max, step, options.convention);
  });
  summarize(stats);
  return stats;
}

// ---------------------------------------------------------------------------
// Threshold search

struct ThresholdResult {
  double value = 0.0;  // bracket midpoint
  double lo = 0.0;     // metric >= target here
  double hi = 0.0;     // metric < target here
  std::size_t probes = 0;
};

/// Crossing of metric(x) >= target, bisected to a bracket no wider than tol.
///
/// The metric must be deterministic (re-use one seed sequence for every
/// probe). With scan_points > 1 the interval is first sampled on a uniform
/// grid and bisection starts from the last pass/fail pair, which selects the
/// upper crossing when the metric is not monotone.
inline ThresholdResult threshold_search(const std::function<double(double)>& metric, double target, double lo,
                                        double hi, double tol, std::size_t scan_points = 0) {
  if (!(lo < hi)) throw std::invalid_argument("threshold_search: need lo < hi");
  if (!(tol > 0.0)) throw std::invalid_argument("threshold_search: tol must be > 0");

  ThresholdResult out;
  auto pass = [&](double x) {
    ++out.probes;
    return metric(x) >= target;
  };

  if (target <= 0.0) {  // every fidelity passes
    out.value = out.lo = out.hi = hi;
    return out;
  }

  const double m_lo = metric(lo);
  const double m_hi = metric(hi);
  out.probes += 2;
  if (!(m_lo >= target) || m_hi >= target)
    throw std::invalid_argument("threshold_search: no crossing of " + std::to_string(target) + " in [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "]: metric(lo) = " +
                                std::to_string(m_lo) + ", metric(hi) = " + std::to_string(m_hi));

  if (scan_points > 1) {
    double prev_x = lo;
    bool prev_pass = true;
    double bracket_lo = lo, bracket_hi = hi;
    for (std::size_t k = 1; k < scan_points; ++k) {
      const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(scan_points);
      const bool p = pass(x);
      if (prev_pass && !p) {
        bracket_lo = prev_x;
        bracket_hi = x;
      }
      prev_x = x;
      prev_pass = p;
    }
    if (prev_pass) {
      bracket_lo = prev_x;
      bracket_hi = hi;
    }
    lo = bracket_lo;
    hi = bracket_hi;
  }

  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (pass(mid) ? lo : hi) = mid;
  }
  out.lo = lo;
  out.hi = hi;
  out.value = 0.5 * (lo + hi);
  return out;
}

// ---------------------------------------------------------------------------
// t_MF scaling

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;  // log-space
  double residual = 0.0;   // RMS of log-space residuals
};

/// Least-squares line through (log x, log y).
inline PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_power_law: need >= 2 paired points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_power_law: values must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: x values are all equal");
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  return fit;
}

struct ScalingResult {
  PowerLawFit fit;
  std::vector<double> j0_values;
  std::vector<PeakResult> peaks;
};

/// Fits log t_MF against log J0, one chain per J0 from `family`, each scanned
/// over [0, window_factor / J0].
inline ScalingResult fit_tmf_scaling(std::span<const double> j0_values, const std::function<ChainSpec(double)>& family,
                                     double window_factor = 10.0, FidelityConvention convention = kDefaultConvention,
                                     std::size_t jobs = 1) {
  if (j0_values.size() < 4) throw std::invalid_argument("fit_tmf_scaling: need at least 4 J0 values");
  const auto [lo, hi] = std::minmax_element(j0_values.begin(), j0_values.end());
  if (!(*lo > 0.0) || *hi < 4.0 * *lo) throw std::invalid_argument("fit_tmf_scaling: J0 values must span a factor >= 4");
  if (!(window_factor > 0.0)) throw std::invalid_argument("fit_tmf_scaling: window factor must be > 0");

  ScalingResult out;
  out.j0_values.assign(j0_values.begin(), j0_values.end());
  out.peaks.resize(j0_values.size());
  parallel_for(j0_values.size(), jobs, [&](std::size_t i) {
    out.peaks[i] = find_peak(family(j0_values[i]), window_factor / j0_values[i], 0.0, convention);
  });
  std::vector<double> times;
  for (const auto& p : out.peaks) times.push_back(p.t_mf);
  out.fit = fit_power_law(out.j0_values, times);
  return out;
}

}  // namespace spinwire
