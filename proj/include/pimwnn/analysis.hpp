#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "pimwnn/errors.hpp"
#include "pimwnn/geometry.hpp"

namespace pimwnn {

struct ErrorReport
{
  double relative_l2 = 0.0;
  double max_abs = 0.0;
  std::vector<Point> grid;
  std::vector<double> pointwise; // numeric - exact
};

struct Spectrum
{
  std::vector<int> wavenumbers;
  std::vector<double> amplitudes;
};

/// |numeric - exact|_2 / |exact|_2
inline double relative_l2(std::span<const double> numeric, std::span<const double> exact)
{
  if (numeric.size() != exact.size() || exact.empty())
    throw InvalidArgument("relative_l2: inputs must have equal, nonzero length");
  // scaled accumulation keeps the ratio exact under uniform rescaling of both inputs
  double scale_e = 0.0;
  double scale_d = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    scale_e = std::max(scale_e, std::abs(exact[i]));
    scale_d = std::max(scale_d, std::abs(numeric[i] - exact[i]));
  }
  if (scale_e == 0.0)
    throw DegenerateReference("relative_l2: the exact reference has zero norm");
  if (scale_d == 0.0)
    return 0.0;
  double se = 0.0;
  double sd = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    const double e = exact[i] / scale_e;
    const double d = (numeric[i] - exact[i]) / scale_d;
    se += e * e;
    sd += d * d;
  }
  return (scale_d / scale_e) * std::sqrt(sd / se);
}

inline ErrorReport error_report(std::vector<Point> grid, std::span<const double> numeric, std::span<const double> exact)
{
  if (grid.size() != numeric.size())
    throw InvalidArgument("error_report: grid and value lengths differ");
  ErrorReport r;
  r.relative_l2 = relative_l2(numeric, exact);
  r.pointwise.resize(numeric.size());
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    r.pointwise[i] = numeric[i] - exact[i];
    r.max_abs = std::max(r.max_abs, std::abs(r.pointwise[i]));
  }
  r.grid = std::move(grid);
  return r;
}

/// One-sided DFT magnitudes |X_k|, k = 0..M/2, of equispaced samples.
inline Spectrum amplitude_spectrum(std::span<const double> samples)
{
  const std::size_t m = samples.size();
  if (m < 2)
    throw InvalidArgument("amplitude_spectrum: need at least two samples");
  std::vector<double> in(samples.begin(), samples.end());
  const std::size_t half = m / 2 + 1;
  auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * half));
  // the planner is not thread safe; FFTW_ESTIMATE leaves the input alone and plans deterministically
  static std::mutex planner;
  fftw_plan plan = nullptr;
  {
    std::lock_guard lock(planner);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in.data(), out, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  Spectrum s;
  s.wavenumbers.resize(half);
  s.amplitudes.resize(half);
  for (std::size_t k = 0; k < half; ++k) {
    s.wavenumbers[k] = static_cast<int>(k);
    s.amplitudes[k] = std::hypot(out[k][0], out[k][1]);
  }
  {
    std::lock_guard lock(planner);
    fftw_destroy_plan(plan);
  }
  fftw_free(out);
  return s;
}

/// Largest k such that every bin <= k whose exact amplitude exceeds floor * peak
/// satisfies |numeric - exact| <= rel_tol * exact. Returns -1 if bin 0 already fails.
inline int spectrum_agreement_band(const Spectrum& exact, const Spectrum& numeric, double rel_tol = 0.2, double floor = 0.01)
{
  if (exact.amplitudes.size() != numeric.amplitudes.size())
    throw InvalidArgument("spectrum_agreement_band: spectra have different lengths");
  const double peak = exact.amplitudes.empty() ? 0.0 : *std::max_element(exact.amplitudes.begin(), exact.amplitudes.end());
  for (std::size_t k = 0; k < exact.amplitudes.size(); ++k) {
    const double e = exact.amplitudes[k];
    if (e <= floor * peak)
      continue;
    if (std::abs(numeric.amplitudes[k] - e) > rel_tol * e)
      return static_cast<int>(k) - 1;
  }
  return static_cast<int>(exact.amplitudes.size()) - 1;
}

/// Highest wavenumber whose exact amplitude exceeds floor * peak.
inline int dominant_support(const Spectrum& exact, double floor = 0.01)
{
  const double peak = exact.amplitudes.empty() ? 0.0 : *std::max_element(exact.amplitudes.begin(), exact.amplitudes.end());
  int last = -1;
  for (std::size_t k = 0; k < exact.amplitudes.size(); ++k)
    if (exact.amplitudes[k] > floor * peak)
      last = static_cast<int>(k);
  return last;
}

/// Equispaced closed grid with n points on [lo, hi].
inline std::vector<double> linspace(double lo, double hi, std::size_t n)
{
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1)
    v.back() = hi;
  return v;
}

/// Default error grid: n1d points in 1D, n2d per axis otherwise (row-major, last axis
/// fastest); star domains keep only the grid nodes inside the flower.
inline std::vector<Point> evaluation_grid(const Geometry& geom, std::size_t n1d = 1000, std::size_t n2d = 100)
{
  const auto& b = geom.bounds();
  std::vector<Point> pts;
  if (b.size() == 1) {
    for (double x : linspace(b[0].lo, b[0].hi, n1d))
      pts.push_back({x});
    return pts;
  }
  std::vector<std::vector<double>> axes;
  for (const auto& ab : b)
    axes.push_back(linspace(ab.lo, ab.hi, n2d));
  std::size_t total = 1;
  for (const auto& a : axes)
    total *= a.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    Point p(axes.size());
    std::size_t rem = flat;
    for (std::size_t a = axes.size(); a-- > 0;) {
      p[a] = axes[a][rem % axes[a].size()];
      rem /= axes[a].size();
    }
    if (geom.kind() == GeometryKind::StarDomain && !geom.contains(p))
      continue;
    pts.push_back(std::move(p));
  }
  return pts;
}

/// n spatial points at the final time of a space-time geometry.
inline std::vector<Point> final_time_slice(const Geometry& geom, std::size_t n = 1000)
{
  if (geom.kind() != GeometryKind::BoxTime || geom.spatial_dim() != 1)
    throw InvalidArgument("final_time_slice: needs a space-time geometry with one spatial axis");
  const auto& b = geom.bounds();
  std::vector<Point> pts;
  for (double x : linspace(b[0].lo, b[0].hi, n))
    pts.push_back({x, b.back().hi});
  return pts;
}

} // namespace pimwnn
