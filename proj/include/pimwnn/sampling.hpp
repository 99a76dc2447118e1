#pragma once

// Collocation point generation. Grid sampling is deterministic; uniform random
// sampling is reproducible from the seed (mt19937_64 with a portable
// integer-to-double mapping, so the point sets do not depend on the standard
// library's distribution implementation).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pimwnn/errors.hpp"
#include "pimwnn/geometry.hpp"

namespace pimwnn {

enum class SamplingStrategy
{
  GridEquispaced,
  UniformRandom
};

inline std::string to_string(SamplingStrategy s)
{
  return s == SamplingStrategy::GridEquispaced ? "grid" : "random";
}

inline SamplingStrategy parse_sampling(const std::string& s)
{
  if (s == "grid" || s == "GridEquispaced")
    return SamplingStrategy::GridEquispaced;
  if (s == "random" || s == "UniformRandom")
    return SamplingStrategy::UniformRandom;
  throw ParameterError("unknown sampling strategy '" + s + "' (expected grid or random)");
}

namespace detail {

class UnitSampler
{
public:
  explicit UnitSampler(std::uint64_t seed)
    : engine_(seed)
  {}

  /// Uniform in [0, 1).
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in the open interval (0, 1).
  double next_open()
  {
    double u = 0.0;
    while (u == 0.0)
      u = next();
    return u;
  }

private:
  std::mt19937_64 engine_;
};

/// Picks n of total indices spread evenly (total >= n).
inline std::vector<std::size_t> spread_indices(std::size_t total, std::size_t n)
{
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i)
    idx[i] = static_cast<std::size_t>((static_cast<unsigned __int128>(i) * total) / n);
  return idx;
}

/// Per-axis counts ceil(n^(1/d)), the same on every axis, so the product is at least n.
inline std::vector<std::size_t> grid_counts(std::size_t d, std::size_t n)
{
  auto m = static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(n), 1.0 / static_cast<double>(d)) - 1e-9));
  m = std::max<std::size_t>(m, 1);
  auto product = [&] {
    std::size_t total = 1;
    for (std::size_t a = 0; a < d; ++a)
      total *= m;
    return total;
  };
  while (product() < n)
    ++m;
  return std::vector<std::size_t>(d, m);
}

/// Tensor grid with coordinates lo + (i + 1) L / (m + 1) on each axis, row-major, thinned to n points.
inline std::vector<Point> open_grid(const std::vector<AxisBounds>& bounds, std::size_t n)
{
  const auto m = grid_counts(bounds.size(), n);
  std::size_t total = 1;
  for (auto c : m)
    total *= c;
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t flat : spread_indices(total, n)) {
    Point p(bounds.size());
    std::size_t rem = flat;
    for (std::size_t a = bounds.size(); a-- > 0;) {
      const std::size_t i = rem % m[a];
      rem /= m[a];
      p[a] = bounds[a].lo + bounds[a].length() * static_cast<double>(i + 1) / static_cast<double>(m[a] + 1);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

/// Point at arclength fraction s in [0, 1) along the counter-clockwise perimeter of a 2D box.
inline Point perimeter_point(const std::vector<AxisBounds>& b, double s)
{
  const double lx = b[0].length();
  const double ly = b[1].length();
  double d = s * 2.0 * (lx + ly);
  if (d < lx)
    return {b[0].lo + d, b[1].lo};
  d -= lx;
  if (d < ly)
    return {b[0].hi, b[1].lo + d};
  d -= ly;
  if (d < lx)
    return {b[0].hi - d, b[1].hi};
  d -= lx;
  return {b[0].lo, b[1].hi - std::min(d, ly)};
}

/// Box faces: n split evenly across the four sides, corners owned by the side they start.
inline std::vector<Point> box_faces(const std::vector<AxisBounds>& b, std::size_t n, SamplingStrategy strategy, UnitSampler& rng)
{
  const std::array<Point, 4> start = {Point{b[0].lo, b[1].lo}, Point{b[0].hi, b[1].lo}, Point{b[0].hi, b[1].hi}, Point{b[0].lo, b[1].hi}};
  const std::array<Point, 4> end = {start[1], start[2], start[3], start[0]};
  std::vector<Point> pts;
  pts.reserve(n);
  for (std::size_t f = 0; f < 4; ++f) {
    const std::size_t count = n / 4 + (f < n % 4 ? 1 : 0);
    for (std::size_t i = 0; i < count; ++i) {
      const double s = strategy == SamplingStrategy::GridEquispaced ? static_cast<double>(i) / static_cast<double>(count) : rng.next();
      pts.push_back({start[f][0] + s * (end[f][0] - start[f][0]), start[f][1] + s * (end[f][1] - start[f][1])});
    }
  }
  return pts;
}

} // namespace detail

/// n points strictly inside the geometry.
inline std::vector<Point> sample_interior(const Geometry& geom, std::size_t n, SamplingStrategy strategy, std::uint64_t seed = 0)
{
  if (n == 0)
    throw InvalidArgument("sample_interior: n must be at least 1");
  const auto& bounds = geom.bounds();
  detail::UnitSampler rng(seed);

  if (geom.kind() != GeometryKind::StarDomain) {
    if (strategy == SamplingStrategy::GridEquispaced)
      return detail::open_grid(bounds, n);
    std::vector<Point> pts;
    pts.reserve(n);
    while (pts.size() < n) {
      Point p(bounds.size());
      for (std::size_t a = 0; a < bounds.size(); ++a)
        p[a] = bounds[a].lo + bounds[a].length() * rng.next_open();
      pts.push_back(std::move(p));
    }
    return pts;
  }

  if (strategy == SamplingStrategy::GridEquispaced) {
    // refine a bounding-box grid until enough nodes fall inside, then thin evenly
    std::size_t m = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
    for (int attempt = 0; attempt < 64; ++attempt) {
      std::vector<Point> inside;
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
          Point p{bounds[0].lo + bounds[0].length() * static_cast<double>(i + 1) / static_cast<double>(m + 1),
                  bounds[1].lo + bounds[1].length() * static_cast<double>(j + 1) / static_cast<double>(m + 1)};
          if (geom.contains(p))
            inside.push_back(std::move(p));
        }
      if (inside.size() >= n) {
        std::vector<Point> pts;
        pts.reserve(n);
        for (auto idx : detail::spread_indices(inside.size(), n))
          pts.push_back(inside[idx]);
        return pts;
      }
      m = m + m / 8 + 1;
    }
    throw GeometryDegenerate("sample_interior: grid refinement could not place enough points inside the star domain");
  }

  std::vector<Point> pts;
  pts.reserve(n);
  std::size_t misses = 0;
  while (pts.size() < n) {
    Point p{bounds[0].lo + bounds[0].length() * rng.next(), bounds[1].lo + bounds[1].length() * rng.next()};
    if (geom.contains(p)) {
      pts.push_back(std::move(p));
      misses = 0;
    } else if (++misses >= 1'000'000) {
      throw GeometryDegenerate("sample_interior: rejection sampling failed 1e6 consecutive draws");
    }
  }
  return pts;
}

/// n points on the Dirichlet boundary. An interval always yields its two endpoints.
inline std::vector<Point> sample_boundary(const Geometry& geom, std::size_t n, SamplingStrategy strategy, std::uint64_t seed = 0)
{
  const auto& bounds = geom.bounds();
  detail::UnitSampler rng(seed ^ 0x9e3779b97f4a7c15ULL);
  switch (geom.kind()) {
    case GeometryKind::Interval:
      if (n < 2)
        throw InvalidArgument("sample_boundary: an interval needs n >= 2 boundary points");
      return {{bounds[0].lo}, {bounds[0].hi}};

    case GeometryKind::Box:
      if (n == 0)
        throw InvalidArgument("sample_boundary: n must be at least 1");
      return detail::box_faces(bounds, n, strategy, rng);

    case GeometryKind::StarDomain: {
      if (n == 0)
        throw InvalidArgument("sample_boundary: n must be at least 1");
      const auto& star = geom.star_shape();
      std::vector<Point> pts;
      pts.reserve(n);
      for (std::size_t i = 0; i < n; ++i) {
        const double theta = 2.0 * std::numbers::pi *
                             (strategy == SamplingStrategy::GridEquispaced ? static_cast<double>(i) / static_cast<double>(n) : rng.next());
        const double r = star.radius(theta);
        pts.push_back({star.cx + r * std::cos(theta), star.cy + r * std::sin(theta)});
      }
      return pts;
    }

    case GeometryKind::BoxTime: {
      if (n == 0)
        throw InvalidArgument("sample_boundary: n must be at least 1");
      const double t_end = bounds.back().hi;
      std::vector<Point> pts;
      pts.reserve(n);
      if (geom.spatial_dim() == 1) {
        for (std::size_t side = 0; side < 2; ++side) {
          const std::size_t count = n / 2 + (side < n % 2 ? 1 : 0);
          const double x = side == 0 ? bounds[0].lo : bounds[0].hi;
          for (std::size_t i = 0; i < count; ++i) {
            const double t = strategy == SamplingStrategy::GridEquispaced
                               ? t_end * static_cast<double>(i + 1) / static_cast<double>(count)
                               : t_end * (1.0 - rng.next());
            pts.push_back({x, t});
          }
        }
        return pts;
      }
      // two spatial axes: perimeter arclength times time, sampled as a 2D grid
      const std::vector<AxisBounds> space(bounds.begin(), bounds.end() - 1);
      if (strategy == SamplingStrategy::GridEquispaced) {
        const auto m = detail::grid_counts(2, n);
        const std::size_t total = m[0] * m[1];
        for (auto flat : detail::spread_indices(total, n)) {
          const std::size_t i = flat / m[1];
          const std::size_t k = flat % m[1];
          Point p = detail::perimeter_point(space, static_cast<double>(i) / static_cast<double>(m[0]));
          p.push_back(t_end * static_cast<double>(k + 1) / static_cast<double>(m[1]));
          pts.push_back(std::move(p));
        }
      } else {
        for (std::size_t i = 0; i < n; ++i) {
          Point p = detail::perimeter_point(space, rng.next());
          p.push_back(t_end * (1.0 - rng.next()));
          pts.push_back(std::move(p));
        }
      }
      return pts;
    }
  }
  return {};
}

/// n points on the t = 0 face of a space-time box, spatial boundary included.
inline std::vector<Point> sample_initial(const Geometry& geom, std::size_t n, SamplingStrategy strategy, std::uint64_t seed = 0)
{
  if (geom.kind() != GeometryKind::BoxTime)
    throw InvalidArgument("sample_initial: geometry is not time dependent");
  if (n == 0)
    throw InvalidArgument("sample_initial: n must be at least 1");
  const auto& bounds = geom.bounds();
  const std::size_t space = geom.spatial_dim();
  detail::UnitSampler rng(seed ^ 0xd1b54a32d192ed03ULL);
  std::vector<Point> pts;
  pts.reserve(n);

  if (strategy == SamplingStrategy::UniformRandom) {
    for (std::size_t i = 0; i < n; ++i) {
      Point p(space + 1, 0.0);
      for (std::size_t a = 0; a < space; ++a)
        p[a] = bounds[a].lo + bounds[a].length() * rng.next();
      pts.push_back(std::move(p));
    }
    return pts;
  }

  // closed grid lo + i L / (m - 1)
  const std::vector<AxisBounds> sb(bounds.begin(), bounds.begin() + static_cast<std::ptrdiff_t>(space));
  const auto m = detail::grid_counts(sb.size(), n);
  std::size_t total = 1;
  for (auto c : m)
    total *= c;
  for (auto flat : detail::spread_indices(total, n)) {
    Point p(space + 1, 0.0);
    std::size_t rem = flat;
    for (std::size_t a = space; a-- > 0;) {
      const std::size_t i = rem % m[a];
      rem /= m[a];
      p[a] = m[a] == 1 ? 0.5 * (sb[a].lo + sb[a].hi)
                       : sb[a].lo + sb[a].length() * static_cast<double>(i) / static_cast<double>(m[a] - 1);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

} // namespace pimwnn
