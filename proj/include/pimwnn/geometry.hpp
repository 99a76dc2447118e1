#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "pimwnn/errors.hpp"

namespace pimwnn {

using Point = std::vector<double>;

enum class GeometryKind
{
  Interval,
  Box,
  StarDomain,
  BoxTime
};

inline std::string to_string(GeometryKind k)
{
  switch (k) {
    case GeometryKind::Interval:
      return "interval";
    case GeometryKind::Box:
      return "box";
    case GeometryKind::StarDomain:
      return "star";
    case GeometryKind::BoxTime:
      return "box_time";
  }
  return "unknown";
}

struct AxisBounds
{
  double lo = 0.0;
  double hi = 1.0;

  double length() const noexcept { return hi - lo; }
};

/// Star-shaped region r < base + amplitude * sin(lobes * theta) around (cx, cy).
struct StarShape
{
  double cx = 0.5;
  double cy = 0.5;
  double base = 0.2;
  double amplitude = 0.15;
  int lobes = 5;

  double radius(double theta) const { return base + amplitude * std::sin(lobes * theta); }
  double max_radius() const { return base + std::abs(amplitude); }
};

class Geometry
{
public:
  static Geometry interval(double lo, double hi)
  {
    Geometry g;
    g.kind_ = GeometryKind::Interval;
    g.bounds_ = {{lo, hi}};
    g.validate();
    return g;
  }

  static Geometry box(std::vector<AxisBounds> bounds)
  {
    Geometry g;
    g.kind_ = GeometryKind::Box;
    g.bounds_ = std::move(bounds);
    if (g.bounds_.size() != 2)
      throw InvalidArgument("box geometry must be two-dimensional");
    g.validate();
    return g;
  }

  static Geometry star(StarShape shape)
  {
    if (!(shape.base > std::abs(shape.amplitude)))
      throw InvalidArgument("star domain radius must stay positive: base must exceed |amplitude|");
    Geometry g;
    g.kind_ = GeometryKind::StarDomain;
    g.star_ = shape;
    const double r = shape.max_radius();
    g.bounds_ = {{shape.cx - r, shape.cx + r}, {shape.cy - r, shape.cy + r}};
    g.validate();
    return g;
  }

  /// Spatial box (one or two axes) times the time interval [0, t_end]; time is the last axis.
  static Geometry box_time(std::vector<AxisBounds> space, double t_end)
  {
    if (space.empty() || space.size() > 2)
      throw InvalidArgument("box_time geometry supports one or two spatial axes");
    Geometry g;
    g.kind_ = GeometryKind::BoxTime;
    g.bounds_ = std::move(space);
    g.bounds_.push_back({0.0, t_end});
    g.validate();
    return g;
  }

  GeometryKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return bounds_.size(); }
  std::size_t spatial_dim() const noexcept { return kind_ == GeometryKind::BoxTime ? bounds_.size() - 1 : bounds_.size(); }
  bool time_dependent() const noexcept { return kind_ == GeometryKind::BoxTime; }

  /// Axis-aligned bounding box; the basis of each axis lives on these bounds.
  const std::vector<AxisBounds>& bounds() const noexcept { return bounds_; }
  const StarShape& star_shape() const noexcept { return star_; }

  /// Strict membership in the open region (for BoxTime: open in space, t in (0, T]).
  bool contains(std::span<const double> p) const
  {
    if (p.size() != dim())
      return false;
    if (kind_ == GeometryKind::StarDomain) {
      const double dx = p[0] - star_.cx;
      const double dy = p[1] - star_.cy;
      const double r = star_.radius(std::atan2(dy, dx));
      return dx * dx + dy * dy < r * r;
    }
    const std::size_t space = spatial_dim();
    for (std::size_t a = 0; a < space; ++a)
      if (!(p[a] > bounds_[a].lo && p[a] < bounds_[a].hi))
        return false;
    if (kind_ == GeometryKind::BoxTime) {
      const double t = p.back();
      return t > 0.0 && t <= bounds_.back().hi;
    }
    return true;
  }

  /// Whether p lies on the Dirichlet boundary (spatial boundary, t > 0 for BoxTime).
  bool on_boundary(std::span<const double> p, double tol = 1e-12) const
  {
    if (p.size() != dim())
      return false;
    if (kind_ == GeometryKind::StarDomain) {
      const double dx = p[0] - star_.cx;
      const double dy = p[1] - star_.cy;
      return std::abs(std::hypot(dx, dy) - star_.radius(std::atan2(dy, dx))) <= tol;
    }
    const std::size_t space = spatial_dim();
    bool on_face = false;
    for (std::size_t a = 0; a < space; ++a) {
      if (p[a] < bounds_[a].lo - tol || p[a] > bounds_[a].hi + tol)
        return false;
      if (std::abs(p[a] - bounds_[a].lo) <= tol || std::abs(p[a] - bounds_[a].hi) <= tol)
        on_face = true;
    }
    if (kind_ == GeometryKind::BoxTime) {
      const double t = p.back();
      if (!(t > tol && t <= bounds_.back().hi + tol))
        return false;
    }
    return on_face;
  }

private:
  void validate() const
  {
    for (const auto& b : bounds_)
      if (!(b.lo < b.hi))
        throw InvalidArgument("geometry bounds must satisfy lo < hi on every axis");
  }

  GeometryKind kind_ = GeometryKind::Interval;
  std::vector<AxisBounds> bounds_;
  StarShape star_;
};

} // namespace pimwnn
