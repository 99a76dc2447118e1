#pragma once

// Shannon multiresolution basis on an interval and its tensor products.
//
// A ladder with coarsest level j0 and finest level jmax holds the scaling
// functions phi_{j0,k} followed by the wavelets psi_{j,k} for j0 <= j <= jmax.
// Shifts run over k = 0 .. nodeCount(j) - 1 with nodeCount(j) = ceil(2^j) + 1,
// so every level covers both interval ends. Values and the first two
// derivatives are available everywhere.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pimwnn/errors.hpp"

namespace pimwnn {

enum class BasisKind
{
  Scaling,
  Wavelet
};

struct BasisIndex
{
  BasisKind kind = BasisKind::Scaling;
  int level = 0;
  int shift = 0;

  friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

inline void check_order(int order)
{
  if (order < 0 || order > 2)
    throw InvalidArgument("derivative order must be 0, 1 or 2, got " + std::to_string(order));
}

/// Number of shifts at level j: ceil(2^j) + 1.
inline int node_count(int level)
{
  return static_cast<int>(std::ceil(std::ldexp(1.0, level))) + 1;
}

namespace detail {

/// |u| below which sinc derivatives come from the Taylor series; the closed
/// forms lose digits to cancellation there.
inline constexpr double sinc_series_radius = 0.05;

/// Taylor series of the order-th derivative of sinc (terms through p^14, p = pi u).
inline double sinc_series(double u, int order)
{
  constexpr double pi = std::numbers::pi;
  const double p = pi * u;
  // sinc(u) = sum_n (-1)^n p^{2n} / (2n+1)!, differentiated term by term in u
  double sum = 0.0;
  double inv_fact = 1.0; // 1 / (2n+1)!
  for (int n = 0; n <= 7; ++n) {
    if (n > 0)
      inv_fact /= static_cast<double>((2 * n) * (2 * n + 1));
    const int degree = 2 * n;
    if (degree < order)
      continue;
    double falling = 1.0;
    for (int m = 0; m < order; ++m)
      falling *= static_cast<double>(degree - m);
    const double term = inv_fact * falling * std::pow(p, degree - order);
    sum += (n % 2 == 0) ? term : -term;
  }
  return sum * std::pow(pi, order);
}

inline double sinc_closed(double u, int order)
{
  constexpr double pi = std::numbers::pi;
  const double p = pi * u;
  const double s = std::sin(p);
  const double c = std::cos(p);
  switch (order) {
    case 0:
      return s / p;
    case 1:
      return pi * (p * c - s) / (p * p);
    default:
      return pi * pi * (2.0 * s - 2.0 * p * c - p * p * s) / (p * p * p);
  }
}

} // namespace detail

/// order-th derivative of sinc(u) = sin(pi u) / (pi u).
inline double sinc_deriv(double u, int order)
{
  check_order(order);
  return std::abs(u) < detail::sinc_series_radius ? detail::sinc_series(u, order) : detail::sinc_closed(u, order);
}

namespace detail {

inline double pow2(int level) { return std::ldexp(1.0, level); }

} // namespace detail

/// d^order/dx^order of phi_{j,k}(x) = 2^{j/2} sinc(2^j (x - lo) / L - k).
inline double scaling_eval(int level, int shift, double x, double lo, double hi, int order)
{
  check_order(order);
  const double scale = detail::pow2(level) / (hi - lo);
  const double s = scale * (x - lo) - shift;
  const double chain = order == 0 ? 1.0 : (order == 1 ? scale : scale * scale);
  return std::sqrt(detail::pow2(level)) * sinc_deriv(s, order) * chain;
}

/// Shannon mother wavelet psi(s) = sinc(s/2) cos(3 pi s / 2) and its derivatives in s.
inline double shannon_wavelet(double s, int order)
{
  constexpr double w = 1.5 * std::numbers::pi;
  const double c = std::cos(w * s);
  if (order == 0)
    return sinc_deriv(0.5 * s, 0) * c;
  const double sn = std::sin(w * s);
  const double f0 = sinc_deriv(0.5 * s, 0);
  const double f1 = 0.5 * sinc_deriv(0.5 * s, 1);
  if (order == 1)
    return f1 * c - w * f0 * sn;
  const double f2 = 0.25 * sinc_deriv(0.5 * s, 2);
  return f2 * c - 2.0 * w * f1 * sn - w * w * f0 * c;
}

/// d^order/dx^order of psi_{j,k}(x) = 2^{j/2} psi(2^j (x - lo) / L - k).
inline double wavelet_eval(int level, int shift, double x, double lo, double hi, int order)
{
  check_order(order);
  const double scale = detail::pow2(level) / (hi - lo);
  const double s = scale * (x - lo) - shift;
  const double chain = order == 0 ? 1.0 : (order == 1 ? scale : scale * scale);
  return std::sqrt(detail::pow2(level)) * shannon_wavelet(s, order) * chain;
}

/// One-dimensional ladder of scaling and wavelet functions on [lo, hi].
class Basis1D
{
public:
  Basis1D() = default;

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  int j0() const noexcept { return j0_; }
  int jmax() const noexcept { return jmax_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<BasisIndex>& indices() const noexcept { return indices_; }

  /// Writes the order-th derivative of every function at x into out (length size()).
  void eval_into(double x, int order, std::span<double> out) const
  {
    check_order(order);
    if (out.size() != indices_.size())
      throw InvalidArgument("eval_into: output length does not match basis size");
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      const double s = scale_[i] * (x - lo_) - indices_[i].shift;
      double v = indices_[i].kind == BasisKind::Scaling ? sinc_deriv(s, order) : shannon_wavelet(s, order);
      if (order >= 1)
        v *= scale_[i];
      if (order == 2)
        v *= scale_[i];
      out[i] = amplitude_[i] * v;
    }
  }

  friend Basis1D build_ladder(int j0, int jmax, double lo, double hi);

private:
  double lo_ = 0.0;
  double hi_ = 1.0;
  int j0_ = 0;
  int jmax_ = 0;
  std::vector<BasisIndex> indices_;
  std::vector<double> scale_;
  std::vector<double> amplitude_;
};

/// Enumerates scaling functions at j0, then wavelets at j0..jmax, each level by shift.
inline Basis1D build_ladder(int j0, int jmax, double lo, double hi)
{
  if (j0 > jmax)
    throw InvalidLadder("invalid ladder: j0 = " + std::to_string(j0) + " exceeds jmax = " + std::to_string(jmax));
  if (!(lo < hi))
    throw InvalidArgument("build_ladder: lo must be strictly less than hi");
  if (jmax > 24 || j0 < -30)
    throw InvalidLadder("invalid ladder: levels outside the supported range [-30, 24]");

  Basis1D b;
  b.lo_ = lo;
  b.hi_ = hi;
  b.j0_ = j0;
  b.jmax_ = jmax;
  const double length = hi - lo;
  auto push = [&](BasisKind kind, int level) {
    const int count = node_count(level);
    const double scale = detail::pow2(level) / length;
    const double amplitude = std::sqrt(detail::pow2(level));
    for (int k = 0; k < count; ++k) {
      b.indices_.push_back({kind, level, k});
      b.scale_.push_back(scale);
      b.amplitude_.push_back(amplitude);
    }
  };
  push(BasisKind::Scaling, j0);
  for (int j = j0; j <= jmax; ++j)
    push(BasisKind::Wavelet, j);
  return b;
}

/// Row Theta(x) of order-th derivatives, in ladder order.
inline std::vector<double> eval_row(const Basis1D& basis, double x, int order)
{
  std::vector<double> row(basis.size());
  basis.eval_into(x, order, row);
  return row;
}

/// Tensor product of per-axis ladders; functions are ordered row-major over
/// axis index tuples (last axis fastest).
class TensorBasis
{
public:
  TensorBasis() = default;
  explicit TensorBasis(std::vector<Basis1D> axes)
    : axes_(std::move(axes))
  {
    if (axes_.empty())
      throw InvalidArgument("TensorBasis needs at least one axis");
  }

  std::size_t dim() const noexcept { return axes_.size(); }
  const std::vector<Basis1D>& axes() const noexcept { return axes_; }
  const Basis1D& axis(std::size_t a) const { return axes_.at(a); }

  std::size_t size() const noexcept
  {
    std::size_t n = 1;
    for (const auto& a : axes_)
      n *= a.size();
    return n;
  }

  /// Writes the mixed derivative row at point into out (length size()).
  void row_into(std::span<const double> point, std::span<const int> orders, std::span<double> out) const
  {
    if (point.size() != axes_.size() || orders.size() != axes_.size())
      throw InvalidArgument("tensor_row: point/orders dimension does not match the number of axes");
    if (out.size() != size())
      throw InvalidArgument("tensor_row: output length does not match basis size");

    if (axes_.size() == 1) {
      axes_[0].eval_into(point[0], orders[0], out);
      return;
    }

    std::vector<std::vector<double>> per_axis(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) {
      per_axis[a].resize(axes_[a].size());
      axes_[a].eval_into(point[a], orders[a], per_axis[a]);
    }
    expand(per_axis, out);
  }

  /// Row-major outer product of per-axis rows.
  static void expand(const std::vector<std::vector<double>>& per_axis, std::span<double> out)
  {
    std::size_t filled = 1;
    out[0] = 1.0;
    for (const auto& row : per_axis) {
      // out[0..filled) holds the product over earlier axes; widen in place from the back
      const std::size_t n = row.size();
      for (std::size_t i = filled; i-- > 0;) {
        const double head = out[i];
        for (std::size_t k = n; k-- > 0;)
          out[i * n + k] = head * row[k];
      }
      filled *= n;
    }
  }

private:
  std::vector<Basis1D> axes_;
};

inline std::vector<double> tensor_row(const TensorBasis& basis, std::span<const double> point, std::span<const int> orders)
{
  std::vector<double> row(basis.size());
  basis.row_into(point, orders, row);
  return row;
}

} // namespace pimwnn
