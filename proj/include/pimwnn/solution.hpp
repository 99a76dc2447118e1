#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pimwnn/errors.hpp"
#include "pimwnn/geometry.hpp"
#include "pimwnn/lstsq.hpp"
#include "pimwnn/wavelet_basis.hpp"

namespace pimwnn {

/// u(x) = sum_i U_i theta_i(x).
class Solution
{
public:
  Solution() = default;
  Solution(TensorBasis basis, WeightVector weights)
    : basis_(std::move(basis)), weights_(std::move(weights))
  {
    if (weights_.size() != basis_.size())
      throw InvalidArgument("Solution: weight length does not match basis size");
  }

  const TensorBasis& basis() const noexcept { return basis_; }
  const WeightVector& weights() const noexcept { return weights_; }

  double derivative(std::span<const double> point, std::span<const int> orders) const
  {
    std::vector<double> row(basis_.size());
    return derivative(point, orders, row);
  }

  /// Same, with caller-provided scratch of length basis().size().
  double derivative(std::span<const double> point, std::span<const int> orders, std::span<double> scratch) const
  {
    basis_.row_into(point, orders, scratch);
    return Eigen::Map<const Eigen::VectorXd>(scratch.data(), static_cast<Eigen::Index>(scratch.size())).dot(weights_.values);
  }

  double value(std::span<const double> point) const
  {
    const std::vector<int> zero(basis_.dim(), 0);
    return derivative(point, zero);
  }

  std::vector<double> values(const std::vector<Point>& points) const
  {
    const std::vector<int> zero(basis_.dim(), 0);
    std::vector<double> row(basis_.size());
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points)
      out.push_back(derivative(p, zero, row));
    return out;
  }

private:
  TensorBasis basis_;
  WeightVector weights_;
};

} // namespace pimwnn
