#pragma once

// Linear differential operators as sums of coefficient * mixed-derivative terms,
// and assembly of the stacked collocation system
//
//   [ PDE rows      ]       [ f   ]
//   [ boundary rows ] U  =  [ g_D ]
//   [ initial rows  ]       [ h_0 ]

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pimwnn/errors.hpp"
#include "pimwnn/geometry.hpp"
#include "pimwnn/wavelet_basis.hpp"

namespace pimwnn {

using PointFunction = std::function<double(std::span<const double>)>;

struct Term
{
  PointFunction coeff;
  std::vector<int> orders;
};

inline PointFunction constant(double c)
{
  return [c](std::span<const double>) { return c; };
}

class LinearOperator
{
public:
  LinearOperator() = default;
  explicit LinearOperator(std::vector<Term> terms)
    : terms_(std::move(terms))
  {
    validate();
  }

  /// Single term c * d^orders.
  static LinearOperator derivative(std::vector<int> orders, double c = 1.0)
  {
    return LinearOperator({Term{constant(c), std::move(orders)}});
  }

  static LinearOperator identity(std::size_t dim) { return derivative(std::vector<int>(dim, 0)); }

  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::size_t dim() const noexcept { return terms_.empty() ? 0 : terms_.front().orders.size(); }

  LinearOperator& add(Term t)
  {
    terms_.push_back(std::move(t));
    validate();
    return *this;
  }

  friend LinearOperator operator+(LinearOperator a, const LinearOperator& b)
  {
    for (const auto& t : b.terms_)
      a.terms_.push_back(t);
    a.validate();
    return a;
  }

  friend LinearOperator operator*(double alpha, LinearOperator op)
  {
    for (auto& t : op.terms_) {
      auto c = std::move(t.coeff);
      t.coeff = [alpha, c = std::move(c)](std::span<const double> p) { return alpha * c(p); };
    }
    return op;
  }

private:
  void validate() const
  {
    if (terms_.empty())
      throw InvalidArgument("linear operator needs at least one term");
    const std::size_t d = terms_.front().orders.size();
    for (const auto& t : terms_) {
      if (t.orders.size() != d)
        throw InvalidArgument("linear operator terms disagree on dimension");
      if (!t.coeff)
        throw InvalidArgument("linear operator term has no coefficient");
      for (int o : t.orders)
        if (o < 0)
          throw InvalidArgument("derivative orders must be non-negative");
    }
  }

  std::vector<Term> terms_;
};

enum class BlockKind
{
  PDE,
  Boundary,
  Initial
};

inline std::string to_string(BlockKind k)
{
  switch (k) {
    case BlockKind::PDE:
      return "pde";
    case BlockKind::Boundary:
      return "boundary";
    case BlockKind::Initial:
      return "initial";
  }
  return "unknown";
}

struct BlockTag
{
  BlockKind kind;
  std::size_t begin; // first row
  std::size_t end;   // one past the last row
};

struct CollocationSet
{
  std::vector<Point> interior;
  std::vector<double> source;
  std::vector<Point> boundary;
  std::vector<double> boundary_values;
  std::vector<Point> initial;
  std::vector<double> initial_values;

  std::size_t rows() const noexcept { return interior.size() + boundary.size() + initial.size(); }
};

struct LinearSystem
{
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::vector<BlockTag> blocks;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(matrix.cols()); }

  const BlockTag* block(BlockKind k) const
  {
    for (const auto& b : blocks)
      if (b.kind == k)
        return &b;
    return nullptr;
  }
};

enum class RowScaling
{
  None,        // rows enter as assembled
  Equilibrate  // each row and its rhs entry divided by the row's 2-norm
};

struct AssemblyOptions
{
  RowScaling scaling = RowScaling::Equilibrate;
  double pde_weight = 1.0;
  double boundary_weight = 1.0;
  double initial_weight = 1.0;
};

/// Rows coeff_t(p) * d^{orders_t} Theta(p) summed over the operator's terms, one per point.
inline Eigen::MatrixXd assemble_block(const TensorBasis& basis, const LinearOperator& op, const std::vector<Point>& points)
{
  if (op.dim() != basis.dim())
    throw InvalidArgument("assemble_block: operator dimension " + std::to_string(op.dim()) + " does not match basis dimension " +
                          std::to_string(basis.dim()));
  for (const auto& t : op.terms())
    for (int o : t.orders)
      if (o > 2)
        throw UnsupportedOrder("assemble_block: derivative order " + std::to_string(o) + " exceeds the supported maximum of 2");

  const std::size_t n = basis.size();
  const std::size_t d = basis.dim();
  Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(n));

  // per-axis tables for each order any term needs
  std::vector<std::array<bool, 3>> needed(d, {false, false, false});
  for (const auto& t : op.terms())
    for (std::size_t a = 0; a < d; ++a)
      needed[a][static_cast<std::size_t>(t.orders[a])] = true;
  std::vector<std::array<std::vector<double>, 3>> table(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t o = 0; o < 3; ++o)
      if (needed[a][o])
        table[a][o].resize(basis.axis(a).size());

  std::vector<double> acc(n);
  std::vector<double> prod(n);
  std::vector<std::vector<double>> per_axis(d);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (p.size() != d)
      throw InvalidArgument("assemble_block: point dimension does not match basis dimension");
    for (std::size_t a = 0; a < d; ++a)
      for (int o = 0; o < 3; ++o)
        if (needed[a][static_cast<std::size_t>(o)])
          basis.axis(a).eval_into(p[a], o, table[a][static_cast<std::size_t>(o)]);

    std::fill(acc.begin(), acc.end(), 0.0);
    for (const auto& t : op.terms()) {
      const double c = t.coeff(p);
      if (c == 0.0)
        continue;
      if (d == 1) {
        const auto& r = table[0][static_cast<std::size_t>(t.orders[0])];
        for (std::size_t k = 0; k < n; ++k)
          acc[k] += c * r[k];
        continue;
      }
      for (std::size_t a = 0; a < d; ++a)
        per_axis[a] = table[a][static_cast<std::size_t>(t.orders[a])];
      TensorBasis::expand(per_axis, prod);
      for (std::size_t k = 0; k < n; ++k)
        acc[k] += c * prod[k];
    }
    rows.row(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::RowVectorXd>(acc.data(), static_cast<Eigen::Index>(n));
  }
  return rows;
}

namespace detail {

inline void place_block(LinearSystem& sys, Eigen::Index& cursor, BlockKind kind, Eigen::MatrixXd rows, const std::vector<double>& values,
                        double weight, RowScaling scaling)
{
  if (static_cast<std::size_t>(rows.rows()) != values.size())
    throw InvalidArgument("assemble_system: " + to_string(kind) + " point and value counts differ");
  const Eigen::Index m = rows.rows();
  for (Eigen::Index r = 0; r < m; ++r) {
    double s = weight;
    if (scaling == RowScaling::Equilibrate) {
      const double norm = rows.row(r).norm();
      if (norm > 0.0)
        s /= norm;
    }
    sys.matrix.row(cursor + r) = s * rows.row(r);
    sys.rhs(cursor + r) = s * values[static_cast<std::size_t>(r)];
  }
  if (m > 0)
    sys.blocks.push_back({kind, static_cast<std::size_t>(cursor), static_cast<std::size_t>(cursor + m)});
  cursor += m;
}

} // namespace detail

/// Stacks PDE, boundary (pure evaluation) and initial (pure evaluation) rows.
inline LinearSystem assemble_system(const TensorBasis& basis, const LinearOperator& op, const CollocationSet& colloc,
                                    const AssemblyOptions& options = {})
{
  if (colloc.interior.empty())
    throw InvalidArgument("assemble_system: the interior collocation set is empty");
  const auto evaluation = LinearOperator::identity(basis.dim());

  LinearSystem sys;
  sys.matrix.resize(static_cast<Eigen::Index>(colloc.rows()), static_cast<Eigen::Index>(basis.size()));
  sys.rhs.resize(static_cast<Eigen::Index>(colloc.rows()));
  Eigen::Index cursor = 0;
  detail::place_block(sys, cursor, BlockKind::PDE, assemble_block(basis, op, colloc.interior), colloc.source, options.pde_weight,
                      options.scaling);
  detail::place_block(sys, cursor, BlockKind::Boundary, assemble_block(basis, evaluation, colloc.boundary), colloc.boundary_values,
                      options.boundary_weight, options.scaling);
  detail::place_block(sys, cursor, BlockKind::Initial, assemble_block(basis, evaluation, colloc.initial), colloc.initial_values,
                      options.initial_weight, options.scaling);
  return sys;
}

} // namespace pimwnn
