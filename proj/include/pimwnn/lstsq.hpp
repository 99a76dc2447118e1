#pragma once

// Dense least squares via LAPACK's divide-and-conquer SVD driver (dgelsd):
// minimum-norm solution, singular values below rcond * s_max dropped.

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "pimwnn/errors.hpp"
#include "pimwnn/operator_assembly.hpp"

namespace pimwnn {

struct WeightVector
{
  Eigen::VectorXd values;

  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
};

struct SolveReport
{
  double residual_norm = 0.0;
  int rank = 0;
  double condition_estimate = 0.0; // s_max / smallest retained singular value
  double elapsed_seconds = 0.0;
};

struct SolveResult
{
  WeightVector weights;
  SolveReport report;
};

/// eps * max(rows, cols)
inline double default_rcond(std::size_t rows, std::size_t cols)
{
  return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(rows, cols));
}

/// Minimum-norm solution of min |M U - b|_2. A negative rcond selects default_rcond.
inline SolveResult solve_dense(const Eigen::MatrixXd& matrix, const Eigen::VectorXd& rhs, double rcond = -1.0)
{
  const auto start = std::chrono::steady_clock::now();
  const Eigen::Index m = matrix.rows();
  const Eigen::Index n = matrix.cols();
  if (m < 1 || n < 1)
    throw InvalidArgument("solve: system must have at least one row and one column");
  if (rhs.size() != m)
    throw InvalidArgument("solve: rhs length does not match the row count");
  if (!matrix.allFinite() || !rhs.allFinite())
    throw InvalidInput("solve: matrix or rhs contains non-finite entries");
  if (rcond < 0.0)
    rcond = default_rcond(static_cast<std::size_t>(m), static_cast<std::size_t>(n));

  Eigen::MatrixXd a = matrix; // column-major, destroyed by LAPACK
  const Eigen::Index ldb = std::max(m, n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ldb);
  b.head(m) = rhs;
  std::vector<double> s(static_cast<std::size_t>(std::min(m, n)));
  lapack_int rank = 0;
  const lapack_int info = LAPACKE_dgelsd(LAPACK_COL_MAJOR, static_cast<lapack_int>(m), static_cast<lapack_int>(n), 1, a.data(),
                                         static_cast<lapack_int>(m), b.data(), static_cast<lapack_int>(ldb), s.data(), rcond, &rank);
  if (info != 0)
    throw Error("solve: dgelsd failed with info = " + std::to_string(info));

  SolveResult out;
  out.weights.values = b.head(n);
  out.report.rank = static_cast<int>(rank);
  out.report.condition_estimate = rank > 0 ? s.front() / s[static_cast<std::size_t>(rank - 1)] : std::numeric_limits<double>::infinity();
  out.report.residual_norm = (matrix * out.weights.values - rhs).norm();
  out.report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline SolveResult solve(const LinearSystem& system, double rcond = -1.0)
{
  return solve_dense(system.matrix, system.rhs, rcond);
}

/// M U - b, row by row.
inline Eigen::VectorXd residual(const LinearSystem& system, const WeightVector& weights)
{
  if (weights.values.size() != system.matrix.cols())
    throw InvalidArgument("residual: weight length " + std::to_string(weights.values.size()) + " does not match column count " +
                          std::to_string(system.matrix.cols()));
  if (system.rhs.size() != system.matrix.rows())
    throw InvalidArgument("residual: rhs length does not match the row count");
  return system.matrix * weights.values - system.rhs;
}

} // namespace pimwnn
