#pragma once

// Backward Euler + Picard for u_t + u u_x = eps u_xx (+ f) with Dirichlet data.
//
// Each Picard pass solves the spatial collocation problem
//   (1/dt) u + c u_x - eps u_xx = u_prev / dt + f,  c = previous iterate,
// in the least-squares sense. Two solvers produce the same iterates:
//
//  * Direct: assemble the full system and call the SVD driver every pass.
//  * Reduced (default): restrict the weights once per march to the numerically
//    independent span V of the collocation evaluation matrix [T0; B]. The
//    scaled reduced system then has full column rank, so each pass can be
//    solved by LSQR right-preconditioned with the R factor of an earlier QR
//    factorization; a fresh QR is taken only when LSQR stalls. This keeps a
//    1000-step, 10-pass march at N ~ 1000 within minutes.
//
// The derivative tables T0, T1, T2 and B are evaluated once per march.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "pimwnn/errors.hpp"
#include "pimwnn/lstsq.hpp"
#include "pimwnn/operator_assembly.hpp"
#include "pimwnn/problems.hpp"
#include "pimwnn/sampling.hpp"
#include "pimwnn/solution.hpp"

namespace pimwnn {

enum class PicardSolver
{
  Direct,
  Reduced
};

struct MarchConfig
{
  double dt = 0.001;
  double t_end = 1.0;
  int picard_iters = 10;
  double epsilon = 0.01 / std::numbers::pi;
  LadderSpec ladder{-1, 9};
  std::size_t n_f = 2000;
  std::size_t n_b = 2;
  double picard_tol = 1e-10;
  double rcond = -1.0; // SVD truncation (direct path, projection and reduced-span selection)
  SamplingStrategy sampling = SamplingStrategy::GridEquispaced;
  std::uint64_t seed = 42;
  PicardSolver solver = PicardSolver::Reduced;
  int lsqr_max_iters = 40;
  double lsqr_tol = 1e-14;

  void validate() const
  {
    if (!(dt > 0.0) || !(t_end > 0.0))
      throw ParameterError("march: dt and t_end must be positive");
    if (dt > t_end * (1.0 + 1e-12))
      throw ParameterError("march: dt must not exceed t_end");
    if (picard_iters < 1)
      throw ParameterError("march: picard_iters must be at least 1");
    if (!(picard_tol >= 0.0))
      throw ParameterError("march: picard_tol must be non-negative");
    if (!(epsilon >= 0.0))
      throw ParameterError("march: epsilon must be non-negative");
  }

  std::size_t steps() const { return static_cast<std::size_t>(std::llround(t_end / dt)); }
};

inline MarchConfig march_config_for(const ProblemSpec& spec)
{
  MarchConfig c;
  c.dt = spec.dt;
  c.t_end = spec.t_end;
  c.picard_iters = spec.picard_iters;
  c.epsilon = spec.parameters.count("epsilon") ? spec.parameters.at("epsilon") : c.epsilon;
  c.ladder = spec.ladders.front();
  c.n_f = spec.n_f;
  c.n_b = spec.n_b;
  c.sampling = spec.sampling;
  c.seed = spec.seed;
  return c;
}

struct Trajectory
{
  TensorBasis basis;
  std::vector<double> times;
  std::vector<WeightVector> weights_per_time;
  std::vector<int> picard_counts; // passes used per step (entry 0 is the projection)

  Solution at(std::size_t i) const { return Solution(basis, weights_per_time.at(i)); }
};

struct PicardResult
{
  WeightVector weights;
  std::vector<double> history; // sup-norm change of collocation values per pass
};

struct MarchStats
{
  std::size_t factorizations = 0;
  std::size_t lsqr_iterations = 0;
  std::size_t solves = 0;
  std::size_t reduced_rank = 0;
  double seconds = 0.0;
};

namespace detail {

struct SpatialTables
{
  std::vector<Point> interior;
  std::vector<Point> boundary;
  Eigen::MatrixXd t0, t1, t2; // interior rows, orders 0..2
  Eigen::MatrixXd b;          // boundary rows, order 0
};

inline SpatialTables build_tables(const TensorBasis& basis, const Geometry& geom, const MarchConfig& cfg)
{
  SpatialTables t;
  t.interior = sample_interior(geom, cfg.n_f, cfg.sampling, cfg.seed);
  t.boundary = sample_boundary(geom, cfg.n_b, SamplingStrategy::GridEquispaced, cfg.seed);
  t.t0 = assemble_block(basis, LinearOperator::derivative({0}), t.interior);
  t.t1 = assemble_block(basis, LinearOperator::derivative({1}), t.interior);
  t.t2 = assemble_block(basis, LinearOperator::derivative({2}), t.interior);
  t.b = assemble_block(basis, LinearOperator::derivative({0}), t.boundary);
  return t;
}

inline void check_finite(const Eigen::VectorXd& v, int pass)
{
  if (!v.allFinite())
    throw Divergence("Picard iterate " + std::to_string(pass) + " contains non-finite weights", pass);
}

/// One pass through the full system and the SVD driver.
inline Eigen::VectorXd direct_pass(const SpatialTables& t, const Eigen::VectorXd& c, const Eigen::VectorXd& rhs_pde,
                                   const Eigen::VectorXd& g, double dt, double eps, double rcond)
{
  const Eigen::Index nf = t.t0.rows();
  const Eigen::Index nb = t.b.rows();
  Eigen::MatrixXd m(nf + nb, t.t0.cols());
  Eigen::VectorXd r(nf + nb);
  m.topRows(nf) = t.t0 / dt + c.asDiagonal() * t.t1 - eps * t.t2;
  m.bottomRows(nb) = t.b;
  r.head(nf) = rhs_pde;
  r.tail(nb) = g;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm > 0.0) {
      m.row(i) /= norm;
      r(i) /= norm;
    }
  }
  return solve_dense(m, r, rcond).weights.values;
}

/// Reduced-span, preconditioned solver for the Picard passes of one march.
class ReducedPicard
{
public:
  ReducedPicard(const SpatialTables& t, double dt, double eps, double truncation, const MarchConfig& cfg, MarchStats& stats)
    : cfg_(cfg), stats_(stats)
  {
    // independent span of the evaluation rows
    Eigen::MatrixXd s(t.t0.rows() + t.b.rows(), t.t0.cols());
    s << t.t0, t.b;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(s, Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    Eigen::Index r = 0;
    while (r < sv.size() && sv(r) > truncation * sv(0))
      ++r;
    v_ = svd.matrixV().leftCols(r);
    stats_.reduced_rank = static_cast<std::size_t>(r);

    const Eigen::MatrixXd a_full = t.t0 / dt - eps * t.t2;
    p_ = a_full * v_;
    q_ = t.t1 * v_;
    t0r_ = t.t0 * v_;
    br_ = t.b * v_;
    // full-space row norms |a + c b|^2 = aa + 2 c ab + c^2 bb, so scaling matches the direct path
    aa_ = a_full.rowwise().squaredNorm();
    ab_ = (a_full.array() * t.t1.array()).rowwise().sum();
    bb_ = t.t1.rowwise().squaredNorm();
    bnorm_ = t.b.rowwise().norm();
  }

  const Eigen::MatrixXd& basis_map() const { return v_; }
  const Eigen::MatrixXd& values_map() const { return t0r_; }

  Eigen::VectorXd solve(const Eigen::VectorXd& c, const Eigen::VectorXd& rhs_pde, const Eigen::VectorXd& g, const Eigen::VectorXd& guess)
  {
    ++stats_.solves;
    const Eigen::Index nf = p_.rows();
    const Eigen::Index nb = br_.rows();
    k_.resize(nf + nb, v_.cols());
    rhs_.resize(nf + nb);
    k_.topRows(nf) = p_ + c.asDiagonal() * q_;
    k_.bottomRows(nb) = br_;
    rhs_.head(nf) = rhs_pde;
    rhs_.tail(nb) = g;
    for (Eigen::Index i = 0; i < nf; ++i) {
      const double n2 = aa_(i) + 2.0 * c(i) * ab_(i) + c(i) * c(i) * bb_(i);
      const double s = n2 > 0.0 ? 1.0 / std::sqrt(n2) : 1.0;
      k_.row(i) *= s;
      rhs_(i) *= s;
    }
    for (Eigen::Index i = 0; i < nb; ++i) {
      const double s = bnorm_(i) > 0.0 ? 1.0 / bnorm_(i) : 1.0;
      k_.row(nf + i) *= s;
      rhs_(nf + i) *= s;
    }

    if (r_.size() > 0) {
      Eigen::VectorXd z;
      if (lsqr(guess, z))
        return z;
    }
    return factor_and_solve();
  }

private:
  Eigen::VectorXd factor_and_solve()
  {
    ++stats_.factorizations;
    const auto m = static_cast<lapack_int>(k_.rows());
    const auto n = static_cast<lapack_int>(k_.cols());
    Eigen::MatrixXd qr = k_;
    Eigen::VectorXd tau(n);
    lapack_int info = LAPACKE_dgeqrf(LAPACK_COL_MAJOR, m, n, qr.data(), m, tau.data());
    if (info != 0)
      throw Error("reduced Picard solve: dgeqrf failed with info = " + std::to_string(info));
    Eigen::VectorXd y = rhs_;
    info = LAPACKE_dormqr(LAPACK_COL_MAJOR, 'L', 'T', m, 1, n, qr.data(), m, tau.data(), y.data(), m);
    if (info != 0)
      throw Error("reduced Picard solve: dormqr failed with info = " + std::to_string(info));
    r_ = qr.topRows(n).triangularView<Eigen::Upper>();
    return r_.triangularView<Eigen::Upper>().solve(y.head(n));
  }

  /// LSQR on min |K R^{-1} y - rhs|, warm-started at guess. Returns false when it stalls.
  bool lsqr(const Eigen::VectorXd& guess, Eigen::VectorXd& out)
  {
    const auto tri = r_.triangularView<Eigen::Upper>();
    auto apply = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd { return k_ * tri.solve(y); };
    auto apply_t = [&](const Eigen::VectorXd& u) -> Eigen::VectorXd {
      return r_.transpose().triangularView<Eigen::Lower>().solve(k_.transpose() * u);
    };

    const Eigen::VectorXd r0 = rhs_ - k_ * guess;
    const double bnorm = rhs_.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(k_.cols());
    Eigen::VectorXd u = r0;
    double beta = u.norm();
    if (beta == 0.0 || bnorm == 0.0) {
      out = guess;
      return true;
    }
    u /= beta;
    Eigen::VectorXd v = apply_t(u);
    double alpha = v.norm();
    if (alpha == 0.0) {
      out = guess;
      return true;
    }
    v /= alpha;
    Eigen::VectorXd w = v;
    double phibar = beta;
    double rhobar = alpha;
    double anorm2 = 0.0;
    for (int it = 1; it <= cfg_.lsqr_max_iters; ++it) {
      ++stats_.lsqr_iterations;
      u = apply(v) - alpha * u;
      beta = u.norm();
      if (beta > 0.0)
        u /= beta;
      anorm2 += alpha * alpha + beta * beta;
      v = apply_t(u) - beta * v;
      alpha = v.norm();
      if (alpha > 0.0)
        v /= alpha;
      const double rho = std::hypot(rhobar, beta);
      const double cs = rhobar / rho;
      const double sn = beta / rho;
      const double theta = sn * alpha;
      rhobar = -cs * alpha;
      const double phi = cs * phibar;
      phibar = sn * phibar;
      x += (phi / rho) * w;
      w = v - (theta / rho) * w;
      // |K^T r| / (|K| |r|) and |r| / |b|, the usual LSQR tests
      const double arnorm = phibar * alpha * std::abs(cs);
      const double rnorm = phibar;
      const double anorm = std::sqrt(anorm2);
      if (rnorm <= cfg_.lsqr_tol * bnorm || arnorm <= cfg_.lsqr_tol * anorm * rnorm || alpha == 0.0) {
        out = guess + tri.solve(x);
        return true;
      }
    }
    return false;
  }

  const MarchConfig& cfg_;
  MarchStats& stats_;
  Eigen::MatrixXd v_, p_, q_, t0r_, br_;
  Eigen::VectorXd aa_, ab_, bb_, bnorm_;
  Eigen::MatrixXd k_;
  Eigen::VectorXd rhs_;
  Eigen::MatrixXd r_;
};

inline double truncation_for(const MarchConfig& cfg, const SpatialTables& t)
{
  return cfg.rcond >= 0.0 ? cfg.rcond
                          : default_rcond(static_cast<std::size_t>(t.t0.rows() + t.b.rows()), static_cast<std::size_t>(t.t0.cols()));
}

inline std::vector<double> evaluate_at(const PointFunction& f, const std::vector<Point>& pts)
{
  std::vector<double> v;
  v.reserve(pts.size());
  for (const auto& p : pts)
    v.push_back(f(p));
  return v;
}

/// Picard passes for one step on the full weight space (direct path).
inline PicardResult picard_direct(const SpatialTables& t, const Eigen::VectorXd& prev_values, const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                                  const Eigen::VectorXd& guess, const MarchConfig& cfg)
{
  PicardResult out;
  Eigen::VectorXd u = guess;
  const Eigen::VectorXd rhs = prev_values / cfg.dt + f;
  Eigen::VectorXd values = t.t0 * u;
  Eigen::VectorXd bvalues = t.b * u;
  for (int k = 0; k < cfg.picard_iters; ++k) {
    Eigen::VectorXd next = direct_pass(t, values, rhs, g, cfg.dt, cfg.epsilon, cfg.rcond);
    check_finite(next, k);
    const Eigen::VectorXd nv = t.t0 * next;
    const Eigen::VectorXd nb = t.b * next;
    const double change = std::max((nv - values).lpNorm<Eigen::Infinity>(), nb.size() ? (nb - bvalues).lpNorm<Eigen::Infinity>() : 0.0);
    out.history.push_back(change);
    u = std::move(next);
    values = nv;
    bvalues = nb;
    if (change < cfg.picard_tol)
      break;
  }
  out.weights.values = std::move(u);
  return out;
}

/// Picard passes for one step in reduced coordinates z (weights = V z).
inline std::vector<double> picard_reduced(ReducedPicard& solver, const SpatialTables& t, const Eigen::VectorXd& prev_values, const Eigen::VectorXd& f,
                                          const Eigen::VectorXd& g, Eigen::VectorXd& z, const MarchConfig& cfg)
{
  std::vector<double> history;
  const Eigen::VectorXd rhs = prev_values / cfg.dt + f;
  const Eigen::MatrixXd bmap = t.b * solver.basis_map();
  Eigen::VectorXd values = solver.values_map() * z;
  Eigen::VectorXd bvalues = bmap * z;
  for (int k = 0; k < cfg.picard_iters; ++k) {
    Eigen::VectorXd next = solver.solve(values, rhs, g, z);
    check_finite(next, k);
    const Eigen::VectorXd nv = solver.values_map() * next;
    const Eigen::VectorXd nb = bmap * next;
    const double change = std::max((nv - values).lpNorm<Eigen::Infinity>(), nb.size() ? (nb - bvalues).lpNorm<Eigen::Infinity>() : 0.0);
    history.push_back(change);
    z = std::move(next);
    values = nv;
    bvalues = nb;
    if (change < cfg.picard_tol)
      break;
  }
  return history;
}

} // namespace detail

/// One backward-Euler step from prev. The Picard iteration starts from prev's
/// weights unless an explicit initial guess is given.
inline PicardResult picard_step(const Solution& prev, const MarchConfig& cfg, const PointFunction& f, const PointFunction& g,
                                const std::optional<WeightVector>& initial_guess = std::nullopt)
{
  cfg.validate();
  const auto& basis = prev.basis();
  if (basis.dim() != 1)
    throw InvalidArgument("picard_step: the spatial basis must be one-dimensional");
  const auto& axis = basis.axis(0);
  const Geometry geom = Geometry::interval(axis.lo(), axis.hi());
  const auto t = detail::build_tables(basis, geom, cfg);
  const Eigen::VectorXd prev_values = t.t0 * prev.weights().values;
  const auto fv = detail::evaluate_at(f, t.interior);
  const auto gv = detail::evaluate_at(g, t.boundary);
  const Eigen::VectorXd fe = Eigen::Map<const Eigen::VectorXd>(fv.data(), static_cast<Eigen::Index>(fv.size()));
  const Eigen::VectorXd ge = Eigen::Map<const Eigen::VectorXd>(gv.data(), static_cast<Eigen::Index>(gv.size()));
  const Eigen::VectorXd guess = initial_guess ? initial_guess->values : prev.weights().values;
  if (static_cast<std::size_t>(guess.size()) != basis.size())
    throw InvalidArgument("picard_step: initial guess length does not match the basis");

  if (cfg.solver == PicardSolver::Direct)
    return detail::picard_direct(t, prev_values, fe, ge, guess, cfg);

  MarchStats stats;
  detail::ReducedPicard solver(t, cfg.dt, cfg.epsilon, detail::truncation_for(cfg, t), cfg, stats);
  Eigen::VectorXd z = solver.basis_map().transpose() * guess;
  PicardResult out;
  out.history = detail::picard_reduced(solver, t, prev_values, fe, ge, z, cfg);
  out.weights.values = solver.basis_map() * z;
  return out;
}

/// Least-squares projection of the initial condition onto the basis.
inline WeightVector project_initial(const TensorBasis& basis, const detail::SpatialTables& t, const PointFunction& h0, double rcond)
{
  CollocationSet c;
  c.interior = t.interior;
  c.source = detail::evaluate_at(h0, t.interior);
  c.boundary = t.boundary;
  c.boundary_values = detail::evaluate_at(h0, t.boundary);
  const auto sys = assemble_system(basis, LinearOperator::identity(1), c);
  return solve(sys, rcond).weights;
}

/// Projection of h0 using the collocation points a march with cfg would use.
inline WeightVector project_initial(const TensorBasis& basis, const Geometry& geom, const PointFunction& h0, const MarchConfig& cfg)
{
  return project_initial(basis, detail::build_tables(basis, geom, cfg), h0, cfg.rcond);
}

inline Trajectory march(const ProblemSpec& problem, const MarchConfig& cfg, MarchStats* stats_out = nullptr)
{
  cfg.validate();
  if (!problem.nonlinear || !problem.initial)
    throw Unsupported("march: problem '" + problem.name + "' is not a nonlinear initial-value problem");
  if (problem.geometry.kind() != GeometryKind::Interval)
    throw Unsupported("march: only one spatial dimension is supported");

  const auto start = std::chrono::steady_clock::now();
  const auto& b = problem.geometry.bounds()[0];
  Trajectory traj;
  traj.basis = TensorBasis({build_ladder(cfg.ladder.j0, cfg.ladder.jmax, b.lo, b.hi)});
  const auto t = detail::build_tables(traj.basis, problem.geometry, cfg);
  const auto fv = detail::evaluate_at(problem.source, t.interior);
  const auto gv = detail::evaluate_at(problem.dirichlet, t.boundary);
  const Eigen::VectorXd fe = Eigen::Map<const Eigen::VectorXd>(fv.data(), static_cast<Eigen::Index>(fv.size()));
  const Eigen::VectorXd ge = Eigen::Map<const Eigen::VectorXd>(gv.data(), static_cast<Eigen::Index>(gv.size()));

  WeightVector u0 = project_initial(traj.basis, t, problem.initial, cfg.rcond);
  traj.times.push_back(0.0);
  traj.weights_per_time.push_back(u0);
  traj.picard_counts.push_back(0);
  const std::size_t steps = cfg.steps();

  MarchStats stats;
  if (cfg.solver == PicardSolver::Direct) {
    Eigen::VectorXd u = u0.values;
    for (std::size_t n = 1; n <= steps; ++n) {
      const Eigen::VectorXd prev_values = t.t0 * u;
      auto res = detail::picard_direct(t, prev_values, fe, ge, u, cfg);
      stats.solves += res.history.size();
      u = res.weights.values;
      traj.times.push_back(static_cast<double>(n) * cfg.dt);
      traj.weights_per_time.push_back(std::move(res.weights));
      traj.picard_counts.push_back(static_cast<int>(res.history.size()));
    }
  } else {
    detail::ReducedPicard solver(t, cfg.dt, cfg.epsilon, detail::truncation_for(cfg, t), cfg, stats);
    Eigen::VectorXd z = solver.basis_map().transpose() * u0.values;
    for (std::size_t n = 1; n <= steps; ++n) {
      const Eigen::VectorXd prev_values = solver.values_map() * z;
      const auto history = detail::picard_reduced(solver, t, prev_values, fe, ge, z, cfg);
      traj.times.push_back(static_cast<double>(n) * cfg.dt);
      traj.weights_per_time.push_back(WeightVector{solver.basis_map() * z});
      traj.picard_counts.push_back(static_cast<int>(history.size()));
    }
  }
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (stats_out)
    *stats_out = stats;
  return traj;
}

} // namespace pimwnn
