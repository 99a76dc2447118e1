#include <algorithm>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "pimwnn/analysis.hpp"
#include "pimwnn/operator_assembly.hpp"
#include "pimwnn/problems.hpp"
#include "pimwnn/timestepper.hpp"

using namespace pimwnn;

namespace {

constexpr double pi = std::numbers::pi;

PointFunction zero() { return [](std::span<const double>) { return 0.0; }; }

MarchConfig small_config()
{
  MarchConfig c;
  c.ladder = {0, 5};
  c.n_f = 200;
  c.dt = 0.01;
  c.t_end = 0.03;
  return c;
}

Solution projected(const TensorBasis& basis, const PointFunction& h0, const MarchConfig& cfg)
{
  const auto& ax = basis.axis(0);
  return Solution(basis, project_initial(basis, Geometry::interval(ax.lo(), ax.hi()), h0, cfg));
}

TensorBasis interval_basis(const MarchConfig& cfg) { return TensorBasis({build_ladder(cfg.ladder.j0, cfg.ladder.jmax, -1.0, 1.0)}); }

double sup_diff(const Solution& a, const Solution& b, const std::vector<Point>& grid)
{
  const auto va = a.values(grid);
  const auto vb = b.values(grid);
  double d = 0.0;
  for (std::size_t i = 0; i < va.size(); ++i)
    d = std::max(d, std::abs(va[i] - vb[i]));
  return d;
}

std::vector<Point> line(std::size_t n)
{
  std::vector<Point> g;
  for (double x : linspace(-1.0, 1.0, n))
    g.push_back({x});
  return g;
}

} // namespace

TEST(MarchConfig, Validation)
{
  MarchConfig c;
  EXPECT_NO_THROW(c.validate());
  c.dt = 2.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = MarchConfig{};
  c.picard_iters = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = MarchConfig{};
  c.dt = -1e-3;
  EXPECT_THROW(c.validate(), ParameterError);
  c = MarchConfig{};
  c.picard_tol = -1.0;
  EXPECT_THROW(c.validate(), ParameterError);
  EXPECT_EQ(MarchConfig{}.steps(), 1000u);
}

TEST(PicardStep, ZeroFixedPoint)
{
  for (auto solver : {PicardSolver::Direct, PicardSolver::Reduced}) {
    auto cfg = small_config();
    cfg.solver = solver;
    cfg.picard_iters = 3;
    const auto basis = interval_basis(cfg);
    const Solution prev(basis, WeightVector{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()))});
    const auto res = picard_step(prev, cfg, zero(), zero());
    EXPECT_EQ(res.weights.values.lpNorm<Eigen::Infinity>(), 0.0);
    ASSERT_FALSE(res.history.empty());
    for (double h : res.history)
      EXPECT_EQ(h, 0.0);
  }
}

TEST(PicardStep, FrozenConvectionIsAHeatStep)
{
  // with U^0 = 0 and one pass, the step solves (1/dt) u - eps u_xx = u_prev / dt,
  // which the stationary assembler can build independently
  auto cfg = small_config();
  cfg.picard_iters = 1;
  cfg.epsilon = 0.05;
  const auto basis = interval_basis(cfg);
  const auto h0 = [](std::span<const double> p) { return std::sin(pi * p[0]) + 0.3 * std::cos(0.5 * pi * p[0]); };
  const auto g = [](std::span<const double> p) { return 0.3 * std::cos(0.5 * pi * p[0]); };
  const auto prev = projected(basis, h0, cfg);

  const auto tables = detail::build_tables(basis, Geometry::interval(-1.0, 1.0), cfg);
  CollocationSet c;
  c.interior = tables.interior;
  for (const auto& p : c.interior)
    c.source.push_back(prev.value(p) / cfg.dt);
  c.boundary = tables.boundary;
  for (const auto& p : c.boundary)
    c.boundary_values.push_back(g(p));
  // the marcher equilibrates its rows, as the default assembly does
  const auto op = LinearOperator({Term{constant(1.0 / cfg.dt), {0}}, Term{constant(-cfg.epsilon), {2}}});
  const Solution oracle(basis, solve(assemble_system(basis, op, c), cfg.rcond).weights);

  const auto grid = line(1000);
  const auto want = oracle.values(grid);
  for (auto solver : {PicardSolver::Direct, PicardSolver::Reduced}) {
    cfg.solver = solver;
    const WeightVector frozen{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()))};
    const Solution got(basis, picard_step(prev, cfg, zero(), g, frozen).weights);
    EXPECT_LE(relative_l2(got.values(grid), want), 1e-6) << (solver == PicardSolver::Direct ? "direct" : "reduced");
  }
}

TEST(PicardStep, ReducedMatchesDirect)
{
  auto cfg = small_config();
  cfg.ladder = {-1, 6};
  cfg.n_f = 400;
  cfg.dt = 0.001;
  const auto basis = interval_basis(cfg);
  const auto prev = projected(basis, make_problem("burgers").initial, cfg);
  const auto grid = line(1000);
  cfg.solver = PicardSolver::Direct;
  const Solution a(basis, picard_step(prev, cfg, zero(), zero()).weights);
  cfg.solver = PicardSolver::Reduced;
  const Solution b(basis, picard_step(prev, cfg, zero(), zero()).weights);
  EXPECT_LE(relative_l2(b.values(grid), a.values(grid)), 1e-8);
}

TEST(PicardStep, ContractsAtTheFirstBurgersStep)
{
  const auto spec = make_problem("burgers");
  auto cfg = march_config_for(spec);
  cfg.picard_tol = 0.0;
  const auto basis = interval_basis(cfg);
  const auto prev = projected(basis, spec.initial, cfg);
  const auto res = picard_step(prev, cfg, spec.source, spec.dirichlet);
  ASSERT_EQ(res.history.size(), 10u);
  EXPECT_LT(res.history.back(), res.history.front());
  // past the second pass the change never grows, up to round-off near convergence
  for (std::size_t k = 2; k < res.history.size(); ++k)
    EXPECT_LE(res.history[k], res.history[k - 1] + 1e-12) << "pass " << k;
}

TEST(PicardStep, RejectsBadInput)
{
  const auto cfg = small_config();
  const auto basis = interval_basis(cfg);
  const Solution prev(basis, WeightVector{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.size()))});
  EXPECT_THROW(picard_step(prev, cfg, zero(), zero(), WeightVector{Eigen::VectorXd::Zero(3)}), InvalidArgument);
  auto bad = cfg;
  bad.picard_iters = 0;
  EXPECT_THROW(picard_step(prev, bad, zero(), zero()), ParameterError);
}

TEST(March, Bookkeeping)
{
  auto cfg = small_config();
  const auto traj = march(make_problem("burgers"), cfg);
  ASSERT_EQ(traj.times.size(), 4u);
  EXPECT_EQ(traj.weights_per_time.size(), 4u);
  EXPECT_EQ(traj.times[0], 0.0);
  for (std::size_t n = 0; n < traj.times.size(); ++n)
    EXPECT_DOUBLE_EQ(traj.times[n], static_cast<double>(n) * cfg.dt);
  EXPECT_THROW(march(make_problem("diff1d"), cfg), Unsupported);
}

TEST(March, InitialProjection)
{
  const auto spec = make_problem("burgers");
  const auto cfg = march_config_for(spec);
  const auto u0 = projected(interval_basis(cfg), spec.initial, cfg);
  const auto grid = line(1000);
  std::vector<double> exact;
  for (const auto& p : grid)
    exact.push_back(-std::sin(pi * p[0]));
  EXPECT_LE(relative_l2(u0.values(grid), exact), 1e-6);
}

// ---------------------------------------------------------------------------
// invariants

TEST(TimestepperProperty, ConservationAndMaximumPrinciple)
{
  const auto spec = make_problem("burgers");
  auto cfg = march_config_for(spec);
  cfg.t_end = 0.1;
  const auto traj = march(spec, cfg);
  const auto grid = line(2001);
  const double h = 2.0 / 2000;
  auto integrals = [&](const Solution& s) {
    const auto v = s.values(grid);
    double signed_sum = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = (i == 0 || i + 1 == v.size()) ? 0.5 * h : h;
      signed_sum += w * v[i];
      abs_sum += w * std::abs(v[i]);
    }
    return std::pair{signed_sum, abs_sum};
  };
  // -sin(pi x) integrates to zero, so the relative scale is its L1 norm
  const auto [i0, a0] = integrals(traj.at(0));
  const double scale = std::max(std::abs(i0), a0);
  double peak0 = 0.0;
  for (const auto& p : grid)
    peak0 = std::max(peak0, std::abs(spec.initial(p)));
  for (std::size_t n = 1; n < traj.times.size(); ++n) {
    const auto s = traj.at(n);
    const auto [in, an] = integrals(s);
    EXPECT_LE(std::abs(in - i0) / scale, 1e-2 * traj.times[n]) << "t=" << traj.times[n];
    for (double v : s.values(grid))
      ASSERT_LE(std::abs(v), peak0 + 1e-2) << "t=" << traj.times[n];
  }
}

TEST(TimestepperProperty, FirstOrderInTime)
{
  const auto spec = make_problem("burgers");
  auto cfg = march_config_for(spec);
  cfg.t_end = 0.1;
  std::vector<Solution> finals;
  for (double dt : {0.004, 0.002, 0.001}) {
    cfg.dt = dt;
    finals.push_back(march(spec, cfg).at(static_cast<std::size_t>(std::llround(0.1 / dt))));
  }
  const auto grid = line(2001);
  const double coarse = sup_diff(finals[0], finals[1], grid);
  const double fine = sup_diff(finals[1], finals[2], grid);
  const double ratio = coarse / fine;
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.5);
}
