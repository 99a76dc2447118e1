#pragma once

// End-to-end solve of a linear registry problem: sample, assemble, solve, evaluate.

#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "pimwnn/analysis.hpp"
#include "pimwnn/lstsq.hpp"
#include "pimwnn/operator_assembly.hpp"
#include "pimwnn/problems.hpp"
#include "pimwnn/sampling.hpp"
#include "pimwnn/solution.hpp"

namespace pimwnn {

struct SolveSettings
{
  std::vector<LadderSpec> ladders;
  std::size_t n_f = 0;
  std::size_t n_b = 0;
  std::size_t n_t = 0;
  SamplingStrategy sampling = SamplingStrategy::GridEquispaced;          // interior points
  SamplingStrategy boundary_sampling = SamplingStrategy::GridEquispaced; // boundary and initial points
  std::uint64_t seed = 42;
  double rcond = -1.0;
  AssemblyOptions assembly;
};

inline SolveSettings default_settings(const ProblemSpec& spec)
{
  SolveSettings s;
  s.ladders = spec.ladders;
  s.n_f = spec.n_f;
  s.n_b = spec.n_b;
  s.n_t = spec.n_t;
  s.sampling = spec.sampling;
  s.seed = spec.seed;
  s.rcond = spec.rcond;
  return s;
}

inline CollocationSet build_collocation(const ProblemSpec& spec, const SolveSettings& settings)
{
  CollocationSet c;
  c.interior = sample_interior(spec.geometry, settings.n_f, settings.sampling, settings.seed);
  for (const auto& p : c.interior)
    c.source.push_back(spec.source(p));
  if (settings.n_b > 0) {
    c.boundary = sample_boundary(spec.geometry, settings.n_b, settings.boundary_sampling, settings.seed);
    for (const auto& p : c.boundary)
      c.boundary_values.push_back(spec.dirichlet(p));
  }
  if (spec.geometry.time_dependent() && settings.n_t > 0) {
    c.initial = sample_initial(spec.geometry, settings.n_t, settings.boundary_sampling, settings.seed);
    for (const auto& p : c.initial)
      c.initial_values.push_back(spec.initial(p));
  }
  return c;
}

struct LinearRun
{
  Solution solution;
  SolveReport report;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double assembly_seconds = 0.0;
  double total_seconds = 0.0;
};

inline LinearRun solve_problem(const ProblemSpec& spec, const SolveSettings& settings)
{
  if (spec.nonlinear || !spec.op)
    throw Unsupported("problem '" + spec.name + "' is nonlinear; use the time marcher");
  const auto start = std::chrono::steady_clock::now();
  auto basis = default_basis(spec, settings.ladders);
  const auto colloc = build_collocation(spec, settings);
  const auto system = assemble_system(basis, *spec.op, colloc, settings.assembly);
  const auto assembled = std::chrono::steady_clock::now();
  auto [weights, report] = solve(system, settings.rcond);

  LinearRun run;
  run.rows = system.rows();
  run.cols = system.cols();
  run.report = report;
  run.solution = Solution(std::move(basis), std::move(weights));
  run.assembly_seconds = std::chrono::duration<double>(assembled - start).count();
  run.total_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

inline LinearRun solve_problem(const ProblemSpec& spec)
{
  return solve_problem(spec, default_settings(spec));
}

/// Errors of a solution against the exact solution on the given points.
inline ErrorReport evaluate_error(const ProblemSpec& spec, const Solution& solution, std::vector<Point> grid)
{
  const auto numeric = solution.values(grid);
  std::vector<double> exact;
  exact.reserve(grid.size());
  for (const auto& p : grid)
    exact.push_back(exact_eval(spec, p));
  return error_report(std::move(grid), numeric, exact);
}

inline ErrorReport evaluate_error(const ProblemSpec& spec, const Solution& solution)
{
  return evaluate_error(spec, solution, evaluation_grid(spec.geometry));
}

} // namespace pimwnn
