#pragma once

// Configuration-driven runs, benchmark tables and the registry listing.
//
// Artifacts of one run land in <root>/<output.dir>, where root is
// $PIMWNN_OUTPUT_ROOT or ./output:
//   solution.csv   coordinates..., u_num, u_exact (u_ref for the Burgers reference points)
//   error.csv      coordinates..., error
//   spectrum.csv   k, amp_num, amp_exact (one-dimensional stationary problems)
//   trajectory.csv t, x, u (marched problems)
//   summary.json

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "pimwnn/analysis.hpp"
#include "pimwnn/config.hpp"
#include "pimwnn/errors.hpp"
#include "pimwnn/pipeline.hpp"
#include "pimwnn/problems.hpp"
#include "pimwnn/timestepper.hpp"

#ifndef PIMWNN_SOURCE_DIR
#define PIMWNN_SOURCE_DIR "."
#endif

namespace pimwnn {

namespace fs = std::filesystem;

/// An error annotated with the pipeline stage that raised it.
class StageError : public Error
{
public:
  StageError(std::string stage, const std::string& what)
    : Error(stage + ": " + what), stage_(std::move(stage))
  {}

  const std::string& stage() const noexcept { return stage_; }

private:
  std::string stage_;
};

struct RunArtifacts
{
  fs::path dir;
  std::vector<fs::path> files;
  nlohmann::json summary;
  double relative_l2 = std::numeric_limits<double>::quiet_NaN();
  double final_time_l2 = std::numeric_limits<double>::quiet_NaN(); // space-time problems only
  double wall_seconds = 0.0;
};

inline fs::path output_root()
{
  if (const char* env = std::getenv("PIMWNN_OUTPUT_ROOT"); env != nullptr && *env != '\0')
    return env;
  return "output";
}

inline std::string format_real(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace detail {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f())
{
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

inline std::vector<std::string> axis_names(const Geometry& g)
{
  std::vector<std::string> names = {"x"};
  if (g.spatial_dim() == 2)
    names.push_back("y");
  if (g.time_dependent())
    names.push_back("t");
  return names;
}

struct CsvWriter
{
  std::ofstream out;

  CsvWriter(const fs::path& path, const std::vector<std::string>& header)
    : out(path, std::ios::binary)
  {
    if (!out)
      throw Error("cannot write '" + path.string() + "'");
    for (std::size_t i = 0; i < header.size(); ++i)
      out << (i ? "," : "") << header[i];
    out << '\n';
  }

  void row(std::initializer_list<std::span<const double>> parts)
  {
    bool first = true;
    for (auto part : parts)
      for (double v : part) {
        out << (first ? "" : ",") << format_real(v);
        first = false;
      }
    out << '\n';
  }
};

/// The problem and solver settings a config resolves to. Everything here is
/// validated before any sampling or assembly happens.
struct ResolvedRun
{
  ProblemSpec spec;
  SolveSettings settings;
  std::optional<MarchConfig> march;
  fs::path dir;
};

inline ResolvedRun resolve(const RunConfig& c)
{
  ResolvedRun r;
  r.spec = make_problem(c.problem, c.overrides);
  r.settings = default_settings(r.spec);

  const auto axes = axis_names(r.spec.geometry);
  for (const auto& [axis, ladder] : c.ladders) {
    const auto it = std::find(axes.begin(), axes.end(), axis);
    if (it == axes.end())
      throw ParameterError("config: problem '" + c.problem + "' has no axis '" + axis + "'");
    r.settings.ladders.at(static_cast<std::size_t>(it - axes.begin())) = ladder;
  }
  for (const auto& l : r.settings.ladders)
    if (l.jmax < l.j0)
      throw ParameterError("config: ladder needs j0 <= jmax");

  if (c.n_f)
    r.settings.n_f = *c.n_f;
  if (c.n_b)
    r.settings.n_b = *c.n_b;
  if (c.n_t)
    r.settings.n_t = *c.n_t;
  if (r.settings.n_f == 0)
    throw ParameterError("config: sampling.n_f must be positive");
  if (c.sampling)
    r.settings.sampling = *c.sampling;
  if (c.boundary_sampling)
    r.settings.boundary_sampling = *c.boundary_sampling;
  if (c.seed)
    r.settings.seed = *c.seed;
  if (c.rcond)
    r.settings.rcond = *c.rcond;
  r.settings.assembly.scaling = c.scaling;
  r.settings.assembly.pde_weight = c.pde_weight;
  r.settings.assembly.boundary_weight = c.boundary_weight;
  r.settings.assembly.initial_weight = c.initial_weight;
  if (c.eval_points < 2 || c.eval_grid < 2 || c.spectrum_points < 2)
    throw ParameterError("config: evaluation point counts must be at least 2");

  if (r.spec.nonlinear) {
    MarchConfig m = march_config_for(r.spec);
    m.ladder = r.settings.ladders.front();
    m.n_f = r.settings.n_f;
    m.n_b = r.settings.n_b;
    m.sampling = r.settings.sampling;
    m.seed = r.settings.seed;
    m.rcond = r.settings.rcond;
    if (c.dt)
      m.dt = *c.dt;
    if (c.t_end)
      m.t_end = *c.t_end;
    if (c.picard_iters)
      m.picard_iters = *c.picard_iters;
    if (c.picard_tol)
      m.picard_tol = *c.picard_tol;
    m.solver = c.march_solver;
    m.validate();
    r.march = m;
  } else if (c.dt || c.t_end || c.picard_iters || c.picard_tol) {
    throw ParameterError("config: march.* keys apply only to nonlinear problems");
  }

  r.dir = c.output_dir.empty() ? fs::path(c.problem) : fs::path(c.output_dir);
  if (r.dir.is_relative())
    r.dir = output_root() / r.dir;
  return r;
}

inline nlohmann::json base_summary(const RunConfig& c, const ResolvedRun& r)
{
  nlohmann::json j;
  j["problem"] = r.spec.name;
  j["description"] = r.spec.summary;
  j["provenance"] = r.spec.provenance;
  j["geometry"] = to_string(r.spec.geometry.kind());
  j["parameters"] = r.spec.parameters;
  j["overrides"] = c.overrides;
  nlohmann::json ladders = nlohmann::json::array();
  const auto axes = axis_names(r.spec.geometry);
  for (std::size_t a = 0; a < r.settings.ladders.size(); ++a)
    ladders.push_back({{"axis", axes.at(a)}, {"j0", r.settings.ladders[a].j0}, {"jmax", r.settings.ladders[a].jmax}});
  j["ladders"] = ladders;
  j["n_f"] = r.settings.n_f;
  j["n_b"] = r.settings.n_b;
  j["n_t"] = r.settings.n_t;
  j["sampling"] = to_string(r.settings.sampling);
  j["boundary_sampling"] = to_string(r.settings.boundary_sampling);
  j["seed"] = r.settings.seed;
  j["rcond"] = r.settings.rcond < 0.0 ? nlohmann::json("default") : nlohmann::json(r.settings.rcond);
  j["scaling"] = r.settings.assembly.scaling == RowScaling::Equilibrate ? "equilibrate" : "none";
  return j;
}

inline void write_summary(const fs::path& path, const nlohmann::json& j)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

/// Reads a t,x,u_ref file into time -> (x, u) columns.
inline std::map<double, std::pair<std::vector<double>, std::vector<double>>> read_reference(const fs::path& path)
{
  std::ifstream in(path);
  if (!in)
    throw Error("cannot read reference '" + path.string() + "'");
  std::map<double, std::pair<std::vector<double>, std::vector<double>>> ref;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    double t = 0, x = 0, u = 0;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &t, &x, &u) != 3)
      throw Error("malformed reference line '" + line + "'");
    ref[t].first.push_back(x);
    ref[t].second.push_back(u);
  }
  return ref;
}

inline void run_linear(const RunConfig& c, const ResolvedRun& r, RunArtifacts& art)
{
  const auto& spec = r.spec;
  auto lin = stage("solve", [&] { return solve_problem(spec, r.settings); });
  auto& j = art.summary;
  j["basis_size"] = lin.cols;
  j["rows"] = lin.rows;
  j["residual_norm"] = lin.report.residual_norm;
  j["rank"] = lin.report.rank;
  j["condition_estimate"] = lin.report.condition_estimate;
  j["assembly_seconds"] = lin.assembly_seconds;
  j["solve_seconds"] = lin.report.elapsed_seconds;

  const auto& geom = spec.geometry;
  const auto axes = axis_names(geom);
  auto grid = evaluation_grid(geom, c.eval_points, c.eval_grid);
  const auto numeric = stage("evaluate", [&] { return lin.solution.values(grid); });

  std::vector<std::string> header = axes;
  header.push_back("u_num");
  if (spec.has_exact())
    header.push_back("u_exact");
  {
    CsvWriter w(art.dir / "solution.csv", header);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double u = numeric[i];
      if (spec.has_exact()) {
        const double e = exact_eval(spec, grid[i]);
        w.row({grid[i], std::span<const double>(&u, 1), std::span<const double>(&e, 1)});
      } else {
        w.row({grid[i], std::span<const double>(&u, 1)});
      }
    }
  }
  art.files.push_back(art.dir / "solution.csv");
  if (!spec.has_exact())
    return;

  const auto report = stage("analysis", [&] { return evaluate_error(spec, lin.solution, grid); });
  art.relative_l2 = report.relative_l2;
  j["e_l2"] = report.relative_l2;
  j["max_abs"] = report.max_abs;
  j["eval_points"] = grid.size();
  {
    std::vector<std::string> eh = axes;
    eh.push_back("error");
    CsvWriter w(art.dir / "error.csv", eh);
    for (std::size_t i = 0; i < grid.size(); ++i)
      w.row({grid[i], std::span<const double>(&report.pointwise[i], 1)});
  }
  art.files.push_back(art.dir / "error.csv");

  if (geom.time_dependent() && geom.spatial_dim() == 1) {
    const auto slice = final_time_slice(geom, c.eval_points);
    const auto fin = stage("analysis", [&] { return evaluate_error(spec, lin.solution, slice); });
    art.final_time_l2 = fin.relative_l2;
    j["e_l2_final_time"] = fin.relative_l2;
    j["max_abs_final_time"] = fin.max_abs;
  }

  if (geom.dim() == 1) {
    const auto& b = geom.bounds()[0];
    const auto xs = linspace(b.lo, b.hi, c.spectrum_points);
    std::vector<double> un, ue;
    for (double x : xs) {
      const double p[1] = {x};
      un.push_back(lin.solution.value(p));
      ue.push_back(exact_eval(spec, p));
    }
    const auto sn = amplitude_spectrum(un);
    const auto se = amplitude_spectrum(ue);
    {
      CsvWriter w(art.dir / "spectrum.csv", {"k", "amp_num", "amp_exact"});
      for (std::size_t k = 0; k < sn.amplitudes.size(); ++k) {
        const double kk = sn.wavenumbers[k];
        w.row({std::span<const double>(&kk, 1), std::span<const double>(&sn.amplitudes[k], 1), std::span<const double>(&se.amplitudes[k], 1)});
      }
    }
    art.files.push_back(art.dir / "spectrum.csv");
    j["spectrum"] = {{"points", c.spectrum_points},
                     {"agreement_band", spectrum_agreement_band(se, sn)},
                     {"dominant_support", dominant_support(se)},
                     {"rel_tol", 0.2}};
  }
}

inline void run_march(const RunConfig& c, const ResolvedRun& r, RunArtifacts& art)
{
  const auto& spec = r.spec;
  const MarchConfig& m = *r.march;
  MarchStats stats;
  const auto traj = stage("march", [&] { return march(spec, m, &stats); });
  auto& j = art.summary;
  j["basis_size"] = traj.basis.size();
  j["march"] = {{"dt", m.dt},
                {"t_end", m.t_end},
                {"steps", traj.times.size() - 1},
                {"picard_iters", m.picard_iters},
                {"picard_tol", m.picard_tol},
                {"solver", m.solver == PicardSolver::Reduced ? "reduced" : "direct"},
                {"solves", stats.solves},
                {"factorizations", stats.factorizations},
                {"lsqr_iterations", stats.lsqr_iterations},
                {"reduced_rank", stats.reduced_rank},
                {"seconds", stats.seconds}};
  std::size_t passes = 0;
  for (std::size_t i = 1; i < traj.picard_counts.size(); ++i)
    passes += static_cast<std::size_t>(traj.picard_counts[i]);
  j["march"]["picard_passes_total"] = passes;

  auto step_of = [&](double t) {
    return static_cast<std::size_t>(std::llround(t / m.dt));
  };
  const auto& b = spec.geometry.bounds()[0];
  const auto xs = linspace(b.lo, b.hi, c.eval_points);
  {
    CsvWriter w(art.dir / "trajectory.csv", {"t", "x", "u"});
    std::vector<std::size_t> steps = {0};
    for (double t : c.snapshots)
      if (t > 0.0 && step_of(t) < traj.times.size() && step_of(t) != steps.back())
        steps.push_back(step_of(t));
    if (steps.back() != traj.times.size() - 1)
      steps.push_back(traj.times.size() - 1);
    for (std::size_t s : steps) {
      const auto sol = traj.at(s);
      for (double x : xs) {
        const double p[1] = {x};
        const double u = sol.value(p);
        w.row({std::span<const double>(&traj.times[s], 1), std::span<const double>(p, 1), std::span<const double>(&u, 1)});
      }
    }
  }
  art.files.push_back(art.dir / "trajectory.csv");

  fs::path ref_path = c.reference;
  if (ref_path.empty() && spec.name == "burgers" && c.overrides.empty())
    ref_path = fs::path(PIMWNN_SOURCE_DIR) / "data" / "burgers_reference.csv";
  if (ref_path.empty() || !fs::exists(ref_path)) {
    j["reference"] = nullptr;
    return;
  }
  const auto ref = stage("analysis", [&] { return read_reference(ref_path); });
  nlohmann::json errs = nlohmann::json::array();
  CsvWriter w(art.dir / "solution.csv", {"t", "x", "u_num", "u_ref"});
  double worst = -1.0;
  for (const auto& [t, xu] : ref) {
    const std::size_t s = step_of(t);
    if (s >= traj.times.size() || std::abs(traj.times[s] - t) > 1e-9)
      continue;
    const auto sol = traj.at(s);
    std::vector<double> num;
    for (std::size_t i = 0; i < xu.first.size(); ++i) {
      const double p[1] = {xu.first[i]};
      num.push_back(sol.value(p));
      w.row({std::span<const double>(&t, 1), std::span<const double>(p, 1), std::span<const double>(&num.back(), 1), std::span<const double>(&xu.second[i], 1)});
    }
    const double e = relative_l2(num, xu.second);
    errs.push_back({{"t", t}, {"e_l2", e}});
    worst = std::max(worst, e);
  }
  art.files.push_back(art.dir / "solution.csv");
  j["reference"] = ref_path.string();
  j["reference_errors"] = errs;
  if (worst >= 0.0) {
    art.relative_l2 = worst;
    j["e_l2"] = worst;
  }
}

} // namespace detail

/// Runs one configuration end to end and writes its artifacts.
inline RunArtifacts run(const RunConfig& c)
{
  const auto start = std::chrono::steady_clock::now();
  const auto r = detail::stage("config", [&] { return detail::resolve(c); });
  RunArtifacts art;
  art.dir = r.dir;
  detail::stage("output", [&] {
    fs::create_directories(art.dir);
    return 0;
  });
  art.summary = detail::base_summary(c, r);
  if (r.march)
    detail::run_march(c, r, art);
  else
    detail::run_linear(c, r, art);
  art.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  art.summary["wall_seconds"] = art.wall_seconds;
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : art.files)
    files.push_back(f.filename().string());
  files.push_back("summary.json");
  art.summary["artifacts"] = files;
  detail::stage("output", [&] {
    detail::write_summary(art.dir / "summary.json", art.summary);
    return 0;
  });
  art.files.push_back(art.dir / "summary.json");
  return art;
}

// ---------------------------------------------------------------------------
// Benchmark tables

enum class BenchMetric
{
  Global,   // relative L2 on the default evaluation grid
  FinalTime // relative L2 on the final-time slice of a space-time problem
};

struct BenchRow
{
  std::string table;
  std::string id;
  std::string label; // ladder description, as the tables print it
  RunConfig config;
  double published = 0.0; // e_L2 reported in the source table
  std::optional<double> threshold; // present for rows with an acceptance bound
  BenchMetric metric = BenchMetric::Global;
  std::string note;
};

struct BenchResult
{
  BenchRow row;
  double achieved = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
  std::string status; // PASS, FAIL, INFO or ERROR
  std::string error;
};

inline const std::vector<std::string>& bench_suites()
{
  static const std::vector<std::string> s = {"table1", "table2", "table3", "table4", "all"};
  return s;
}

inline std::vector<BenchRow> bench_rows(const std::string& suite)
{
  if (std::find(bench_suites().begin(), bench_suites().end(), suite) == bench_suites().end())
    throw ParameterError("bench: unknown suite '" + suite + "' (use table1, table2, table3, table4 or all)");
  std::vector<BenchRow> rows;
  auto add = [&](std::string table, std::string problem, std::vector<std::pair<std::string, LadderSpec>> ladders, std::size_t n_f,
                 std::optional<std::size_t> n_b, double published, std::optional<double> threshold,
                 BenchMetric metric = BenchMetric::Global, std::string note = {}) {
    if (suite != "all" && suite != table)
      return;
    BenchRow r;
    r.table = std::move(table);
    std::string label;
    for (const auto& [axis, l] : ladders)
      label += (label.empty() ? "" : " x ") + ("(" + std::to_string(l.j0) + "," + std::to_string(l.jmax) + ")");
    r.label = label;
    r.id = problem;
    for (const auto& [axis, l] : ladders)
      r.id += "_" + axis + std::to_string(l.jmax);
    r.config.problem = std::move(problem);
    r.config.ladders = std::move(ladders);
    r.config.n_f = n_f;
    r.config.n_b = n_b;
    r.published = published;
    r.threshold = threshold;
    r.metric = metric;
    r.note = std::move(note);
    rows.push_back(std::move(r));
  };
  using L = LadderSpec;

  add("table1", "repr_f1", {{"x", L{0, 7}}}, 5000, std::nullopt, 1.055e-02, std::nullopt);
  add("table1", "repr_f1", {{"x", L{0, 9}}}, 5000, std::nullopt, 1.426e-03, 1e-2);
  add("table1", "repr_f1", {{"x", L{0, 11}}}, 5000, std::nullopt, 2.018e-04, 2e-3);

  add("table2", "repr_f2", {{"x", L{0, 1}}, {"y", L{0, 1}}}, 2000, 400, 1.185e-01, std::nullopt);
  add("table2", "repr_f2", {{"x", L{0, 2}}, {"y", L{0, 2}}}, 2000, 400, 1.304e-03, std::nullopt);
  add("table2", "repr_f2", {{"x", L{0, 3}}, {"y", L{0, 3}}}, 2000, 400, 1.181e-07, 1e-5);

  add("table3", "adv1d", {{"x", L{0, 1}}}, 100, 2, 3.175e-01, std::nullopt);
  add("table3", "adv1d", {{"x", L{0, 2}}}, 100, 2, 7.927e-03, std::nullopt);
  add("table3", "adv1d", {{"x", L{0, 3}}}, 100, 2, 1.318e-03, 1e-2);
  add("table3", "diff1d", {{"x", L{0, 1}}}, 100, 2, 9.821e-03, std::nullopt);
  add("table3", "diff1d", {{"x", L{0, 2}}}, 100, 2, 1.316e-03, std::nullopt);
  add("table3", "diff1d", {{"x", L{0, 3}}}, 100, 2, 1.688e-04, 1e-3);
  add("table3", "advdiff1d", {{"x", L{0, 1}}}, 100, 2, 1.632e-01, std::nullopt);
  add("table3", "advdiff1d", {{"x", L{0, 3}}}, 100, 2, 2.709e-03, std::nullopt);
  add("table3", "advdiff1d", {{"x", L{0, 5}}}, 100, 2, 1.228e-04, 1e-3);
  add("table3", "helmholtz1d", {{"x", L{0, 5}}}, 20000, 2, 4.592e+00, std::nullopt);
  add("table3", "helmholtz1d", {{"x", L{0, 6}}}, 20000, 2, 2.356e-02, std::nullopt);
  add("table3", "helmholtz1d", {{"x", L{0, 7}}}, 20000, 2, 2.174e-03, 2e-1, BenchMetric::Global, "text reports 6.887e-02");

  add("table4", "adv2d", {{"x", L{0, 2}}, {"y", L{0, 2}}}, 5000, 400, 1.235e-03, std::nullopt);
  add("table4", "adv2d", {{"x", L{0, 3}}, {"y", L{0, 3}}}, 5000, 400, 2.227e-04, std::nullopt);
  add("table4", "adv2d", {{"x", L{0, 4}}, {"y", L{0, 4}}}, 5000, 400, 1.074e-04, 1e-3);
  add("table4", "diff2d", {{"x", L{0, 1}}, {"y", L{0, 1}}}, 1000, 100, 4.984e-03, std::nullopt);
  add("table4", "diff2d", {{"x", L{0, 2}}, {"y", L{0, 2}}}, 1000, 100, 5.117e-06, std::nullopt);
  add("table4", "diff2d", {{"x", L{0, 3}}, {"y", L{0, 3}}}, 1000, 100, 3.056e-07, 1e-5);
  {
    const auto p = make_problem("adv_space_time_packet");
    const auto g = make_problem("adv_space_time_gauss");
    add("table4", p.name, {{"x", p.ladders[0]}, {"t", p.ladders[1]}}, p.n_f, p.n_b, 7.322e-04, 1e-2, BenchMetric::FinalTime,
        "final time; ladders chosen by this repository");
    add("table4", g.name, {{"x", g.ladders[0]}, {"t", g.ladders[1]}}, g.n_f, g.n_b, 3.413e-04, 1e-2, BenchMetric::FinalTime,
        "final time; ladders chosen by this repository");
  }
  return rows;
}

/// Runs the rows of a suite; artifacts go to <root>/bench/<suite>/<row id>.
inline std::vector<BenchResult> bench(const std::string& suite, std::ostream* progress = nullptr)
{
  auto rows = bench_rows(suite);
  std::vector<BenchResult> results;
  for (auto& row : rows) {
    row.config.output_dir = (fs::path("bench") / suite / (row.table + "_" + row.id)).string();
    BenchResult r;
    r.row = row;
    const auto start = std::chrono::steady_clock::now();
    try {
      const auto art = run(row.config);
      r.achieved = row.metric == BenchMetric::FinalTime ? art.final_time_l2 : art.relative_l2;
      if (!row.threshold)
        r.status = "INFO";
      else
        r.status = r.achieved <= *row.threshold ? "PASS" : "FAIL";
    } catch (const std::exception& e) {
      r.status = "ERROR";
      r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (progress)
      *progress << "  " << r.row.table << " " << r.row.id << " " << r.status << "\n" << std::flush;
    results.push_back(std::move(r));
  }
  return results;
}

/// A row must pass when it carries an acceptance bound.
inline bool bench_passed(const std::vector<BenchResult>& results)
{
  for (const auto& r : results)
    if (r.row.threshold && r.status != "PASS")
      return false;
  return true;
}

inline void write_bench_report(const std::string& suite, const std::vector<BenchResult>& results, std::ostream& out)
{
  char line[256];
  std::snprintf(line, sizeof line, "%-7s %-24s %-16s %11s %11s %10s %8s  %s\n", "table", "problem", "ladders", "published", "achieved", "bound",
                "time[s]", "status");
  out << line;
  for (const auto& r : results) {
    char bound[16] = "-";
    if (r.row.threshold)
      std::snprintf(bound, sizeof bound, "%.0e", *r.row.threshold);
    std::snprintf(line, sizeof line, "%-7s %-24s %-16s %11.3e %11.3e %10s %8.2f  %s", r.row.table.c_str(), r.row.config.problem.c_str(),
                  r.row.label.c_str(), r.row.published, r.achieved, bound, r.seconds, r.status.c_str());
    out << line;
    if (!r.error.empty())
      out << "  (" << r.error << ")";
    else if (!r.row.note.empty())
      out << "  (" << r.row.note << ")";
    out << '\n';
  }

  const fs::path dir = output_root() / "bench" / suite;
  fs::create_directories(dir);
  std::ofstream csv(dir / "bench.csv", std::ios::binary);
  csv << "table,problem,ladders,published_e_l2,achieved_e_l2,bound,seconds,status\n";
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    csv << r.row.table << ',' << r.row.config.problem << ",\"" << r.row.label << "\"," << format_real(r.row.published) << ','
        << format_real(r.achieved) << ',' << (r.row.threshold ? format_real(*r.row.threshold) : "") << ',' << format_real(r.seconds)
        << ',' << r.status << '\n';
    j.push_back({{"table", r.row.table},
                 {"problem", r.row.config.problem},
                 {"ladders", r.row.label},
                 {"published_e_l2", r.row.published},
                 {"achieved_e_l2", std::isfinite(r.achieved) ? nlohmann::json(r.achieved) : nlohmann::json(nullptr)},
                 {"bound", r.row.threshold ? nlohmann::json(*r.row.threshold) : nlohmann::json(nullptr)},
                 {"seconds", r.seconds},
                 {"status", r.status},
                 {"error", r.error},
                 {"note", r.row.note}});
  }
  detail::write_summary(dir / "bench.json", j);
}

// ---------------------------------------------------------------------------

inline void list_problems(std::ostream& out)
{
  for (const auto& name : registry_names()) {
    const auto s = make_problem(name);
    out << name << "  [" << s.provenance << "]\n";
    out << "    " << s.summary << "\n";
    out << "    geometry " << to_string(s.geometry.kind()) << ", ladders";
    for (const auto& l : s.ladders)
      out << " (" << l.j0 << "," << l.jmax << ")";
    out << ", N_f=" << s.n_f << ", N_b=" << s.n_b;
    if (s.geometry.time_dependent() && !s.nonlinear)
      out << ", N_t=" << s.n_t;
    out << ", sampling " << to_string(s.sampling) << "\n";
    if (!s.parameters.empty()) {
      out << "    parameters";
      for (const auto& [k, v] : s.parameters) {
        std::ostringstream os;
        os << v;
        out << " " << k << "=" << os.str();
      }
      out << "\n";
    }
    if (s.nonlinear)
      out << "    march dt=" << s.dt << ", t_end=" << s.t_end << ", picard_iters=" << s.picard_iters << "\n";
  }
}

} // namespace pimwnn
