#pragma once

// Run configuration: flat "key = value" text with dotted sections.
//
//   # comment
//   problem.name = diff1d
//   problem.v = 0.2            (any other problem.* key is a problem override)
//   ladder.x = 0,3             (ladder.y / ladder.t for further axes)
//   sampling.n_f = 100
//   sampling.n_b = 2
//   sampling.n_t = 0
//   sampling.strategy = grid   (grid | random)
//   sampling.boundary = grid
//   sampling.seed = 42
//   solver.rcond = 1e-12
//   solver.scaling = equilibrate   (equilibrate | none)
//   solver.pde_weight = 1          (also boundary_weight, initial_weight)
//   march.dt = 0.001               (also t_end, picard_iters, picard_tol, solver, snapshots, reference)
//   output.dir = diff1d
//   output.eval_points = 1000      (also eval_grid, spectrum_points)

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pimwnn/errors.hpp"
#include "pimwnn/operator_assembly.hpp"
#include "pimwnn/problems.hpp"
#include "pimwnn/sampling.hpp"
#include "pimwnn/timestepper.hpp"

namespace pimwnn {

struct RunConfig
{
  std::string problem;
  ParameterMap overrides;
  // axis name (x, y, t) -> ladder; empty means the problem default
  std::vector<std::pair<std::string, LadderSpec>> ladders;
  std::optional<std::size_t> n_f, n_b, n_t;
  std::optional<SamplingStrategy> sampling, boundary_sampling;
  std::optional<std::uint64_t> seed;
  std::optional<double> rcond;
  RowScaling scaling = RowScaling::Equilibrate;
  double pde_weight = 1.0;
  double boundary_weight = 1.0;
  double initial_weight = 1.0;

  std::optional<double> dt, t_end, picard_tol;
  std::optional<int> picard_iters;
  PicardSolver march_solver = PicardSolver::Reduced;
  std::vector<double> snapshots = {0.25, 0.5, 0.75, 1.0};
  std::string reference; // reference-solution CSV (t,x,u_ref); empty: the bundled file when it applies

  std::string output_dir;
  std::size_t eval_points = 1000;
  std::size_t eval_grid = 100;
  std::size_t spectrum_points = 4096;
};

namespace detail {

inline std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v)
{
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size())
    throw ParameterError("config: '" + key + "' expects a number, got '" + v + "'");
  return d;
}

inline long long parse_int(const std::string& key, const std::string& v)
{
  std::size_t pos = 0;
  long long i = 0;
  try {
    i = std::stoll(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size())
    throw ParameterError("config: '" + key + "' expects an integer, got '" + v + "'");
  return i;
}

inline std::size_t parse_count(const std::string& key, const std::string& v)
{
  const long long i = parse_int(key, v);
  if (i < 0)
    throw ParameterError("config: '" + key + "' must be non-negative");
  return static_cast<std::size_t>(i);
}

inline std::vector<std::string> split(const std::string& v, char sep)
{
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep))
    out.push_back(trim(item));
  return out;
}

} // namespace detail

inline RunConfig parse_config(const std::string& text)
{
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.resize(hash);
    line = detail::trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    const auto dot = key.find('.');
    if (dot == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": key '" + key + "' has no section");
    const std::string section = key.substr(0, dot);
    const std::string name = key.substr(dot + 1);

    if (section == "problem") {
      if (name == "name")
        c.problem = val;
      else
        c.overrides[name] = val;
    } else if (section == "ladder") {
      if (name != "x" && name != "y" && name != "t")
        throw ParameterError("config: unknown ladder axis '" + name + "' (use x, y or t)");
      const auto parts = detail::split(val, ',');
      if (parts.size() != 2)
        throw ParameterError("config: '" + key + "' expects 'j0,jmax'");
      c.ladders.push_back({name, {static_cast<int>(detail::parse_int(key, parts[0])), static_cast<int>(detail::parse_int(key, parts[1]))}});
    } else if (section == "sampling") {
      if (name == "n_f")
        c.n_f = detail::parse_count(key, val);
      else if (name == "n_b")
        c.n_b = detail::parse_count(key, val);
      else if (name == "n_t")
        c.n_t = detail::parse_count(key, val);
      else if (name == "strategy")
        c.sampling = parse_sampling(val);
      else if (name == "boundary")
        c.boundary_sampling = parse_sampling(val);
      else if (name == "seed")
        c.seed = static_cast<std::uint64_t>(detail::parse_count(key, val));
      else
        throw ParameterError("config: unknown key '" + key + "'");
    } else if (section == "solver") {
      if (name == "rcond") {
        c.rcond = detail::parse_double(key, val);
        if (*c.rcond < 0.0)
          throw ParameterError("config: solver.rcond must be non-negative");
      } else if (name == "scaling") {
        if (val == "equilibrate")
          c.scaling = RowScaling::Equilibrate;
        else if (val == "none")
          c.scaling = RowScaling::None;
        else
          throw ParameterError("config: solver.scaling must be 'equilibrate' or 'none'");
      } else if (name == "pde_weight")
        c.pde_weight = detail::parse_double(key, val);
      else if (name == "boundary_weight")
        c.boundary_weight = detail::parse_double(key, val);
      else if (name == "initial_weight")
        c.initial_weight = detail::parse_double(key, val);
      else
        throw ParameterError("config: unknown key '" + key + "'");
    } else if (section == "march") {
      if (name == "dt")
        c.dt = detail::parse_double(key, val);
      else if (name == "t_end")
        c.t_end = detail::parse_double(key, val);
      else if (name == "picard_iters")
        c.picard_iters = static_cast<int>(detail::parse_int(key, val));
      else if (name == "picard_tol")
        c.picard_tol = detail::parse_double(key, val);
      else if (name == "solver") {
        if (val == "reduced")
          c.march_solver = PicardSolver::Reduced;
        else if (val == "direct")
          c.march_solver = PicardSolver::Direct;
        else
          throw ParameterError("config: march.solver must be 'reduced' or 'direct'");
      } else if (name == "snapshots") {
        c.snapshots.clear();
        for (const auto& p : detail::split(val, ','))
          c.snapshots.push_back(detail::parse_double(key, p));
      } else if (name == "reference")
        c.reference = val;
      else
        throw ParameterError("config: unknown key '" + key + "'");
    } else if (section == "output") {
      if (name == "dir")
        c.output_dir = val;
      else if (name == "eval_points")
        c.eval_points = detail::parse_count(key, val);
      else if (name == "eval_grid")
        c.eval_grid = detail::parse_count(key, val);
      else if (name == "spectrum_points")
        c.spectrum_points = detail::parse_count(key, val);
      else
        throw ParameterError("config: unknown key '" + key + "'");
    } else {
      throw ParameterError("config: unknown section '" + section + "' in key '" + key + "'");
    }
  }
  if (c.problem.empty())
    throw ParameterError("config: problem.name is required");
  return c;
}

inline RunConfig load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ParameterError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace pimwnn
