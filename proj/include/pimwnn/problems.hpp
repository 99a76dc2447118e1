#pragma once

// Benchmark registry. Every entry bundles geometry, operator, data and (when
// known) the closed-form solution, plus default discretization parameters.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pimwnn/errors.hpp"
#include "pimwnn/geometry.hpp"
#include "pimwnn/operator_assembly.hpp"
#include "pimwnn/sampling.hpp"

namespace pimwnn {

struct LadderSpec
{
  int j0 = 0;
  int jmax = 0;
};

using ParameterMap = std::map<std::string, std::string>;

struct ProblemSpec
{
  std::string name;
  std::string summary;    // one-line description for listings
  std::string provenance; // which benchmark table/figure the entry reproduces
  Geometry geometry;
  std::optional<LinearOperator> op; // absent for the nonlinear entry
  bool nonlinear = false;
  PointFunction source;
  PointFunction dirichlet;
  PointFunction initial; // empty unless time dependent
  PointFunction exact;   // empty when no closed form exists

  std::vector<LadderSpec> ladders; // one per axis
  std::size_t n_f = 0;
  std::size_t n_b = 0;
  std::size_t n_t = 0;
  SamplingStrategy sampling = SamplingStrategy::GridEquispaced;
  std::uint64_t seed = 42;
  double rcond = -1.0; // negative: solver default

  bool boundary_matches_exact = true; // false when a homogeneous override replaces the exact trace
  std::map<std::string, double> parameters; // resolved physical parameters, for listings and summaries

  // time marching defaults (nonlinear entry only)
  double dt = 0.0;
  double t_end = 0.0;
  int picard_iters = 0;

  bool has_exact() const { return static_cast<bool>(exact); }
};

inline double exact_eval(const ProblemSpec& spec, std::span<const double> point)
{
  if (!spec.exact)
    throw Unsupported("problem '" + spec.name + "' has no closed-form solution; compare against its reference-solution file instead");
  return spec.exact(point);
}

inline const std::vector<std::string>& registry_names()
{
  static const std::vector<std::string> names = {"repr_f1",
                                                 "repr_f2",
                                                 "adv1d",
                                                 "diff1d",
                                                 "advdiff1d",
                                                 "helmholtz1d",
                                                 "adv2d",
                                                 "diff2d",
                                                 "flower_diff",
                                                 "adv_space_time_packet",
                                                 "adv_space_time_gauss",
                                                 "growing_diffusion",
                                                 "burgers"};
  return names;
}

namespace detail {

constexpr double pi = std::numbers::pi;

/// Reads numeric overrides, rejecting unknown keys and malformed values.
class OverrideReader
{
public:
  OverrideReader(const std::string& problem, const ParameterMap& overrides)
    : problem_(problem), overrides_(overrides)
  {}

  double number(const std::string& key, double fallback)
  {
    used_.push_back(key);
    const auto it = overrides_.find(key);
    if (it == overrides_.end())
      return fallback;
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(it->second, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != it->second.size() || !std::isfinite(v))
      throw ParameterError(problem_ + ": override '" + key + "' = '" + it->second + "' is not a finite number");
    return v;
  }

  bool flag(const std::string& key, bool fallback)
  {
    used_.push_back(key);
    const auto it = overrides_.find(key);
    if (it == overrides_.end())
      return fallback;
    if (it->second == "true" || it->second == "1")
      return true;
    if (it->second == "false" || it->second == "0")
      return false;
    throw ParameterError(problem_ + ": override '" + key + "' = '" + it->second + "' is not a boolean");
  }

  void finish() const
  {
    for (const auto& [key, value] : overrides_) {
      bool known = false;
      for (const auto& u : used_)
        known = known || u == key;
      if (!known) {
        std::string accepted;
        for (const auto& u : used_)
          accepted += (accepted.empty() ? "" : ", ") + u;
        throw ParameterError(problem_ + ": unknown override '" + key + "'" +
                             (accepted.empty() ? " (this problem takes no overrides)" : " (accepted: " + accepted + ")"));
      }
    }
  }

private:
  std::string problem_;
  const ParameterMap& overrides_;
  std::vector<std::string> used_;
};

inline double repr_f1(double x)
{
  auto sgn = [](double v) { return static_cast<double>((v > 0.0) - (v < 0.0)); };
  if (x <= -0.5)
    return 0.5 * (sgn(x + 0.8) - sgn(x + 0.5));
  if (x <= 0.5)
    return std::exp(-100.0 * x * x);
  if (x <= 0.65)
    return 20.0 / 3.0 * x - 10.0 / 3.0;
  if (x <= 0.8)
    return -20.0 / 3.0 * x + 16.0 / 3.0;
  return 0.0;
}

inline LinearOperator sum_of(std::vector<std::pair<double, std::vector<int>>> terms)
{
  std::vector<Term> ts;
  for (auto& [c, o] : terms)
    ts.push_back({constant(c), std::move(o)});
  return LinearOperator(std::move(ts));
}

inline PointFunction zero_function()
{
  return [](std::span<const double>) { return 0.0; };
}

} // namespace detail

inline ProblemSpec make_problem(const std::string& name, const ParameterMap& overrides = {})
{
  using detail::pi;
  detail::OverrideReader ov(name, overrides);
  ProblemSpec s;
  s.name = name;

  if (name == "repr_f1") {
    s.summary = "fit of a piecewise profile with jumps, a narrow Gaussian and a tent on [-1,1]";
    s.provenance = "table1";
    s.geometry = Geometry::interval(-1.0, 1.0);
    s.op = LinearOperator::identity(1);
    s.exact = [](std::span<const double> p) { return detail::repr_f1(p[0]); };
    s.source = s.exact;
    s.ladders = {{0, 9}};
    s.n_f = 5000;
    s.n_b = 2;
  } else if (name == "repr_f2") {
    s.summary = "fit of exp(-20(x^2+y^2)) on [-1,1]^2";
    s.provenance = "table2";
    s.geometry = Geometry::box({{-1.0, 1.0}, {-1.0, 1.0}});
    s.op = LinearOperator::identity(2);
    s.exact = [](std::span<const double> p) { return std::exp(-20.0 * (p[0] * p[0] + p[1] * p[1])); };
    s.source = s.exact;
    s.ladders = {{0, 3}, {0, 3}};
    s.n_f = 2000;
    s.n_b = 400;
  } else if (name == "adv1d") {
    s.summary = "u_x = f on (0,1), u = sin(2 pi x) cos(4 pi x) + 1";
    s.provenance = "table3";
    s.geometry = Geometry::interval(0.0, 1.0);
    s.op = LinearOperator::derivative({1});
    s.exact = [](std::span<const double> p) { return std::sin(2 * pi * p[0]) * std::cos(4 * pi * p[0]) + 1.0; };
    s.source = [](std::span<const double> p) {
      const double x = p[0];
      return 2 * pi * std::cos(2 * pi * x) * std::cos(4 * pi * x) - 4 * pi * std::sin(2 * pi * x) * std::sin(4 * pi * x);
    };
    s.ladders = {{0, 3}};
    s.n_f = 100;
    s.n_b = 2;
  } else if (name == "diff1d") {
    s.summary = "u_xx = f on (0,1), u = sin(pi x / 2) cos(2 pi x) + 1";
    s.provenance = "table3";
    s.geometry = Geometry::interval(0.0, 1.0);
    s.op = LinearOperator::derivative({2});
    s.exact = [](std::span<const double> p) { return std::sin(pi * p[0] / 2) * std::cos(2 * pi * p[0]) + 1.0; };
    s.source = [](std::span<const double> p) {
      // (sin a cos b)'' with a = pi x / 2, b = 2 pi x
      const double a = pi * p[0] / 2;
      const double b = 2 * pi * p[0];
      return -(pi * pi / 4 + 4 * pi * pi) * std::sin(a) * std::cos(b) - 2 * pi * pi * std::cos(a) * std::sin(b);
    };
    s.ladders = {{0, 3}};
    s.n_f = 100;
    s.n_b = 2;
  } else if (name == "advdiff1d") {
    const double v = ov.number("v", 0.05);
    if (!(v > 0.0))
      throw ParameterError("advdiff1d: viscosity v must be positive");
    s.summary = "u_x - v u_xx = 0 on (0,1), boundary layer u = (exp(x/v) - 1)/(exp(1/v) - 1)";
    s.provenance = "table3";
    s.parameters["v"] = v;
    s.geometry = Geometry::interval(0.0, 1.0);
    s.op = detail::sum_of({{1.0, {1}}, {-v, {2}}});
    s.exact = [v](std::span<const double> p) {
      // expm1(x/v) / expm1(1/v), written to survive small v
      return std::exp((p[0] - 1.0) / v) * (-std::expm1(-p[0] / v)) / (-std::expm1(-1.0 / v));
    };
    s.source = detail::zero_function();
    s.ladders = {{0, 5}};
    s.n_f = 100;
    s.n_b = 2;
    s.rcond = 1e-8; // the boundary layer makes the collocation matrix numerically rank deficient
  } else if (name == "helmholtz1d") {
    const double lambda = ov.number("lambda", 10.0);
    s.summary = "-u_xx + lambda u = f on (0,1), u = (x^2+1)/2 exp(cos(40 x^3 - 24))";
    s.provenance = "table3";
    s.parameters["lambda"] = lambda;
    s.geometry = Geometry::interval(0.0, 1.0);
    s.op = detail::sum_of({{-1.0, {2}}, {lambda, {0}}});
    s.exact = [](std::span<const double> p) {
      const double x = p[0];
      return 0.5 * (x * x + 1.0) * std::exp(std::cos(40 * x * x * x - 24));
    };
    s.source = [lambda](std::span<const double> p) {
      const double x = p[0];
      const double arg = 40 * x * x * x - 24;
      const double c1 = -std::sin(arg) * 120 * x * x; // d/dx cos(arg)
      const double c2 = -std::cos(arg) * 14400 * x * x * x * x - std::sin(arg) * 240 * x;
      const double h = std::exp(std::cos(arg));
      const double g = 0.5 * (x * x + 1.0);
      const double u = g * h;
      const double uxx = h + 2 * x * h * c1 + g * h * (c1 * c1 + c2);
      return -uxx + lambda * u;
    };
    s.ladders = {{0, 7}};
    s.n_f = 20000;
    s.n_b = 2;
  } else if (name == "adv2d") {
    const double a = ov.number("a", 1.0);
    const double b = ov.number("b", 1.0);
    s.summary = "a u_x + b u_y = f on [-1,1]^2, u = cos(pi x) sin(pi y) / 2";
    s.provenance = "table4";
    s.parameters["a"] = a;
    s.parameters["b"] = b;
    s.geometry = Geometry::box({{-1.0, 1.0}, {-1.0, 1.0}});
    s.op = detail::sum_of({{a, {1, 0}}, {b, {0, 1}}});
    s.exact = [](std::span<const double> p) { return 0.5 * std::cos(pi * p[0]) * std::sin(pi * p[1]); };
    s.source = [a, b](std::span<const double> p) {
      return 0.5 * pi * (-a * std::sin(pi * p[0]) * std::sin(pi * p[1]) + b * std::cos(pi * p[0]) * std::cos(pi * p[1]));
    };
    s.ladders = {{0, 4}, {0, 4}};
    s.n_f = 5000;
    s.n_b = 400;
  } else if (name == "diff2d") {
    s.summary = "u_xx + u_yy = f on [-1,1]^2, u = 1/2 + exp(-(2x^2 + 4y^2))";
    s.provenance = "table4";
    s.geometry = Geometry::box({{-1.0, 1.0}, {-1.0, 1.0}});
    s.op = detail::sum_of({{1.0, {2, 0}}, {1.0, {0, 2}}});
    s.exact = [](std::span<const double> p) { return 0.5 + std::exp(-(2 * p[0] * p[0] + 4 * p[1] * p[1])); };
    s.source = [](std::span<const double> p) {
      const double x = p[0];
      const double y = p[1];
      return (16 * x * x + 64 * y * y - 12) * std::exp(-(2 * x * x + 4 * y * y));
    };
    s.ladders = {{0, 3}, {0, 3}};
    s.n_f = 1000;
    s.n_b = 100;
  } else if (name == "flower_diff") {
    s.summary = "u_xx + u_yy = f inside the five-lobed flower r = 0.2 + 0.15 sin(5 theta)";
    s.provenance = "figure: complex-domain diffusion";
    s.geometry = Geometry::star({});
    s.op = detail::sum_of({{1.0, {2, 0}}, {1.0, {0, 2}}});
    s.exact = [](std::span<const double> p) {
      const double x = p[0];
      const double y = p[1];
      const double w = 20 * (0.0625 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5));
      return 16 * x * (1 - x) * y * (1 - y) * (0.5 + std::atan(w) / pi);
    };
    s.source = [](std::span<const double> p) {
      const double x = p[0];
      const double y = p[1];
      const double w = 20 * (0.0625 - (x - 0.5) * (x - 0.5) - (y - 0.5) * (y - 0.5));
      const double d = 1 + w * w;
      const double q = 0.5 + std::atan(w) / pi;
      // per axis: P = 16 x(1-x) y(1-y), w_x = -40(x - 1/2), w_xx = -40
      auto axis = [&](double s, double other) {
        const double ws = -40 * (s - 0.5);
        const double qs = ws / (pi * d);
        const double qss = (-40 * d - 2 * w * ws * ws) / (pi * d * d);
        const double po = 16 * other * (1 - other);
        return po * (-2 * q + 2 * (1 - 2 * s) * qs + s * (1 - s) * qss);
      };
      return axis(x, y) + axis(y, x);
    };
    s.ladders = {{0, 4}, {0, 4}};
    s.n_f = 2000;
    s.n_b = 400;
    s.sampling = SamplingStrategy::UniformRandom;
    s.seed = 7;
  } else if (name == "adv_space_time_packet" || name == "adv_space_time_gauss") {
    const bool packet = name == "adv_space_time_packet";
    const bool homogeneous = ov.flag("homogeneous_bc", false);
    s.summary = packet ? "u_t + u_x = 0 on (-1,1) x (0,0.5], wave packet exp(-5 s^2) sin(10 pi s), s = x - t"
                       : "u_t + u_x = 0 on (-1,1) x (0,0.5], Gaussian exp(-50 (x - t)^2)";
    s.provenance = "table4";
    s.parameters["homogeneous_bc"] = homogeneous ? 1.0 : 0.0;
    s.geometry = Geometry::box_time({{-1.0, 1.0}}, 0.5);
    s.op = detail::sum_of({{1.0, {0, 1}}, {1.0, {1, 0}}});
    if (packet)
      s.exact = [](std::span<const double> p) {
        const double r = p[0] - p[1];
        return std::exp(-5 * r * r) * std::sin(10 * pi * r);
      };
    else
      s.exact = [](std::span<const double> p) {
        const double r = p[0] - p[1];
        return std::exp(-50 * r * r);
      };
    s.source = detail::zero_function();
    s.dirichlet = homogeneous ? detail::zero_function() : s.exact;
    s.boundary_matches_exact = !homogeneous;
    s.initial = s.exact;
    s.ladders = packet ? std::vector<LadderSpec>{{0, 5}, {0, 3}} : std::vector<LadderSpec>{{0, 4}, {0, 2}};
    s.n_f = packet ? 10000 : 5000;
    s.n_b = 100;
    s.n_t = 200;
  } else if (name == "growing_diffusion") {
    const double k1 = ov.number("k1", 2 * pi);
    const double k2 = ov.number("k2", 2 * pi);
    s.summary = "u_t - u_xx = f on (-1,1) x (0,1], u = e^t (sin(k1 x) - cos(k2 x))";
    s.provenance = "figure: exponentially growing diffusion";
    s.parameters["k1"] = k1;
    s.parameters["k2"] = k2;
    s.geometry = Geometry::box_time({{-1.0, 1.0}}, 1.0);
    s.op = detail::sum_of({{1.0, {0, 1}}, {-1.0, {2, 0}}});
    s.exact = [k1, k2](std::span<const double> p) { return std::exp(p[1]) * (std::sin(k1 * p[0]) - std::cos(k2 * p[0])); };
    s.source = [k1, k2](std::span<const double> p) {
      return std::exp(p[1]) * ((1 + k1 * k1) * std::sin(k1 * p[0]) - (1 + k2 * k2) * std::cos(k2 * p[0]));
    };
    s.initial = s.exact;
    s.ladders = {{0, 4}, {0, 2}};
    s.n_f = 5000;
    s.n_b = 100;
    s.n_t = 200;
  } else if (name == "burgers") {
    const double eps = ov.number("epsilon", 0.01 / pi);
    if (!(eps > 0.0))
      throw ParameterError("burgers: epsilon must be positive");
    s.summary = "u_t + u u_x = epsilon u_xx on (-1,1) x (0,1], u(x,0) = -sin(pi x), u(+-1,t) = 0";
    s.provenance = "figure: Burgers shock formation";
    s.parameters["epsilon"] = eps;
    s.geometry = Geometry::interval(-1.0, 1.0);
    s.nonlinear = true;
    s.source = detail::zero_function();
    s.dirichlet = detail::zero_function();
    s.initial = [](std::span<const double> p) { return -std::sin(pi * p[0]); };
    s.ladders = {{-1, 9}};
    s.n_f = 2000;
    s.n_b = 2;
    s.dt = 0.001;
    s.t_end = 1.0;
    s.picard_iters = 10;
  } else {
    std::string known;
    for (const auto& n : registry_names())
      known += (known.empty() ? "" : ", ") + n;
    throw RegistryError("unknown problem '" + name + "' (known: " + known + ")");
  }
  ov.finish();

  if (!s.dirichlet)
    s.dirichlet = s.exact;
  return s;
}

/// Largest |g_D - u| over boundary samples (0 when either side is missing).
inline double boundary_mismatch(const ProblemSpec& spec, std::size_t samples = 50)
{
  if (!spec.exact || !spec.dirichlet)
    return 0.0;
  double worst = 0.0;
  for (const auto& p : sample_boundary(spec.geometry, std::max<std::size_t>(samples, 2), SamplingStrategy::GridEquispaced))
    worst = std::max(worst, std::abs(spec.dirichlet(p) - spec.exact(p)));
  return worst;
}

/// Largest |h_0 - u(., 0)| over initial samples.
inline double initial_mismatch(const ProblemSpec& spec, std::size_t samples = 50)
{
  if (!spec.exact || !spec.initial || !spec.geometry.time_dependent())
    return 0.0;
  double worst = 0.0;
  for (const auto& p : sample_initial(spec.geometry, samples, SamplingStrategy::GridEquispaced))
    worst = std::max(worst, std::abs(spec.initial(p) - spec.exact(p)));
  return worst;
}

/// Axis-aligned bounds the basis lives on (the geometry's bounding box).
inline TensorBasis default_basis(const ProblemSpec& spec, const std::vector<LadderSpec>& ladders)
{
  const auto& bounds = spec.geometry.bounds();
  if (ladders.size() != bounds.size())
    throw ParameterError(spec.name + ": expected " + std::to_string(bounds.size()) + " ladders, got " + std::to_string(ladders.size()));
  std::vector<Basis1D> axes;
  for (std::size_t a = 0; a < bounds.size(); ++a)
    axes.push_back(build_ladder(ladders[a].j0, ladders[a].jmax, bounds[a].lo, bounds[a].hi));
  return TensorBasis(std::move(axes));
}

} // namespace pimwnn
