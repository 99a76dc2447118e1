// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "pimwnn/blas_check.hpp"
#include "pimwnn/runner.hpp"

using namespace pimwnn;
namespace fs = std::filesystem;

namespace {

struct Check
{
  bool ok = true;
  std::ostringstream detail;

  void bound(const std::string& what, double value, double limit)
  {
    const bool pass = std::isfinite(value) && value <= limit;
    ok = ok && pass;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s %.3e (<= %.0e)", detail.tellp() > 0 ? "; " : "", what.c_str(), value, limit);
    detail << buf << (pass ? "" : " !");
  }

  void runtime(const std::string& what, double seconds, double limit)
  {
    const bool pass = seconds < limit;
    ok = ok && pass;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s%s %.1fs (< %.0fs)", detail.tellp() > 0 ? "; " : "", what.c_str(), seconds, limit);
    detail << buf << (pass ? "" : " !");
  }

  void note(const std::string& s)
  {
    detail << (detail.tellp() > 0 ? "; " : "") << s;
  }
};

RunConfig config(const std::string& problem, std::vector<std::pair<std::string, LadderSpec>> ladders, std::optional<std::size_t> n_f = {},
                 std::optional<std::size_t> n_b = {})
{
  RunConfig c;
  c.problem = problem;
  c.ladders = std::move(ladders);
  c.n_f = n_f;
  c.n_b = n_b;
  c.output_dir = problem;
  for (const auto& [axis, l] : c.ladders)
    c.output_dir += "_" + axis + std::to_string(l.jmax);
  return c;
}

int failures = 0;

void criterion(int id, const std::string& title, const std::function<void(Check&)>& body)
{
  Check c;
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.note(std::string("error: ") + e.what());
  }
  failures += c.ok ? 0 : 1;
  std::printf("%-4s criterion %2d  %-34s %s\n", c.ok ? "PASS" : "FAIL", id, title.c_str(), c.detail.str().c_str());
  std::fflush(stdout);
}

using L = LadderSpec;

} // namespace

int main(int, char** argv)
{
  ensure_working_lapack(argv);
  const fs::path root = fs::temp_directory_path() / ("pimwnn_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(root);
  ::setenv("PIMWNN_OUTPUT_ROOT", root.c_str(), 1);

  criterion(1, "stationary 1D", [](Check& c) {
    for (auto [problem, J, limit] : {std::tuple{"adv1d", 3, 1e-2}, std::tuple{"diff1d", 3, 1e-3}, std::tuple{"advdiff1d", 5, 1e-3}}) {
      const auto a = run(config(problem, {{"x", L{0, J}}}, 100, 2));
      c.bound(problem, a.relative_l2, limit);
      c.runtime(problem, a.wall_seconds, 5.0);
    }
  });

  criterion(2, "f1 fit", [](Check& c) {
    const auto a9 = run(config("repr_f1", {{"x", L{0, 9}}}, 5000));
    c.bound("J=9", a9.relative_l2, 1e-2);
    const auto a11 = run(config("repr_f1", {{"x", L{0, 11}}}, 5000));
    c.bound("J=11", a11.relative_l2, 2e-3);
    c.runtime("J=11", a11.wall_seconds, 300.0);
  });

  criterion(3, "f2 fit", [](Check& c) {
    const auto a = run(config("repr_f2", {{"x", L{0, 3}}, {"y", L{0, 3}}}, 2000, 400));
    c.bound("e_L2", a.relative_l2, 1e-5);
    c.runtime("time", a.wall_seconds, 30.0);
  });

  criterion(4, "steady 2D", [](Check& c) {
    const auto adv = run(config("adv2d", {{"x", L{0, 4}}, {"y", L{0, 4}}}));
    c.bound("adv2d", adv.relative_l2, 1e-3);
    c.runtime("adv2d", adv.wall_seconds, 120.0);
    const auto diff = run(config("diff2d", {{"x", L{0, 3}}, {"y", L{0, 3}}}));
    c.bound("diff2d", diff.relative_l2, 1e-5);
    c.runtime("diff2d", diff.wall_seconds, 120.0);
  });

  criterion(5, "Helmholtz spectral bias", [](Check& c) {
    const auto a = run(config("helmholtz1d", {{"x", L{0, 7}}}, 20000));
    c.bound("e_L2", a.relative_l2, 2e-1);
    const int band = a.summary["spectrum"]["agreement_band"].get<int>();
    const int support = a.summary["spectrum"]["dominant_support"].get<int>();
    const bool covers = band >= support;
    c.ok = c.ok && covers;
    c.note("band " + std::to_string(band) + " vs support " + std::to_string(support) + (covers ? "" : " !"));
    c.runtime("time", a.wall_seconds, 600.0);
  });

  criterion(6, "space-time advection", [](Check& c) {
    for (const char* problem : {"adv_space_time_packet", "adv_space_time_gauss"}) {
      RunConfig cfg;
      cfg.problem = problem;
      cfg.output_dir = problem;
      const auto a = run(cfg);
      c.bound(std::string(problem).substr(15) + "(T)", a.final_time_l2, 1e-2);
      c.runtime("time", a.wall_seconds, 600.0);
    }
  });

  criterion(7, "growing diffusion", [](Check& c) {
    RunConfig cfg;
    cfg.problem = "growing_diffusion";
    const auto a = run(cfg);
    c.bound("e_L2", a.relative_l2, 1e-2);
  });

  criterion(8, "Burgers", [](Check& c) {
    RunConfig cfg;
    cfg.problem = "burgers";
    const auto a = run(cfg);
    int seen = 0;
    for (const auto& e : a.summary["reference_errors"]) {
      const double t = e["t"].get<double>();
      for (double want : {0.25, 0.5, 0.75})
        if (std::abs(t - want) < 1e-9) {
          c.bound("t=" + std::to_string(want).substr(0, 4), e["e_l2"].get<double>(), 1e-2);
          ++seen;
        }
    }
    if (seen != 3) {
      c.ok = false;
      c.note("reference times missing");
    }
    c.runtime("time", a.wall_seconds, 1800.0);
  });

  criterion(9, "property suites", [](Check& c) {
    const std::string cmd = std::string("\"") + PIMWNN_UNIT_TESTS_PATH + "\" --gtest_filter=*Property* --gtest_brief=1 > \"" +
                            (fs::temp_directory_path() / "pimwnn_properties.log").string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    const bool pass = WIFEXITED(status) && WEXITSTATUS(status) == 0;
    c.ok = pass;
    c.note(pass ? "all property tests pass" : "property failures, see pimwnn_properties.log");
  });

  criterion(10, "monotone refinement", [](Check& c) {
    double prev = std::numeric_limits<double>::infinity();
    std::string trail;
    for (int J = 1; J <= 3; ++J) {
      const double e = run(config("diff1d", {{"x", L{0, J}}}, 100, 2)).relative_l2;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%s%.3e", J > 1 ? " > " : "", e);
      trail += buf;
      c.ok = c.ok && e < prev;
      prev = e;
    }
    c.note(trail + (c.ok ? "" : " !"));
  });

  fs::remove_all(root);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
