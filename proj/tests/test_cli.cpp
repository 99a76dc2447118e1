#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>
#include <unistd.h>

#include "pimwnn/config.hpp"
#include "pimwnn/runner.hpp"

using namespace pimwnn;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const fs::path& p, std::vector<std::string>* header = nullptr)
{
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  if (header) {
    header->clear();
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');)
      header->push_back(cell);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> r;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');)
      r.push_back(std::stod(cell));
    rows.push_back(std::move(r));
  }
  return rows;
}

// Each test writes under its own scratch root.
class OutputRoot : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / ("pimwnn_" + std::to_string(::getpid()) + "_" + info->test_suite_name() + "_" + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
    ::setenv("PIMWNN_OUTPUT_ROOT", root_.c_str(), 1);
  }
  void TearDown() override
  {
    ::unsetenv("PIMWNN_OUTPUT_ROOT");
    fs::remove_all(root_);
  }

  // Runs the CLI binary, returning its exit status; stdout and stderr land in out.
  int cli(const std::string& args, std::string& out) const
  {
    const fs::path log = root_ / "cli.log";
    const std::string cmd = std::string("\"") + PIMWNN_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    out = slurp(log);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path write_config(const std::string& name, const std::string& text) const
  {
    const fs::path p = root_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path root_;
};

const char* diff1d_config = "problem.name = diff1d\nladder.x = 0,3\nsampling.n_f = 100\nsampling.n_b = 2\n";

} // namespace

TEST(ParseConfig, Fields)
{
  const auto c = parse_config("# comment\n"
                              "problem.name = advdiff1d   # trailing\n"
                              "problem.v = 0.2\n"
                              "ladder.x = 0, 5\n"
                              "sampling.n_f = 300\n"
                              "sampling.strategy = random\n"
                              "sampling.seed = 9\n"
                              "solver.rcond = 1e-10\n"
                              "solver.scaling = none\n"
                              "output.dir = somewhere\n");
  EXPECT_EQ(c.problem, "advdiff1d");
  EXPECT_EQ(c.overrides.at("v"), "0.2");
  ASSERT_EQ(c.ladders.size(), 1u);
  EXPECT_EQ(c.ladders[0].first, "x");
  EXPECT_EQ(c.ladders[0].second.j0, 0);
  EXPECT_EQ(c.ladders[0].second.jmax, 5);
  EXPECT_EQ(c.n_f, 300u);
  EXPECT_FALSE(c.n_b);
  EXPECT_EQ(c.sampling, SamplingStrategy::UniformRandom);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.rcond, 1e-10);
  EXPECT_EQ(c.scaling, RowScaling::None);
  EXPECT_EQ(c.output_dir, "somewhere");
}

TEST(ParseConfig, March)
{
  const auto c = parse_config("problem.name = burgers\nmarch.dt = 0.002\nmarch.t_end = 0.5\nmarch.solver = direct\nmarch.snapshots = 0.1, 0.5\n");
  EXPECT_EQ(c.dt, 0.002);
  EXPECT_EQ(c.t_end, 0.5);
  EXPECT_EQ(c.march_solver, PicardSolver::Direct);
  EXPECT_EQ(c.snapshots, (std::vector<double>{0.1, 0.5}));
}

TEST(ParseConfig, Rejects)
{
  EXPECT_THROW(parse_config("ladder.x = 0,3\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nnonsense\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nname = x\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nladder.z = 0,3\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nladder.x = 3\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nsampling.n_f = -4\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nsampling.colour = red\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nsolver.rcond = lots\n"), ParameterError);
  EXPECT_THROW(parse_config("problem.name = diff1d\nplot.style = dots\n"), ParameterError);
  EXPECT_THROW(load_config("/nonexistent/file.cfg"), ParameterError);
}

TEST_F(OutputRoot, RunDiff1d)
{
  auto c = parse_config(diff1d_config);
  const auto art = run(c);
  EXPECT_EQ(art.dir, root_ / "diff1d");
  EXPECT_LE(art.relative_l2, 1e-3);
  for (const char* f : {"solution.csv", "error.csv", "spectrum.csv", "summary.json"})
    EXPECT_TRUE(fs::exists(art.dir / f)) << f;
  const auto j = nlohmann::json::parse(slurp(art.dir / "summary.json"));
  EXPECT_EQ(j["problem"], "diff1d");
  EXPECT_EQ(j["basis_size"], 21);
  for (const char* k : {"e_l2", "residual_norm", "rank", "condition_estimate", "wall_seconds"})
    EXPECT_TRUE(j.contains(k)) << k;
}

TEST_F(OutputRoot, RunReprF2)
{
  auto c = parse_config("problem.name = repr_f2\nladder.x = 0,3\nladder.y = 0,3\nsampling.n_f = 2000\nsampling.n_b = 400\n");
  const auto art = run(c);
  RecordProperty("e_l2", std::to_string(art.relative_l2));
  EXPECT_LE(art.relative_l2, 1e-5);
}

TEST_F(OutputRoot, ValidatesBeforeComputing)
{
  auto c = parse_config(std::string(diff1d_config) + "march.dt = 0.01\n");
  try {
    run(c);
    FAIL() << "expected a config error";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "config");
  }
  EXPECT_FALSE(fs::exists(root_ / "diff1d"));

  c = parse_config("problem.name = adv2d\nladder.t = 0,2\n");
  EXPECT_THROW(run(c), StageError);
  c = parse_config("problem.name = diff1d\nladder.x = 3,1\n");
  EXPECT_THROW(run(c), StageError);
  c = parse_config("problem.name = diff1d\nproblem.lambda = 4\n");
  EXPECT_THROW(run(c), StageError);
  EXPECT_TRUE(fs::is_empty(root_));
}

TEST_F(OutputRoot, ExplicitRootOverride)
{
  auto c = parse_config(diff1d_config);
  c.output_dir = "nested/place";
  EXPECT_EQ(run(c).dir, root_ / "nested" / "place");
  const fs::path abs = root_ / "absolute";
  c.output_dir = abs.string();
  EXPECT_EQ(run(c).dir, abs);
}

TEST_F(OutputRoot, ShortBurgersRun)
{
  auto c = parse_config("problem.name = burgers\nladder.x = -1,6\nsampling.n_f = 300\nmarch.t_end = 0.02\nmarch.dt = 0.005\n"
                        "march.snapshots = 0.01\noutput.eval_points = 50\n");
  const auto art = run(c);
  std::vector<std::string> header;
  const auto rows = read_csv(art.dir / "trajectory.csv", &header);
  EXPECT_EQ(header, (std::vector<std::string>{"t", "x", "u"}));
  std::set<double> times;
  for (const auto& r : rows)
    times.insert(r[0]);
  EXPECT_EQ(times, (std::set<double>{0.0, 0.01, 0.02}));
  EXPECT_EQ(rows.size(), 150u);
  // t = 0 row is the projected -sin(pi x)
  EXPECT_NEAR(rows[0][2], 0.0, 1e-3);
  const auto j = nlohmann::json::parse(slurp(art.dir / "summary.json"));
  EXPECT_EQ(j["march"]["steps"], 4);
}

TEST_F(OutputRoot, CliUnknownProblem)
{
  const auto cfg = write_config("bad.cfg", "problem.name = navier_stokes\n");
  std::string out;
  EXPECT_NE(cli("run \"" + cfg.string() + "\"", out), 0);
  EXPECT_NE(out.find("navier_stokes"), std::string::npos) << out;
  EXPECT_NE(out.find("config"), std::string::npos) << out;
}

TEST_F(OutputRoot, CliRun)
{
  const auto cfg = write_config("diff1d.cfg", diff1d_config);
  std::string out;
  ASSERT_EQ(cli("run \"" + cfg.string() + "\"", out), 0) << out;
  EXPECT_NE(out.find("e_L2"), std::string::npos);
  EXPECT_TRUE(fs::exists(root_ / "diff1d" / "summary.json"));
}

TEST_F(OutputRoot, CliList)
{
  std::string out;
  ASSERT_EQ(cli("list", out), 0);
  int entries = 0;
  std::istringstream in(out);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != ' ')
      ++entries;
  EXPECT_EQ(entries, 13);
  EXPECT_NE(out.find("burgers"), std::string::npos);
  const auto h = out.find("helmholtz1d");
  ASSERT_NE(h, std::string::npos);
  EXPECT_NE(out.find("lambda=10", h), std::string::npos);
}

TEST_F(OutputRoot, CliBenchRejectsUnknownSuite)
{
  std::string out;
  EXPECT_NE(cli("bench table9", out), 0);
  EXPECT_NE(out.find("table9"), std::string::npos);
  EXPECT_NE(cli("", out), 0);
}

TEST(Bench, Rows)
{
  EXPECT_EQ(bench_rows("table1").size(), 3u);
  EXPECT_EQ(bench_rows("table2").size(), 3u);
  const auto t3 = bench_rows("table3");
  ASSERT_EQ(t3.size(), 12u);
  int helmholtz = 0;
  for (const auto& r : t3)
    helmholtz += r.config.problem == "helmholtz1d";
  EXPECT_EQ(helmholtz, 3);
  const auto all = bench_rows("all");
  std::size_t total = 0;
  for (const auto& s : {"table1", "table2", "table3", "table4"})
    total += bench_rows(s).size();
  EXPECT_EQ(all.size(), total);
  std::set<std::string> tags;
  for (const auto& r : all)
    tags.insert(r.table);
  EXPECT_EQ(tags, (std::set<std::string>{"table1", "table2", "table3", "table4"}));
  EXPECT_THROW(bench_rows("table5"), ParameterError);
}

TEST_F(OutputRoot, BenchTable2)
{
  const auto results = bench("table2");
  ASSERT_EQ(results.size(), 3u);
  std::ostringstream report;
  write_bench_report("table2", results, report);
  EXPECT_TRUE(fs::exists(root_ / "bench" / "table2" / "bench.csv"));
  EXPECT_TRUE(fs::exists(root_ / "bench" / "table2" / "bench.json"));
  for (const auto& r : results)
    EXPECT_NE(r.status, "ERROR") << r.error;
  EXPECT_EQ(results[0].status, "INFO");
  EXPECT_EQ(results[0].achieved > results[2].achieved, true);
}

// ---------------------------------------------------------------------------
// invariants

TEST_F(OutputRoot, CliPropertyReproducibility)
{
  for (const std::string problem : {"diff1d", "flower_diff", "adv_space_time_gauss"}) {
    RunConfig c;
    c.problem = problem;
    if (problem == "flower_diff")
      c.ladders = {{"x", {0, 2}}, {"y", {0, 2}}};
    c.output_dir = "a_" + problem;
    const auto a = run(c);
    c.output_dir = "b_" + problem;
    const auto b = run(c);
    for (const auto& f : a.files) {
      if (f.extension() != ".csv")
        continue;
      const auto bytes = slurp(f);
      EXPECT_FALSE(bytes.empty());
      EXPECT_EQ(bytes, slurp(b.dir / f.filename())) << problem << " " << f.filename();
    }
  }
}

TEST_F(OutputRoot, CliPropertySummaryIntegrity)
{
  for (const std::string problem : {"diff1d", "adv2d", "growing_diffusion"}) {
    RunConfig c;
    c.problem = problem;
    if (problem == "adv2d")
      c.ladders = {{"x", {0, 2}}, {"y", {0, 2}}};
    const auto art = run(c);
    const auto spec = make_problem(problem);
    std::vector<std::string> header;
    const auto rows = read_csv(art.dir / "solution.csv", &header);
    const std::size_t dim = spec.geometry.dim();
    ASSERT_EQ(header.size(), dim + 2);
    std::vector<double> num, exact;
    for (const auto& r : rows) {
      num.push_back(r[dim]);
      exact.push_back(exact_eval(spec, std::span<const double>(r.data(), dim)));
    }
    const double recomputed = relative_l2(num, exact);
    const double reported = nlohmann::json::parse(slurp(art.dir / "summary.json"))["e_l2"].get<double>();
    EXPECT_NEAR(recomputed, reported, 1e-12 * reported) << problem;
  }
}
