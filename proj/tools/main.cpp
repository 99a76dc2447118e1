// Command-line front end: run <config>, bench <suite>, list.

#include <cmath>
#include <cstdio>
#include <iostream>

#include "CLI11.hpp"

#include "pimwnn/blas_check.hpp"
#include "pimwnn/runner.hpp"

int main(int argc, char** argv)
{
  pimwnn::ensure_working_lapack(argv);

  CLI::App app{"Physics-informed multiresolution wavelet PDE solver"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Solve the problem described by a config file and write artifacts");
  run->add_option("config", config_path, "key = value config file")->required();

  std::string suite;
  auto* bench = app.add_subcommand("bench", "Reproduce a benchmark table");
  bench->add_option("suite", suite, "table1, table2, table3, table4 or all")->required();

  auto* list = app.add_subcommand("list", "List the registered problems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto cfg = pimwnn::load_config(config_path);
      const auto art = pimwnn::run(cfg);
      std::cout << "problem   " << cfg.problem << "\n";
      std::cout << "N         " << art.summary.value("basis_size", 0) << "\n";
      if (std::isfinite(art.relative_l2))
        std::printf("e_L2      %.6e\n", art.relative_l2);
      if (std::isfinite(art.final_time_l2))
        std::printf("e_L2(T)   %.6e\n", art.final_time_l2);
      std::printf("wall      %.2f s\n", art.wall_seconds);
      std::cout << "artifacts " << art.dir.string() << "\n";
      return 0;
    }
    if (*bench) {
      const auto rows = pimwnn::bench_rows(suite); // validates the suite name up front
      std::cerr << "running " << rows.size() << " rows\n";
      const auto results = pimwnn::bench(suite, &std::cerr);
      pimwnn::write_bench_report(suite, results, std::cout);
      return pimwnn::bench_passed(results) ? 0 : 1;
    }
    if (*list) {
      pimwnn::list_problems(std::cout);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
