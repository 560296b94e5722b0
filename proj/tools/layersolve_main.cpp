// layersolve: convergence tables for the builtin turning-point problems.

#include <exception>
#include <iostream>

#include "layersolve/analysis.hpp"
#include "layersolve/config.hpp"
#include "layersolve/report.hpp"

using namespace layersolve;

int main(int argc, char** argv) {
  RunConfig config;
  try {
    config = parse_config(argc, argv);
  } catch (const HelpRequested& h) {
    std::cout << h.what() << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "layersolve: " << e.what() << '\n';
    return 2;
  }

  try {
    const TurningPointProblem problem = make_problem(config);
    std::vector<ConvergenceTable> tables;
    bool complete = true;
    for (Scheme scheme : config.schemes) {
      std::cerr << "running " << to_string(scheme) << " on " << to_string(config.problem) << " ("
                << config.eps_list.size() * config.n_list.size() << " cells)\n";
      tables.push_back(
          run_experiment(problem, scheme, config.eps_list, config.n_list, config.m_policy, config.experiment_options()));
      const ConvergenceTable& t = tables.back();
      for (std::size_t e = 0; e < t.eps_list.size(); ++e)
        for (std::size_t j = 0; j < t.n_list.size(); ++j)
          if (!t.cells[e][j].E) {
            complete = false;
            std::cerr << "  cell eps=" << format_sig6(t.eps_list[e]) << " N=" << t.n_list[j]
                      << " failed: " << t.cells[e][j].error << '\n';
          }
      write_table_markdown(std::cout, t);
      std::cout << '\n';
    }

    const EmitReport report = emit_outputs(tables, config);
    for (const auto& path : report.written) std::cerr << "wrote " << path << '\n';
    for (const auto& failure : report.failures) std::cerr << "layersolve: " << failure << '\n';
    return complete && report.ok() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "layersolve: " << e.what() << '\n';
    return 1;
  }
}
