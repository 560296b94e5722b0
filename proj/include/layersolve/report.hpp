#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "layersolve/analysis.hpp"
#include "layersolve/config.hpp"

namespace layersolve {

/// Files written by emit_outputs and the ones that could not be.
struct EmitReport {
  std::vector<std::string> written;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Log2-log2 plot of E_uniform against N: one polyline per table, plus
/// reference slopes N^-1 and N^-2.
void write_convergence_svg(std::ostream& out, const std::vector<ConvergenceTable>& tables);

/// Writes <scheme>_<problem>.csv / .md per table, convergence_<problem>.svg,
/// <scheme>_<problem>_surface.csv and config.json into config.out_dir.
/// The surface run uses the smallest N and eps of the config.
EmitReport emit_outputs(const std::vector<ConvergenceTable>& tables, const RunConfig& config);

}  // namespace layersolve
