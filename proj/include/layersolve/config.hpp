#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "layersolve/analysis.hpp"
#include "layersolve/mesh.hpp"
#include "layersolve/problem.hpp"
#include "layersolve/solver.hpp"

namespace layersolve {

enum class ProblemId { P1, P2 };

std::string_view to_string(ProblemId id);

enum class EmitKind { Csv, Markdown, Svg, Surface };

std::string_view to_string(EmitKind kind);

/// Fully resolved run description. Unset optionals mean "problem default".
struct RunConfig {
  ProblemId problem = ProblemId::P2;
  int p = 1;
  std::vector<Scheme> schemes = {Scheme::HybridGeneralizedShishkin, Scheme::UpwindUniform, Scheme::UpwindShishkin};
  std::vector<double> eps_list;
  std::vector<int> n_list;
  MPolicy m_policy;
  std::optional<double> tau0;
  std::optional<double> sigma;
  std::optional<LStrategy> L_strategy;
  Refinement refine = Refinement::Bisect;
  ErrorNorm norm = ErrorNorm::SpaceTime;
  std::string out_dir = "layersolve-out";
  std::vector<EmitKind> emit = {EmitKind::Csv, EmitKind::Markdown, EmitKind::Svg, EmitKind::Surface};

  bool emits(EmitKind kind) const;
  MeshOptions mesh_options() const;
  ExperimentOptions experiment_options() const;
};

/// Invalid configuration value or unknown key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by parse_config for --help / --version; carries the text to print.
class HelpRequested : public std::exception {
 public:
  explicit HelpRequested(std::string text) : text_(std::move(text)) {}
  const char* what() const noexcept override { return text_.c_str(); }

 private:
  std::string text_;
};

/// 2^-6, 2^-8, ..., 2^-24.
std::vector<double> default_eps_list();
/// 32 ... 2048, or 32 ... 512 under n-squared.
std::vector<int> default_n_list(const MPolicy& policy);

/// Defaults, then the JSON file named by --config, then the flags.
/// Throws ConfigError on any invalid value and HelpRequested for --help.
RunConfig parse_config(int argc, const char* const* argv);
RunConfig parse_config(const std::vector<std::string>& args);

/// Applies the keys of a JSON object on top of `base`; unknown keys are rejected.
RunConfig apply_config_json(const std::string& json_text, RunConfig base = {});

/// Checks every value and fills empty eps/N lists with the defaults.
void resolve(RunConfig& config);

/// Machine-readable echo of the resolved config; apply_config_json of this
/// text reproduces the same run.
std::string config_to_json(const RunConfig& config);

/// Builtin problem selected by the config.
TurningPointProblem make_problem(const RunConfig& config);

/// "hybrid-gshishkin", "upwind-uniform" or "upwind-shishkin".
Scheme parse_scheme(const std::string& text);
/// Decimal number or power of two written as 2^-k.
double parse_eps(const std::string& text);

}  // namespace layersolve
