#include "layersolve/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

namespace layersolve {

using nlohmann::json;

std::string_view to_string(ProblemId id) { return id == ProblemId::P1 ? "p1" : "p2"; }

std::string_view to_string(EmitKind kind) {
  switch (kind) {
    case EmitKind::Csv: return "csv";
    case EmitKind::Markdown: return "md";
    case EmitKind::Svg: return "svg";
    case EmitKind::Surface: return "surface";
  }
  return "?";
}

bool RunConfig::emits(EmitKind kind) const { return std::find(emit.begin(), emit.end(), kind) != emit.end(); }

MeshOptions RunConfig::mesh_options() const {
  MeshOptions options;
  options.tau0 = tau0;
  options.sigma = sigma;
  options.L_strategy = L_strategy;
  options.refine = refine;
  return options;
}

ExperimentOptions RunConfig::experiment_options() const {
  ExperimentOptions options;
  options.double_mesh.mesh = mesh_options();
  options.double_mesh.norm = norm;
  return options;
}

std::vector<double> default_eps_list() {
  std::vector<double> out;
  for (int k = 6; k <= 24; k += 2) out.push_back(std::ldexp(1.0, -k));
  return out;
}

std::vector<int> default_n_list(const MPolicy& policy) {
  const int last = policy.kind == MPolicy::Kind::NSquared ? 512 : 2048;
  std::vector<int> out;
  for (int N = 32; N <= last; N *= 2) out.push_back(N);
  return out;
}

namespace {

ProblemId parse_problem(const std::string& text) {
  if (text == "p1") return ProblemId::P1;
  if (text == "p2") return ProblemId::P2;
  throw ConfigError("invalid problem '" + text + "' (expected p1 or p2)");
}

LStrategy parse_L_strategy(const std::string& text) {
  if (text == "logN") return LStrategy::LogN;
  if (text == "lambertW") return LStrategy::LambertW;
  throw ConfigError("invalid L_strategy '" + text + "' (expected logN or lambertW)");
}

Refinement parse_refine(const std::string& text) {
  if (text == "bisect") return Refinement::Bisect;
  if (text == "regenerate") return Refinement::Regenerate;
  throw ConfigError("invalid refine '" + text + "' (expected bisect or regenerate)");
}

ErrorNorm parse_norm(const std::string& text) {
  if (text == "space-time") return ErrorNorm::SpaceTime;
  if (text == "final-time") return ErrorNorm::FinalTime;
  throw ConfigError("invalid norm '" + text + "' (expected space-time or final-time)");
}

EmitKind parse_emit(const std::string& text) {
  for (EmitKind kind : {EmitKind::Csv, EmitKind::Markdown, EmitKind::Svg, EmitKind::Surface})
    if (text == to_string(kind)) return kind;
  throw ConfigError("invalid emit '" + text + "' (expected csv, md, svg or surface)");
}

MPolicy parse_m_policy(const std::string& text) {
  try {
    return MPolicy::parse(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

int parse_int(const std::string& text, const std::string& what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("invalid " + what + " '" + text + "' (expected an integer)");
  return value;
}

template <class T, class F>
std::vector<T> map_list(const std::vector<std::string>& items, F parse) {
  std::vector<T> out;
  for (const auto& item : items) out.push_back(parse(item));
  return out;
}

std::vector<std::string> string_list(const json& value, const std::string& key) {
  std::vector<std::string> out;
  if (value.is_string()) {
    out.push_back(value.get<std::string>());
  } else if (value.is_array()) {
    for (const auto& item : value) {
      if (item.is_string()) out.push_back(item.get<std::string>());
      else if (item.is_number()) out.push_back(item.dump());
      else throw ConfigError("key '" + key + "': list items must be strings or numbers");
    }
  } else {
    throw ConfigError("key '" + key + "': expected a string or a list");
  }
  return out;
}

double json_number(const json& value, const std::string& key) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return parse_eps(value.get<std::string>());
  throw ConfigError("key '" + key + "': expected a number");
}

std::string json_string(const json& value, const std::string& key) {
  if (!value.is_string()) throw ConfigError("key '" + key + "': expected a string");
  return value.get<std::string>();
}

}  // namespace

Scheme parse_scheme(const std::string& text) {
  for (Scheme scheme : {Scheme::HybridGeneralizedShishkin, Scheme::UpwindUniform, Scheme::UpwindShishkin})
    if (text == to_string(scheme)) return scheme;
  throw ConfigError("invalid scheme '" + text + "' (expected hybrid-gshishkin, upwind-uniform or upwind-shishkin)");
}

double parse_eps(const std::string& text) {
  if (text.rfind("2^", 0) == 0) return std::ldexp(1.0, parse_int(text.substr(2), "exponent"));
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("invalid number '" + text + "'");
  return value;
}

RunConfig apply_config_json(const std::string& json_text, RunConfig config) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config file must hold a JSON object");

  for (const auto& [key, value] : root.items()) {
    if (key == "problem") {
      config.problem = parse_problem(json_string(value, key));
    } else if (key == "p") {
      if (!value.is_number_integer()) throw ConfigError("key 'p': expected an integer");
      config.p = value.get<int>();
    } else if (key == "scheme") {
      config.schemes = map_list<Scheme>(string_list(value, key), parse_scheme);
    } else if (key == "eps") {
      if (!value.is_array()) throw ConfigError("key 'eps': expected a list");
      config.eps_list.clear();
      for (const auto& item : value) config.eps_list.push_back(json_number(item, key));
    } else if (key == "n") {
      if (!value.is_array()) throw ConfigError("key 'n': expected a list");
      config.n_list.clear();
      for (const auto& item : value) {
        if (!item.is_number_integer()) throw ConfigError("key 'n': expected integers");
        config.n_list.push_back(item.get<int>());
      }
    } else if (key == "m_policy") {
      config.m_policy = parse_m_policy(json_string(value, key));
    } else if (key == "tau0") {
      config.tau0 = value.is_null() ? std::nullopt : std::optional(json_number(value, key));
    } else if (key == "sigma") {
      config.sigma = value.is_null() ? std::nullopt : std::optional(json_number(value, key));
    } else if (key == "L_strategy") {
      config.L_strategy = value.is_null() ? std::nullopt : std::optional(parse_L_strategy(json_string(value, key)));
    } else if (key == "refine") {
      config.refine = parse_refine(json_string(value, key));
    } else if (key == "norm") {
      config.norm = parse_norm(json_string(value, key));
    } else if (key == "out_dir") {
      config.out_dir = json_string(value, key);
    } else if (key == "emit") {
      config.emit = map_list<EmitKind>(string_list(value, key), parse_emit);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  return config;
}

TurningPointProblem make_problem(const RunConfig& config) {
  if (config.problem == ProblemId::P1) return builtin_problem_1();
  return builtin_problem_2(config.p);
}

void resolve(RunConfig& config) {
  if (config.p < 1 || config.p % 2 == 0)
    throw ConfigError("p must be a positive odd integer, got " + std::to_string(config.p));
  if (config.schemes.empty()) throw ConfigError("scheme set is empty");
  if (config.emit.empty()) throw ConfigError("emit set is empty");
  if (config.out_dir.empty()) throw ConfigError("out_dir is empty");

  if (config.eps_list.empty()) config.eps_list = default_eps_list();
  if (config.n_list.empty()) config.n_list = default_n_list(config.m_policy);

  for (double eps : config.eps_list)
    if (!(eps > 0.0 && eps <= 1.0)) {
      std::ostringstream msg;
      msg << "eps must lie in (0, 1], got " << eps;
      throw ConfigError(msg.str());
    }
  for (std::size_t j = 0; j < config.n_list.size(); ++j) {
    const int N = config.n_list[j];
    if (N < 4 || N % 4 != 0) throw ConfigError("N must be a positive multiple of 4, got " + std::to_string(N));
    if (j > 0 && N <= config.n_list[j - 1]) throw ConfigError("N list must be strictly ascending");
  }

  const TurningPointProblem problem = make_problem(config);
  const MeshOptions mesh = config.mesh_options();
  config.tau0 = mesh.resolved_tau0(problem);
  config.sigma = mesh.resolved_sigma(problem);
  config.L_strategy = mesh.resolved_L_strategy(problem);
  if (!(*config.tau0 >= 1.0 / problem.alpha)) {
    std::ostringstream msg;
    msg << "tau0 must be at least 1/alpha = " << 1.0 / problem.alpha << ", got " << *config.tau0;
    throw ConfigError(msg.str());
  }
  if (!(*config.sigma > 0.0)) throw ConfigError("sigma must be positive");
}

std::string config_to_json(const RunConfig& config) {
  json root;
  root["problem"] = std::string(to_string(config.problem));
  root["p"] = config.p;
  json schemes = json::array();
  for (Scheme scheme : config.schemes) schemes.push_back(std::string(to_string(scheme)));
  root["scheme"] = schemes;
  root["eps"] = config.eps_list;
  root["n"] = config.n_list;
  root["m_policy"] = config.m_policy.to_string();
  root["tau0"] = config.tau0 ? json(*config.tau0) : json(nullptr);
  root["sigma"] = config.sigma ? json(*config.sigma) : json(nullptr);
  root["L_strategy"] = config.L_strategy ? json(std::string(to_string(*config.L_strategy))) : json(nullptr);
  root["refine"] = std::string(to_string(config.refine));
  root["norm"] = std::string(to_string(config.norm));
  root["out_dir"] = config.out_dir;
  json emit = json::array();
  for (EmitKind kind : config.emit) emit.push_back(std::string(to_string(kind)));
  root["emit"] = emit;
  return root.dump(2) + "\n";
}

RunConfig parse_config(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return parse_config(args);
}

RunConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"Parameter-uniform solver for singularly perturbed turning-point problems", "layersolve"};
  app.set_version_flag("--version", std::string("layersolve 0.1.0"));

  std::string config_file, problem, m_policy, L_strategy, refine, norm, out_dir;
  int p = 0;
  double tau0 = 0.0, sigma = 0.0;
  std::vector<std::string> schemes, eps, emit;
  std::vector<int> n;

  app.add_option("--config", config_file, "JSON file with any of the keys below")->check(CLI::ExistingFile);
  auto* o_problem = app.add_option("--problem", problem, "p1 or p2");
  auto* o_p = app.add_option("--p", p, "turning point exponent for p2 (odd)");
  auto* o_scheme = app.add_option("--scheme", schemes, "hybrid-gshishkin, upwind-uniform, upwind-shishkin")->delimiter(',');
  auto* o_eps = app.add_option("--eps", eps, "eps values, e.g. 2^-6,2^-8 or 0.01")->delimiter(',');
  auto* o_n = app.add_option("--n", n, "N values (multiples of 4)")->delimiter(',');
  auto* o_m = app.add_option("--m-policy", m_policy, "equal-n, n-squared or fixed:<int>");
  auto* o_tau0 = app.add_option("--tau0", tau0, "generalized Shishkin constant");
  auto* o_sigma = app.add_option("--sigma", sigma, "standard Shishkin constant");
  auto* o_L = app.add_option("--L-strategy", L_strategy, "logN or lambertW");
  auto* o_refine = app.add_option("--refine", refine, "bisect or regenerate");
  auto* o_norm = app.add_option("--norm", norm, "space-time or final-time");
  auto* o_out = app.add_option("--out-dir", out_dir, "output directory");
  auto* o_emit = app.add_option("--emit", emit, "csv, md, svg, surface")->delimiter(',');

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForVersion&) {
    throw HelpRequested(app.version());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  RunConfig config;
  if (!config_file.empty()) {
    std::ifstream in(config_file);
    if (!in) throw ConfigError("cannot read config file '" + config_file + "'");
    std::stringstream text;
    text << in.rdbuf();
    config = apply_config_json(text.str(), config);
  }

  if (*o_problem) config.problem = parse_problem(problem);
  if (*o_p) config.p = p;
  if (*o_scheme) config.schemes = map_list<Scheme>(schemes, parse_scheme);
  if (*o_eps) config.eps_list = map_list<double>(eps, parse_eps);
  if (*o_n) config.n_list = n;
  if (*o_m) config.m_policy = parse_m_policy(m_policy);
  if (*o_tau0) config.tau0 = tau0;
  if (*o_sigma) config.sigma = sigma;
  if (*o_L) config.L_strategy = parse_L_strategy(L_strategy);
  if (*o_refine) config.refine = parse_refine(refine);
  if (*o_norm) config.norm = parse_norm(norm);
  if (*o_out) config.out_dir = out_dir;
  if (*o_emit) config.emit = map_list<EmitKind>(emit, parse_emit);

  resolve(config);
  return config;
}

}  // namespace layersolve
