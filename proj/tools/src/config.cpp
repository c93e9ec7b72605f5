#include "apdg_tools/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "apdg/errors.hpp"

namespace apdg::tools {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kKeys = {
    "kind",        "model",       "K",          "m",           "A",          "C",
    "epsilon",     "flux",        "split_point", "order",      "degree",     "basis",
    "meshes",      "x_min",       "x_max",      "T",           "bc",         "output",
    "name",        "exact",       "initial",    "rho_left",    "rho_right",  "j_left",
    "j_right",     "x_jump",      "maxwellian", "rho_minus",   "rho_plus",   "xi0",
    "amplitude",   "reference_N", "reference_order", "c_hyper", "c_diff",    "error_norm",
    "support_tol", "well_prepared"};

template <class E>
E lookup(const std::map<std::string, E>& table, const std::string& key, const std::string& value) {
  auto it = table.find(value);
  if (it == table.end()) throw ConfigError("config: bad value '" + value + "' for key " + key);
  return it->second;
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {
    for (const auto& [key, child] : tree) {
      if (!child.empty()) throw ConfigError("config: sections are not supported ([" + key + "])");
      if (!kKeys.contains(key)) throw ConfigError("config: unknown key " + key);
    }
  }

  bool has(const std::string& key) const { return tree_.find(key) != tree_.not_found(); }

  std::string str(const std::string& key, const std::string& fallback) const {
    return has(key) ? tree_.get<std::string>(key) : fallback;
  }

  double real(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    return parse_real(key, tree_.get<std::string>(key));
  }

  std::optional<double> maybe_real(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return parse_real(key, tree_.get<std::string>(key));
  }

  int integer(const std::string& key, int fallback) const {
    if (!has(key)) return fallback;
    const auto s = tree_.get<std::string>(key);
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) {
      throw ConfigError("config: " + key + " is not an integer: '" + s + "'");
    }
    return v;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto s = tree_.get<std::string>(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError("config: " + key + " is not a boolean: '" + s + "'");
  }

  std::vector<int> int_list(const std::string& key) const {
    std::vector<int> out;
    if (!has(key)) return out;
    std::string s = tree_.get<std::string>(key);
    for (char& c : s) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) {
      int v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size()) {
        throw ConfigError("config: bad entry '" + tok + "' in " + key);
      }
      out.push_back(v);
    }
    return out;
  }

 private:
  static double parse_real(const std::string& key, const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &pos);
    } catch (const std::exception&) {
      throw ConfigError("config: " + key + " is not a number: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) {
      throw ConfigError("config: " + key + " is not a finite number: '" + s + "'");
    }
    return v;
  }

  const pt::ptree& tree_;
};

ExperimentConfig from_tree(const pt::ptree& tree) {
  const Reader r(tree);
  ExperimentConfig cfg;

  if (!r.has("kind")) throw ConfigError("config: missing key kind");
  cfg.kind = lookup<ExperimentKind>({{"converge", ExperimentKind::Converge},
                                     {"riemann", ExperimentKind::Riemann},
                                     {"ap-check", ExperimentKind::ApCheck}},
                                    "kind", r.str("kind", ""));

  const auto model = r.str("model", "telegraph");
  if (model == "telegraph") {
    cfg.model = telegraph();
  } else if (model == "porous") {
    cfg.model = Porous{r.real("K", 1.0), r.real("m", 0.0)};
  } else if (model == "advdiff") {
    cfg.model = AdvDiff{r.real("A", 1.0)};
  } else if (model == "burgers") {
    cfg.model = Burgers{r.real("C", 0.5)};
  } else {
    throw ConfigError("config: bad value '" + model + "' for key model");
  }

  cfg.epsilon = r.real("epsilon", 1.0);
  cfg.order = r.integer("order", 1);
  if (cfg.order < 1 || cfg.order > 3) throw ConfigError("config: order must be 1, 2 or 3");
  cfg.degree = r.integer("degree", cfg.order - 1);
  if (cfg.degree < 0) throw ConfigError("config: degree must be >= 0");
  cfg.basis = lookup<BasisKind>(
      {{"modal", BasisKind::ModalLegendre}, {"nodal", BasisKind::NodalGauss}}, "basis",
      r.str("basis", "modal"));

  cfg.x_min = r.real("x_min", cfg.x_min);
  cfg.x_max = r.real("x_max", cfg.x_max);
  if (!(cfg.x_max > cfg.x_min)) throw ConfigError("config: x_max must exceed x_min");

  const auto flux = r.str("flux", "lr");
  if (flux == "lr") {
    cfg.flux = AltLeftRight{};
  } else if (flux == "rl") {
    cfg.flux = AltRightLeft{};
  } else if (flux == "central") {
    cfg.flux = Central{};
  } else if (flux == "split") {
    cfg.flux = PorousSplit{r.real("split_point", 0.5 * (cfg.x_min + cfg.x_max))};
  } else {
    throw ConfigError("config: bad value '" + flux + "' for key flux");
  }

  cfg.meshes = r.int_list("meshes");
  if (cfg.meshes.empty()) throw ConfigError("config: meshes must list at least one N");
  for (std::size_t i = 0; i < cfg.meshes.size(); ++i) {
    if (cfg.meshes[i] < 1) throw ConfigError("config: mesh sizes must be positive");
    if (i > 0 && cfg.meshes[i] <= cfg.meshes[i - 1]) {
      throw ConfigError("config: meshes must be strictly increasing");
    }
    if (i > 0 && cfg.kind == ExperimentKind::Converge && cfg.meshes[i] != 2 * cfg.meshes[i - 1]) {
      throw ConfigError("config: converge meshes must double");
    }
  }

  cfg.T = r.real("T", 1.0);
  if (!(cfg.T > 0.0)) throw ConfigError("config: T must be positive");
  cfg.output = r.str("output", ".");
  cfg.name = r.str("name", to_string(cfg.kind));

  cfg.exact = lookup<ExactKind>({{"none", ExactKind::None},
                                 {"telegraph", ExactKind::Telegraph},
                                 {"advdiff", ExactKind::AdvDiff},
                                 {"advdiff-riemann", ExactKind::AdvDiffRiemann},
                                 {"rw-shock", ExactKind::RuijgrokWu},
                                 {"barenblatt", ExactKind::Barenblatt}},
                                "exact", r.str("exact", "none"));
  const std::string default_initial = cfg.exact == ExactKind::None      ? "riemann"
                                      : cfg.exact == ExactKind::AdvDiffRiemann ? "riemann"
                                                                               : "exact";
  cfg.initial = lookup<InitialKind>({{"exact", InitialKind::Exact},
                                     {"riemann", InitialKind::Riemann},
                                     {"sine", InitialKind::Sine},
                                     {"constant", InitialKind::Constant}},
                                    "initial", r.str("initial", default_initial));
  if (cfg.initial == InitialKind::Exact && cfg.exact == ExactKind::None) {
    throw ConfigError("config: initial = exact needs an exact solution");
  }

  cfg.rho_left = r.real("rho_left", cfg.rho_left);
  cfg.rho_right = r.real("rho_right", cfg.rho_right);
  cfg.j_left = r.real("j_left", cfg.j_left);
  cfg.j_right = r.real("j_right", cfg.j_right);
  cfg.x_jump = r.real("x_jump", cfg.x_jump);
  cfg.maxwellian = r.boolean("maxwellian", false);
  cfg.rho_minus = r.real("rho_minus", cfg.rho_minus);
  cfg.rho_plus = r.real("rho_plus", cfg.rho_plus);
  cfg.xi0 = r.real("xi0", cfg.xi0);
  cfg.amplitude = r.real("amplitude", cfg.amplitude);

  cfg.reference_N = r.integer("reference_N", 0);
  if (cfg.reference_N < 0) throw ConfigError("config: reference_N must be >= 0");
  cfg.reference_order = r.integer("reference_order", 3);
  if (cfg.reference_order < 1 || cfg.reference_order > 3) {
    throw ConfigError("config: reference_order must be 1, 2 or 3");
  }
  cfg.c_hyper = r.maybe_real("c_hyper");
  cfg.c_diff = r.maybe_real("c_diff");
  if ((cfg.c_hyper && !(*cfg.c_hyper >= 0.0)) || (cfg.c_diff && !(*cfg.c_diff >= 0.0))) {
    throw ConfigError("config: c_hyper and c_diff must be nonnegative");
  }
  cfg.error_norm = lookup<ErrorNorm>(
      {{"integral", ErrorNorm::Integral}, {"mean", ErrorNorm::DomainMean}}, "error_norm",
      r.str("error_norm", "integral"));
  cfg.support_tol = r.real("support_tol", cfg.support_tol);
  cfg.well_prepared = r.boolean("well_prepared", true);

  // Boundary states are read off the initial profile at the domain ends.
  const auto bc = r.str("bc", "periodic");
  if (bc == "periodic") {
    cfg.bc = Periodic{};
  } else if (bc == "inflow") {
    const auto p = initial_profile(cfg);
    cfg.bc = InflowOutflow{p.rho(cfg.x_min), p.j(cfg.x_min), p.rho(cfg.x_max), p.j(cfg.x_max)};
  } else {
    throw ConfigError("config: bad value '" + bc + "' for key bc");
  }

  if (cfg.kind == ExperimentKind::Converge && cfg.exact == ExactKind::None) {
    throw ConfigError("config: converge needs an exact solution (key exact)");
  }
  if (cfg.kind == ExperimentKind::ApCheck && !(cfg.epsilon <= 1e-6)) {
    throw ConfigError("config: ap-check needs epsilon <= 1e-6");
  }
  validate(cfg.model, cfg.epsilon);
  return cfg;
}

}  // namespace

ExperimentConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_string(ss.str());
}

ExperimentConfig parse_config_string(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return from_tree(tree);
}

std::optional<ExactSolution> exact_solution(const ExperimentConfig& cfg) {
  switch (cfg.exact) {
    case ExactKind::None:
      return std::nullopt;
    case ExactKind::Telegraph:
      return TelegraphSmooth{cfg.epsilon};
    case ExactKind::AdvDiff:
      return AdvDiffSmooth{};
    case ExactKind::AdvDiffRiemann: {
      const auto* a = std::get_if<AdvDiff>(&cfg.model);
      return AdvDiffRiemann{cfg.rho_left, cfg.rho_right, a ? a->A : 1.0};
    }
    case ExactKind::RuijgrokWu: {
      const auto* b = std::get_if<Burgers>(&cfg.model);
      if (!b || b->C != 0.5) throw ConfigError("config: rw-shock needs model = burgers, C = 0.5");
      return RuijgrokWuShock(cfg.epsilon, cfg.rho_minus, cfg.rho_plus, cfg.xi0);
    }
    case ExactKind::Barenblatt:
      return Barenblatt{};
  }
  return std::nullopt;
}

InitialProfile initial_profile(const ExperimentConfig& cfg) {
  switch (cfg.initial) {
    case InitialKind::Exact:
      return profile_from_exact(*exact_solution(cfg), 0.0);
    case InitialKind::Riemann:
      if (cfg.maxwellian) {
        return maxwellian_riemann(cfg.model, cfg.epsilon, cfg.x_jump, cfg.rho_left,
                                  cfg.rho_right);
      }
      return riemann_profile(cfg.x_jump, cfg.rho_left, cfg.j_left, cfg.rho_right, cfg.j_right);
    case InitialKind::Sine: {
      InitialProfile p;
      const double a = cfg.amplitude;
      const double L = cfg.x_max - cfg.x_min;
      const double x0 = cfg.x_min;
      p.rho = [=](double x) { return 2.0 * a + a * std::sin(2.0 * std::numbers::pi * (x - x0) / L); };
      p.j = [](double) { return 0.0; };
      return p;
    }
    case InitialKind::Constant: {
      InitialProfile p;
      const double a = cfg.amplitude;
      p.rho = [a](double) { return a; };
      p.j = [](double) { return 0.0; };
      return p;
    }
  }
  throw ConfigError("config: unreachable initial kind");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Converge:
      return "converge";
    case ExperimentKind::Riemann:
      return "riemann";
    case ExperimentKind::ApCheck:
      return "ap-check";
  }
  return "unknown";
}

}  // namespace apdg::tools
