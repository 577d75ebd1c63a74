#include "isrs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "isrs/errors.hpp"
#include "isrs/units.hpp"

namespace isrs::config {
namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

std::string located(const std::string& key, int line, const std::string& message) {
  std::string out = key + ": " + message;
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  return out;
}

class Reader {
 public:
  Reader(RunConfig& cfg) : cfg_(cfg) {}

  /// Returns the child map, rejecting unknown keys.
  YAML::Node section(const YAML::Node& parent, const std::string& key, const std::set<std::string>& allowed) {
    YAML::Node node = parent[key];
    if (!node) return node;
    remember(key, node);
    if (!node.IsMap()) throw ConfigurationError(located(key, line_of(node), "expected a mapping"));
    check_keys(node, key, allowed);
    return node;
  }

  void check_keys(const YAML::Node& node, const std::string& prefix, const std::set<std::string>& allowed) {
    for (const auto& kv : node) {
      const auto name = kv.first.as<std::string>();
      if (!allowed.count(name))
        throw ConfigurationError(located(prefix.empty() ? name : prefix + "." + name, line_of(kv.first), "unknown key"));
    }
  }

  void number(const YAML::Node& map, const std::string& prefix, const std::string& key, double& out) {
    if (!map) return;
    const YAML::Node n = map[key];
    if (!n) return;
    const std::string path = prefix + "." + key;
    remember(path, n);
    out = to_double(n, path);
  }

  void integer(const YAML::Node& map, const std::string& prefix, const std::string& key, long long& out) {
    double v = static_cast<double>(out);
    number(map, prefix, key, v);
    if (v != std::floor(v) || !std::isfinite(v))
      throw ConfigurationError(located(prefix + "." + key, cfg_.lines[prefix + "." + key], "expected an integer"));
    out = static_cast<long long>(v);
  }

  void text(const YAML::Node& map, const std::string& prefix, const std::string& key, std::string& out) {
    if (!map) return;
    const YAML::Node n = map[key];
    if (!n) return;
    const std::string path = prefix + "." + key;
    remember(path, n);
    if (!n.IsScalar()) throw ConfigurationError(located(path, line_of(n), "expected a scalar"));
    out = n.Scalar();
  }

  void numbers(const YAML::Node& map, const std::string& prefix, const std::string& key, std::vector<double>& out) {
    if (!map) return;
    const YAML::Node n = map[key];
    if (!n) return;
    const std::string path = prefix + "." + key;
    remember(path, n);
    if (!n.IsSequence()) throw ConfigurationError(located(path, line_of(n), "expected a list of numbers"));
    out.clear();
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(to_double(n[i], path + "[" + std::to_string(i) + "]"));
  }

  void flag(const YAML::Node& map, const std::string& prefix, const std::string& key, bool& out) {
    if (!map) return;
    const YAML::Node n = map[key];
    if (!n) return;
    const std::string path = prefix + "." + key;
    remember(path, n);
    try {
      out = n.as<bool>();
    } catch (const YAML::Exception&) {
      throw ConfigurationError(located(path, line_of(n), "expected true or false"));
    }
  }

  void remember(const std::string& path, const YAML::Node& n) { cfg_.lines[path] = line_of(n); }

 private:
  static double to_double(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigurationError(located(path, line_of(n), "expected a number"));
    const std::string& s = n.Scalar();
    if (s == "inf" || s == ".inf" || s == "+inf" || s == ".Inf") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw ConfigurationError(located(path, line_of(n), "expected a number, got '" + s + "'"));
    return v;
  }

  RunConfig& cfg_;
};

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? ".inf" : "-.inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string format_list(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_number(v[i]);
  }
  return out + "]";
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

[[noreturn]] void reject(const RunConfig& cfg, const std::string& key, const std::string& message) {
  const auto it = cfg.lines.find(key);
  throw ParameterError(located(key, it == cfg.lines.end() ? 0 : it->second, message));
}

void require_positive(const RunConfig& cfg, const std::string& key, double v) {
  if (!(v > 0.0) || !std::isfinite(v)) reject(cfg, key, "must be positive and finite");
}

void require_finite(const RunConfig& cfg, const std::string& key, double v) {
  if (!std::isfinite(v)) reject(cfg, key, "must be finite");
}

int half_width_of(const GridConfig& g) {
  return static_cast<int>(std::llround(g.span_thz / (2.0 * g.spacing_thz)));
}

}  // namespace

RunConfig quartz_preset() { return RunConfig{}; }

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigurationError("parse error at line " + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig cfg;
  if (!root || root.IsNull()) {
    validate(cfg);
    return cfg;
  }
  if (!root.IsMap()) throw ConfigurationError(located("<root>", line_of(root), "expected a mapping"));
  Reader r(cfg);
  r.check_keys(root, "", {"grid", "pump", "probe", "chi0", "modes", "interaction", "sweep", "oracle"});

  const auto grid = r.section(root, "grid", {"center_thz", "span_thz", "spacing_thz"});
  r.number(grid, "grid", "center_thz", cfg.grid.center_thz);
  r.number(grid, "grid", "span_thz", cfg.grid.span_thz);
  r.number(grid, "grid", "spacing_thz", cfg.grid.spacing_thz);

  const auto pump = r.section(root, "pump", {"alpha0", "sigma_thz", "theta_deg", "fluence_tag"});
  r.number(pump, "pump", "alpha0", cfg.pump.alpha0);
  r.number(pump, "pump", "sigma_thz", cfg.pump.sigma_thz);
  r.number(pump, "pump", "theta_deg", cfg.pump.theta_deg);
  r.text(pump, "pump", "fluence_tag", cfg.pump.fluence_tag);

  const auto probe = r.section(root, "probe", {"alpha0", "sigma_thz"});
  r.number(probe, "probe", "alpha0", cfg.probe.alpha0);
  r.number(probe, "probe", "sigma_thz", cfg.probe.sigma_thz);

  const auto chi0 = r.section(root, "chi0", {"u", "w_abs", "phi"});
  r.number(chi0, "chi0", "u", cfg.chi0.u);
  r.number(chi0, "chi0", "w_abs", cfg.chi0.w_abs);
  r.number(chi0, "chi0", "phi", cfg.chi0.phi);

  if (const YAML::Node modes = root["modes"]) {
    r.remember("modes", modes);
    if (!modes.IsSequence()) throw ConfigurationError(located("modes", line_of(modes), "expected a list"));
    cfg.modes.clear();
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const std::string prefix = "modes[" + std::to_string(i) + "]";
      const YAML::Node m = modes[i];
      r.remember(prefix, m);
      if (!m.IsMap()) throw ConfigurationError(located(prefix, line_of(m), "expected a mapping"));
      r.check_keys(m, prefix, {"class", "freq_thz", "coupling", "mass", "beta"});
      ModeConfig mc;
      std::string cls;
      r.text(m, prefix, "class", cls);
      if (cls.empty()) throw ConfigurationError(located(prefix + ".class", line_of(m), "missing symmetry class"));
      try {
        mc.cls = symmetry_class_from_string(cls);
      } catch (const ParameterError& e) {
        throw ConfigurationError(located(prefix + ".class", cfg.lines[prefix + ".class"], e.what()));
      }
      if (!m["freq_thz"]) throw ConfigurationError(located(prefix + ".freq_thz", line_of(m), "missing frequency"));
      r.number(m, prefix, "freq_thz", mc.freq_thz);
      r.number(m, prefix, "coupling", mc.coupling);
      r.number(m, prefix, "mass", mc.mass);
      r.number(m, prefix, "beta", mc.beta);
      cfg.modes.push_back(mc);
    }
  }

  const auto inter = r.section(root, "interaction", {"tau", "V", "V_S", "weight_variant"});
  r.number(inter, "interaction", "tau", cfg.interaction.tau);
  r.number(inter, "interaction", "V", cfg.interaction.volume);
  r.number(inter, "interaction", "V_S", cfg.interaction.sample_volume);
  std::string variant(to_string(cfg.interaction.weight_variant));
  r.text(inter, "interaction", "weight_variant", variant);
  try {
    cfg.interaction.weight_variant = weight_variant_from_string(variant);
  } catch (const ParameterError& e) {
    throw ConfigurationError(located("interaction.weight_variant", cfg.lines["interaction.weight_variant"], e.what()));
  }

  const auto sweep = r.section(root, "sweep", {"t_min_fs", "t_max_fs", "dt_fs", "theta_list_deg"});
  r.number(sweep, "sweep", "t_min_fs", cfg.sweep.t_min_fs);
  r.number(sweep, "sweep", "t_max_fs", cfg.sweep.t_max_fs);
  r.number(sweep, "sweep", "dt_fs", cfg.sweep.dt_fs);
  r.numbers(sweep, "sweep", "theta_list_deg", cfg.sweep.theta_list_deg);

  const auto oracle = r.section(root, "oracle",
                                {"enabled", "bins", "photon_cutoff", "phonon_cutoff", "coupling_scales", "amplitudes",
                                 "tau", "mode_index", "phonon_init", "dimension_cap"});
  r.flag(oracle, "oracle", "enabled", cfg.oracle.enabled);
  long long value = cfg.oracle.bins;
  r.integer(oracle, "oracle", "bins", value);
  cfg.oracle.bins = static_cast<int>(value);
  value = cfg.oracle.photon_cutoff;
  r.integer(oracle, "oracle", "photon_cutoff", value);
  cfg.oracle.photon_cutoff = static_cast<int>(value);
  value = cfg.oracle.phonon_cutoff;
  r.integer(oracle, "oracle", "phonon_cutoff", value);
  cfg.oracle.phonon_cutoff = static_cast<int>(value);
  r.numbers(oracle, "oracle", "coupling_scales", cfg.oracle.coupling_scales);
  r.numbers(oracle, "oracle", "amplitudes", cfg.oracle.amplitudes);
  r.number(oracle, "oracle", "tau", cfg.oracle.tau);
  value = static_cast<long long>(cfg.oracle.mode_index);
  r.integer(oracle, "oracle", "mode_index", value);
  if (value < 0) reject(cfg, "oracle.mode_index", "must be nonnegative");
  cfg.oracle.mode_index = static_cast<std::size_t>(value);
  std::string init(fock::to_string(cfg.oracle.phonon_init));
  r.text(oracle, "oracle", "phonon_init", init);
  try {
    cfg.oracle.phonon_init = fock::phonon_init_from_string(init);
  } catch (const ParameterError& e) {
    throw ConfigurationError(located("oracle.phonon_init", cfg.lines["oracle.phonon_init"], e.what()));
  }
  value = static_cast<long long>(cfg.oracle.dimension_cap);
  r.integer(oracle, "oracle", "dimension_cap", value);
  if (value < 1) reject(cfg, "oracle.dimension_cap", "must be positive");
  cfg.oracle.dimension_cap = static_cast<std::size_t>(value);

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigurationError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

void validate(RunConfig& cfg) {
  require_positive(cfg, "grid.center_thz", cfg.grid.center_thz);
  require_positive(cfg, "grid.span_thz", cfg.grid.span_thz);
  require_positive(cfg, "grid.spacing_thz", cfg.grid.spacing_thz);
  const int half = half_width_of(cfg.grid);
  if (half < 1) reject(cfg, "grid.span_thz", "must cover at least two grid spacings");
  if (std::abs(2.0 * half * cfg.grid.spacing_thz - cfg.grid.span_thz) > 1e-9 * cfg.grid.span_thz)
    reject(cfg, "grid.span_thz", "must be an even multiple of grid.spacing_thz");
  if (cfg.grid.center_thz - half * cfg.grid.spacing_thz <= 0.0)
    reject(cfg, "grid.span_thz", "grid would reach nonpositive frequencies");

  require_positive(cfg, "pump.alpha0", cfg.pump.alpha0);
  require_positive(cfg, "pump.sigma_thz", cfg.pump.sigma_thz);
  require_finite(cfg, "pump.theta_deg", cfg.pump.theta_deg);
  require_positive(cfg, "probe.alpha0", cfg.probe.alpha0);
  require_positive(cfg, "probe.sigma_thz", cfg.probe.sigma_thz);
  require_finite(cfg, "chi0.u", cfg.chi0.u);
  require_finite(cfg, "chi0.phi", cfg.chi0.phi);
  if (!(cfg.chi0.w_abs >= 0.0) || !std::isfinite(cfg.chi0.w_abs)) reject(cfg, "chi0.w_abs", "must be nonnegative and finite");

  std::vector<std::string> warnings;
  for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
    auto& m = cfg.modes[i];
    const std::string prefix = "modes[" + std::to_string(i) + "]";
    require_positive(cfg, prefix + ".freq_thz", m.freq_thz);
    require_positive(cfg, prefix + ".mass", m.mass);
    require_finite(cfg, prefix + ".coupling", m.coupling);
    if (!(m.beta >= 0.0)) reject(cfg, prefix + ".beta", "must be nonnegative (or .inf)");
    const long long s = std::llround(m.freq_thz / cfg.grid.spacing_thz);
    if (s < 1) reject(cfg, prefix + ".freq_thz", "is below one grid spacing");
    if (s > 2LL * half) reject(cfg, prefix + ".freq_thz", "exceeds the grid span; no partner bins remain");
    const double snapped = static_cast<double>(s) * cfg.grid.spacing_thz;
    if (std::abs(snapped - m.freq_thz) > 1e-9 * std::max(1.0, m.freq_thz)) {
      warnings.push_back(prefix + ".freq_thz " + format_number(m.freq_thz) + " THz snapped to " +
                         format_number(snapped) + " THz (" + std::to_string(s) + " grid spacings)");
      m.freq_thz = snapped;
    }
  }

  require_positive(cfg, "interaction.tau", cfg.interaction.tau);
  require_positive(cfg, "interaction.V", cfg.interaction.volume);
  require_positive(cfg, "interaction.V_S", cfg.interaction.sample_volume);

  require_positive(cfg, "sweep.dt_fs", cfg.sweep.dt_fs);
  require_finite(cfg, "sweep.t_min_fs", cfg.sweep.t_min_fs);
  require_finite(cfg, "sweep.t_max_fs", cfg.sweep.t_max_fs);
  if (cfg.sweep.t_max_fs < cfg.sweep.t_min_fs) reject(cfg, "sweep.t_max_fs", "must not be below sweep.t_min_fs");
  if (cfg.sweep.theta_list_deg.empty()) reject(cfg, "sweep.theta_list_deg", "must not be empty");
  for (double t : cfg.sweep.theta_list_deg) require_finite(cfg, "sweep.theta_list_deg", t);

  const auto& o = cfg.oracle;
  if (o.enabled) {
    if (o.bins < 3 || o.bins % 2 == 0) reject(cfg, "oracle.bins", "must be odd and >= 3");
    if (o.photon_cutoff < 1) reject(cfg, "oracle.photon_cutoff", "must be >= 1");
    if (o.phonon_cutoff < 1) reject(cfg, "oracle.phonon_cutoff", "must be >= 1");
    if (o.coupling_scales.size() < 3) reject(cfg, "oracle.coupling_scales", "needs at least 3 entries");
    for (std::size_t i = 0; i < o.coupling_scales.size(); ++i) {
      if (!(o.coupling_scales[i] >= 0.0) || !std::isfinite(o.coupling_scales[i]))
        reject(cfg, "oracle.coupling_scales", "entries must be finite and nonnegative");
      if (i >= 2) {
        const double a = o.coupling_scales[i - 1] * o.coupling_scales[i - 1];
        const double b = o.coupling_scales[i] * o.coupling_scales[i - 2];
        if (std::abs(a - b) > 1e-9 * std::max(a, b)) reject(cfg, "oracle.coupling_scales", "must form a geometric progression");
      }
    }
    if (o.amplitudes.size() != static_cast<std::size_t>(o.bins)) reject(cfg, "oracle.amplitudes", "needs one entry per oracle bin");
    for (double a : o.amplitudes)
      if (!(a >= 0.0) || !std::isfinite(a)) reject(cfg, "oracle.amplitudes", "entries must be finite and nonnegative");
    require_positive(cfg, "oracle.tau", o.tau);
    if (o.mode_index >= cfg.modes.size()) reject(cfg, "oracle.mode_index", "does not name a configured mode");
    if (o.phonon_init == fock::PhononInit::thermal && std::isinf(cfg.modes[o.mode_index].beta))
      reject(cfg, "oracle.phonon_init", "thermal start needs a finite beta on the oracle mode");
    fock::FockConfig fc;
    fc.photon_cutoff = o.photon_cutoff;
    fc.phonon_cutoff = o.phonon_cutoff;
    if (fc.dimension(o.bins) > o.dimension_cap)
      reject(cfg, "oracle.photon_cutoff",
             "Hilbert dimension " + std::to_string(fc.dimension(o.bins)) + " exceeds oracle.dimension_cap " +
                 std::to_string(o.dimension_cap));
  }
  cfg.warnings.insert(cfg.warnings.end(), warnings.begin(), warnings.end());
}

FrequencyGrid RunConfig::frequency_grid() const {
  return FrequencyGrid(units::angular_from_thz(grid.center_thz), units::angular_from_thz(grid.spacing_thz),
                       half_width_of(grid));
}

pipeline::Experiment RunConfig::experiment(int threads) const {
  pipeline::Experiment e;
  e.grid = frequency_grid();
  e.pump_alpha0 = pump.alpha0;
  e.pump_sigma = units::angular_from_thz(pump.sigma_thz);
  e.pump_theta = units::rad_from_deg(pump.theta_deg);
  e.probe_alpha0 = probe.alpha0;
  e.probe_sigma = units::angular_from_thz(probe.sigma_thz);
  e.chi0 = {chi0.u, chi0.w_abs, chi0.phi};
  for (const auto& m : modes)
    e.modes.push_back({m.cls, units::angular_from_thz(m.freq_thz), m.mass, m.coupling, m.beta});
  e.scales = {interaction.tau, interaction.volume, interaction.sample_volume};
  e.variant = interaction.weight_variant;
  e.delays_fs = pipeline::delay_axis(sweep.t_min_fs, sweep.t_max_fs, sweep.dt_fs);
  e.threads = threads;
  return e;
}

oracle::StudyConfig RunConfig::study(int threads) const {
  if (oracle.mode_index >= modes.size()) throw ParameterError("oracle.mode_index does not name a configured mode");
  const auto& m = modes[oracle.mode_index];
  const double omega = units::angular_from_thz(m.freq_thz);
  oracle::StudyConfig s;
  s.fock.photon_cutoff = oracle.photon_cutoff;
  s.fock.phonon_cutoff = oracle.phonon_cutoff;
  s.fock.phonon_init = oracle.phonon_init;
  s.fock.beta = std::isinf(m.beta) ? 1.0 : m.beta;
  s.fock.dimension_cap = oracle.dimension_cap;
  // Bin spacing equal to the phonon frequency: neighbouring bins are Raman partners.
  s.grid = FrequencyGrid(units::angular_from_thz(grid.center_thz), omega, (oracle.bins - 1) / 2);
  s.amplitudes = oracle.amplitudes;
  s.mode = {m.cls, omega, m.mass, 1.0, m.beta};
  s.scales = {oracle.tau, interaction.volume, interaction.sample_volume};
  s.chi0 = {chi0.u, chi0.w_abs, chi0.phi};
  s.couplings = oracle.coupling_scales;
  s.threads = threads;
  return s;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  out << "grid:\n"
      << "  center_thz: " << format_number(c.grid.center_thz) << "\n"
      << "  span_thz: " << format_number(c.grid.span_thz) << "\n"
      << "  spacing_thz: " << format_number(c.grid.spacing_thz) << "\n"
      << "pump:\n"
      << "  alpha0: " << format_number(c.pump.alpha0) << "\n"
      << "  sigma_thz: " << format_number(c.pump.sigma_thz) << "\n"
      << "  theta_deg: " << format_number(c.pump.theta_deg) << "\n"
      << "  fluence_tag: " << quoted(c.pump.fluence_tag) << "\n"
      << "probe:\n"
      << "  alpha0: " << format_number(c.probe.alpha0) << "\n"
      << "  sigma_thz: " << format_number(c.probe.sigma_thz) << "\n"
      << "chi0:\n"
      << "  u: " << format_number(c.chi0.u) << "\n"
      << "  w_abs: " << format_number(c.chi0.w_abs) << "\n"
      << "  phi: " << format_number(c.chi0.phi) << "\n";
  if (c.modes.empty()) {
    out << "modes: []\n";
  } else {
    out << "modes:\n";
    for (const auto& m : c.modes) {
      out << "  - class: " << to_string(m.cls) << "\n"
          << "    freq_thz: " << format_number(m.freq_thz) << "\n"
          << "    coupling: " << format_number(m.coupling) << "\n"
          << "    mass: " << format_number(m.mass) << "\n"
          << "    beta: " << format_number(m.beta) << "\n";
    }
  }
  out << "interaction:\n"
      << "  tau: " << format_number(c.interaction.tau) << "\n"
      << "  V: " << format_number(c.interaction.volume) << "\n"
      << "  V_S: " << format_number(c.interaction.sample_volume) << "\n"
      << "  weight_variant: " << to_string(c.interaction.weight_variant) << "\n"
      << "sweep:\n"
      << "  t_min_fs: " << format_number(c.sweep.t_min_fs) << "\n"
      << "  t_max_fs: " << format_number(c.sweep.t_max_fs) << "\n"
      << "  dt_fs: " << format_number(c.sweep.dt_fs) << "\n"
      << "  theta_list_deg: " << format_list(c.sweep.theta_list_deg) << "\n"
      << "oracle:\n"
      << "  enabled: " << (c.oracle.enabled ? "true" : "false") << "\n"
      << "  bins: " << c.oracle.bins << "\n"
      << "  photon_cutoff: " << c.oracle.photon_cutoff << "\n"
      << "  phonon_cutoff: " << c.oracle.phonon_cutoff << "\n"
      << "  coupling_scales: " << format_list(c.oracle.coupling_scales) << "\n"
      << "  amplitudes: " << format_list(c.oracle.amplitudes) << "\n"
      << "  tau: " << format_number(c.oracle.tau) << "\n"
      << "  mode_index: " << c.oracle.mode_index << "\n"
      << "  phonon_init: " << fock::to_string(c.oracle.phonon_init) << "\n"
      << "  dimension_cap: " << c.oracle.dimension_cap << "\n";
  return out.str();
}

bool same_fields(const RunConfig& a, const RunConfig& b) {
  return a.grid == b.grid && a.pump == b.pump && a.probe == b.probe && a.chi0 == b.chi0 && a.modes == b.modes &&
         a.interaction == b.interaction && a.sweep == b.sweep && a.oracle == b.oracle;
}

}  // namespace isrs::config
