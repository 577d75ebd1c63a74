#include "isrs/cli.hpp"

#include <cmath>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isrs/config.hpp"
#include "isrs/errors.hpp"
#include "isrs/io.hpp"
#include "isrs/kernels.hpp"
#include "isrs/oracle.hpp"
#include "isrs/pipeline.hpp"

namespace isrs::cli {
namespace {

namespace fs = std::filesystem;
using pipeline::Analyzer;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::string channel = "both";
  std::string window;
  std::string variant;
  int threads = 1;
  std::vector<std::string> inputs;
};

config::RunConfig load(const Options& o) {
  config::RunConfig cfg = o.config_path.empty() ? config::quartz_preset() : config::load_config(o.config_path);
  if (!o.variant.empty()) cfg.interaction.weight_variant = weight_variant_from_string(o.variant);
  return cfg;
}

std::vector<Analyzer> channels(const Options& o) {
  if (o.channel == "both") return {Analyzer::x_prime, Analyzer::y_prime};
  return {pipeline::analyzer_from_string(o.channel)};
}

pipeline::Window window_or(const Options& o, pipeline::Window fallback) {
  return o.window.empty() ? fallback : pipeline::window_from_string(o.window);
}

std::string path_in(const Options& o, const std::string& name) { return (fs::path(o.out_dir) / name).string(); }

double slowest_thz(const config::RunConfig& cfg) {
  double slowest = 0.0;
  for (const auto& m : cfg.modes)
    if (slowest == 0.0 || m.freq_thz < slowest) slowest = m.freq_thz;
  return slowest;
}

std::vector<double> distinct_mode_freqs(const config::RunConfig& cfg) {
  std::set<double> f;
  for (const auto& m : cfg.modes) f.insert(m.freq_thz);
  return {f.begin(), f.end()};
}

json peaks_json(const pipeline::FourierMap& map, const config::RunConfig& cfg) {
  json out = json::array();
  for (double f : distinct_mode_freqs(cfg)) {
    const auto k = map.peak_in(f - 1.0, f + 1.0);
    json p;
    p["mode_freq_thz"] = f;
    if (k && map.summed[*k] > 0.0) {
      p["peak_thz"] = map.freqs_thz[*k];
      p["amplitude"] = map.summed[*k];
    } else {
      p["peak_thz"] = nullptr;
      p["amplitude"] = nullptr;
    }
    out.push_back(p);
  }
  return out;
}

// Within the second oscillation period of the slowest mode, the positive
// delays where |cos| and |sin| of the phase peak.
json display_delays(const std::vector<double>& delays_fs, double f_thz) {
  json out;
  if (!(f_thz > 0.0)) return out;
  const double period_fs = 1e3 / f_thz;
  double best_cos = -1.0, best_sin = -1.0;
  json cos_delay = nullptr, sin_delay = nullptr;
  for (double t : delays_fs) {
    if (t < period_fs || t >= 2.0 * period_fs) continue;
    const double phase = 2.0 * 3.141592653589793 * f_thz * t * 1e-3;
    if (std::abs(std::cos(phase)) > best_cos) {
      best_cos = std::abs(std::cos(phase));
      cos_delay = t;
    }
    if (std::abs(std::sin(phase)) > best_sin) {
      best_sin = std::abs(std::sin(phase));
      sin_delay = t;
    }
  }
  out["mode_freq_thz"] = f_thz;
  out["extremal_cos_fs"] = cos_delay;
  out["extremal_sin_fs"] = sin_delay;
  return out;
}

int run_simulate(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto window = window_or(o, pipeline::Window::rect);
  const auto e = cfg.experiment(o.threads);
  fs::create_directories(o.out_dir);
  json log;
  log["config"] = config::emit_config(cfg);
  json warnings = json::array();
  for (const auto& w : cfg.warnings) warnings.push_back(w);
  log["notes"] = json::array({"impulsive model: no pulse envelope; rows with |t| below the 40 fs pulse duration "
                              "ignore pump-probe overlap effects"});
  log["window"] = std::string(pipeline::to_string(window));
  log["kernel_isa"] = std::string(kernels::to_string(kernels::active()));
  log["display_delays"] = display_delays(e.delays_fs, slowest_thz(cfg));
  json channel_log;
  for (auto ch : channels(o)) {
    const std::string tag(pipeline::to_string(ch));
    const auto s = pipeline::run_channel(e, ch);
    io::write_file(path_in(o, "spectrogram_" + tag + ".csv"), io::spectrogram_csv(s));
    const auto map = pipeline::delay_fourier(s, window, o.threads, slowest_thz(cfg));
    io::write_file(path_in(o, "fft_" + tag + ".csv"), io::fourier_csv(map, s.freqs_thz));
    io::write_file(path_in(o, "fft_summed_" + tag + ".csv"), io::fourier_summed_csv(map));
    for (const auto& w : map.warnings) warnings.push_back(tag + ": " + w);
    channel_log[tag] = {{"rows", s.rows()}, {"bins", s.cols()}, {"peaks", peaks_json(map, cfg)}};
    out << "wrote spectrogram_" << tag << ".csv (" << s.rows() << " delays x " << s.cols() << " bins)\n";
  }
  log["channels"] = channel_log;
  log["warnings"] = warnings;
  io::write_file(path_in(o, "run_log.json"), io::dump_json(log));
  return ok;
}

int run_oracle(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  if (!cfg.oracle.enabled) {
    out << "oracle disabled in config\n";
    return ok;
  }
  const auto report = oracle::convergence_study(cfg.study(o.threads));
  fs::create_directories(o.out_dir);
  io::write_file(path_in(o, "oracle_report.json"), io::dump_json(io::to_json(report)));
  for (const auto& f : report.fits) {
    out << f.observable << ": exponent " << f.exponent << " (" << oracle::to_string(f.status)
        << (f.gated ? "" : ", not gated") << ") " << (f.passed() ? "PASS" : "FAIL") << "\n";
  }
  return report.passed() ? ok : acceptance;
}

int run_polar(const Options& o, std::ostream& out) {
  const auto cfg = load(o);
  const auto window = window_or(o, pipeline::Window::hann);
  const auto e = cfg.experiment(o.threads);
  const auto wanted = channels(o);
  fs::create_directories(o.out_dir);
  json fits = json::array();
  for (std::size_t i = 0; i < cfg.modes.size(); ++i) {
    const auto& m = cfg.modes[i];
    const Analyzer ch = m.cls == SymmetryClass::E_T ? Analyzer::y_prime : Analyzer::x_prime;
    if (std::find(wanted.begin(), wanted.end(), ch) == wanted.end()) continue;
    const auto scan = pipeline::polar_scan(e, cfg.sweep.theta_list_deg, m.freq_thz, ch, window);
    const auto fit = pipeline::fit_polar(scan, pipeline::polar_model_for(m.cls));
    const std::string name = "polar_mode" + std::to_string(i) + "_" + std::string(to_string(m.cls)) + ".csv";
    io::write_file(path_in(o, name), io::polar_csv(scan));
    json entry = io::to_json(fit);
    entry["mode_index"] = i;
    entry["class"] = std::string(to_string(m.cls));
    entry["mode_freq_thz"] = m.freq_thz;
    entry["bin_thz"] = scan.bin_thz;
    entry["channel"] = std::string(pipeline::to_string(ch));
    entry["csv"] = name;
    entry["warnings"] = scan.warnings;
    fits.push_back(entry);
    out << name << ": " << pipeline::to_string(fit.model) << " R2 "
        << (fit.r_squared ? std::to_string(*fit.r_squared) : std::string("undefined")) << "\n";
  }
  io::write_file(path_in(o, "polar_fits.json"), io::dump_json(json{{"window", std::string(pipeline::to_string(window))}, {"fits", fits}}));
  return ok;
}

int run_analyze(const Options& o, std::ostream& out) {
  if (o.inputs.empty() || o.inputs.size() > 2) throw CLI::ValidationError("analyze expects one or two spectrogram CSV paths");
  const auto cfg = load(o);
  const auto window = window_or(o, pipeline::Window::rect);
  std::vector<Analyzer> chs;
  if (o.inputs.size() == 2) {
    chs = {Analyzer::x_prime, Analyzer::y_prime};
  } else {
    chs = {o.channel == "both" ? Analyzer::x_prime : pipeline::analyzer_from_string(o.channel)};
  }
  fs::create_directories(o.out_dir);
  std::vector<pipeline::Spectrogram> specs;
  for (std::size_t i = 0; i < o.inputs.size(); ++i) {
    specs.push_back(io::parse_spectrogram_csv(io::read_file(o.inputs[i]), chs[i]));
    const std::string tag(pipeline::to_string(chs[i]));
    const auto map = pipeline::delay_fourier(specs.back(), window, o.threads, slowest_thz(cfg));
    io::write_file(path_in(o, "fft_" + tag + ".csv"), io::fourier_csv(map, specs.back().freqs_thz));
    io::write_file(path_in(o, "fft_summed_" + tag + ".csv"), io::fourier_summed_csv(map));
    out << "analyzed " << o.inputs[i] << " as channel " << tag << "\n";
  }
  if (specs.size() == 2) {
    json q = json::array();
    for (double f : distinct_mode_freqs(cfg)) {
      const auto phase = pipeline::quadrature_phase(specs[0], specs[1], f, window);
      json entry{{"mode_freq_thz", f}};
      if (phase)
        entry["phase_deg"] = *phase;
      else
        entry["phase_deg"] = nullptr;
      q.push_back(entry);
    }
    io::write_file(path_in(o, "quadrature.json"),
                   io::dump_json(json{{"window", std::string(pipeline::to_string(window))}, {"phases", q}}));
  }
  return ok;
}

}  // namespace

int cli_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pump-probe ISRS/LRM simulator with an exact Fock-space oracle", "isrs"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "YAML run configuration (default: quartz preset)");
    sub->add_option("--out-dir", o.out_dir, "Output directory");
    sub->add_option("--channel", o.channel, "x, y or both")->check(CLI::IsMember({"x", "y", "both"}));
    sub->add_option("--window", o.window, "rect or hann")->check(CLI::IsMember({"rect", "hann"}));
    sub->add_option("--variant", o.variant, "main-text or sm")->check(CLI::IsMember({"main-text", "sm"}));
    sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto* simulate = app.add_subcommand("simulate", "Delay sweep: spectrogram and FFT CSVs plus run log");
  auto* oracle_check = app.add_subcommand("oracle-check", "Exact-vs-closed-form convergence study");
  auto* polar = app.add_subcommand("polar-scan", "Pump-angle scans and symmetry fits");
  auto* analyze = app.add_subcommand("analyze", "FFT and quadrature from existing spectrogram CSVs");
  auto* presets = app.add_subcommand("presets", "Print the quartz preset config");
  for (auto* sub : {simulate, oracle_check, polar, analyze}) add_common(sub);
  analyze->add_option("inputs", o.inputs, "Spectrogram CSV (x), optionally followed by the y CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ok : usage;
  }

  try {
    if (*simulate) return run_simulate(o, out);
    if (*oracle_check) return run_oracle(o, out);
    if (*polar) return run_polar(o, out);
    if (*analyze) return run_analyze(o, out);
    if (*presets) {
      out << config::emit_config(config::quartz_preset());
      return ok;
    }
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return validation;
  }
  return usage;
}

}  // namespace isrs::cli
