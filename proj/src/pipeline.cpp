#include "isrs/pipeline.hpp"

#include <cmath>
#include <string>

#include "isrs/errors.hpp"
#include "isrs/kernels.hpp"
#include "isrs/parallel.hpp"

namespace isrs::pipeline {
namespace {

// Per-mode row contribution: R cos(Omega t) * by_p + R/(m Omega) sin(Omega t) * by_q.
struct ModeTerm {
  double frequency;
  double p_amplitude;
  double q_amplitude;
  std::vector<double> by_p;
  std::vector<double> by_q;
};

std::vector<double> combined(const perturbative::ProbeModulation& m, double scale) {
  std::vector<double> out(m.isrs.size(), 0.0);
  kernels::axpy(scale, m.isrs, out);
  kernels::axpy(scale, m.lrm, out);
  return out;
}

}  // namespace

std::string_view to_string(Analyzer a) { return a == Analyzer::x_prime ? "x" : "y"; }

Analyzer analyzer_from_string(std::string_view name) {
  if (name == "x") return Analyzer::x_prime;
  if (name == "y") return Analyzer::y_prime;
  throw ParameterError("unknown channel '" + std::string(name) + "' (expected x or y)");
}

std::vector<double> delay_axis(double t_min_fs, double t_max_fs, double dt_fs) {
  if (!(dt_fs > 0.0)) throw ParameterError("delay step must be positive");
  if (!std::isfinite(t_min_fs) || !std::isfinite(t_max_fs) || t_max_fs < t_min_fs)
    throw ParameterError("delay range must be finite with t_max >= t_min");
  const auto n = static_cast<std::size_t>(std::floor((t_max_fs - t_min_fs) / dt_fs + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = t_min_fs + static_cast<double>(k) * dt_fs;
  return out;
}

PulseState Experiment::pump() const { return gaussian_pulse(grid, pump_alpha0, pump_sigma, pump_theta); }

PulseState Experiment::probe() const { return gaussian_pulse(grid, probe_alpha0, probe_sigma, 0.0); }

void Experiment::validate() const {
  if (!(pump_alpha0 > 0.0)) throw ParameterError("pump alpha0 must be positive");
  if (!(probe_alpha0 > 0.0)) throw ParameterError("probe alpha0 must be positive");
  if (!(pump_sigma > 0.0)) throw ParameterError("pump sigma must be positive");
  if (!(probe_sigma > 0.0)) throw ParameterError("probe sigma must be positive");
  if (!std::isfinite(pump_theta)) throw ParameterError("pump angle must be finite");
  if (threads < 1) throw ParameterError("threads must be >= 1");
  scales.validate();
  for (const auto& m : modes) {
    m.validate();
    (void)grid.phonon_offset(m.frequency);
  }
  if (delays_fs.empty()) throw ParameterError("delay axis is empty");
  for (std::size_t k = 1; k < delays_fs.size(); ++k)
    if (!(delays_fs[k] > delays_fs[k - 1])) throw ParameterError("delay axis must be strictly increasing");
}

void Spectrogram::validate() const {
  if (values.size() != rows() * cols()) throw DimensionError("spectrogram matrix does not match its axes");
  for (std::size_t k = 1; k < delays_fs.size(); ++k)
    if (!(delays_fs[k] > delays_fs[k - 1])) throw DimensionError("delay axis must be strictly increasing");
  for (std::size_t k = 1; k < freqs_thz.size(); ++k)
    if (!(freqs_thz[k] > freqs_thz[k - 1])) throw DimensionError("frequency axis must be strictly increasing");
}

Spectrogram run_channel(const Experiment& e, Analyzer channel) {
  e.validate();
  const PulseState pump = e.pump();
  const PulseState probe = e.probe();
  const auto& grid = e.grid;
  const double reference = probe.amplitude(Polarization::x, 0);
  const double norm = 1.0 / (reference * reference);

  std::vector<ModeTerm> terms;
  for (const auto& mode : e.modes) {
    const int shift = grid.phonon_offset(mode.frequency);
    const double eta = perturbative::weighted_eta(pump, shift, e.variant);
    const double radius = perturbative::mode_radius(mode.cls, mode.coupling, pump.theta(), eta, e.scales);
    const auto at_p = perturbative::generic_probe_modulation(probe, {0.0, 1.0}, mode, e.chi0, e.scales, e.variant, channel);
    const auto at_q = perturbative::generic_probe_modulation(probe, {1.0, 0.0}, mode, e.chi0, e.scales, e.variant, channel);
    terms.push_back({mode.frequency, radius, radius / (mode.mass * mode.frequency), combined(at_p, norm),
                     combined(at_q, norm)});
  }

  Spectrogram s;
  s.channel = channel;
  s.delays_fs = e.delays_fs;
  for (int j = -grid.half_width(); j <= grid.half_width(); ++j) s.freqs_thz.push_back(units::thz_from_angular(grid.frequency(j)));
  const std::size_t cols = grid.size();
  s.values.assign(s.delays_fs.size() * cols, 0.0);

  parallel_for(s.delays_fs.size(), e.threads, [&](std::size_t r) {
    const double t = units::ps_from_fs(s.delays_fs[r]);
    if (t < 0.0) return;
    std::span<double> row(s.values.data() + r * cols, cols);
    for (const auto& term : terms) {
      const double phase = term.frequency * t;
      const double cp = term.p_amplitude * std::cos(phase);
      const double cq = term.q_amplitude * std::sin(phase);
      if (cp != 0.0) kernels::axpy(cp, term.by_p, row);
      if (cq != 0.0) kernels::axpy(cq, term.by_q, row);
    }
  });
  return s;
}

SpectrogramPair run_pump_probe(const Experiment& e) {
  return {run_channel(e, Analyzer::x_prime), run_channel(e, Analyzer::y_prime)};
}

}  // namespace isrs::pipeline
