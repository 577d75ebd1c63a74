// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "isrs/cli.hpp"
#include "isrs/config.hpp"
#include "isrs/io.hpp"
#include "isrs/oracle.hpp"
#include "isrs/perturbative.hpp"
#include "isrs/pipeline.hpp"

using namespace isrs;
using pipeline::Analyzer;
using pipeline::Window;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [fail]");
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

pipeline::Experiment preset_experiment(double theta_deg) {
  auto cfg = config::quartz_preset();
  cfg.pump.theta_deg = theta_deg;
  return cfg.experiment(worker_count());
}

bool all_zero(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

oracle::OracleReport study_report;
double study_seconds = 0.0;

Outcome criterion1() {
  Outcome o;
  auto study = config::quartz_preset().study(worker_count());
  study.run_mean_field_diagnostic = false;
  const auto t0 = std::chrono::steady_clock::now();
  study_report = oracle::convergence_study(study);
  study_seconds = seconds_since(t0);
  for (const auto& name : {"p_kick", "intensity_first_order"}) {
    const auto it = std::find_if(study_report.fits.begin(), study_report.fits.end(),
                                 [&](const oracle::ExponentFit& f) { return f.observable == name; });
    const bool found = it != study_report.fits.end();
    o.require(found && it->status == oracle::FitStatus::ok && it->exponent >= 1.8 && it->exponent <= 2.2,
              std::string(name) + " exponent " + (found ? fmt("%.3f", it->exponent) : "missing"));
  }
  o.require(study_seconds < 60.0, "runtime " + fmt("%.1f", study_seconds) + " s");
  return o;
}

Outcome criterion2() {
  Outcome o;
  o.require(study_report.max_photon_drift < 1e-10, "photon drift " + fmt("%.2e", study_report.max_photon_drift));
  auto e = preset_experiment(0.0);
  e.variant = WeightVariant::sm;
  e.delays_fs = pipeline::delay_axis(-300.0, -300.0 + 299 * 6.7, 6.7);
  const auto s = pipeline::run_channel(e, Analyzer::x_prime);
  double worst = 0.0;
  for (std::size_t r = 0; r < s.rows(); ++r) {
    double sum = 0.0, mag = 0.0;
    for (std::size_t c = 0; c < s.cols(); ++c) {
      sum += s.at(r, c);
      mag += std::abs(s.at(r, c));
    }
    if (mag > 0.0) worst = std::max(worst, std::abs(sum) / mag);
  }
  o.require(s.rows() == 300 && worst < 1e-12, "x' bin-sum " + fmt("%.2e", worst) + " over " + std::to_string(s.rows()) + " delays");
  return o;
}

// Largest local maximum of the summed spectrum within +-1 bin of f.
std::optional<std::size_t> local_peak_near(const pipeline::FourierMap& m, double f) {
  const double bin = m.freqs_thz[1];
  std::optional<std::size_t> best;
  for (std::size_t k = 1; k + 1 < m.summed.size(); ++k) {
    if (std::abs(m.freqs_thz[k] - f) > bin) continue;
    if (m.summed[k] < m.summed[k - 1] || m.summed[k] < m.summed[k + 1]) continue;
    if (!best || m.summed[k] > m.summed[*best]) best = k;
  }
  return best;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto x = pipeline::run_channel(preset_experiment(0.0), Analyzer::x_prime);
  const auto fx = pipeline::delay_fourier(x, Window::rect, worker_count());
  for (double f : {4.05, 6.0, 13.95}) {
    const auto k = local_peak_near(fx, f);
    o.require(k.has_value(), "x' peak " + fmt("%.2f", f) + (k ? " at " + fmt("%.3f", fx.freqs_thz[*k]) : " missing"));
  }

  const auto y = pipeline::run_channel(preset_experiment(45.0), Analyzer::y_prime);
  const auto fy = pipeline::delay_fourier(y, Window::hann, worker_count());
  const double bin = fy.freqs_thz[1];
  const auto ke = local_peak_near(fy, 4.05);
  o.require(ke.has_value(), "y' E peak present");
  if (ke) {
    double other = 0.0;
    for (std::size_t k = 2; k + 1 < fy.summed.size(); ++k) {
      if (std::abs(fy.freqs_thz[k] - 4.05) <= 2.0 * bin) continue;
      if (fy.summed[k] >= fy.summed[k - 1] && fy.summed[k] >= fy.summed[k + 1]) other = std::max(other, fy.summed[k]);
    }
    const double ratio = other / fy.summed[*ke];
    o.require(ratio < 0.01, "y' largest other local maximum " + fmt("%.4f", 100.0 * ratio) + "% of E (hann)");
    double at_modes = 0.0;
    for (double f : {6.0, 13.95}) at_modes = std::max(at_modes, fy.summed[fy.nearest_bin(f)]);
    const double leak = at_modes / fy.summed[*ke];
    o.require(leak < 0.01, "y' at 6.00/13.95 bins " + fmt("%.4f", 100.0 * leak) + "% of E (hann)");
  }
  const double secs = seconds_since(t0);
  o.require(secs < 30.0, "runtime " + fmt("%.2f", secs) + " s");
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto x = pipeline::run_channel(preset_experiment(0.0), Analyzer::x_prime);
  const auto y = pipeline::run_channel(preset_experiment(45.0), Analyzer::y_prime);
  const auto phase = pipeline::quadrature_phase(x, y, 4.05, Window::hann);
  o.require(phase && std::abs(*phase - 90.0) <= 2.0, "phase " + (phase ? fmt("%.2f", *phase) : std::string("undefined")) + " deg");

  const int half = static_cast<int>(x.cols() / 2);
  double peak = 0.0, asym = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (int j = 0; j <= half; ++j) {
      const double a = x.at(r, static_cast<std::size_t>(half + j));
      const double b = x.at(r, static_cast<std::size_t>(half - j));
      peak = std::max(peak, std::abs(a));
      asym = std::max(asym, std::abs(a + b));
    }
  o.require(peak > 0.0 && asym / peak < 1e-10, "x' antisymmetry " + fmt("%.2e", asym / peak));

  bool single = true;
  for (std::size_t r = 0; r < y.rows(); ++r) {
    bool pos = false, neg = false;
    for (std::size_t c = 0; c < y.cols(); ++c) {
      pos = pos || y.at(r, c) > 0.0;
      neg = neg || y.at(r, c) < 0.0;
    }
    single = single && !(pos && neg);
  }
  o.require(single, "y' single-signed per delay");
  return o;
}

double distance_mod90(double deg, double target) {
  const double d = std::fmod(std::abs(deg - target), 90.0);
  return std::min(d, 90.0 - d);
}

Outcome criterion5() {
  Outcome o;
  const auto cfg = config::quartz_preset();
  const auto e = cfg.experiment(worker_count());
  const double step = 15.0;
  for (const auto& m : cfg.modes) {
    const Analyzer ch = m.cls == SymmetryClass::E_T ? Analyzer::y_prime : Analyzer::x_prime;
    const auto scan = pipeline::polar_scan(e, cfg.sweep.theta_list_deg, m.freq_thz, ch);
    const auto fit = pipeline::fit_polar(scan, pipeline::polar_model_for(m.cls));
    const double r2 = fit.r_squared.value_or(0.0);
    std::string what = std::string(to_string(m.cls)) + " " + fmt("%.2f", m.freq_thz) + " R2 " + fmt("%.6f", r2);
    bool ok = scan.thetas_deg.size() == 13 && r2 > 0.999;
    if (m.cls == SymmetryClass::E_L) {
      ok = ok && distance_mod90(fit.min_theta_deg, 45.0) <= step;
      what += " zero at " + fmt("%.0f", fit.min_theta_deg);
    } else if (m.cls == SymmetryClass::E_T) {
      ok = ok && distance_mod90(fit.min_theta_deg, 0.0) <= step;
      what += " zero at " + fmt("%.0f", fit.min_theta_deg);
    }
    o.require(ok, what);
  }
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto cfg = config::quartz_preset();
  auto shift = [&](double scale) {
    auto e = cfg.experiment();
    e.pump_alpha0 *= scale;
    const auto pump = e.pump();
    std::vector<double> before = pump.profile();
    for (auto& v : before) v *= v;
    std::vector<double> after = before;
    for (const auto& m : e.modes) {
      const auto t = perturbative::pump_transmission(pump, m, e.scales, e.variant);
      for (std::size_t i = 0; i < after.size(); ++i) after[i] += t.total[i] - before[i];
    }
    return perturbative::spectral_centroid(e.grid, after) - perturbative::spectral_centroid(e.grid, before);
  };
  const double d1 = shift(1.0);
  const double d2 = shift(std::sqrt(2.0));
  o.require(d1 < 0.0 && d2 < 0.0, "shift " + fmt("%.3e", d1) + " rad/ps");
  o.require(std::abs(d2 / d1 - 2.0) <= 1e-3, "ratio at 2x intensity " + fmt("%.6f", d2 / d1));
  return o;
}

Outcome criterion7() {
  Outcome o;
  auto cfg = config::quartz_preset();
  cfg.chi0.phi = 0.0;
  bool flat = true;
  for (double th : {0.0, 30.0, 45.0, 80.0}) {
    cfg.pump.theta_deg = th;
    flat = flat && all_zero(pipeline::run_channel(cfg.experiment(worker_count()), Analyzer::y_prime).values);
  }
  o.require(flat, "phi=0 y' identically zero");

  auto zero = config::quartz_preset();
  zero.pump.theta_deg = 30.0;
  for (auto& m : zero.modes) m.coupling = 0.0;
  const auto z = pipeline::run_pump_probe(zero.experiment(worker_count()));
  o.require(all_zero(z.x_prime.values) && all_zero(z.y_prime.values), "zero couplings give zero signal");

  auto live = config::quartz_preset();
  live.pump.theta_deg = 30.0;
  const auto s = pipeline::run_pump_probe(live.experiment(worker_count()));
  bool quiet = true;
  std::size_t negative = 0;
  for (const auto* sp : {&s.x_prime, &s.y_prime})
    for (std::size_t r = 0; r < sp->rows(); ++r) {
      if (sp->delays_fs[r] >= 0.0) continue;
      ++negative;
      for (std::size_t c = 0; c < sp->cols(); ++c) quiet = quiet && sp->at(r, c) == 0.0;
    }
  o.require(quiet && negative > 0, "t<0 rows zero (" + std::to_string(negative) + " rows)");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const fs::path root = fs::path(ISRS_TEST_TMP) / "acceptance_determinism";
  fs::remove_all(root);
  std::vector<std::string> reference;
  const std::vector<std::string> files{"spectrogram_x.csv", "spectrogram_y.csv", "fft_x.csv", "fft_y.csv",
                                       "fft_summed_x.csv", "fft_summed_y.csv", "run_log.json"};
  for (const char* threads : {"1", "4", "8"}) {
    const std::string dir = (root / threads).string();
    const char* argv[] = {"isrs", "simulate", "--out-dir", dir.c_str(), "--threads", threads};
    std::ostringstream out, err;
    const int code = cli::cli_dispatch(6, argv, out, err);
    if (code != cli::ok) {
      o.require(false, std::string("simulate --threads ") + threads + " exit " + std::to_string(code));
      return o;
    }
    std::vector<std::string> contents;
    for (const auto& f : files) contents.push_back(io::read_file((fs::path(dir) / f).string()));
    if (reference.empty()) {
      reference = contents;
    } else {
      o.require(contents == reference, std::string("threads ") + threads + " identical to threads 1");
    }
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"oracle convergence", criterion1}, {"conservation", criterion2},      {"spectral structure", criterion3},
      {"quadrature", criterion4},         {"polar laws", criterion5},        {"pump red shift", criterion6},
      {"degenerate switches", criterion7}, {"determinism", criterion8},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.require(false, std::string("exception: ") + e.what());
    }
    if (!out.pass) ++failures;
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, criteria[i].first.c_str(), out.pass ? "PASS" : "FAIL",
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
