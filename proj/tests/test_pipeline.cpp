#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "doctest.h"
#include "isrs/errors.hpp"
#include "isrs/pipeline.hpp"

using namespace isrs;
using namespace isrs::pipeline;

namespace {

PhononMode mode(SymmetryClass cls, double thz, double coupling) {
  return {cls, units::angular_from_thz(thz), 1.0, coupling};
}

Experiment quartz(double theta_deg = 0.0) {
  Experiment e;
  e.pump_alpha0 = 0.5;
  e.pump_theta = units::rad_from_deg(theta_deg);
  e.chi0 = Chi0{0.0, 0.02, 0.3};
  e.scales = InteractionScales{0.01, 1.0, 1.0};
  e.modes = {mode(SymmetryClass::A, 6.0, 1.0), mode(SymmetryClass::A, 13.95, 0.5),
             mode(SymmetryClass::E_L, 4.05, 1.0), mode(SymmetryClass::E_T, 4.05, 1.0)};
  e.delays_fs = delay_axis(-300.0, 2000.0, 6.7);
  return e;
}

Spectrogram synthetic(const std::vector<double>& delays, const std::function<double(double)>& f, int cols = 1) {
  Spectrogram s;
  s.delays_fs = delays;
  for (int c = 0; c < cols; ++c) s.freqs_thz.push_back(380.0 + c);
  for (double t : delays)
    for (int c = 0; c < cols; ++c) s.values.push_back(t < 0 ? 0.0 : (c + 1) * f(units::ps_from_fs(t)));
  return s;
}

PolarScan scan_of(const std::function<double(double)>& f) {
  PolarScan s;
  for (double d = 0; d <= 180.0; d += 15.0) {
    s.thetas_deg.push_back(d);
    s.amplitudes.push_back(f(units::rad_from_deg(d)));
  }
  return s;
}

}  // namespace

TEST_CASE("delay axis") {
  const auto d = delay_axis(-300.0, 2000.0, 6.7);
  CHECK(d.size() == 344);
  CHECK(d.front() == -300.0);
  CHECK(d.back() == doctest::Approx(-300.0 + 343 * 6.7));
  CHECK(delay_axis(0.0, 10.0, 2.5).size() == 5);
  CHECK_THROWS(delay_axis(0.0, 10.0, 0.0));
}

TEST_CASE("spectrogram rows equal the normalized probe response") {
  const auto e = quartz(30.0);
  const auto s = run_channel(e, Analyzer::x_prime);
  const perturbative::ProbeGeometry geo{e.pump(), e.probe(), e.chi0, e.scales, e.variant};
  const double norm = e.probe_alpha0 * e.probe_alpha0;
  double worst = 0.0, scale = 0.0;
  for (std::size_t r = 0; r < s.rows(); r += 17) {
    const auto ref = perturbative::probe_response_x(geo, e.modes, units::ps_from_fs(s.delays_fs[r]));
    for (std::size_t c = 0; c < s.cols(); ++c) {
      worst = std::max(worst, std::abs(s.at(r, c) - ref[c] / norm));
      scale = std::max(scale, std::abs(ref[c] / norm));
    }
  }
  CHECK(scale > 0.0);
  CHECK(worst <= 1e-12 * scale);
  CHECK(s.freqs_thz[200] == doctest::Approx(380.0));
}

TEST_CASE("negative delays and zero couplings are silent") {
  auto e = quartz(20.0);
  const auto pair = run_pump_probe(e);
  for (const auto* s : {&pair.x_prime, &pair.y_prime})
    for (std::size_t r = 0; r < s->rows(); ++r)
      if (s->delays_fs[r] < 0.0)
        for (std::size_t c = 0; c < s->cols(); ++c) CHECK(s->at(r, c) == 0.0);
  for (auto& m : e.modes) m.coupling = 0.0;
  const auto zero = run_pump_probe(e);
  CHECK(std::all_of(zero.x_prime.values.begin(), zero.x_prime.values.end(), [](double v) { return v == 0.0; }));
  CHECK(std::all_of(zero.y_prime.values.begin(), zero.y_prime.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("a lone A mode leaves the crossed channel dark") {
  auto e = quartz(0.0);
  e.modes = {mode(SymmetryClass::A, 6.0, 1.0)};
  const auto y = run_channel(e, Analyzer::y_prime);
  CHECK(std::all_of(y.values.begin(), y.values.end(), [](double v) { return v == 0.0; }));
}

TEST_CASE("thread count does not change the spectrogram") {
  auto e = quartz(30.0);
  const auto a = run_pump_probe(e);
  e.threads = 3;
  const auto b = run_pump_probe(e);
  CHECK(a.x_prime.values == b.x_prime.values);
  CHECK(a.y_prime.values == b.y_prime.values);
}

TEST_CASE("delay DFT of a cosine on a bin") {
  const auto delays = delay_axis(-300.0, 2000.0, 6.7);
  const std::size_t n = 299;
  const double dt = 6.7e-3;
  const double f = 10.0 / (n * dt);
  const auto s = synthetic(delays, [&](double t) { return std::cos(2 * std::numbers::pi * f * t); }, 2);
  const auto m = delay_fourier(s, Window::rect);
  CHECK(m.samples == n);
  CHECK(m.freqs_thz[10] == doctest::Approx(f));
  CHECK(m.at(10, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(m.at(10, 1) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(m.summed[10] == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(m.at(20, 0) < 1e-9);
  CHECK(m.nearest_bin(f + 0.1) == 10);
  CHECK(*m.peak_in(1.0, 100.0) == 10);
  const auto d = dft_at(s, Window::rect, f);
  CHECK(std::abs(d[0]) == doctest::Approx(1.0).epsilon(1e-9));
  const auto h = delay_fourier(s, Window::hann);
  CHECK(h.at(10, 0) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("delay DFT of nothing") {
  const auto s = synthetic(delay_axis(0.0, 100.0, 10.0), [](double) { return 0.0; });
  const auto m = delay_fourier(s, Window::rect, 1, 1.0);
  CHECK(std::all_of(m.summed.begin(), m.summed.end(), [](double v) { return v == 0.0; }));
  CHECK_FALSE(m.warnings.empty());
}

TEST_CASE("quadrature phase of synthetic channels") {
  const auto delays = delay_axis(0.0, 2000.0, 6.7);
  const double f = 4.05;
  const double w = 2 * std::numbers::pi * f;
  const auto c = synthetic(delays, [&](double t) { return std::cos(w * t); });
  const auto minus = synthetic(delays, [&](double t) { return -std::cos(w * t); });
  const auto sn = synthetic(delays, [&](double t) { return std::sin(w * t); });
  CHECK(*quadrature_phase(c, c, f) == doctest::Approx(0.0).scale(1.0));
  CHECK(std::abs(*quadrature_phase(c, minus, f)) == doctest::Approx(180.0).epsilon(1e-9));
  // Off-bin frequency: the negative-frequency image shifts the phase slightly.
  CHECK(std::abs(*quadrature_phase(c, sn, f) - 90.0) < 0.01);
  const auto z = synthetic(delays, [](double) { return 0.0; });
  CHECK_FALSE(quadrature_phase(c, z, f).has_value());
}

TEST_CASE("polar fits") {
  const auto el = scan_of([](double th) { return -2.0 * std::cos(2 * th); });
  const auto fit = fit_polar(el, PolarModel::cos2theta);
  CHECK(fit.amplitude == doctest::Approx(2.0));
  CHECK(*fit.r_squared == doctest::Approx(1.0));
  CHECK(std::fmod(fit.min_theta_deg, 90.0) == doctest::Approx(45.0));

  // Constant data against |sin 2 theta|: a = sum y|f| / sum f^2, R^2 = 1 - SS / sum y^2.
  const auto flat = scan_of([](double) { return 1.0; });
  double syf = 0, sff = 0, syy = 0;
  for (double th : flat.thetas_deg) {
    const double f = std::abs(std::sin(2 * units::rad_from_deg(th)));
    syf += f;
    sff += f * f;
    syy += 1.0;
  }
  const double a = syf / sff;
  double ss = 0;
  for (double th : flat.thetas_deg) {
    const double r = 1.0 - a * std::abs(std::sin(2 * units::rad_from_deg(th)));
    ss += r * r;
  }
  const auto bad = fit_polar(flat, PolarModel::sin2theta);
  CHECK(bad.amplitude == doctest::Approx(a));
  CHECK(*bad.r_squared == doctest::Approx(1.0 - ss / syy));

  const auto zero = fit_polar(scan_of([](double) { return 0.0; }), PolarModel::constant);
  CHECK_FALSE(zero.r_squared.has_value());

  PolarScan few;
  few.thetas_deg = {0, 45, 90};
  few.amplitudes = {1, 1, 1};
  CHECK_THROWS(fit_polar(few, PolarModel::constant));
}

TEST_CASE("polar scan follows the symmetry law") {
  auto e = quartz(0.0);
  e.modes = {mode(SymmetryClass::E_L, 4.05, 1.0)};
  std::vector<double> thetas;
  for (double d = 0; d <= 180.0; d += 15.0) thetas.push_back(d);
  const auto s = polar_scan(e, thetas, 4.05, Analyzer::x_prime);
  const auto fit = fit_polar(s, polar_model_for(SymmetryClass::E_L));
  CHECK(*fit.r_squared > 0.999);
  CHECK(std::fmod(fit.min_theta_deg, 90.0) == doctest::Approx(45.0));
}

TEST_CASE("name round trips") {
  CHECK(analyzer_from_string(to_string(Analyzer::y_prime)) == Analyzer::y_prime);
  CHECK(window_from_string("hann") == Window::hann);
  CHECK(polar_model_from_string(to_string(PolarModel::sin2theta)) == PolarModel::sin2theta);
  CHECK(polar_model_for(SymmetryClass::E_T) == PolarModel::sin2theta);
  CHECK_THROWS(window_from_string("kaiser"));
}
