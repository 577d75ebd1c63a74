#include "isrs/perturbative.hpp"

#include <cmath>

#include "isrs/errors.hpp"
#include "isrs/kernels.hpp"

namespace isrs::perturbative {
namespace {

constexpr Polarization kPols[2] = {Polarization::x, Polarization::y};

double raman_prefactor(const InteractionScales& s, double mass, double frequency) {
  return s.tau * s.sample_volume / (2.0 * s.volume * mass * frequency);
}

void require_x_polarized(const PulseState& probe) {
  for (double v : probe.moduli(Polarization::y))
    if (v != 0.0) throw ParameterError("probe must be x-polarized");
}

}  // namespace

OverlapSum overlap_sums(const PulseState& pulse, const RealMatrix2& chi1, double phonon_frequency,
                        WeightVariant variant) {
  const auto& grid = pulse.grid();
  const int shift = grid.phonon_offset(phonon_frequency);
  OverlapSum out;
  out.variant = variant;
  const auto profile = pulse.profile();
  for (int j = -grid.half_width(); j <= grid.half_width(); ++j) {
    const double w = grid.weight(j, variant);
    for (int l = 0; l < 2; ++l)
      for (int lp = 0; lp < 2; ++lp)
        out.gamma += chi1[l][lp] * w * pulse.amplitude(kPols[l], j) * pulse.amplitude(kPols[lp], j + shift);
    if (grid.contains(j + shift)) out.eta += profile[grid.index(j)] * profile[grid.index(j + shift)];
  }
  return out;
}

double weighted_eta(const PulseState& pulse, int shift, WeightVariant variant) {
  const auto& grid = pulse.grid();
  const auto profile = pulse.profile();
  double sum = 0.0;
  for (int j = -grid.half_width(); j + shift <= grid.half_width(); ++j)
    sum += grid.weight(j, variant) * profile[grid.index(j)] * profile[grid.index(j + shift)];
  return sum;
}

PhononPhaseState phonon_kick(const PhononPhaseState& before, const OverlapSum& overlap,
                             const InteractionScales& scales) {
  return {before.mean_q, before.mean_p + scales.tau * overlap.gamma / (2.0 * scales.volume)};
}

double phonon_number(double n_before, double p_before, const OverlapSum& overlap,
                     const InteractionScales& s, double mass, double frequency,
                     std::optional<double> g_dagger_g) {
  const double ggd = g_dagger_g.value_or(overlap.gamma * overlap.gamma);
  return n_before + s.tau * s.sample_volume / (2.0 * s.volume * mass * frequency) * overlap.gamma * p_before +
         s.tau * s.tau * s.sample_volume / (8.0 * s.volume * s.volume * mass * frequency) * ggd;
}

PumpTransmission pump_transmission(const PulseState& pump, const PhononMode& mode,
                                   const InteractionScales& s, WeightVariant variant) {
  mode.validate();
  const auto& grid = pump.grid();
  const int shift = grid.phonon_offset(mode.frequency);
  const auto chi1 = mode.chi1();
  const double gamma = overlap_sums(pump, chi1, mode.frequency, variant).gamma;
  const double pref = s.tau * s.tau * s.sample_volume /
                      (8.0 * s.volume * s.volume * mode.mass * mode.frequency) * gamma;

  PumpTransmission out;
  out.x.resize(grid.size());
  out.y.resize(grid.size());
  out.total.resize(grid.size());
  for (int j = -grid.half_width(); j <= grid.half_width(); ++j) {
    const std::size_t i = grid.index(j);
    const double w = grid.weight(j, variant);
    for (int l = 0; l < 2; ++l) {
      const double a = pump.amplitude(kPols[l], j);
      double mix = 0.0;
      for (int lp = 0; lp < 2; ++lp)
        mix += chi1[l][lp] * (pump.amplitude(kPols[lp], j + shift) - pump.amplitude(kPols[lp], j - shift));
      (l == 0 ? out.x : out.y)[i] = a * a + pref * w * a * mix;
    }
    out.total[i] = out.x[i] + out.y[i];
  }
  return out;
}

double spectral_centroid(const FrequencyGrid& grid, const std::vector<double>& intensity) {
  if (intensity.size() != grid.size()) throw DimensionError("spectrum length does not match grid");
  double num = 0.0;
  double den = 0.0;
  for (int j = -grid.half_width(); j <= grid.half_width(); ++j) {
    num += grid.frequency(j) * intensity[grid.index(j)];
    den += intensity[grid.index(j)];
  }
  return num / den;
}

PhononPhaseState free_evolve(double radius, double frequency, double mass, double t) {
  if (t < 0.0) return {};
  return PhononPhaseState::from_radius(radius, frequency * t, mass, frequency);
}

ComplexMatrix2 rotation_matrix(double s, const RealMatrix2& chi) {
  const double u = s * chi[0][0];
  const double w = s * chi[0][1];
  const double cd = std::cos(u) * std::cos(w);
  const double co = -std::sin(u) * std::sin(w);
  const double sd = std::sin(u) * std::cos(w);
  const double so = std::cos(u) * std::sin(w);
  const std::complex<double> diag(cd, -sd);
  const std::complex<double> off(co, -so);
  return {{{diag, off}, {off, diag}}};
}

AnalyzerCoefficients analyzer_coefficients(double tau, double w_bar, double w) {
  const double x = tau * (w_bar - w);
  const double c = std::cos(x);
  const double s = std::sin(x);
  return {c * c, s * s, {0.0, 0.5 * std::sin(2.0 * x)}};
}

AnalyzerCoefficients analyzer_coefficients_from_rotations(double tau, const Chi0& chi0) {
  const auto rot = rotation_matrix(-tau, chi0.rotation_matrix());
  const auto bulk = rotation_matrix(tau, chi0.effective_matrix());
  constexpr int x = 0;
  constexpr int y = 1;
  // Coefficient of a^dag_{l} a_{l'} in L[a^dag_y a_y].
  auto coeff = [&](int l, int lp) {
    std::complex<double> sum{};
    for (int mu = 0; mu < 2; ++mu)
      for (int mup = 0; mup < 2; ++mup)
        sum += std::conj(rot[y][mu]) * rot[y][mup] * std::conj(bulk[mu][l]) * bulk[mup][lp];
    return sum;
  };
  return {coeff(y, y).real(), coeff(x, x).real(), coeff(x, y)};
}

double mode_radius(SymmetryClass cls, double coupling, double theta, double weighted_pump_eta,
                   const InteractionScales& s) {
  double factor = 0.0;
  switch (cls) {
    case SymmetryClass::A: factor = coupling; break;
    case SymmetryClass::E_L: factor = coupling * std::cos(2.0 * theta); break;
    case SymmetryClass::E_T: factor = -coupling * std::sin(2.0 * theta); break;
  }
  return s.tau / (2.0 * s.volume) * factor * weighted_pump_eta;
}

std::vector<double> isrs_pattern(const PulseState& probe, int shift, WeightVariant variant) {
  require_x_polarized(probe);
  const auto& grid = probe.grid();
  const auto a = probe.moduli(Polarization::x);
  std::vector<double> out(a.size());
  kernels::shifted_difference(a, shift, out);
  for (int j = -grid.half_width(); j <= grid.half_width(); ++j) out[grid.index(j)] *= grid.weight(j, variant);
  return out;
}

std::vector<double> refractive_pattern(const PulseState& probe, int shift) {
  require_x_polarized(probe);
  const auto a = probe.moduli(Polarization::x);
  std::vector<double> out(a.size());
  kernels::shifted_sum(a, shift, out);
  return out;
}

ProbeModulation generic_probe_modulation(const PulseState& probe, const PhononPhaseState& phonon,
                                         const PhononMode& mode, const Chi0& chi0,
                                         const InteractionScales& s, WeightVariant variant,
                                         Analyzer analyzer) {
  mode.validate();
  const int shift = probe.grid().phonon_offset(mode.frequency);
  const std::size_t n = probe.grid().size();
  ProbeModulation out{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};

  const double chi_xx = mode.chi1()[0][0];
  if (analyzer == Analyzer::x_prime && chi_xx != 0.0 && phonon.mean_p != 0.0) {
    const auto pattern = isrs_pattern(probe, shift, variant);
    kernels::axpy(raman_prefactor(s, mode.mass, mode.frequency) * chi_xx * phonon.mean_p, pattern, out.isrs);
  }
  if (mode.cls == SymmetryClass::E_T && phonon.mean_q != 0.0) {
    const double ellipticity = s.tau * chi0.w_abs * (1.0 - std::cos(chi0.phi));
    const double sign = analyzer == Analyzer::y_prime ? -1.0 : 1.0;
    const double coef =
        sign * s.tau * s.sample_volume / (2.0 * s.volume) * mode.coupling * ellipticity * phonon.mean_q;
    if (coef != 0.0) kernels::axpy(coef, refractive_pattern(probe, shift), out.lrm);
  }
  return out;
}

std::vector<double> probe_response(const ProbeGeometry& g, const std::vector<PhononMode>& modes, double t,
                                   Analyzer analyzer) {
  if (!(g.pump.grid() == g.probe.grid())) throw DimensionError("pump and probe grids differ");
  std::vector<double> total(g.probe.grid().size(), 0.0);
  if (t < 0.0) return total;
  for (const auto& mode : modes) {
    const int shift = g.pump.grid().phonon_offset(mode.frequency);
    const double eta = weighted_eta(g.pump, shift, g.variant);
    const double radius = mode_radius(mode.cls, mode.coupling, g.pump.theta(), eta, g.scales);
    const auto phonon = free_evolve(radius, mode.frequency, mode.mass, t);
    const auto mod = generic_probe_modulation(g.probe, phonon, mode, g.chi0, g.scales, g.variant, analyzer);
    kernels::axpy(1.0, mod.isrs, total);
    kernels::axpy(1.0, mod.lrm, total);
  }
  return total;
}

PhononMoments PhononMoments::thermal(double beta, double frequency) {
  if (std::isinf(beta)) return vacuum();
  const double nbar = 1.0 / std::expm1(beta * frequency);
  return {nbar, nbar + 1.0, {}, {}};
}

std::vector<double> gamma_prime(const PulseState& probe, const PhononMode& mode, const InteractionScales& s,
                                const PhononMoments& m, Polarization mu, WeightVariant variant) {
  mode.validate();
  const auto& grid = probe.grid();
  const int shift = grid.phonon_offset(mode.frequency);
  const double scale = -std::sqrt(s.sample_volume) / (2.0 * s.volume * std::sqrt(2.0 * mode.mass * mode.frequency));
  RealMatrix2 chi = mode.chi1();
  for (auto& row : chi)
    for (auto& v : row) v *= scale;
  const int imu = static_cast<int>(mu);
  const double squeeze = (m.bdbd + m.bb).real();

  std::vector<double> out(grid.size(), 0.0);
  for (int j = -grid.half_width(); j <= grid.half_width(); ++j) {
    const double w2 = grid.weight(j, variant) * grid.weight(j, variant);
    double first = 0.0;
    double second = 0.0;
    for (int l = 0; l < 2; ++l) {
      for (int e = 0; e < 2; ++e) {
        const auto al = [&](int off) { return probe.amplitude(kPols[l], j + off); };
        const auto ae = [&](int off) { return probe.amplitude(kPols[e], j + off); };
        first += chi[imu][l] * chi[imu][e] *
                 (al(shift) * ae(shift) * m.n_plus_one + al(-shift) * ae(-shift) * m.n +
                  al(-shift) * ae(shift) * squeeze);
        second += chi[imu][l] * chi[l][e] * probe.amplitude(mu, j) *
                  ((ae(2 * shift) + ae(-2 * shift)) * squeeze + 2.0 * ae(0) * (m.n_plus_one + m.n));
      }
    }
    out[grid.index(j)] = w2 * (first - 0.5 * second);
  }
  return out;
}

}  // namespace isrs::perturbative
