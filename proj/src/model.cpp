#include "isrs/model.hpp"

#include <cmath>
#include <string>

#include "isrs/errors.hpp"

namespace isrs {

std::string_view to_string(SymmetryClass cls) {
  switch (cls) {
    case SymmetryClass::A: return "A";
    case SymmetryClass::E_L: return "E_L";
    case SymmetryClass::E_T: return "E_T";
  }
  return "?";
}

SymmetryClass symmetry_class_from_string(std::string_view name) {
  if (name == "A") return SymmetryClass::A;
  if (name == "E_L") return SymmetryClass::E_L;
  if (name == "E_T") return SymmetryClass::E_T;
  throw ParameterError("unknown symmetry class '" + std::string(name) + "' (expected A, E_L or E_T)");
}

std::string_view to_string(WeightVariant v) {
  return v == WeightVariant::sm ? "sm" : "main-text";
}

WeightVariant weight_variant_from_string(std::string_view name) {
  if (name == "sm") return WeightVariant::sm;
  if (name == "main-text") return WeightVariant::main_text;
  throw ParameterError("unknown weight variant '" + std::string(name) + "' (expected sm or main-text)");
}

FrequencyGrid::FrequencyGrid(double center, double spacing, int half_width)
    : center_(center), spacing_(spacing), half_width_(half_width) {
  if (!(spacing > 0.0) || !std::isfinite(spacing))
    throw ParameterError("grid spacing must be positive");
  if (half_width < 1) throw ParameterError("grid half width must be >= 1");
  if (!std::isfinite(center)) throw ParameterError("grid center must be finite");
}

int FrequencyGrid::phonon_offset(double phonon_frequency) const {
  const double ratio = phonon_frequency / spacing_;
  const double nearest = std::round(ratio);
  if (!(nearest >= 1.0) || std::abs(ratio - nearest) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw ConfigurationError("phonon frequency is not an integer multiple of the grid spacing (Omega/delta = " +
                             std::to_string(ratio) + ")");
  }
  return static_cast<int>(nearest);
}

PulseState::PulseState(FrequencyGrid grid, std::vector<double> x, std::vector<double> y, double theta)
    : grid_(grid), x_(std::move(x)), y_(std::move(y)), theta_(theta) {
  if (x_.size() != grid_.size() || y_.size() != grid_.size())
    throw DimensionError("amplitude array length does not match the frequency grid");
}

double PulseState::amplitude(Polarization p, int j) const {
  if (!grid_.contains(j)) return 0.0;
  return p == Polarization::x ? x_[grid_.index(j)] : y_[grid_.index(j)];
}

std::vector<double> PulseState::profile() const {
  std::vector<double> out(x_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::hypot(x_[i], y_[i]);
  return out;
}

PulseState pulse_from_table(const FrequencyGrid& grid, std::vector<double> profile, double theta) {
  if (profile.size() != grid.size()) throw DimensionError("amplitude table length must be 2J+1");
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  std::vector<double> x(profile.size());
  std::vector<double> y(profile.size());
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!(profile[i] >= 0.0)) throw ParameterError("amplitude table entries must be nonnegative");
    x[i] = profile[i] * c;
    y[i] = profile[i] * s;
  }
  return PulseState(grid, std::move(x), std::move(y), theta);
}

PulseState gaussian_pulse(const FrequencyGrid& grid, double alpha0, double sigma, double theta) {
  if (!(alpha0 > 0.0)) throw ParameterError("pulse height alpha0 must be positive");
  if (!(sigma > 0.0)) throw ParameterError("pulse width sigma must be positive");
  std::vector<double> profile(grid.size());
  for (int j = -grid.half_width(); j <= grid.half_width(); ++j) {
    const double d = j * grid.spacing();
    profile[grid.index(j)] = alpha0 * std::exp(-(d * d) / (2.0 * sigma * sigma));
  }
  return pulse_from_table(grid, std::move(profile), theta);
}

RealMatrix2 chi1_matrix(SymmetryClass cls, double coupling) {
  switch (cls) {
    case SymmetryClass::A: return {{{coupling, 0.0}, {0.0, coupling}}};
    case SymmetryClass::E_L: return {{{coupling, 0.0}, {0.0, -coupling}}};
    case SymmetryClass::E_T: return {{{0.0, -coupling}, {-coupling, 0.0}}};
  }
  return {};
}

ComplexMatrix2 chi0_matrix(double u, double w_abs, double phi) {
  const auto off = std::polar(w_abs, phi);
  return {{{std::complex<double>(u, 0.0), off}, {std::conj(off), std::complex<double>(u, 0.0)}}};
}

ComplexMatrix2 Chi0::matrix() const { return chi0_matrix(u, w_abs, phi); }

double Chi0::w_bar() const { return w_abs * std::cos(phi); }

RealMatrix2 Chi0::rotation_matrix() const { return {{{u, w_abs}, {w_abs, u}}}; }

RealMatrix2 Chi0::effective_matrix() const {
  const double wb = w_bar();
  return {{{u, wb}, {wb, u}}};
}

void PhononMode::validate() const {
  if (!(frequency > 0.0)) throw ParameterError("phonon frequency must be positive");
  if (!(mass > 0.0)) throw ParameterError("phonon effective mass must be positive");
  if (!(beta >= 0.0)) throw ParameterError("inverse temperature must be >= 0");
  if (!std::isfinite(coupling)) throw ParameterError("phonon coupling must be finite");
}

void InteractionScales::validate() const {
  if (!(tau > 0.0)) throw ParameterError("interaction time tau must be positive");
  if (!(volume > 0.0)) throw ParameterError("quantization volume V must be positive");
  if (!(sample_volume > 0.0)) throw ParameterError("sample volume V_S must be positive");
}

PhononPhaseState PhononPhaseState::from_radius(double radius, double phase, double mass, double frequency) {
  return {radius / (mass * frequency) * std::sin(phase), radius * std::cos(phase)};
}

double PhononPhaseState::radius(double mass, double frequency) const {
  return std::hypot(mean_p, mass * frequency * mean_q);
}

double PhononPhaseState::phase(double mass, double frequency) const {
  return std::atan2(mass * frequency * mean_q, mean_p);
}

}  // namespace isrs
