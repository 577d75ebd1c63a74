#include <cmath>
#include <cstdio>
#include <string>

#include "isrs/errors.hpp"
#include "isrs/parallel.hpp"
#include "isrs/pipeline.hpp"

namespace isrs::pipeline {

std::string_view to_string(PolarModel m) {
  switch (m) {
    case PolarModel::constant: return "constant";
    case PolarModel::cos2theta: return "cos2theta";
    case PolarModel::sin2theta: return "sin2theta";
  }
  return "?";
}

PolarModel polar_model_from_string(std::string_view name) {
  if (name == "constant") return PolarModel::constant;
  if (name == "cos2theta") return PolarModel::cos2theta;
  if (name == "sin2theta") return PolarModel::sin2theta;
  throw ParameterError("unknown polar model '" + std::string(name) + "'");
}

PolarModel polar_model_for(SymmetryClass cls) {
  switch (cls) {
    case SymmetryClass::A: return PolarModel::constant;
    case SymmetryClass::E_L: return PolarModel::cos2theta;
    case SymmetryClass::E_T: return PolarModel::sin2theta;
  }
  return PolarModel::constant;
}

PolarScan polar_scan(const Experiment& e, const std::vector<double>& thetas_deg, double target_thz,
                     Analyzer channel, Window window) {
  if (thetas_deg.empty()) throw ParameterError("polar scan needs at least one angle");
  e.validate();
  PolarScan scan;
  scan.channel = channel;
  scan.target_thz = target_thz;
  scan.thetas_deg = thetas_deg;
  scan.amplitudes.assign(thetas_deg.size(), 0.0);
  std::vector<double> bins(thetas_deg.size(), 0.0);

  parallel_for(thetas_deg.size(), e.threads, [&](std::size_t i) {
    Experiment local = e;
    local.pump_theta = units::rad_from_deg(thetas_deg[i]);
    local.threads = 1;
    const auto map = delay_fourier(run_channel(local, channel), window);
    const std::size_t k = map.nearest_bin(target_thz);
    scan.amplitudes[i] = map.summed[k];
    bins[i] = map.freqs_thz[k];
  });
  scan.bin_thz = bins.front();
  if (std::abs(scan.bin_thz - target_thz) > 1e-9) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "target %.6g THz is off the FFT grid; using nearest bin %.6g THz", target_thz,
                  scan.bin_thz);
    scan.warnings.emplace_back(buf);
  }
  return scan;
}

FitResult fit_polar(const PolarScan& scan, PolarModel model) {
  if (scan.thetas_deg.size() != scan.amplitudes.size()) throw DimensionError("polar scan axes differ in length");
  if (scan.thetas_deg.size() < 8) throw ParameterError("polar fit needs at least 8 angles");
  auto basis = [&](double deg) {
    const double t = 2.0 * units::rad_from_deg(deg);
    switch (model) {
      case PolarModel::constant: return 1.0;
      case PolarModel::cos2theta: return std::abs(std::cos(t));
      case PolarModel::sin2theta: return std::abs(std::sin(t));
    }
    return 0.0;
  };
  FitResult fit;
  fit.model = model;
  double sff = 0.0, sfy = 0.0, syy = 0.0;
  std::size_t lowest = 0;
  for (std::size_t i = 0; i < scan.amplitudes.size(); ++i) {
    const double y = std::abs(scan.amplitudes[i]);
    const double f = basis(scan.thetas_deg[i]);
    sff += f * f;
    sfy += f * y;
    syy += y * y;
    if (y < std::abs(scan.amplitudes[lowest])) lowest = i;
  }
  fit.min_theta_deg = scan.thetas_deg[lowest];
  fit.amplitude = sff > 0.0 ? sfy / sff : 0.0;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < scan.amplitudes.size(); ++i) {
    const double r = std::abs(scan.amplitudes[i]) - fit.amplitude * basis(scan.thetas_deg[i]);
    ss_res += r * r;
  }
  fit.residual_norm = std::sqrt(ss_res);
  if (syy > 0.0) fit.r_squared = 1.0 - ss_res / syy;
  return fit;
}

}  // namespace isrs::pipeline
