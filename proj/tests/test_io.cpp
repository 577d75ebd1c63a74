#include <cmath>
#include <algorithm>
#include <filesystem>
#include <functional>
#include <limits>

#include "doctest.h"
#include "isrs/config.hpp"
#include "isrs/errors.hpp"
#include "isrs/io.hpp"

using namespace isrs;
using namespace isrs::io;
namespace fs = std::filesystem;

namespace {

template <class E>
std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(-0.0) == "0");
  CHECK(format_shortest(1e-300) == "1e-300");
  CHECK(std::stod(format_shortest(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_fixed17(0.5) == "0.5");
  CHECK(format_fixed17(std::numeric_limits<double>::quiet_NaN()) == "null");
}

TEST_CASE("spectrogram CSV layout and round trip") {
  pipeline::Spectrogram s;
  s.delays_fs = {-6.7, 0.0};
  s.freqs_thz = {379.85, 380.0};
  s.values = {0.0, -0.0, 1.25e-7, -3.0 / 7.0};
  const auto text = spectrogram_csv(s);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  CHECK(text.rfind("delay_fs,freq_thz,delta_I\n", 0) == 0);
  CHECK(text.find("-6.7,379.85,0\n") != std::string::npos);
  CHECK(text.find("-6.7,380,0\n") != std::string::npos);
  CHECK(text.find("-0,") == std::string::npos);
  const auto back = parse_spectrogram_csv(text, pipeline::Analyzer::y_prime);
  CHECK(back.channel == pipeline::Analyzer::y_prime);
  CHECK(back.delays_fs == s.delays_fs);
  CHECK(back.freqs_thz == s.freqs_thz);
  CHECK(back.values[3] == s.values[3]);
  CHECK(spectrogram_csv(back) == text);
}

TEST_CASE("CSV parse errors carry the line number") {
  const auto msg = message_of<ConfigurationError>(
      [] { parse_spectrogram_csv("delay_fs,freq_thz,delta_I\n0,380,1\n0,381,zz\n", pipeline::Analyzer::x_prime); });
  CHECK(msg.find("line 3") != std::string::npos);
  CHECK_THROWS_AS(parse_spectrogram_csv("a,b,c\n", pipeline::Analyzer::x_prime), ConfigurationError);
}

TEST_CASE("fourier and polar CSV headers") {
  pipeline::FourierMap m;
  m.freqs_thz = {0.0, 0.5};
  m.amplitude = {1.0, 2.0, 3.0, 4.0};
  m.summed = {3.0, 7.0};
  const auto full = fourier_csv(m, {380.0, 380.15});
  CHECK(full.rfind("mode_freq_thz,probe_freq_thz,amplitude\n0,380,1\n0,380.15,2\n0.5,380,3\n", 0) == 0);
  CHECK(fourier_summed_csv(m) == "mode_freq_thz,amplitude\n0,3\n0.5,7\n");
  CHECK_THROWS(fourier_csv(m, {1.0}));
  pipeline::PolarScan p;
  p.thetas_deg = {0, 15};
  p.amplitudes = {0.5, 0.25};
  CHECK(polar_csv(p) == "theta_deg,amplitude\n0,0.5\n15,0.25\n");
}

TEST_CASE("JSON dump is sorted with 17 significant digits") {
  nlohmann::json j{{"zeta", 0.1}, {"alpha", {1, 2}}, {"mid", nullptr}, {"flag", true}};
  const auto s = dump_json(j);
  CHECK(s.find("\"alpha\"") < s.find("\"flag\""));
  CHECK(s.find("\"mid\"") < s.find("\"zeta\""));
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.back() == '\n');
  CHECK(dump_json(j) == s);
}

TEST_CASE("empty config keeps the defaults") {
  const auto c = config::parse_config("");
  const auto p = config::quartz_preset();
  CHECK(config::same_fields(c, p));
  CHECK(c.modes.size() == 4);
  CHECK(c.pump.alpha0 == 0.01);
}

TEST_CASE("off-grid phonon frequency snaps with a warning") {
  auto c = config::parse_config("modes:\n  - {class: A, freq_thz: 4.0, coupling: 1}\n");
  REQUIRE(c.modes.size() == 1);
  CHECK(c.modes[0].freq_thz == doctest::Approx(4.05));
  REQUIRE(c.warnings.size() == 1);
  CHECK(c.warnings[0].find("snapped") != std::string::npos);
}

TEST_CASE("validation errors name key and line") {
  const auto neg = message_of<ParameterError>([] { config::parse_config("probe:\n  sigma_thz: -1\n"); });
  CHECK(neg.find("probe.sigma_thz") != std::string::npos);
  CHECK(neg.find("line 2") != std::string::npos);

  const auto unknown = message_of<ConfigurationError>([] { config::parse_config("pump:\n  alpha0: 1\n  colour: red\n"); });
  CHECK(unknown.find("colour") != std::string::npos);
  CHECK(unknown.find("line 3") != std::string::npos);

  const auto cap = message_of<ParameterError>([] { config::parse_config("oracle:\n  photon_cutoff: 6\n"); });
  CHECK(cap.find("oracle.photon_cutoff") != std::string::npos);

  CHECK_THROWS(config::parse_config("oracle:\n  bins: 4\n"));
  CHECK_THROWS(config::parse_config("oracle:\n  coupling_scales: [1e-3, 5e-4, 1e-4]\n"));
}

TEST_CASE("emit and load round trip") {
  auto c = config::quartz_preset();
  c.pump.theta_deg = 22.5;
  c.modes[1].beta = 0.7;
  c.interaction.weight_variant = WeightVariant::main_text;
  const auto text = config::emit_config(c);
  const fs::path dir = fs::path(ISRS_TEST_TMP) / "io";
  fs::create_directories(dir);
  write_file((dir / "c.yaml").string(), text);
  const auto back = config::load_config((dir / "c.yaml").string());
  CHECK(config::same_fields(back, c));
  CHECK(config::emit_config(back) == text);
  CHECK(std::isinf(back.modes[0].beta));
  CHECK_THROWS_AS(read_file((dir / "missing.yaml").string()), std::runtime_error);
}

TEST_CASE("config to model conversion") {
  const auto c = config::quartz_preset();
  const auto e = c.experiment(2);
  CHECK(e.grid.half_width() == 200);
  CHECK(e.modes.size() == 4);
  CHECK(e.delays_fs.size() == 344);
  CHECK(e.threads == 2);
  const auto s = c.study();
  CHECK(s.grid.size() == 3);
  CHECK(s.couplings.size() == 3);
}
