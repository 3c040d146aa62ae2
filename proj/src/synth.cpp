#include "epicast/synth.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "epicast/errors.hpp"

namespace epicast {

SynthKind synth_kind_from_string(const std::string& name) {
  if (name == "logistic-wave") return SynthKind::logistic_wave;
  if (name == "two-wave") return SynthKind::two_wave;
  if (name == "noisy") return SynthKind::noisy;
  throw Error(ErrorCode::InvalidConfig, "unknown synthetic kind '" + name + "'");
}

const char* to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::logistic_wave: return "logistic-wave";
    case SynthKind::two_wave: return "two-wave";
    case SynthKind::noisy: return "noisy";
  }
  return "?";
}

namespace {

// Logistic-derivative pulse scaled to peak at `amplitude`; strictly positive
// on the whole axis, so relative error metrics stay defined.
double pulse(double t, double center, double width, double amplitude) {
  const double s = 1.0 / (1.0 + std::exp(-(t - center) / width));
  return amplitude * 4.0 * s * (1.0 - s);
}

}  // namespace

CountrySeries generate_synthetic(SynthKind kind, int days, std::uint64_t seed,
                                 const SynthParams& params, const std::string& country_name) {
  if (days < 2) {
    throw Error(ErrorCode::SeriesTooShort, "synthetic series needs >= 2 days");
  }
  double noise = params.noise_level;
  if (kind == SynthKind::noisy && noise == 0.0) noise = 0.05;
  if (noise < 0.0 || noise >= 1.0) {
    throw Error(ErrorCode::InvalidConfig, "noise_level must lie in [0, 1)");
  }

  const double c1 = params.center_fraction * days;
  const double c2 = params.second_center_fraction * days;
  std::vector<double> cases(static_cast<std::size_t>(days));
  for (int t = 0; t < days; ++t) {
    double v = pulse(t, c1, params.width, params.amplitude);
    if (kind == SynthKind::two_wave) {
      v += pulse(t, c2, params.width, params.second_amplitude);
    }
    cases[static_cast<std::size_t>(t)] = v;
  }

  std::mt19937_64 rng(seed);
  auto jitter = [&rng, noise]() {
    if (noise == 0.0) return 1.0;
    const double u01 = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return 1.0 + noise * (2.0 * u01 - 1.0);
  };

  std::vector<DayRecord> records;
  records.reserve(static_cast<std::size_t>(days));
  double rolling = 0.0;
  for (int t = 0; t < days; ++t) {
    const std::size_t i = static_cast<std::size_t>(t);
    rolling += cases[i];
    if (t >= params.active_window) rolling -= cases[i - static_cast<std::size_t>(params.active_window)];
    const double lagged =
        t >= params.death_lag ? cases[i - static_cast<std::size_t>(params.death_lag)] : cases[0];

    DayRecord rec;
    rec.date = params.start_date + t;
    rec.new_cases = cases[i] * jitter();
    rec.new_deaths = params.death_fraction * lagged * jitter();
    rec.active_cases = rolling * jitter();
    records.push_back(rec);
  }
  return make_country_series(country_name, params.population_density, std::move(records));
}

}  // namespace epicast
