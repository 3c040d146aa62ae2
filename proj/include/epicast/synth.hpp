#pragma once

#include <cstdint>
#include <string>

#include "epicast/series.hpp"

namespace epicast {

enum class SynthKind { logistic_wave, two_wave, noisy };

SynthKind synth_kind_from_string(const std::string& name);
const char* to_string(SynthKind kind);

// Shape of a synthetic epidemic-like series. New cases follow one (or two)
// logistic-derivative pulses, deaths are a lagged fraction of cases, active
// cases are the rolling sum of the last `active_window` days of cases.
struct SynthParams {
  double amplitude = 10000.0;       // peak height of the first pulse
  double second_amplitude = 6000.0; // two_wave only
  double width = 12.0;              // pulse width in days
  double center_fraction = 0.5;     // pulse center as a fraction of the span
  double second_center_fraction = 0.78;
  int death_lag = 14;
  double death_fraction = 0.02;
  int active_window = 14;
  double noise_level = 0.0;  // multiplicative, forced on for SynthKind::noisy
  double population_density = 100.0;
  Date start_date = Date::from_ymd(2020, 2, 15);
};

// Deterministic for a given (kind, days, seed, params).
CountrySeries generate_synthetic(SynthKind kind, int days, std::uint64_t seed,
                                 const SynthParams& params, const std::string& country_name);

}  // namespace epicast
