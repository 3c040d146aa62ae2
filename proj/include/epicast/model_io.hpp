#pragma once

#include <string>

#include "epicast/train.hpp"

namespace epicast {

// Self-describing binary container: magic, version, shapes, lookback,
// provenance, scaler min/max, then all parameter tensors row-major.
// Round-trips bit-exactly.
void save_model(const GruModel& model, const std::string& path);
GruModel load_model(const std::string& path);

}  // namespace epicast
