#include "epicast/model_io.hpp"

#include <cstdint>
#include <fstream>

#include "epicast/errors.hpp"

namespace epicast {

namespace {

constexpr char kMagic[8] = {'E', 'P', 'I', 'C', 'A', 'S', 'T', 'M'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_i32(std::ostream& out, std::int32_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

void write_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint32_t read_u32(std::istream& in) {
  std::uint32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

std::int32_t read_i32(std::istream& in) {
  std::int32_t v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

double read_f64(std::istream& in) {
  double v = 0;
  in.read(reinterpret_cast<char*>(&v), sizeof(v));
  return v;
}

}  // namespace

void save_model(const GruModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");

  out.write(kMagic, sizeof(kMagic));
  write_u32(out, kVersion);
  write_i32(out, model.params.input_size);
  write_i32(out, model.params.hidden_size);
  write_i32(out, model.lookback);
  write_u32(out, static_cast<std::uint32_t>(model.provenance.size()));
  out.write(model.provenance.data(), static_cast<std::streamsize>(model.provenance.size()));
  for (int f = 0; f < kNumFeatures; ++f) write_f64(out, model.scaler.feature_min()[f]);
  for (int f = 0; f < kNumFeatures; ++f) write_f64(out, model.scaler.feature_max()[f]);

  const Eigen::VectorXd flat = flatten(model.params);  // row-major tensor order
  write_u32(out, static_cast<std::uint32_t>(flat.size()));
  for (Eigen::Index i = 0; i < flat.size(); ++i) write_f64(out, flat[i]);

  if (!out) throw Error(ErrorCode::IoError, "short write to '" + path + "'");
}

GruModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");

  char magic[8] = {};
  in.read(magic, sizeof(magic));
  if (!in || std::string(magic, sizeof(magic)) != std::string(kMagic, sizeof(kMagic))) {
    throw Error(ErrorCode::MalformedRow, "'" + path + "' is not a model file");
  }
  const std::uint32_t version = read_u32(in);
  if (version != kVersion) {
    throw Error(ErrorCode::MalformedRow,
                "unsupported model version " + std::to_string(version) + " in '" + path + "'");
  }
  const std::int32_t input_size = read_i32(in);
  const std::int32_t hidden_size = read_i32(in);
  const std::int32_t lookback = read_i32(in);
  const std::uint32_t prov_len = read_u32(in);
  std::string provenance(prov_len, '\0');
  in.read(provenance.data(), prov_len);

  Eigen::Array3d lo, hi;
  for (int f = 0; f < kNumFeatures; ++f) lo[f] = read_f64(in);
  for (int f = 0; f < kNumFeatures; ++f) hi[f] = read_f64(in);

  const std::uint32_t n = read_u32(in);
  Eigen::VectorXd flat(static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < flat.size(); ++i) flat[i] = read_f64(in);
  if (!in) throw Error(ErrorCode::MalformedRow, "'" + path + "' is truncated");

  GruModel model;
  model.params = unflatten(flat, input_size, hidden_size);
  model.scaler = FeatureScaler(lo, hi);
  model.lookback = lookback;
  model.provenance = std::move(provenance);
  return model;
}

}  // namespace epicast
