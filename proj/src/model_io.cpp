// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/model_io.hpp"

#include <cstring>
#include <fstream>

#include "kgdial/errors.hpp"

namespace kgdial {

namespace {

constexpr char kMagic[4] = {'K', 'G', 'D', 'M'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void write_le(std::ostream& out, T value) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  // x86/ARM little-endian layout is the file layout.
  out.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_le(std::istream& in, const std::string& what) {
  unsigned char buf[sizeof(T)];
  in.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!in) throw ParseError("model file truncated reading " + what);
  T value;
  std::memcpy(&value, buf, sizeof(T));
  return value;
}

}  // namespace

void save_model_file(const std::string& path, const ModelFile& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write model file: " + path);
  out.write(kMagic, 4);
  write_le<std::uint32_t>(out, kVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(model.kind));
  write_le<std::uint32_t>(out, model.dim_bits);
  write_le<std::uint32_t>(out, model.n_classes);
  write_le<double>(out, model.threshold);
  write_le<std::uint64_t>(out, model.weights.size());
  for (double w : model.weights) write_le<double>(out, w);
  if (!out) throw IoError("failed writing model file: " + path);
}

ModelFile load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open model file: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ParseError("not a model file: " + path);
  }
  const auto version = read_le<std::uint32_t>(in, "version");
  if (version != kVersion) {
    throw ParseError("unsupported model file version " +
                     std::to_string(version));
  }
  ModelFile model;
  const auto kind = read_le<std::uint32_t>(in, "kind");
  if (kind < 1 || kind > 3) {
    throw ParseError("unknown model kind " + std::to_string(kind));
  }
  model.kind = static_cast<ModelKind>(kind);
  model.dim_bits = read_le<std::uint32_t>(in, "dim_bits");
  model.n_classes = read_le<std::uint32_t>(in, "n_classes");
  model.threshold = read_le<double>(in, "threshold");
  const auto count = read_le<std::uint64_t>(in, "weight count");
  model.weights.resize(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    model.weights[i] = read_le<double>(in, "weights");
  }
  return model;
}

}  // namespace kgdial
