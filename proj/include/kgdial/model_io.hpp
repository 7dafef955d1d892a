// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace kgdial {

/// Versioned flat model file, little-endian:
///
///   offset  size  field
///   0       4     magic "KGDM"
///   4       4     u32 format version (currently 1)
///   8       4     u32 model kind (1 detector, 2 domain classifier, 3 ranker)
///   12      4     u32 dim_bits (hashed feature space = 2^dim_bits; 0 for
///                 the ranker, whose features are fixed)
///   16      4     u32 n_classes (1 detector, 3 domain, 1 ranker)
///   20      8     f64 decision threshold (detector t_ktd; 0 otherwise)
///   28      8     u64 weight count W
///   36      8*W   f64 weights
///
/// Detector weights: 2^dim_bits feature weights then the bias.
/// Domain weights: class-major, (2^dim_bits weights + bias) per class.
/// Ranker weights: one weight per relevance feature.
enum class ModelKind : std::uint32_t {
  Detector = 1,
  DomainClassifier = 2,
  Ranker = 3,
};

struct ModelFile {
  ModelKind kind = ModelKind::Detector;
  unsigned dim_bits = 0;
  std::uint32_t n_classes = 1;
  double threshold = 0.0;
  std::vector<double> weights;
};

void save_model_file(const std::string& path, const ModelFile& model);
ModelFile load_model_file(const std::string& path);

}  // namespace kgdial
