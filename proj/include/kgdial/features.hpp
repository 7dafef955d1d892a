// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace kgdial {

/// Sparse hashed text features: word unigrams and bigrams plus character
/// trigrams, hashed with FNV-1a into a 2^dim_bits space, counts
/// L2-normalized. Index order is ascending and deterministic.
std::vector<std::pair<std::uint32_t, double>> hash_features(
    const std::string& text, unsigned dim_bits);

struct TrainConfig {
  unsigned dim_bits = 18;
  unsigned epochs = 8;
  double learning_rate = 0.5;
  double l2 = 1e-6;
  std::uint64_t seed = 11;
};

/// Binary logistic model over hashed features. Deterministic under the
/// config seed: same data + seed reproduces identical weights.
class LinearTextModel {
 public:
  LinearTextModel() = default;
  explicit LinearTextModel(unsigned dim_bits);

  double probability(const std::string& text) const;

  /// samples: (text, label). Throws DegenerateTrainingError unless both
  /// classes are present. loss_curve, when given, receives the per-epoch
  /// mean log loss.
  static LinearTextModel train(
      const std::vector<std::pair<std::string, bool>>& samples,
      const TrainConfig& config, std::vector<double>* loss_curve = nullptr);

  unsigned dim_bits() const { return dim_bits_; }
  const std::vector<double>& weights() const { return weights_; }

  /// Flat weight layout for persistence: dim weights then the bias.
  std::vector<double> flat_weights() const;
  static LinearTextModel from_flat(unsigned dim_bits,
                                   const std::vector<double>& flat);

 private:
  unsigned dim_bits_ = 0;
  std::vector<double> weights_;
  double bias_ = 0.0;
};

/// Multiclass softmax sibling of LinearTextModel.
class SoftmaxTextModel {
 public:
  SoftmaxTextModel() = default;
  SoftmaxTextModel(unsigned dim_bits, std::size_t n_classes);

  /// Probability vector over classes; sums to 1.
  std::vector<double> probabilities(const std::string& text) const;

  static SoftmaxTextModel train(
      const std::vector<std::pair<std::string, std::size_t>>& samples,
      std::size_t n_classes, const TrainConfig& config,
      std::vector<double>* loss_curve = nullptr);

  unsigned dim_bits() const { return dim_bits_; }
  std::size_t n_classes() const { return n_classes_; }

  /// Class-major layout: class 0 weights + bias, class 1 weights + bias, ...
  std::vector<double> flat_weights() const;
  static SoftmaxTextModel from_flat(unsigned dim_bits, std::size_t n_classes,
                                    const std::vector<double>& flat);

 private:
  unsigned dim_bits_ = 0;
  std::size_t n_classes_ = 0;
  std::vector<std::vector<double>> weights_;
  std::vector<double> bias_;
};

}  // namespace kgdial
