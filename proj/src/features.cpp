// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "kgdial/errors.hpp"
#include "kgdial/rng.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

namespace {

double sigmoid(double z) {
  if (z >= 0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_dim(unsigned dim_bits) {
  if (dim_bits < 4 || dim_bits > 26) {
    throw ConfigError("dim_bits must be in [4, 26]");
  }
}

}  // namespace

std::vector<std::pair<std::uint32_t, double>> hash_features(
    const std::string& raw, unsigned dim_bits) {
  check_dim(dim_bits);
  const std::uint32_t mask = (1u << dim_bits) - 1u;
  std::map<std::uint32_t, double> counts;
  auto add = [&](const std::string& feat) {
    counts[static_cast<std::uint32_t>(text::fnv1a64(feat)) & mask] += 1.0;
  };

  const auto toks = text::metric_tokens(raw);
  for (const auto& t : toks) add("u:" + t);
  for (std::size_t i = 0; i + 1 < toks.size(); ++i) {
    add("b:" + toks[i] + " " + toks[i + 1]);
  }
  const std::string flat = text::collapse_whitespace(text::to_lower(raw));
  for (std::size_t i = 0; i + 3 <= flat.size(); ++i) {
    add("c:" + flat.substr(i, 3));
  }

  double norm = 0.0;
  for (const auto& [idx, v] : counts) norm += v * v;
  norm = norm > 0 ? std::sqrt(norm) : 1.0;
  std::vector<std::pair<std::uint32_t, double>> out;
  out.reserve(counts.size());
  for (const auto& [idx, v] : counts) out.emplace_back(idx, v / norm);
  return out;
}

LinearTextModel::LinearTextModel(unsigned dim_bits) : dim_bits_(dim_bits) {
  check_dim(dim_bits);
  weights_.assign(std::size_t{1} << dim_bits, 0.0);
}

double LinearTextModel::probability(const std::string& txt) const {
  double z = bias_;
  for (const auto& [idx, v] : hash_features(txt, dim_bits_)) {
    z += weights_[idx] * v;
  }
  return sigmoid(z);
}

LinearTextModel LinearTextModel::train(
    const std::vector<std::pair<std::string, bool>>& samples,
    const TrainConfig& config, std::vector<double>* loss_curve) {
  std::size_t pos = 0;
  for (const auto& [t, y] : samples) pos += y ? 1 : 0;
  if (samples.empty() || pos == 0 || pos == samples.size()) {
    throw DegenerateTrainingError(
        "detector training needs at least one sample of each class");
  }

  LinearTextModel model(config.dim_bits);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> feats;
  feats.reserve(samples.size());
  for (const auto& [t, y] : samples) {
    feats.push_back(hash_features(t, config.dim_bits));
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  for (unsigned epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss = 0.0;
    for (std::size_t i : order) {
      double z = model.bias_;
      for (const auto& [idx, v] : feats[i]) z += model.weights_[idx] * v;
      const double p = sigmoid(z);
      const double y = samples[i].second ? 1.0 : 0.0;
      loss -= y > 0.5 ? std::log(std::max(p, 1e-12))
                      : std::log(std::max(1.0 - p, 1e-12));
      const double g = p - y;
      for (const auto& [idx, v] : feats[i]) {
        model.weights_[idx] -=
            config.learning_rate * (g * v + config.l2 * model.weights_[idx]);
      }
      model.bias_ -= config.learning_rate * g;
    }
    if (loss_curve) {
      loss_curve->push_back(loss / static_cast<double>(samples.size()));
    }
  }
  return model;
}

std::vector<double> LinearTextModel::flat_weights() const {
  std::vector<double> flat = weights_;
  flat.push_back(bias_);
  return flat;
}

LinearTextModel LinearTextModel::from_flat(unsigned dim_bits,
                                           const std::vector<double>& flat) {
  check_dim(dim_bits);
  if (flat.size() != (std::size_t{1} << dim_bits) + 1) {
    throw ValidationError("detector weight count does not match dim_bits");
  }
  LinearTextModel model(dim_bits);
  model.weights_.assign(flat.begin(), flat.end() - 1);
  model.bias_ = flat.back();
  return model;
}

SoftmaxTextModel::SoftmaxTextModel(unsigned dim_bits, std::size_t n_classes)
    : dim_bits_(dim_bits), n_classes_(n_classes) {
  check_dim(dim_bits);
  if (n_classes < 2) throw ConfigError("need at least two classes");
  weights_.assign(n_classes,
                  std::vector<double>(std::size_t{1} << dim_bits, 0.0));
  bias_.assign(n_classes, 0.0);
}

std::vector<double> SoftmaxTextModel::probabilities(
    const std::string& txt) const {
  const auto x = hash_features(txt, dim_bits_);
  std::vector<double> z(n_classes_, 0.0);
  for (std::size_t k = 0; k < n_classes_; ++k) {
    z[k] = bias_[k];
    for (const auto& [idx, v] : x) z[k] += weights_[k][idx] * v;
  }
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
  return z;
}

SoftmaxTextModel SoftmaxTextModel::train(
    const std::vector<std::pair<std::string, std::size_t>>& samples,
    std::size_t n_classes, const TrainConfig& config,
    std::vector<double>* loss_curve) {
  std::vector<std::size_t> class_counts(n_classes, 0);
  for (const auto& [t, y] : samples) {
    if (y >= n_classes) throw ConfigError("label out of range");
    ++class_counts[y];
  }
  const auto present = static_cast<std::size_t>(
      std::count_if(class_counts.begin(), class_counts.end(),
                    [](std::size_t c) { return c > 0; }));
  if (samples.empty() || present < 2) {
    throw DegenerateTrainingError(
        "classifier training needs at least two populated classes");
  }

  SoftmaxTextModel model(config.dim_bits, n_classes);
  std::vector<std::vector<std::pair<std::uint32_t, double>>> feats;
  feats.reserve(samples.size());
  for (const auto& [t, y] : samples) {
    feats.push_back(hash_features(t, config.dim_bits));
  }

  Rng rng(config.seed);
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> z(n_classes, 0.0);
  for (unsigned epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double loss = 0.0;
    for (std::size_t i : order) {
      for (std::size_t k = 0; k < n_classes; ++k) {
        z[k] = model.bias_[k];
        for (const auto& [idx, v] : feats[i]) {
          z[k] += model.weights_[k][idx] * v;
        }
      }
      const double zmax = *std::max_element(z.begin(), z.end());
      double sum = 0.0;
      for (double& v : z) {
        v = std::exp(v - zmax);
        sum += v;
      }
      const std::size_t y = samples[i].second;
      loss -= std::log(std::max(z[y] / sum, 1e-12));
      for (std::size_t k = 0; k < n_classes; ++k) {
        const double g = z[k] / sum - (k == y ? 1.0 : 0.0);
        for (const auto& [idx, v] : feats[i]) {
          model.weights_[k][idx] -=
              config.learning_rate *
              (g * v + config.l2 * model.weights_[k][idx]);
        }
        model.bias_[k] -= config.learning_rate * g;
      }
    }
    if (loss_curve) {
      loss_curve->push_back(loss / static_cast<double>(samples.size()));
    }
  }
  return model;
}

std::vector<double> SoftmaxTextModel::flat_weights() const {
  std::vector<double> flat;
  flat.reserve(n_classes_ * (weights_[0].size() + 1));
  for (std::size_t k = 0; k < n_classes_; ++k) {
    flat.insert(flat.end(), weights_[k].begin(), weights_[k].end());
    flat.push_back(bias_[k]);
  }
  return flat;
}

SoftmaxTextModel SoftmaxTextModel::from_flat(unsigned dim_bits,
                                             std::size_t n_classes,
                                             const std::vector<double>& flat) {
  SoftmaxTextModel model(dim_bits, n_classes);
  const std::size_t row = (std::size_t{1} << dim_bits) + 1;
  if (flat.size() != n_classes * row) {
    throw ValidationError("classifier weight count does not match header");
  }
  for (std::size_t k = 0; k < n_classes; ++k) {
    const auto* base = flat.data() + k * row;
    model.weights_[k].assign(base, base + row - 1);
    model.bias_[k] = base[row - 1];
  }
  return model;
}

}  // namespace kgdial
