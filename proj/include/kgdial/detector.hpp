// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kgdial/dialogue.hpp"
#include "kgdial/features.hpp"
#include "kgdial/kb.hpp"

namespace kgdial {

/// Probability-like relevance of one utterance being knowledge-seeking.
/// Implemented by the built-in linear model and by the gateway client.
class TextScorer {
 public:
  virtual ~TextScorer() = default;
  virtual double score(const std::string& utterance) const = 0;
};

class BuiltinTextScorer final : public TextScorer {
 public:
  explicit BuiltinTextScorer(LinearTextModel model)
      : model_(std::move(model)) {}
  double score(const std::string& utterance) const override {
    return model_.probability(utterance);
  }
  const LinearTextModel& model() const { return model_; }

 private:
  LinearTextModel model_;
};

enum class SampleProvenance { Corpus, KbQuestion, KbQuestionItReplaced };

struct DetectionSample {
  std::string utterance;
  bool label = false;
  SampleProvenance provenance = SampleProvenance::Corpus;
};

/// Scorer plus the tuned decision threshold t; positive iff score > t
/// (strict).
struct DetectionModel {
  std::shared_ptr<const TextScorer> scorer;
  double threshold = 0.5;
};

struct Detection {
  double score = 0.0;
  bool knowledge_seeking = false;
};

Detection detect(const DetectionModel& model, const std::string& utterance);

/// Positive-side augmentation: every KB question becomes a sample, and
/// each question containing its entity's surface or normalized name gets
/// an extra copy with the name replaced by "it".
std::vector<DetectionSample> augment_detection_data(const KnowledgeBase& kb);

/// Replaces the entity name (absorbing a leading "the") with "it";
/// returns the unchanged text when the name does not occur.
std::string replace_entity_with_it(const std::string& question,
                                   const std::string& entity_name);

/// Corpus-side samples: the last user utterance of every dialogue,
/// labeled by the gold target flag.
std::vector<DetectionSample> corpus_detection_samples(
    const LabeledCorpus& corpus);

/// Picks the threshold maximizing F1 on (score, label) pairs. Candidates
/// are 0, 1 and the midpoints between adjacent distinct scores; ties
/// resolve to the smallest threshold.
double tune_threshold(const std::vector<std::pair<double, bool>>& scored);

/// Scores the validation set with the model's scorer, then tunes.
double tune_threshold(const DetectionModel& model,
                      const std::vector<std::pair<std::string, bool>>& items);

struct DetectorTrainReport {
  std::vector<double> loss_curve;
  double train_accuracy = 0.0;
};

DetectionModel train_detector(const std::vector<DetectionSample>& samples,
                              const TrainConfig& config,
                              DetectorTrainReport* report = nullptr);

/// F1 of predictions (score > threshold) against labels; 0 when undefined.
double f1_at_threshold(const std::vector<std::pair<double, bool>>& scored,
                       double threshold);

}  // namespace kgdial
