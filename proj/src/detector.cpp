// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/detector.hpp"

#include <algorithm>
#include <cctype>

#include "kgdial/entity_tracking.hpp"
#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

Detection detect(const DetectionModel& model, const std::string& utterance) {
  if (!model.scorer) throw ScorerUnavailable("detector has no scorer");
  const double p = model.scorer->score(utterance);
  return Detection{p, p > model.threshold};
}

std::string replace_entity_with_it(const std::string& question,
                                   const std::string& entity_name) {
  if (entity_name.empty()) return question;
  std::string out = question;
  std::size_t from = 0;
  while (true) {
    const std::size_t pos = text::ifind(out, entity_name, from);
    if (pos == std::string::npos) break;
    std::size_t start = pos;
    const std::size_t end = pos + entity_name.size();
    // Absorb a leading article so "the Lensfield Hotel" -> "it".
    static const std::string article = "the ";
    if (start >= article.size() &&
        text::ifind(out, article, start - article.size()) ==
            start - article.size()) {
      start -= article.size();
    }
    const bool sentence_start = start == 0;
    const std::string pronoun = sentence_start ? "It" : "it";
    out = out.substr(0, start) + pronoun + out.substr(end);
    from = start + pronoun.size();
  }
  return text::collapse_whitespace(out);
}

std::vector<DetectionSample> augment_detection_data(const KnowledgeBase& kb) {
  std::vector<DetectionSample> out;
  for (const auto& dom : kb.domains()) {
    for (const auto& ent : dom.entities) {
      const std::string surface = ent.name.value_or("");
      const std::string normalized =
          surface.empty() ? "" : normalize_entity_name(surface);
      for (const auto& doc : ent.docs) {
        const std::string& q = doc.snippet.question;
        out.push_back(
            DetectionSample{q, true, SampleProvenance::KbQuestion});
        if (surface.empty()) continue;
        std::string name_in_question;
        if (text::ifind(q, surface) != std::string::npos) {
          name_in_question = surface;
        } else if (text::ifind(q, normalized) != std::string::npos) {
          name_in_question = normalized;
        }
        if (!name_in_question.empty()) {
          out.push_back(
              DetectionSample{replace_entity_with_it(q, name_in_question),
                              true, SampleProvenance::KbQuestionItReplaced});
        }
      }
    }
  }
  return out;
}

std::vector<DetectionSample> corpus_detection_samples(
    const LabeledCorpus& corpus) {
  std::vector<DetectionSample> out;
  out.reserve(corpus.size());
  for (const auto& [d, label] : corpus.pairs) {
    out.push_back(DetectionSample{last_user_utterance(d), label.target,
                                  SampleProvenance::Corpus});
  }
  return out;
}

double f1_at_threshold(const std::vector<std::pair<double, bool>>& scored,
                       double threshold) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& [p, y] : scored) {
    const bool pred = p > threshold;
    if (pred && y) ++tp;
    if (pred && !y) ++fp;
    if (!pred && y) ++fn;
  }
  if (tp == 0) return 0.0;
  const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
  return 2.0 * precision * recall / (precision + recall);
}

double tune_threshold(const std::vector<std::pair<double, bool>>& scored) {
  bool has_pos = false, has_neg = false;
  for (const auto& [p, y] : scored) (y ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) {
    throw DegenerateValidationError(
        "threshold tuning needs both a positive and a negative sample");
  }

  std::vector<double> scores;
  scores.reserve(scored.size());
  for (const auto& [p, y] : scored) scores.push_back(p);
  std::sort(scores.begin(), scores.end());
  scores.erase(std::unique(scores.begin(), scores.end()), scores.end());

  std::vector<double> candidates = {0.0, 1.0};
  for (std::size_t i = 0; i + 1 < scores.size(); ++i) {
    candidates.push_back(0.5 * (scores[i] + scores[i + 1]));
  }
  std::sort(candidates.begin(), candidates.end());

  double best_t = candidates.front();
  double best_f1 = -1.0;
  for (double t : candidates) {
    const double f1 = f1_at_threshold(scored, t);
    if (f1 > best_f1) {  // ties keep the smallest threshold
      best_f1 = f1;
      best_t = t;
    }
  }
  return best_t;
}

double tune_threshold(const DetectionModel& model,
                      const std::vector<std::pair<std::string, bool>>& items) {
  if (!model.scorer) throw ScorerUnavailable("detector has no scorer");
  std::vector<std::pair<double, bool>> scored;
  scored.reserve(items.size());
  for (const auto& [utt, y] : items) {
    scored.emplace_back(model.scorer->score(utt), y);
  }
  return tune_threshold(scored);
}

DetectionModel train_detector(const std::vector<DetectionSample>& samples,
                              const TrainConfig& config,
                              DetectorTrainReport* report) {
  std::vector<std::pair<std::string, bool>> pairs;
  pairs.reserve(samples.size());
  for (const auto& s : samples) pairs.emplace_back(s.utterance, s.label);

  std::vector<double> losses;
  LinearTextModel model = LinearTextModel::train(pairs, config, &losses);
  if (report) {
    report->loss_curve = losses;
    std::size_t correct = 0;
    for (const auto& [txt, y] : pairs) {
      correct += (model.probability(txt) > 0.5) == y ? 1 : 0;
    }
    report->train_accuracy =
        static_cast<double>(correct) / static_cast<double>(pairs.size());
  }
  DetectionModel out;
  out.scorer = std::make_shared<BuiltinTextScorer>(std::move(model));
  out.threshold = 0.5;
  return out;
}

}  // namespace kgdial
