// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "kgdial/dialogue.hpp"
#include "kgdial/features.hpp"
#include "kgdial/kb.hpp"
#include "kgdial/rng.hpp"

namespace kgdial {

/// Three-way dialogue-domain label. "train" and "taxi" keep their own
/// classes because their knowledge attaches to the whole domain; every
/// entity-bearing domain collapses into Others and is resolved later by
/// entity tracking.
enum class DomainLabel { Train = 0, Taxi = 1, Others = 2 };

inline constexpr std::size_t kDomainClassCount = 3;

/// Lowercase wire/report name: "train", "taxi", "others".
const char* domain_label_name(DomainLabel label);

/// Inverse of domain_label_name; throws InvalidArgumentError on anything
/// else.
DomainLabel parse_domain_label(const std::string& name);

/// Total mapping from a gold snippet domain to its class.
DomainLabel gold_domain_label(const std::string& domain);
DomainLabel gold_domain_label(const SnippetRef& ref);

enum class DomainProvenance { Corpus, AttractionAugmented };

struct DomainSample {
  Dialogue context;
  DomainLabel label = DomainLabel::Others;
  DomainProvenance provenance = DomainProvenance::Corpus;
};

/// Distribution over {Train, Taxi, Others} for a flattened dialogue
/// context. Implemented by the built-in softmax model and by the gateway
/// client.
class DomainScorer {
 public:
  virtual ~DomainScorer() = default;
  virtual std::array<double, kDomainClassCount> distribution(
      const std::string& context_text) const = 0;
};

class BuiltinDomainScorer final : public DomainScorer {
 public:
  /// The wrapped model must have exactly kDomainClassCount classes;
  /// anything else throws ConfigError.
  explicit BuiltinDomainScorer(SoftmaxTextModel model);
  std::array<double, kDomainClassCount> distribution(
      const std::string& context_text) const override;
  const SoftmaxTextModel& model() const { return model_; }

 private:
  SoftmaxTextModel model_;
};

struct DomainModel {
  std::shared_ptr<const DomainScorer> scorer;
};

struct DomainDecision {
  DomainLabel label = DomainLabel::Train;
  std::array<double, kDomainClassCount> distribution{};
};

/// Scores the whole flattened context; label is the argmax and ties break
/// in class order Train < Taxi < Others.
DomainDecision classify_domain(const DomainModel& model, const Dialogue& d);

/// A [char_start, char_end) byte span inside one turn's text, tagged with
/// the annotation slot it came from.
struct SlotSpan {
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::string slot;
};

struct AnnotatedDialogue {
  Dialogue dialogue;
  /// Aligned with dialogue.turns(); spans index into the original text.
  std::vector<std::vector<SlotSpan>> spans;
};

/// Sidecar format: one JSON array aligned with the dialogues; per
/// dialogue an array aligned with its turns; per turn a list of
/// {"char_start", "char_end", "slot"} objects.
std::vector<std::vector<std::vector<SlotSpan>>> load_slot_annotations(
    std::istream& in);

/// Zips dialogues with their sidecar spans; AlignmentError when the
/// shapes disagree, ValidationError when a span is out of range or spans
/// overlap within a turn.
std::vector<AnnotatedDialogue> annotate_dialogues(
    std::vector<Dialogue> dialogues,
    std::vector<std::vector<std::vector<SlotSpan>>> spans);

inline constexpr const char* kAttractionSlot = "attraction-name";

/// Table-style augmentation: per source dialogue that carries at least
/// one attraction-name span, pick one random attraction entity, splice
/// its name into every span, and swap the final user utterance for one of
/// the entity's FAQ questions. Dialogues without attraction spans are
/// skipped and consume no randomness.
std::vector<DomainSample> augment_attraction_dialogues(
    const std::vector<AnnotatedDialogue>& source, const KnowledgeBase& kb,
    std::uint64_t rng_seed);

/// Corpus-side samples: every labeled dialogue paired with the gold
/// domain of its first knowledge reference; dialogues without a knowledge
/// target are skipped (they carry no domain signal).
std::vector<DomainSample> corpus_domain_samples(const LabeledCorpus& corpus);

struct DomainTrainReport {
  std::vector<double> loss_curve;
  double train_accuracy = 0.0;
};

DomainModel train_domain_classifier(const std::vector<DomainSample>& samples,
                                    const TrainConfig& config,
                                    DomainTrainReport* report = nullptr);

}  // namespace kgdial
