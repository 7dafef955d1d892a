// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/domain.hpp"

#include <algorithm>
#include <istream>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

namespace {
using ordered_json = nlohmann::ordered_json;
}  // namespace

const char* domain_label_name(DomainLabel label) {
  switch (label) {
    case DomainLabel::Train:
      return "train";
    case DomainLabel::Taxi:
      return "taxi";
    case DomainLabel::Others:
      return "others";
  }
  return "others";
}

DomainLabel parse_domain_label(const std::string& name) {
  const std::string folded = text::to_lower(text::trim(name));
  if (folded == "train") return DomainLabel::Train;
  if (folded == "taxi") return DomainLabel::Taxi;
  if (folded == "others") return DomainLabel::Others;
  throw InvalidArgumentError("unknown domain label: \"" + name + "\"");
}

DomainLabel gold_domain_label(const std::string& domain) {
  const std::string folded = text::to_lower(text::trim(domain));
  if (folded == "train") return DomainLabel::Train;
  if (folded == "taxi") return DomainLabel::Taxi;
  return DomainLabel::Others;
}

DomainLabel gold_domain_label(const SnippetRef& ref) {
  return gold_domain_label(ref.domain);
}

BuiltinDomainScorer::BuiltinDomainScorer(SoftmaxTextModel model)
    : model_(std::move(model)) {
  if (model_.n_classes() != kDomainClassCount) {
    throw ConfigError("domain scorer needs a " +
                      std::to_string(kDomainClassCount) + "-class model, got " +
                      std::to_string(model_.n_classes()) + " classes");
  }
}

std::array<double, kDomainClassCount> BuiltinDomainScorer::distribution(
    const std::string& context_text) const {
  const std::vector<double> p = model_.probabilities(context_text);
  std::array<double, kDomainClassCount> out{};
  for (std::size_t i = 0; i < kDomainClassCount; ++i) out[i] = p[i];
  return out;
}

DomainDecision classify_domain(const DomainModel& model, const Dialogue& d) {
  if (!model.scorer) {
    throw InvalidArgumentError("classify_domain: model carries no scorer");
  }
  DomainDecision out;
  out.distribution = model.scorer->distribution(dialogue_to_text(d));
  // Strict > keeps the earliest class on ties: Train < Taxi < Others.
  std::size_t best = 0;
  for (std::size_t i = 1; i < kDomainClassCount; ++i) {
    if (out.distribution[i] > out.distribution[best]) best = i;
  }
  out.label = static_cast<DomainLabel>(best);
  return out;
}

std::vector<std::vector<std::vector<SlotSpan>>> load_slot_annotations(
    std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  ordered_json root;
  try {
    root = ordered_json::parse(buf.str());
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("slot annotations: ") + e.what());
  }
  if (!root.is_array()) {
    throw ValidationError("slot annotations: top level must be an array");
  }
  std::vector<std::vector<std::vector<SlotSpan>>> out;
  out.reserve(root.size());
  for (const auto& dlg : root) {
    if (!dlg.is_array()) {
      throw ValidationError(
          "slot annotations: per-dialogue entry must be an array");
    }
    std::vector<std::vector<SlotSpan>> turns;
    turns.reserve(dlg.size());
    for (const auto& turn : dlg) {
      if (!turn.is_array()) {
        throw ValidationError(
            "slot annotations: per-turn entry must be an array");
      }
      std::vector<SlotSpan> spans;
      spans.reserve(turn.size());
      for (const auto& js : turn) {
        if (!js.is_object() || !js.contains("char_start") ||
            !js.contains("char_end") || !js.contains("slot")) {
          throw ValidationError(
              "slot annotations: span needs char_start, char_end, slot");
        }
        if (!js["char_start"].is_number_unsigned() ||
            !js["char_end"].is_number_unsigned()) {
          throw ValidationError(
              "slot annotations: span offsets must be non-negative integers");
        }
        if (!js["slot"].is_string()) {
          throw ValidationError("slot annotations: slot must be a string");
        }
        SlotSpan span;
        span.char_start = js["char_start"].get<std::size_t>();
        span.char_end = js["char_end"].get<std::size_t>();
        span.slot = js["slot"].get<std::string>();
        spans.push_back(std::move(span));
      }
      turns.push_back(std::move(spans));
    }
    out.push_back(std::move(turns));
  }
  return out;
}

std::vector<AnnotatedDialogue> annotate_dialogues(
    std::vector<Dialogue> dialogues,
    std::vector<std::vector<std::vector<SlotSpan>>> spans) {
  if (dialogues.size() != spans.size()) {
    throw AlignmentError("slot annotations cover " +
                         std::to_string(spans.size()) +
                         " dialogues, logs hold " +
                         std::to_string(dialogues.size()));
  }
  std::vector<AnnotatedDialogue> out;
  out.reserve(dialogues.size());
  for (std::size_t i = 0; i < dialogues.size(); ++i) {
    const Dialogue& d = dialogues[i];
    std::vector<std::vector<SlotSpan>>& per_turn = spans[i];
    if (per_turn.size() != d.turns().size()) {
      throw AlignmentError("dialogue " + std::to_string(i) + ": " +
                           std::to_string(per_turn.size()) +
                           " span lists for " +
                           std::to_string(d.turns().size()) + " turns");
    }
    for (std::size_t t = 0; t < per_turn.size(); ++t) {
      std::vector<SlotSpan>& list = per_turn[t];
      std::sort(list.begin(), list.end(),
                [](const SlotSpan& a, const SlotSpan& b) {
                  return a.char_start < b.char_start;
                });
      const std::string& turn_text = d.turns()[t].text;
      for (std::size_t s = 0; s < list.size(); ++s) {
        const SlotSpan& span = list[s];
        const std::string at = "dialogue " + std::to_string(i) + " turn " +
                               std::to_string(t);
        if (span.char_start >= span.char_end ||
            span.char_end > turn_text.size()) {
          throw ValidationError(at + ": span [" +
                                std::to_string(span.char_start) + ", " +
                                std::to_string(span.char_end) +
                                ") out of range");
        }
        if (s > 0 && list[s - 1].char_end > span.char_start) {
          throw ValidationError(at + ": overlapping slot spans");
        }
      }
    }
    out.push_back(AnnotatedDialogue{std::move(dialogues[i]),
                                    std::move(per_turn)});
  }
  return out;
}

std::vector<DomainSample> augment_attraction_dialogues(
    const std::vector<AnnotatedDialogue>& source, const KnowledgeBase& kb,
    std::uint64_t rng_seed) {
  if (!kb.has_domain("attraction")) {
    throw MissingDomainError("attraction domain absent from knowledge base");
  }
  // Usable entities: named and carrying at least one FAQ to borrow.
  std::vector<const EntityRecord*> pool;
  for (const EntityRecord& ent : kb.domain("attraction").entities) {
    if (ent.name && !ent.docs.empty()) pool.push_back(&ent);
  }
  if (pool.empty()) {
    throw MissingDomainError(
        "attraction domain holds no named entities with snippets");
  }
  Rng rng(rng_seed);
  std::vector<DomainSample> out;
  for (const AnnotatedDialogue& src : source) {
    bool has_attraction = false;
    for (const std::vector<SlotSpan>& turn_spans : src.spans) {
      for (const SlotSpan& span : turn_spans) {
        if (span.slot == kAttractionSlot) {
          has_attraction = true;
          break;
        }
      }
      if (has_attraction) break;
    }
    if (!has_attraction) continue;

    // Two draws per kept dialogue, in this order: entity, then question.
    const EntityRecord& ent = *pool[rng.below(pool.size())];
    const Doc& doc = ent.docs[rng.below(ent.docs.size())];

    std::vector<Turn> turns = src.dialogue.turns();
    for (std::size_t t = 0; t < turns.size(); ++t) {
      // Right to left so earlier offsets stay valid after splicing.
      const std::vector<SlotSpan>& list = src.spans[t];
      for (auto it = list.rbegin(); it != list.rend(); ++it) {
        if (it->slot != kAttractionSlot) continue;
        turns[t].text.replace(it->char_start, it->char_end - it->char_start,
                              *ent.name);
      }
    }
    turns.back().text = doc.snippet.question;

    DomainSample sample;
    sample.context = Dialogue(std::move(turns));
    sample.label = DomainLabel::Others;
    sample.provenance = DomainProvenance::AttractionAugmented;
    out.push_back(std::move(sample));
  }
  return out;
}

std::vector<DomainSample> corpus_domain_samples(const LabeledCorpus& corpus) {
  std::vector<DomainSample> out;
  for (const auto& [dialogue, label] : corpus.pairs) {
    if (!label.target || !label.knowledge || label.knowledge->empty()) {
      continue;
    }
    out.push_back(DomainSample{dialogue,
                               gold_domain_label(label.knowledge->front()),
                               DomainProvenance::Corpus});
  }
  return out;
}

DomainModel train_domain_classifier(const std::vector<DomainSample>& samples,
                                    const TrainConfig& config,
                                    DomainTrainReport* report) {
  std::vector<std::pair<std::string, std::size_t>> rows;
  rows.reserve(samples.size());
  for (const DomainSample& s : samples) {
    rows.emplace_back(dialogue_to_text(s.context),
                      static_cast<std::size_t>(s.label));
  }
  std::vector<double> curve;
  SoftmaxTextModel model = SoftmaxTextModel::train(
      rows, kDomainClassCount, config, report ? &curve : nullptr);
  DomainModel out{std::make_shared<BuiltinDomainScorer>(std::move(model))};
  if (report) {
    report->loss_curve = std::move(curve);
    std::size_t hits = 0;
    for (const DomainSample& s : samples) {
      if (classify_domain(out, s.context).label == s.label) ++hits;
    }
    report->train_accuracy =
        samples.empty() ? 0.0
                        : static_cast<double>(hits) /
                              static_cast<double>(samples.size());
  }
  return out;
}

}  // namespace kgdial
