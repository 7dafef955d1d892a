// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgdial/dialogue.hpp"
#include "kgdial/entity_tracking.hpp"
#include "kgdial/kb.hpp"
#include "kgdial/rng.hpp"

namespace kgdial {

/// Everything a scorer sees for one (context, snippet) pair.
struct RankInput {
  std::string context_text;  // "U: ..." / "S: ..." lines
  std::string domain;
  std::optional<std::string> entity_name;  // absent for the pseudo-entity
  std::string question;
  std::string answer;
};

RankInput build_input(const Dialogue& d, const SnippetRef& ref,
                      const KnowledgeBase& kb);

inline constexpr const char* kRankSeparator = "[SEP]";

/// Single-string form: context [SEP] domain [SEP] entity name [SEP]
/// question [SEP] answer; the entity segment disappears when absent.
std::string flatten_input(const RankInput& input);

struct NegativeSamplingConfig {
  /// Strategy mix: whole KB, same domain, same entity, mentioned
  /// entities.
  std::array<double, 4> ratios{0.1, 0.1, 0.1, 0.7};
  std::size_t negatives_per_positive = 4;
  std::uint64_t seed = 17;

  /// ConfigError unless each ratio is in [0,1] and they sum to 1 ± 1e-9,
  /// and negatives_per_positive >= 1.
  void validate() const;
};

enum class NegativeStrategy {
  WholeKb = 0,
  SameDomain = 1,
  SameEntity = 2,
  Mentioned = 3,
};

struct SampledNegative {
  SnippetRef ref;
  NegativeStrategy requested = NegativeStrategy::WholeKb;
  NegativeStrategy used = NegativeStrategy::WholeKb;
};

/// Draws cfg.negatives_per_positive negatives. Per draw: pick the
/// strategy by the configured ratios, then draw uniformly from its pool.
/// Empty pools fall back 4 -> 3 -> 2 -> 1; pool contents:
///   1 whole KB minus the positive;
///   2 the positive's domain minus its entity;
///   3 the positive's entity minus the positive snippet;
///   4 mentioned entities minus the positive's entity.
/// EmptyCandidatesError when even the whole-KB pool is empty.
std::vector<SampledNegative> sample_negatives_detailed(
    const SnippetRef& positive, const KnowledgeBase& kb,
    const std::vector<EntityRef>& mentioned, const NegativeSamplingConfig& cfg,
    Rng& rng);

/// Convenience form: seeds its own Rng from cfg.seed and drops the
/// strategy bookkeeping.
std::vector<SnippetRef> sample_negatives(const SnippetRef& positive,
                                         const KnowledgeBase& kb,
                                         const std::vector<EntityRef>& mentioned,
                                         const NegativeSamplingConfig& cfg);

/// max(0, margin - s_pos + s_neg); margin must be positive.
double hinge_loss(double s_pos, double s_neg, double margin);

/// TF-IDF statistics over the knowledge base, shared by every built-in
/// ranking feature. Terms come from metric_tokens; idf is the smoothed
/// log((1 + N) / (1 + df)) + 1, vectors are L2-normalized.
class TfIdfIndex {
 public:
  static TfIdfIndex build(const KnowledgeBase& kb);

  /// Sorted sparse vector (term -> weight), unit length unless empty.
  std::vector<std::pair<std::string, double>> vectorize(
      const std::string& text) const;

  static double cosine(const std::vector<std::pair<std::string, double>>& a,
                       const std::vector<std::pair<std::string, double>>& b);

  std::size_t document_count() const { return doc_count_; }

 private:
  std::unordered_map<std::string, double> idf_;
  double default_idf_ = 1.0;
  std::size_t doc_count_ = 0;
};

inline constexpr std::size_t kRankerFeatureCount = 4;

/// The built-in scorer's features, in weight order:
///   0 TF-IDF cosine of the whole context against question + answer;
///   1 TF-IDF cosine of the last user line against the question;
///   2 entity-name-in-context indicator;
///   3 question-length prior 1 / (1 + question tokens).
std::array<double, kRankerFeatureCount> ranker_features(
    const RankInput& input, const TfIdfIndex& index);

struct RankerModel {
  std::array<double, kRankerFeatureCount> weights{};
};

/// Real-valued relevance, higher is more relevant. Implemented by the
/// built-in linear model and by the gateway client.
class KnowledgeScorer {
 public:
  virtual ~KnowledgeScorer() = default;
  virtual double score(const RankInput& input) const = 0;
  /// Batch hook so remote scorers can pipeline; the default just loops.
  virtual std::vector<double> score_batch(
      const std::vector<RankInput>& inputs) const;
};

class BuiltinKnowledgeScorer final : public KnowledgeScorer {
 public:
  BuiltinKnowledgeScorer(RankerModel model,
                         std::shared_ptr<const TfIdfIndex> index);
  double score(const RankInput& input) const override;
  const RankerModel& model() const { return model_; }

 private:
  RankerModel model_;
  std::shared_ptr<const TfIdfIndex> index_;
};

struct RankedCandidates {
  /// Scores non-increasing; refs distinct.
  std::vector<std::pair<SnippetRef, double>> items;
};

/// Scores every candidate and sorts by score descending; equal scores
/// keep the candidate input order. Duplicate input refs collapse to their
/// first occurrence. Empty input → EmptyCandidatesError.
RankedCandidates rank(const KnowledgeScorer& scorer, const Dialogue& d,
                      const std::vector<SnippetRef>& candidates,
                      const KnowledgeBase& kb);

/// One training positive: the dialogue, its gold snippet and the entities
/// tracked in the dialogue (strategy-4 pool).
struct RankingPositive {
  Dialogue context;
  SnippetRef ref;
  std::vector<EntityRef> mentioned;
};

/// Builds positives from every labeled knowledge-seeking pair; `mentioned`
/// comes from the entity tracker.
std::vector<RankingPositive> make_ranking_positives(
    const LabeledCorpus& corpus, const KnowledgeBase& kb,
    const TrackerConfig& tracker = {});

struct RankTrainConfig {
  NegativeSamplingConfig negatives;
  double margin = 1.0;
  unsigned epochs = 30;
  double learning_rate = 0.1;
  double l2 = 0.0;
  std::uint64_t seed = 29;  // epoch shuffling; negatives.seed drives sampling
};

struct RankerTrainReport {
  std::vector<double> loss_curve;  // per-epoch mean hinge loss
  std::size_t pair_count = 0;
};

/// Pairwise hinge training of the 4-feature linear scorer. Negatives are
/// drawn once per positive up front; deterministic under the two seeds.
RankerModel train_ranker(const std::vector<RankingPositive>& positives,
                         const KnowledgeBase& kb, const RankTrainConfig& cfg,
                         const TfIdfIndex& index,
                         RankerTrainReport* report = nullptr);

}  // namespace kgdial
