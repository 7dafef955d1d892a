// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgdial/detector.hpp"
#include "kgdial/domain.hpp"
#include "kgdial/entity_tracking.hpp"
#include "kgdial/generator.hpp"
#include "kgdial/kb.hpp"
#include "kgdial/ranker.hpp"

namespace kgdial {

struct PipelineConfig {
  /// Entity-match threshold and tracking window live here (0.95 default).
  TrackerConfig tracker;
  /// Whitespace-token budget for the ranking context; 0 means the whole
  /// dialogue. Domain classification always sees the whole dialogue.
  std::size_t context_budget_tokens = 128;
  /// Hard cap on ranking candidates after filtering; 0 means unlimited.
  std::size_t candidate_cap = 0;
};

/// Everything run_turn needs; all parts immutable and shareable across
/// worker threads.
struct PipelineModels {
  DetectionModel detector;
  DomainModel domain;
  std::shared_ptr<const KnowledgeScorer> ranker;
  std::shared_ptr<const ResponseGenerator> generator;
};

struct StageTiming {
  double detection_ms = 0.0;
  double selection_ms = 0.0;
  double generation_ms = 0.0;
};

struct TurnResult {
  bool knowledge_seeking = false;
  double detection_score = 0.0;
  std::optional<DomainDecision> domain;
  std::optional<RankedCandidates> selected;
  std::optional<std::string> response;
  StageTiming timing;
  /// Snippets pushed through the knowledge scorer for this turn.
  std::size_t scorer_calls = 0;
};

/// The domain -> entity filtering rule, shared by the live pipeline and
/// oracle-mode tests. Train/Taxi take their whole domain; Others takes
/// the tracked entities' snippets (in the order given), or every snippet
/// of every entity-bearing domain when nothing was tracked.
std::vector<SnippetRef> hierarchical_candidates(
    const KnowledgeBase& kb, DomainLabel label,
    const std::vector<EntityRef>& tracked);

struct SelectionOutcome {
  DomainDecision domain;
  std::vector<EntityMention> tracked;
  RankedCandidates ranked;
  std::size_t scorer_calls = 0;
};

/// Domain classification, entity tracking, candidate filtering and
/// ranking for one dialogue. Empty KB → EmptyCandidatesError.
SelectionOutcome select_knowledge(const Dialogue& d, const KnowledgeBase& kb,
                                  const PipelineModels& models,
                                  const PipelineConfig& cfg);

/// Grounds the response on the top-1 answer via the given generator.
std::string generate_response(const Dialogue& d, const std::string& top1_answer,
                              const ResponseGenerator& generator);

/// Full Figure-style turn: detection, then (when positive) selection and
/// generation. Stage failures are re-thrown with a stage tag in the
/// message ("detection: ...", "selection: ...", "generation: ...").
TurnResult run_turn(const Dialogue& d, const KnowledgeBase& kb,
                    const PipelineModels& models, const PipelineConfig& cfg);

struct BatchItem {
  std::optional<TurnResult> result;  // set on success
  std::string error_kind;            // set on failure
  std::string error_message;
};

struct BatchReport {
  std::size_t samples = 0;
  std::size_t knowledge_seeking = 0;
  std::size_t errors = 0;
  std::size_t scorer_calls = 0;
  /// |samples| x |KB| — what scoring without hierarchical filtering
  /// would have cost.
  std::size_t exhaustive_calls = 0;
  StageTiming stage_totals;
  double wall_ms = 0.0;
};

/// run_turn over every dialogue; `workers` threads (min 1). Results come
/// back in input order no matter the interleaving; per-sample errors are
/// recorded, not fatal.
std::vector<BatchItem> batch_run(const std::vector<Dialogue>& dialogues,
                                 const KnowledgeBase& kb,
                                 const PipelineModels& models,
                                 const PipelineConfig& cfg,
                                 std::size_t workers = 1,
                                 BatchReport* report = nullptr);

}  // namespace kgdial
