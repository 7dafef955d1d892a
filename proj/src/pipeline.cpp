// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <thread>
#include <utility>

#include "kgdial/errors.hpp"

namespace kgdial {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(const Clock::time_point& start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

/// Re-throws a library error with the stage baked into the message while
/// keeping the concrete error type (callers dispatch on it).
[[noreturn]] void rethrow_tagged(const Error& e, const char* stage) {
  // what() is "Kind: message"; keep just the message part.
  std::string msg = e.what();
  const std::string prefix = e.kind() + ": ";
  if (msg.rfind(prefix, 0) == 0) msg = msg.substr(prefix.size());
  msg = std::string(stage) + ": " + msg;
#define KGDIAL_RETHROW_AS(NAME) \
  if (e.kind() == #NAME) throw NAME(msg)
  KGDIAL_RETHROW_AS(ParseError);
  KGDIAL_RETHROW_AS(ValidationError);
  KGDIAL_RETHROW_AS(LookupError);
  KGDIAL_RETHROW_AS(AlignmentError);
  KGDIAL_RETHROW_AS(EmptyContextError);
  KGDIAL_RETHROW_AS(ConfigError);
  KGDIAL_RETHROW_AS(InvalidArgumentError);
  KGDIAL_RETHROW_AS(MissingDomainError);
  KGDIAL_RETHROW_AS(DegenerateValidationError);
  KGDIAL_RETHROW_AS(DegenerateTrainingError);
  KGDIAL_RETHROW_AS(EmptyCandidatesError);
  KGDIAL_RETHROW_AS(IoError);
  KGDIAL_RETHROW_AS(ScorerUnavailable);
  KGDIAL_RETHROW_AS(GeneratorUnavailable);
  KGDIAL_RETHROW_AS(ProtocolError);
#undef KGDIAL_RETHROW_AS
  throw Error(e.kind(), msg);
}

}  // namespace

std::vector<SnippetRef> hierarchical_candidates(
    const KnowledgeBase& kb, DomainLabel label,
    const std::vector<EntityRef>& tracked) {
  switch (label) {
    case DomainLabel::Train:
      return kb.candidates_for("train");
    case DomainLabel::Taxi:
      return kb.candidates_for("taxi");
    case DomainLabel::Others:
      break;
  }
  std::vector<SnippetRef> out;
  if (!tracked.empty()) {
    for (const EntityRef& ent : tracked) {
      for (SnippetRef& ref : kb.candidates_for(
               ent.domain, std::vector<std::string>{ent.entity_id})) {
        out.push_back(std::move(ref));
      }
    }
    return out;
  }
  // Nothing tracked: every snippet of every entity-bearing domain. The
  // classifier already ruled out the domain-level classes.
  for (const std::string& dom : kb.entity_bearing_domains()) {
    for (SnippetRef& ref : kb.candidates_for(dom)) {
      out.push_back(std::move(ref));
    }
  }
  return out;
}

SelectionOutcome select_knowledge(const Dialogue& d, const KnowledgeBase& kb,
                                  const PipelineModels& models,
                                  const PipelineConfig& cfg) {
  if (kb.total_snippets() == 0) {
    throw EmptyCandidatesError("knowledge base holds no snippets");
  }
  SelectionOutcome out;
  out.domain = classify_domain(models.domain, d);

  std::vector<EntityRef> tracked_refs;
  if (out.domain.label == DomainLabel::Others) {
    out.tracked = track_entities(kb, d, cfg.tracker);
    tracked_refs.reserve(out.tracked.size());
    for (const EntityMention& m : out.tracked) {
      tracked_refs.push_back(m.entity_ref);
    }
  }
  std::vector<SnippetRef> candidates =
      hierarchical_candidates(kb, out.domain.label, tracked_refs);
  if (cfg.candidate_cap > 0 && candidates.size() > cfg.candidate_cap) {
    candidates.resize(cfg.candidate_cap);
  }

  if (!models.ranker) {
    throw InvalidArgumentError("pipeline models carry no knowledge scorer");
  }
  const Dialogue rank_context = cfg.context_budget_tokens > 0
                                    ? windowed(d, cfg.context_budget_tokens)
                                    : d;
  out.ranked = rank(*models.ranker, rank_context, candidates, kb);
  out.scorer_calls = out.ranked.items.size();
  return out;
}

std::string generate_response(const Dialogue& d, const std::string& top1_answer,
                              const ResponseGenerator& generator) {
  return generator.generate(dialogue_to_text(d), top1_answer);
}

TurnResult run_turn(const Dialogue& d, const KnowledgeBase& kb,
                    const PipelineModels& models, const PipelineConfig& cfg) {
  TurnResult result;

  const auto t_detect = Clock::now();
  try {
    const Detection det = detect(models.detector, last_user_utterance(d));
    result.knowledge_seeking = det.knowledge_seeking;
    result.detection_score = det.score;
  } catch (const Error& e) {
    rethrow_tagged(e, "detection");
  }
  result.timing.detection_ms = ms_since(t_detect);
  if (!result.knowledge_seeking) return result;

  const auto t_select = Clock::now();
  try {
    SelectionOutcome selection = select_knowledge(d, kb, models, cfg);
    result.domain = selection.domain;
    result.selected = std::move(selection.ranked);
    result.scorer_calls = selection.scorer_calls;
  } catch (const Error& e) {
    rethrow_tagged(e, "selection");
  }
  result.timing.selection_ms = ms_since(t_select);

  const auto t_generate = Clock::now();
  try {
    if (!models.generator) {
      throw InvalidArgumentError("pipeline models carry no generator");
    }
    const SnippetRef& top1 = result.selected->items.front().first;
    result.response =
        generate_response(d, kb.resolve(top1).answer, *models.generator);
  } catch (const Error& e) {
    rethrow_tagged(e, "generation");
  }
  result.timing.generation_ms = ms_since(t_generate);
  return result;
}

std::vector<BatchItem> batch_run(const std::vector<Dialogue>& dialogues,
                                 const KnowledgeBase& kb,
                                 const PipelineModels& models,
                                 const PipelineConfig& cfg,
                                 std::size_t workers, BatchReport* report) {
  const auto t_start = Clock::now();
  std::vector<BatchItem> items(dialogues.size());
  if (!dialogues.empty()) {
    const std::size_t n_workers =
        std::max<std::size_t>(1, std::min(workers, dialogues.size()));
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= dialogues.size()) break;
        try {
          items[i].result = run_turn(dialogues[i], kb, models, cfg);
        } catch (const Error& e) {
          items[i].error_kind = e.kind();
          items[i].error_message = e.what();
        } catch (const std::exception& e) {
          items[i].error_kind = "Error";
          items[i].error_message = e.what();
        }
      }
    };
    if (n_workers == 1) {
      work();
    } else {
      std::vector<std::thread> threads;
      threads.reserve(n_workers);
      for (std::size_t w = 0; w < n_workers; ++w) threads.emplace_back(work);
      for (std::thread& t : threads) t.join();
    }
  }
  if (report) {
    *report = BatchReport{};
    report->samples = dialogues.size();
    report->exhaustive_calls = dialogues.size() * kb.total_snippets();
    for (const BatchItem& item : items) {
      if (!item.result) {
        ++report->errors;
        continue;
      }
      const TurnResult& r = *item.result;
      if (r.knowledge_seeking) ++report->knowledge_seeking;
      report->scorer_calls += r.scorer_calls;
      report->stage_totals.detection_ms += r.timing.detection_ms;
      report->stage_totals.selection_ms += r.timing.selection_ms;
      report->stage_totals.generation_ms += r.timing.generation_ms;
    }
    report->wall_ms = ms_since(t_start);
  }
  return items;
}

}  // namespace kgdial
