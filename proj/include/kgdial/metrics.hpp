// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "kgdial/dialogue.hpp"
#include "kgdial/kb.hpp"

namespace kgdial {

// ---- Detection -------------------------------------------------------------

struct DetectionReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  /// False when the respective denominator was zero (the value is then
  /// reported as 0 by convention).
  bool precision_defined = true;
  bool recall_defined = true;
};

/// Positive-class P/R/F1. Lengths must match (AlignmentError) and be
/// non-empty (InvalidArgumentError).
DetectionReport detection_metrics(const std::vector<bool>& preds,
                                  const std::vector<bool>& golds);

/// Same report computed straight from confusion counts.
DetectionReport detection_metrics_from_counts(std::size_t tp, std::size_t fp,
                                              std::size_t fn, std::size_t tn);

// ---- Selection -------------------------------------------------------------

struct SelectionReport {
  double mrr_at_5 = 0.0;
  double recall_at_1 = 0.0;
  double recall_at_5 = 0.0;
  std::size_t n = 0;
};

/// Per sample: rank r of the first candidate matching any gold ref
/// (1-based). MRR@5 adds 1/r when r <= 5; Recall@k adds 1 when r <= k.
/// Every sample must carry at least one gold ref.
SelectionReport selection_metrics(
    const std::vector<std::vector<SnippetRef>>& ranked,
    const std::vector<std::vector<SnippetRef>>& golds);

// ---- Generation ------------------------------------------------------------

/// Sentence BLEU-1..max_n. Conventions (pinned by the golden tests):
/// clipped modified precision against all refs; an order with zero
/// candidate n-grams scores 1; a zero clipped count smooths to
/// (0+1)/(total+1) for n >= 2 and stays 0 for n = 1; brevity penalty
/// exp(1 - r/c) with the closest reference length (ties to the shorter).
std::vector<double> bleu(const std::string& hyp,
                         const std::vector<std::string>& refs,
                         std::size_t max_n = 4);

struct RougeScores {
  double rouge_1 = 0.0;
  double rouge_2 = 0.0;
  double rouge_l = 0.0;
};

/// ROUGE-1/2 F1 over clipped n-gram overlap; ROUGE-L F1 from the longest
/// common subsequence.
RougeScores rouge(const std::string& hyp, const std::string& ref);

/// Exact-match METEOR: one-to-one lowercase token alignment with the
/// minimal number of chunks; Fmean = 10PR / (R + 9P); penalty
/// 0.5 * (chunks / matches)^3; zero matches scores 0. Stemming and
/// synonymy are deliberately absent, hence "lite".
double meteor_lite(const std::string& hyp, const std::string& ref);

struct GenerationReport {
  double bleu_1 = 0.0, bleu_2 = 0.0, bleu_3 = 0.0, bleu_4 = 0.0;
  double meteor = 0.0;
  double rouge_1 = 0.0, rouge_2 = 0.0, rouge_l = 0.0;
  std::size_t n = 0;
};

/// Corpus scores = mean of sentence scores. With several references,
/// BLEU uses them jointly; ROUGE and METEOR-lite take the best reference.
GenerationReport generation_metrics(
    const std::vector<std::string>& hyps,
    const std::vector<std::vector<std::string>>& refs);

// ---- Significance ----------------------------------------------------------

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t n = 0;
};

/// Two-sided paired t-test on a - b. Conventions: all-zero differences →
/// t = 0, p = 1; zero variance with nonzero mean → t = ±inf, p = 0.
TTestResult paired_t_test(const std::vector<double>& a,
                          const std::vector<double>& b);

/// Student-t two-sided p-value for |t| with dof degrees of freedom,
/// via the regularized incomplete beta function.
double student_t_two_sided_p(double t, double dof);

// ---- End-to-end ------------------------------------------------------------

/// One predicted label in the corpus layout: detection flag, ranked
/// knowledge, response text.
struct PredictionLabel {
  bool target = false;
  std::vector<SnippetRef> knowledge;
  std::string response;
};

struct End2EndReport {
  DetectionReport detection;
  /// Computed on the intersection: samples where both the prediction and
  /// the gold label are knowledge-seeking.
  SelectionReport selection;
  GenerationReport generation;
  std::size_t intersection = 0;
};

End2EndReport end2end_metrics(const std::vector<PredictionLabel>& preds,
                              const std::vector<TurnLabel>& golds);

// ---- Rendering -------------------------------------------------------------

nlohmann::ordered_json to_json(const DetectionReport& r);
nlohmann::ordered_json to_json(const SelectionReport& r);
nlohmann::ordered_json to_json(const GenerationReport& r);
nlohmann::ordered_json to_json(const End2EndReport& r);
nlohmann::ordered_json to_json(const TTestResult& r);

std::string format_report_table(const DetectionReport& r);
std::string format_report_table(const SelectionReport& r);
std::string format_report_table(const GenerationReport& r);
std::string format_report_table(const End2EndReport& r);

}  // namespace kgdial
