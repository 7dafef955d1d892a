// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f1_of(double p, double r) {
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

}  // namespace

// ---- Detection -------------------------------------------------------------

DetectionReport detection_metrics_from_counts(std::size_t tp, std::size_t fp,
                                              std::size_t fn, std::size_t tn) {
  DetectionReport r;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.tn = tn;
  r.precision_defined = (tp + fp) > 0;
  r.recall_defined = (tp + fn) > 0;
  r.precision = r.precision_defined
                    ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                    : 0.0;
  r.recall = r.recall_defined
                 ? static_cast<double>(tp) / static_cast<double>(tp + fn)
                 : 0.0;
  r.f1 = f1_of(r.precision, r.recall);
  return r;
}

DetectionReport detection_metrics(const std::vector<bool>& preds,
                                  const std::vector<bool>& golds) {
  if (preds.size() != golds.size()) {
    throw AlignmentError("detection_metrics: " + std::to_string(preds.size()) +
                         " predictions vs " + std::to_string(golds.size()) +
                         " golds");
  }
  if (preds.empty()) {
    throw InvalidArgumentError("detection_metrics needs at least one sample");
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] && golds[i]) ++tp;
    else if (preds[i] && !golds[i]) ++fp;
    else if (!preds[i] && golds[i]) ++fn;
    else ++tn;
  }
  return detection_metrics_from_counts(tp, fp, fn, tn);
}

// ---- Selection -------------------------------------------------------------

SelectionReport selection_metrics(
    const std::vector<std::vector<SnippetRef>>& ranked,
    const std::vector<std::vector<SnippetRef>>& golds) {
  if (ranked.size() != golds.size()) {
    throw AlignmentError("selection_metrics: " + std::to_string(ranked.size()) +
                         " rankings vs " + std::to_string(golds.size()) +
                         " golds");
  }
  SelectionReport report;
  report.n = ranked.size();
  if (ranked.empty()) return report;
  double mrr = 0.0, r1 = 0.0, r5 = 0.0;
  for (std::size_t i = 0; i < ranked.size(); ++i) {
    if (golds[i].empty()) {
      throw InvalidArgumentError("selection_metrics: sample " +
                                 std::to_string(i) + " has no gold refs");
    }
    std::size_t rank = 0;  // 0 = not found
    for (std::size_t k = 0; k < ranked[i].size(); ++k) {
      if (std::find(golds[i].begin(), golds[i].end(), ranked[i][k]) !=
          golds[i].end()) {
        rank = k + 1;
        break;
      }
    }
    if (rank >= 1 && rank <= 5) mrr += 1.0 / static_cast<double>(rank);
    if (rank == 1) r1 += 1.0;
    if (rank >= 1 && rank <= 5) r5 += 1.0;
  }
  const double n = static_cast<double>(ranked.size());
  report.mrr_at_5 = mrr / n;
  report.recall_at_1 = r1 / n;
  report.recall_at_5 = r5 / n;
  return report;
}

// ---- BLEU ------------------------------------------------------------------

namespace {

/// n-gram counts over a token list; grams joined with '\x1f' as map keys.
std::map<std::string, std::size_t> ngram_counts(
    const std::vector<std::string>& tokens, std::size_t n) {
  std::map<std::string, std::size_t> counts;
  if (tokens.size() < n || n == 0) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (std::size_t j = 1; j < n; ++j) {
      key += '\x1f';
      key += tokens[i + j];
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

std::vector<double> bleu(const std::string& hyp,
                         const std::vector<std::string>& refs,
                         std::size_t max_n) {
  if (refs.empty()) {
    throw InvalidArgumentError("bleu needs at least one reference");
  }
  if (max_n == 0) {
    throw InvalidArgumentError("bleu needs max_n >= 1");
  }
  const std::vector<std::string> hyp_tokens = text::metric_tokens(hyp);
  std::vector<std::vector<std::string>> ref_tokens;
  ref_tokens.reserve(refs.size());
  for (const std::string& r : refs) ref_tokens.push_back(text::metric_tokens(r));

  const std::size_t c = hyp_tokens.size();
  if (c == 0) return std::vector<double>(max_n, 0.0);

  // Closest reference length; ties go to the shorter reference.
  std::size_t r_len = ref_tokens.front().size();
  for (const auto& rt : ref_tokens) {
    const auto diff = [&](std::size_t len) {
      return len > c ? len - c : c - len;
    };
    if (diff(rt.size()) < diff(r_len) ||
        (diff(rt.size()) == diff(r_len) && rt.size() < r_len)) {
      r_len = rt.size();
    }
  }
  const double bp =
      c >= r_len ? 1.0
                 : std::exp(1.0 - static_cast<double>(r_len) /
                                      static_cast<double>(c));

  std::vector<double> precisions(max_n, 0.0);
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto hyp_counts = ngram_counts(hyp_tokens, n);
    std::size_t total = 0, clipped = 0;
    for (const auto& [gram, count] : hyp_counts) total += count;
    if (total == 0) {
      // No candidate n-grams of this order at all; neutral by convention.
      precisions[n - 1] = 1.0;
      continue;
    }
    for (const auto& [gram, count] : hyp_counts) {
      std::size_t best_ref = 0;
      for (const auto& rt : ref_tokens) {
        const auto rc = ngram_counts(rt, n);
        const auto it = rc.find(gram);
        if (it != rc.end()) best_ref = std::max(best_ref, it->second);
      }
      clipped += std::min(count, best_ref);
    }
    if (clipped == 0 && n >= 2) {
      precisions[n - 1] = 1.0 / (static_cast<double>(total) + 1.0);
    } else {
      precisions[n - 1] =
          static_cast<double>(clipped) / static_cast<double>(total);
    }
  }

  std::vector<double> scores(max_n, 0.0);
  double log_sum = 0.0;
  bool zero = false;
  for (std::size_t n = 1; n <= max_n; ++n) {
    if (precisions[n - 1] <= 0.0) {
      zero = true;
    } else {
      log_sum += std::log(precisions[n - 1]);
    }
    scores[n - 1] =
        zero ? 0.0 : bp * std::exp(log_sum / static_cast<double>(n));
  }
  return scores;
}

// ---- ROUGE -----------------------------------------------------------------

namespace {

double rouge_n_f1(const std::vector<std::string>& hyp,
                  const std::vector<std::string>& ref, std::size_t n) {
  const auto hc = ngram_counts(hyp, n);
  const auto rc = ngram_counts(ref, n);
  std::size_t hyp_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [g, cnt] : hc) hyp_total += cnt;
  for (const auto& [g, cnt] : rc) ref_total += cnt;
  for (const auto& [g, cnt] : hc) {
    const auto it = rc.find(g);
    if (it != rc.end()) overlap += std::min(cnt, it->second);
  }
  const double p = safe_div(static_cast<double>(overlap),
                            static_cast<double>(hyp_total));
  const double r = safe_div(static_cast<double>(overlap),
                            static_cast<double>(ref_total));
  return f1_of(p, r);
}

std::size_t lcs_length(const std::vector<std::string>& a,
                       const std::vector<std::string>& b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1]) {
        cur[j] = prev[j - 1] + 1;
      } else {
        cur[j] = std::max(prev[j], cur[j - 1]);
      }
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace

RougeScores rouge(const std::string& hyp, const std::string& ref) {
  const auto h = text::metric_tokens(hyp);
  const auto r = text::metric_tokens(ref);
  RougeScores out;
  out.rouge_1 = rouge_n_f1(h, r, 1);
  out.rouge_2 = rouge_n_f1(h, r, 2);
  const double lcs = static_cast<double>(lcs_length(h, r));
  const double p = safe_div(lcs, static_cast<double>(h.size()));
  const double rr = safe_div(lcs, static_cast<double>(r.size()));
  out.rouge_l = f1_of(p, rr);
  return out;
}

// ---- METEOR-lite -----------------------------------------------------------

namespace {

/// Branch-and-bound search for the minimal chunk count over all maximal
/// one-to-one exact alignments. Exact within the node budget; beyond it
/// the greedy bound (always feasible) stands.
class ChunkSearch {
 public:
  ChunkSearch(const std::vector<std::string>& hyp,
              const std::vector<std::string>& ref) {
    std::unordered_map<std::string, int> intern;
    const auto id_of = [&intern](const std::string& tok) {
      const auto it = intern.find(tok);
      if (it != intern.end()) return it->second;
      const int id = static_cast<int>(intern.size());
      intern.emplace(tok, id);
      return id;
    };
    hyp_.reserve(hyp.size());
    for (const auto& t : hyp) hyp_.push_back(id_of(t));
    ref_.reserve(ref.size());
    for (const auto& t : ref) ref_.push_back(id_of(t));
    const int n_tokens = static_cast<int>(intern.size());
    std::vector<int> hyp_count(n_tokens, 0), ref_count(n_tokens, 0);
    for (int t : hyp_) ++hyp_count[t];
    for (int t : ref_) ++ref_count[t];
    ref_positions_.resize(n_tokens);
    for (std::size_t j = 0; j < ref_.size(); ++j) {
      ref_positions_[ref_[j]].push_back(static_cast<int>(j));
    }
    need_.resize(n_tokens);
    for (int t = 0; t < n_tokens; ++t) {
      need_[t] = std::min(hyp_count[t], ref_count[t]);
      matches_ += need_[t];
    }
    // suffix_[p][t] = occurrences of t in hyp at position >= p.
    suffix_.assign(hyp_.size() + 1, std::vector<int>(n_tokens, 0));
    for (int p = static_cast<int>(hyp_.size()) - 1; p >= 0; --p) {
      suffix_[p] = suffix_[p + 1];
      ++suffix_[p][hyp_[p]];
    }
    used_.assign(ref_.size(), false);
  }

  int matches() const { return matches_; }

  int minimal_chunks() {
    if (matches_ == 0) return 0;
    best_ = greedy_chunks();
    nodes_ = 0;
    dfs(0, -2, 0, 0);
    return best_;
  }

 private:
  int greedy_chunks() {
    std::vector<int> need = need_;
    std::vector<bool> used(ref_.size(), false);
    int chunks = 0;
    int last = -2;
    for (std::size_t p = 0; p < hyp_.size(); ++p) {
      const int t = hyp_[p];
      if (need[t] == 0) {
        last = -2;
        continue;
      }
      // Prefer continuing the current run; otherwise earliest free slot.
      int pick = -1;
      if (last >= 0 && last + 1 < static_cast<int>(ref_.size()) &&
          ref_[last + 1] == t && !used[last + 1]) {
        pick = last + 1;
      } else {
        for (int j : ref_positions_[t]) {
          if (!used[j]) {
            pick = j;
            break;
          }
        }
      }
      used[pick] = true;
      --need[t];
      if (!(last >= 0 && pick == last + 1)) ++chunks;
      last = pick;
    }
    return chunks;
  }

  void dfs(std::size_t pos, int last, int matched, int chunks) {
    if (chunks >= best_) return;
    if (matched == matches_) {
      best_ = chunks;
      return;
    }
    if (pos == hyp_.size() || ++nodes_ > kNodeBudget) return;
    const int t = hyp_[pos];
    if (need_[t] > 0) {
      for (int j : ref_positions_[t]) {
        if (used_[j]) continue;
        const int next_chunks = chunks + ((last >= 0 && j == last + 1) ? 0 : 1);
        if (next_chunks >= best_) continue;
        used_[j] = true;
        --need_[t];
        dfs(pos + 1, j, matched + 1, next_chunks);
        ++need_[t];
        used_[j] = false;
      }
    }
    // Skipping this occurrence is legal only if enough remain behind it.
    if (suffix_[pos + 1][t] >= need_[t]) {
      dfs(pos + 1, -2, matched, chunks);
    }
  }

  static constexpr long kNodeBudget = 100000;

  std::vector<int> hyp_, ref_;
  std::vector<std::vector<int>> ref_positions_;
  std::vector<int> need_;
  std::vector<std::vector<int>> suffix_;
  std::vector<bool> used_;
  int matches_ = 0;
  int best_ = 0;
  long nodes_ = 0;
};

}  // namespace

double meteor_lite(const std::string& hyp, const std::string& ref) {
  const auto h = text::metric_tokens(hyp);
  const auto r = text::metric_tokens(ref);
  if (h.empty() || r.empty()) return 0.0;
  ChunkSearch search(h, r);
  const int m = search.matches();
  if (m == 0) return 0.0;
  const int chunks = search.minimal_chunks();
  const double p = static_cast<double>(m) / static_cast<double>(h.size());
  const double rec = static_cast<double>(m) / static_cast<double>(r.size());
  const double fmean = 10.0 * p * rec / (rec + 9.0 * p);
  const double frag = static_cast<double>(chunks) / static_cast<double>(m);
  const double penalty = 0.5 * frag * frag * frag;
  return fmean * (1.0 - penalty);
}

// ---- Generation corpus scores ----------------------------------------------

GenerationReport generation_metrics(
    const std::vector<std::string>& hyps,
    const std::vector<std::vector<std::string>>& refs) {
  if (hyps.size() != refs.size()) {
    throw AlignmentError("generation_metrics: " + std::to_string(hyps.size()) +
                         " hypotheses vs " + std::to_string(refs.size()) +
                         " reference lists");
  }
  GenerationReport report;
  report.n = hyps.size();
  if (hyps.empty()) return report;
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    if (refs[i].empty()) {
      throw InvalidArgumentError("generation_metrics: sample " +
                                 std::to_string(i) + " has no references");
    }
    const std::vector<double> b = bleu(hyps[i], refs[i], 4);
    report.bleu_1 += b[0];
    report.bleu_2 += b[1];
    report.bleu_3 += b[2];
    report.bleu_4 += b[3];
    double best_meteor = 0.0;
    RougeScores best_rouge;
    double best_rouge_key = -1.0;
    for (const std::string& ref : refs[i]) {
      best_meteor = std::max(best_meteor, meteor_lite(hyps[i], ref));
      const RougeScores rs = rouge(hyps[i], ref);
      if (rs.rouge_l > best_rouge_key) {
        best_rouge_key = rs.rouge_l;
        best_rouge = rs;
      }
    }
    report.meteor += best_meteor;
    report.rouge_1 += best_rouge.rouge_1;
    report.rouge_2 += best_rouge.rouge_2;
    report.rouge_l += best_rouge.rouge_l;
  }
  const double n = static_cast<double>(hyps.size());
  report.bleu_1 /= n;
  report.bleu_2 /= n;
  report.bleu_3 /= n;
  report.bleu_4 /= n;
  report.meteor /= n;
  report.rouge_1 /= n;
  report.rouge_2 /= n;
  report.rouge_l /= n;
  return report;
}

// ---- Significance ----------------------------------------------------------

namespace {

/// Continued fraction for the regularized incomplete beta function.
double beta_cf(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < 1e-30) d = 1e-30;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 300; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < 1e-30) d = 1e-30;
    c = 1.0 + aa / c;
    if (std::fabs(c) < 1e-30) c = 1e-30;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < 1e-30) d = 1e-30;
    c = 1.0 + aa / c;
    if (std::fabs(c) < 1e-30) c = 1e-30;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 3e-12) break;
  }
  return h;
}

double ibeta_reg(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_bt = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x);
  const double bt = std::exp(ln_bt);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return bt * beta_cf(a, b, x) / a;
  }
  return 1.0 - bt * beta_cf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_sided_p(double t, double dof) {
  if (std::isinf(t)) return 0.0;
  const double x = dof / (dof + t * t);
  return ibeta_reg(dof / 2.0, 0.5, x);
}

TTestResult paired_t_test(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw AlignmentError("paired_t_test: " + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + " scores");
  }
  const std::size_t n = a.size();
  if (n < 2) {
    throw InvalidArgumentError("paired_t_test needs at least two pairs");
  }
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (a[i] - b[i]) - mean;
    var += d * d;
  }
  var /= static_cast<double>(n - 1);

  TTestResult result;
  result.n = n;
  if (var == 0.0) {
    if (mean == 0.0) {
      result.t = 0.0;
      result.p = 1.0;
    } else {
      result.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      result.p = 0.0;
    }
    return result;
  }
  result.t = mean / std::sqrt(var / static_cast<double>(n));
  result.p = student_t_two_sided_p(result.t, static_cast<double>(n - 1));
  return result;
}

// ---- End-to-end ------------------------------------------------------------

End2EndReport end2end_metrics(const std::vector<PredictionLabel>& preds,
                              const std::vector<TurnLabel>& golds) {
  if (preds.size() != golds.size()) {
    throw AlignmentError("end2end_metrics: " + std::to_string(preds.size()) +
                         " predictions vs " + std::to_string(golds.size()) +
                         " golds");
  }
  if (preds.empty()) {
    throw InvalidArgumentError("end2end_metrics needs at least one sample");
  }
  End2EndReport report;
  std::vector<bool> pred_flags, gold_flags;
  pred_flags.reserve(preds.size());
  gold_flags.reserve(preds.size());
  std::vector<std::vector<SnippetRef>> ranked, gold_refs;
  std::vector<std::string> hyps;
  std::vector<std::vector<std::string>> refs;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    pred_flags.push_back(preds[i].target);
    gold_flags.push_back(golds[i].target);
    if (!preds[i].target || !golds[i].target) continue;
    ++report.intersection;
    if (golds[i].knowledge && !golds[i].knowledge->empty()) {
      ranked.push_back(preds[i].knowledge);
      gold_refs.push_back(*golds[i].knowledge);
    }
    if (golds[i].response) {
      hyps.push_back(preds[i].response);
      refs.push_back({*golds[i].response});
    }
  }
  report.detection = detection_metrics(pred_flags, gold_flags);
  report.selection = selection_metrics(ranked, gold_refs);
  report.generation = generation_metrics(hyps, refs);
  return report;
}

// ---- Rendering -------------------------------------------------------------

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

nlohmann::ordered_json to_json(const DetectionReport& r) {
  nlohmann::ordered_json j;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["tp"] = r.tp;
  j["fp"] = r.fp;
  j["fn"] = r.fn;
  j["tn"] = r.tn;
  j["precision_defined"] = r.precision_defined;
  j["recall_defined"] = r.recall_defined;
  return j;
}

nlohmann::ordered_json to_json(const SelectionReport& r) {
  nlohmann::ordered_json j;
  j["mrr_at_5"] = r.mrr_at_5;
  j["recall_at_1"] = r.recall_at_1;
  j["recall_at_5"] = r.recall_at_5;
  j["n"] = r.n;
  return j;
}

nlohmann::ordered_json to_json(const GenerationReport& r) {
  nlohmann::ordered_json j;
  j["bleu_1"] = r.bleu_1;
  j["bleu_2"] = r.bleu_2;
  j["bleu_3"] = r.bleu_3;
  j["bleu_4"] = r.bleu_4;
  j["meteor"] = r.meteor;
  j["rouge_1"] = r.rouge_1;
  j["rouge_2"] = r.rouge_2;
  j["rouge_l"] = r.rouge_l;
  j["n"] = r.n;
  return j;
}

nlohmann::ordered_json to_json(const End2EndReport& r) {
  nlohmann::ordered_json j;
  j["detection"] = to_json(r.detection);
  j["selection"] = to_json(r.selection);
  j["generation"] = to_json(r.generation);
  j["intersection"] = r.intersection;
  return j;
}

nlohmann::ordered_json to_json(const TTestResult& r) {
  nlohmann::ordered_json j;
  if (std::isinf(r.t)) {
    j["t"] = r.t > 0 ? "inf" : "-inf";
  } else {
    j["t"] = r.t;
  }
  j["p"] = r.p;
  j["n"] = r.n;
  return j;
}

std::string format_report_table(const DetectionReport& r) {
  std::ostringstream out;
  out << "detection\n";
  out << "  precision  " << fixed4(r.precision)
      << (r.precision_defined ? "" : "  (undefined, no positive predictions)")
      << "\n";
  out << "  recall     " << fixed4(r.recall)
      << (r.recall_defined ? "" : "  (undefined, no gold positives)") << "\n";
  out << "  f1         " << fixed4(r.f1) << "\n";
  out << "  counts     tp=" << r.tp << " fp=" << r.fp << " fn=" << r.fn
      << " tn=" << r.tn << "\n";
  return out.str();
}

std::string format_report_table(const SelectionReport& r) {
  std::ostringstream out;
  out << "selection (n=" << r.n << ")\n";
  out << "  mrr@5      " << fixed4(r.mrr_at_5) << "\n";
  out << "  recall@1   " << fixed4(r.recall_at_1) << "\n";
  out << "  recall@5   " << fixed4(r.recall_at_5) << "\n";
  return out.str();
}

std::string format_report_table(const GenerationReport& r) {
  std::ostringstream out;
  out << "generation (n=" << r.n << ")\n";
  out << "  bleu-1     " << fixed4(r.bleu_1) << "\n";
  out << "  bleu-2     " << fixed4(r.bleu_2) << "\n";
  out << "  bleu-3     " << fixed4(r.bleu_3) << "\n";
  out << "  bleu-4     " << fixed4(r.bleu_4) << "\n";
  out << "  meteor     " << fixed4(r.meteor) << "\n";
  out << "  rouge-1    " << fixed4(r.rouge_1) << "\n";
  out << "  rouge-2    " << fixed4(r.rouge_2) << "\n";
  out << "  rouge-l    " << fixed4(r.rouge_l) << "\n";
  return out.str();
}

std::string format_report_table(const End2EndReport& r) {
  std::ostringstream out;
  out << format_report_table(r.detection);
  out << "intersection (pred & gold knowledge-seeking): " << r.intersection
      << "\n";
  out << format_report_table(r.selection);
  out << format_report_table(r.generation);
  return out.str();
}

}  // namespace kgdial
