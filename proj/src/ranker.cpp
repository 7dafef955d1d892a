// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

RankInput build_input(const Dialogue& d, const SnippetRef& ref,
                      const KnowledgeBase& kb) {
  const Snippet& snip = kb.resolve(ref);
  const EntityRecord& ent = kb.entity(ref.domain, ref.entity_id);
  RankInput input;
  input.context_text = dialogue_to_text(d);
  input.domain = ref.domain;
  input.entity_name = ent.name;
  input.question = snip.question;
  input.answer = snip.answer;
  return input;
}

std::string flatten_input(const RankInput& input) {
  std::string out = input.context_text;
  const auto append = [&out](const std::string& part) {
    out += ' ';
    out += kRankSeparator;
    out += ' ';
    out += part;
  };
  append(input.domain);
  if (input.entity_name) append(*input.entity_name);
  append(input.question);
  append(input.answer);
  return out;
}

void NegativeSamplingConfig::validate() const {
  double sum = 0.0;
  for (double r : ratios) {
    if (r < 0.0 || r > 1.0) {
      throw ConfigError("negative-sampling ratio " + std::to_string(r) +
                        " outside [0, 1]");
    }
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("negative-sampling ratios sum to " +
                      std::to_string(sum) + ", expected 1");
  }
  if (negatives_per_positive == 0) {
    throw ConfigError("negatives_per_positive must be at least 1");
  }
}

namespace {

/// The four strategy pools, empty where a strategy has nothing to offer.
std::array<std::vector<SnippetRef>, 4> build_pools(
    const SnippetRef& positive, const KnowledgeBase& kb,
    const std::vector<EntityRef>& mentioned) {
  std::array<std::vector<SnippetRef>, 4> pools;
  for (const SnippetRef& ref : kb.all_refs()) {
    if (ref == positive) continue;
    pools[0].push_back(ref);
  }
  for (const SnippetRef& ref : kb.candidates_for(positive.domain)) {
    if (ref.entity_id == positive.entity_id) continue;
    pools[1].push_back(ref);
  }
  for (const SnippetRef& ref : kb.candidates_for(
           positive.domain, std::vector<std::string>{positive.entity_id})) {
    if (ref.doc_id == positive.doc_id) continue;
    pools[2].push_back(ref);
  }
  std::vector<EntityRef> distinct;
  for (const EntityRef& m : mentioned) {
    if (m.domain == positive.domain && m.entity_id == positive.entity_id) {
      continue;
    }
    if (std::find(distinct.begin(), distinct.end(), m) != distinct.end()) {
      continue;
    }
    distinct.push_back(m);
  }
  for (const EntityRef& m : distinct) {
    for (const SnippetRef& ref :
         kb.candidates_for(m.domain, std::vector<std::string>{m.entity_id})) {
      pools[3].push_back(ref);
    }
  }
  return pools;
}

}  // namespace

std::vector<SampledNegative> sample_negatives_detailed(
    const SnippetRef& positive, const KnowledgeBase& kb,
    const std::vector<EntityRef>& mentioned, const NegativeSamplingConfig& cfg,
    Rng& rng) {
  cfg.validate();
  const std::array<std::vector<SnippetRef>, 4> pools =
      build_pools(positive, kb, mentioned);
  if (pools[0].empty()) {
    throw EmptyCandidatesError(
        "knowledge base holds no snippet besides the positive");
  }
  std::array<double, 4> cum{};
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    acc += cfg.ratios[i];
    cum[i] = acc;
  }
  cum[3] = 1.0;  // absorb floating-point drift; uniform() < 1 always lands

  std::vector<SampledNegative> out;
  out.reserve(cfg.negatives_per_positive);
  for (std::size_t j = 0; j < cfg.negatives_per_positive; ++j) {
    const double u = rng.uniform();
    std::size_t requested = 0;
    while (requested < 3 && u >= cum[requested]) ++requested;
    std::size_t used = requested;
    while (used > 0 && pools[used].empty()) --used;
    const std::vector<SnippetRef>& pool = pools[used];
    SampledNegative neg;
    neg.ref = pool[rng.below(pool.size())];
    neg.requested = static_cast<NegativeStrategy>(requested);
    neg.used = static_cast<NegativeStrategy>(used);
    out.push_back(std::move(neg));
  }
  return out;
}

std::vector<SnippetRef> sample_negatives(const SnippetRef& positive,
                                         const KnowledgeBase& kb,
                                         const std::vector<EntityRef>& mentioned,
                                         const NegativeSamplingConfig& cfg) {
  Rng rng(cfg.seed);
  std::vector<SnippetRef> out;
  for (SampledNegative& neg :
       sample_negatives_detailed(positive, kb, mentioned, cfg, rng)) {
    out.push_back(std::move(neg.ref));
  }
  return out;
}

double hinge_loss(double s_pos, double s_neg, double margin) {
  return std::max(0.0, margin - s_pos + s_neg);
}

TfIdfIndex TfIdfIndex::build(const KnowledgeBase& kb) {
  TfIdfIndex idx;
  std::unordered_map<std::string, std::size_t> df;
  std::size_t n = 0;
  for (const KnowledgeBase::DomainEntry& dom : kb.domains()) {
    for (const EntityRecord& ent : dom.entities) {
      for (const Doc& doc : ent.docs) {
        ++n;
        std::set<std::string> seen;
        for (std::string& tok : text::metric_tokens(doc.snippet.question +
                                                    " " +
                                                    doc.snippet.answer)) {
          seen.insert(std::move(tok));
        }
        for (const std::string& term : seen) ++df[term];
      }
    }
  }
  idx.doc_count_ = n;
  idx.default_idf_ = std::log((1.0 + static_cast<double>(n)) / 1.0) + 1.0;
  idx.idf_.reserve(df.size());
  for (const auto& [term, count] : df) {
    idx.idf_[term] = std::log((1.0 + static_cast<double>(n)) /
                              (1.0 + static_cast<double>(count))) +
                     1.0;
  }
  return idx;
}

std::vector<std::pair<std::string, double>> TfIdfIndex::vectorize(
    const std::string& text_in) const {
  std::map<std::string, double> tf;
  for (const std::string& tok : text::metric_tokens(text_in)) tf[tok] += 1.0;
  std::vector<std::pair<std::string, double>> out;
  out.reserve(tf.size());
  double norm2 = 0.0;
  for (const auto& [term, count] : tf) {
    const auto it = idf_.find(term);
    const double w = count * (it == idf_.end() ? default_idf_ : it->second);
    out.emplace_back(term, w);
    norm2 += w * w;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& [term, w] : out) w *= inv;
  }
  return out;
}

double TfIdfIndex::cosine(
    const std::vector<std::pair<std::string, double>>& a,
    const std::vector<std::pair<std::string, double>>& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      na += a[i].second * a[i].second;
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      nb += b[j].second * b[j].second;
      ++j;
    } else {
      dot += a[i].second * b[j].second;
      na += a[i].second * a[i].second;
      nb += b[j].second * b[j].second;
      ++i;
      ++j;
    }
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

namespace {

/// Text of the last "U: " line in the flat context; the whole context when
/// no user line exists (degenerate inputs only).
std::string last_user_line(const std::string& context_text) {
  std::string last;
  bool found = false;
  std::size_t pos = 0;
  while (pos <= context_text.size()) {
    const std::size_t end = context_text.find('\n', pos);
    const std::size_t stop = end == std::string::npos ? context_text.size()
                                                      : end;
    const std::string line = context_text.substr(pos, stop - pos);
    if (line.rfind("U: ", 0) == 0) {
      last = line.substr(3);
      found = true;
    }
    if (end == std::string::npos) break;
    pos = end + 1;
  }
  return found ? last : context_text;
}

}  // namespace

std::array<double, kRankerFeatureCount> ranker_features(
    const RankInput& input, const TfIdfIndex& index) {
  std::array<double, kRankerFeatureCount> f{};
  const auto ctx = index.vectorize(input.context_text);
  const auto qa = index.vectorize(input.question + " " + input.answer);
  f[0] = TfIdfIndex::cosine(ctx, qa);
  const auto lu = index.vectorize(last_user_line(input.context_text));
  const auto q = index.vectorize(input.question);
  f[1] = TfIdfIndex::cosine(lu, q);
  if (input.entity_name && !input.entity_name->empty()) {
    if (text::ifind(input.context_text, *input.entity_name) !=
        std::string::npos) {
      f[2] = 1.0;
    } else {
      const std::string norm_name = normalize_entity_name(*input.entity_name);
      const std::string norm_ctx = normalize_utterance(input.context_text);
      if (!norm_name.empty() &&
          norm_ctx.find(norm_name) != std::string::npos) {
        f[2] = 1.0;
      }
    }
  }
  f[3] = 1.0 / (1.0 + static_cast<double>(text::token_count(input.question)));
  return f;
}

std::vector<double> KnowledgeScorer::score_batch(
    const std::vector<RankInput>& inputs) const {
  std::vector<double> out;
  out.reserve(inputs.size());
  for (const RankInput& input : inputs) out.push_back(score(input));
  return out;
}

BuiltinKnowledgeScorer::BuiltinKnowledgeScorer(
    RankerModel model, std::shared_ptr<const TfIdfIndex> index)
    : model_(model), index_(std::move(index)) {
  if (!index_) {
    throw InvalidArgumentError("knowledge scorer needs a TF-IDF index");
  }
}

double BuiltinKnowledgeScorer::score(const RankInput& input) const {
  const std::array<double, kRankerFeatureCount> f =
      ranker_features(input, *index_);
  double s = 0.0;
  for (std::size_t i = 0; i < kRankerFeatureCount; ++i) {
    s += model_.weights[i] * f[i];
  }
  return s;
}

RankedCandidates rank(const KnowledgeScorer& scorer, const Dialogue& d,
                      const std::vector<SnippetRef>& candidates,
                      const KnowledgeBase& kb) {
  if (candidates.empty()) {
    throw EmptyCandidatesError("rank called with no candidates");
  }
  std::vector<SnippetRef> distinct;
  distinct.reserve(candidates.size());
  std::set<SnippetRef> seen;
  for (const SnippetRef& ref : candidates) {
    if (seen.insert(ref).second) distinct.push_back(ref);
  }
  std::vector<RankInput> inputs;
  inputs.reserve(distinct.size());
  for (const SnippetRef& ref : distinct) {
    inputs.push_back(build_input(d, ref, kb));
  }
  const std::vector<double> scores = scorer.score_batch(inputs);
  if (scores.size() != distinct.size()) {
    throw ProtocolError("scorer returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(distinct.size()) +
                        " candidates");
  }
  std::vector<std::size_t> order(distinct.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t a, std::size_t b) {
                     return scores[a] > scores[b];
                   });
  RankedCandidates out;
  out.items.reserve(order.size());
  for (std::size_t i : order) out.items.emplace_back(distinct[i], scores[i]);
  return out;
}

std::vector<RankingPositive> make_ranking_positives(
    const LabeledCorpus& corpus, const KnowledgeBase& kb,
    const TrackerConfig& tracker) {
  const EntityIndex index(kb, tracker);
  std::vector<RankingPositive> out;
  for (const auto& [dialogue, label] : corpus.pairs) {
    if (!label.target || !label.knowledge || label.knowledge->empty()) {
      continue;
    }
    RankingPositive pos;
    pos.context = dialogue;
    pos.ref = label.knowledge->front();
    for (const EntityMention& m : index.track(dialogue)) {
      pos.mentioned.push_back(m.entity_ref);
    }
    out.push_back(std::move(pos));
  }
  return out;
}

RankerModel train_ranker(const std::vector<RankingPositive>& positives,
                         const KnowledgeBase& kb, const RankTrainConfig& cfg,
                         const TfIdfIndex& index, RankerTrainReport* report) {
  if (cfg.margin <= 0.0) {
    throw ConfigError("ranker margin must be positive, got " +
                      std::to_string(cfg.margin));
  }
  cfg.negatives.validate();
  if (positives.empty()) {
    throw DegenerateTrainingError("ranker training needs at least one positive");
  }

  struct FeaturePair {
    std::array<double, kRankerFeatureCount> pos;
    std::array<double, kRankerFeatureCount> neg;
  };
  std::vector<FeaturePair> pairs;
  Rng sample_rng(cfg.negatives.seed);
  for (const RankingPositive& p : positives) {
    const RankInput pos_input = build_input(p.context, p.ref, kb);
    const std::array<double, kRankerFeatureCount> pos_f =
        ranker_features(pos_input, index);
    for (const SampledNegative& neg : sample_negatives_detailed(
             p.ref, kb, p.mentioned, cfg.negatives, sample_rng)) {
      const RankInput neg_input = build_input(p.context, neg.ref, kb);
      pairs.push_back(FeaturePair{pos_f, ranker_features(neg_input, index)});
    }
  }
  if (report) {
    report->pair_count = pairs.size();
    report->loss_curve.clear();
  }

  const auto dot = [](const std::array<double, kRankerFeatureCount>& w,
                      const std::array<double, kRankerFeatureCount>& f) {
    double s = 0.0;
    for (std::size_t i = 0; i < kRankerFeatureCount; ++i) s += w[i] * f[i];
    return s;
  };

  RankerModel model;
  Rng shuffle_rng(cfg.seed);
  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  for (unsigned epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double total = 0.0;
    for (std::size_t k : order) {
      const FeaturePair& pr = pairs[k];
      const double loss =
          hinge_loss(dot(model.weights, pr.pos), dot(model.weights, pr.neg),
                     cfg.margin);
      total += loss;
      if (loss > 0.0) {
        for (std::size_t i = 0; i < kRankerFeatureCount; ++i) {
          model.weights[i] += cfg.learning_rate * (pr.pos[i] - pr.neg[i]);
        }
      }
      if (cfg.l2 > 0.0) {
        for (std::size_t i = 0; i < kRankerFeatureCount; ++i) {
          model.weights[i] -= cfg.learning_rate * cfg.l2 * model.weights[i];
        }
      }
    }
    if (report) {
      report->loss_curve.push_back(
          total / static_cast<double>(pairs.size()));
    }
  }
  return model;
}

}  // namespace kgdial
