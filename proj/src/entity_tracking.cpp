// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/entity_tracking.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

namespace {

std::string replace_ampersand(const std::string& s) {
  return text::ireplace_all(s, "&", "and");
}

std::string cut_at_separator(const std::string& s) {
  static const std::vector<std::string> seps = {" - ", ", ", "/"};
  std::size_t cut = std::string::npos;
  for (const auto& sep : seps) {
    const std::size_t pos = s.find(sep);
    if (pos != std::string::npos && pos < cut) cut = pos;
  }
  return cut == std::string::npos ? s : s.substr(0, cut);
}

std::string strip_trailing_places(const std::string& s,
                                  const std::vector<std::string>& places) {
  std::string cur = text::trim(s);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& place : places) {
      if (place.empty() || cur.size() <= place.size()) continue;
      const std::size_t at = cur.size() - place.size();
      if (!std::isspace(static_cast<unsigned char>(cur[at - 1]))) continue;
      if (text::ifind(cur, place, at) == at) {
        const std::string head = text::trim(cur.substr(0, at));
        if (!head.empty()) {
          cur = head;
          changed = true;
        }
      }
    }
  }
  return cur;
}

std::string digits_to_words(const std::string& s) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        ++j;
      }
      const std::string run = s.substr(i, j - i);
      std::string words;
      if (run.size() <= 3) words = text::number_to_words(std::stol(run));
      out += words.empty() ? run : words;
      i = j;
    } else {
      out += s[i++];
    }
  }
  return out;
}

}  // namespace

std::string normalize_entity_name(const std::string& name,
                                  const std::vector<std::string>& places) {
  std::string s = text::collapse_whitespace(name);
  s = replace_ampersand(s);
  s = cut_at_separator(s);
  s = text::ireplace_all(s, "guesthouse", "guest house");
  s = strip_trailing_places(s, places);
  s = digits_to_words(s);
  return text::collapse_whitespace(text::to_lower(s));
}

std::string normalize_utterance(const std::string& utterance) {
  std::string s = text::collapse_whitespace(utterance);
  s = replace_ampersand(s);
  s = text::ireplace_all(s, "guesthouse", "guest house");
  s = digits_to_words(s);
  return text::collapse_whitespace(text::to_lower(s));
}

double match_ratio(const std::string& a, const std::string& b) {
  if (a.empty() || b.empty()) return 0.0;
  // Longest contiguous common substring via a rolling DP row.
  const std::string& outer = a.size() >= b.size() ? a : b;
  const std::string& inner = a.size() >= b.size() ? b : a;
  std::vector<std::size_t> prev(inner.size() + 1, 0),
      cur(inner.size() + 1, 0);
  std::size_t best = 0;
  for (std::size_t i = 1; i <= outer.size(); ++i) {
    for (std::size_t j = 1; j <= inner.size(); ++j) {
      if (outer[i - 1] == inner[j - 1]) {
        cur[j] = prev[j - 1] + 1;
        best = std::max(best, cur[j]);
      } else {
        cur[j] = 0;
      }
    }
    std::swap(prev, cur);
  }
  return 2.0 * static_cast<double>(best) /
         static_cast<double>(a.size() + b.size());
}

EntityIndex::EntityIndex(const KnowledgeBase& kb, const TrackerConfig& config)
    : config_(config) {
  for (const auto& dom : kb.domains()) {
    for (const auto& ent : dom.entities) {
      if (!ent.name) continue;
      NormalizedEntity ne;
      ne.entity_ref = EntityRef{dom.name, ent.id};
      ne.surface = *ent.name;
      ne.normalized = normalize_entity_name(*ent.name, config.place_names);
      ne.token_count = text::token_count(ne.normalized);
      if (ne.token_count == 0) continue;
      entities_.push_back(std::move(ne));
    }
  }
}

std::vector<EntityMention> EntityIndex::track(const Dialogue& d) const {
  std::vector<Turn> turns =
      config_.window_tokens > 0
          ? context_window(d, config_.window_tokens)
          : d.turns();

  // Normalized utterances and global token offsets in the '\n'-joined
  // normalized context.
  struct TokenPos {
    std::size_t start;  // global char offset
    std::string token;
  };
  std::vector<TokenPos> tokens;
  std::vector<std::size_t> utterance_break;  // first token index per turn
  std::size_t base = 0;
  for (std::size_t t = 0; t < turns.size(); ++t) {
    const std::string norm = normalize_utterance(turns[t].text);
    utterance_break.push_back(tokens.size());
    std::size_t i = 0;
    while (i < norm.size()) {
      while (i < norm.size() && norm[i] == ' ') ++i;
      std::size_t j = i;
      while (j < norm.size() && norm[j] != ' ') ++j;
      if (j > i) tokens.push_back({base + i, norm.substr(i, j - i)});
      i = j;
    }
    base += norm.size() + 1;  // joining '\n'
  }
  utterance_break.push_back(tokens.size());

  // Last mention per entity. Windows never straddle utterances.
  std::map<std::size_t, EntityMention> last;  // index into entities_
  for (std::size_t e = 0; e < entities_.size(); ++e) {
    const NormalizedEntity& ent = entities_[e];
    const std::size_t n = ent.token_count;
    for (std::size_t t = 0; t + 1 < utterance_break.size(); ++t) {
      const std::size_t lo = utterance_break[t], hi = utterance_break[t + 1];
      if (hi - lo < n) continue;
      for (std::size_t w = lo; w + n <= hi; ++w) {
        std::string window = tokens[w].token;
        for (std::size_t k = 1; k < n; ++k) {
          window += ' ';
          window += tokens[w + k].token;
        }
        // Length prune: 2*min/T bounds the ratio from above.
        const double cap =
            2.0 * static_cast<double>(
                      std::min(window.size(), ent.normalized.size())) /
            static_cast<double>(window.size() + ent.normalized.size());
        if (cap <= config_.match_threshold) continue;
        const double ratio = window == ent.normalized
                                 ? 1.0
                                 : match_ratio(window, ent.normalized);
        if (ratio > config_.match_threshold) {
          const std::size_t start = tokens[w].start;
          auto it = last.find(e);
          if (it == last.end() || start >= it->second.char_start) {
            last[e] = EntityMention{ent.entity_ref, start, ratio};
          }
        }
      }
    }
  }

  std::vector<std::pair<std::size_t, EntityMention>> mentions(last.begin(),
                                                              last.end());
  std::sort(mentions.begin(), mentions.end(), [this](const auto& a,
                                                     const auto& b) {
    if (a.second.char_start != b.second.char_start) {
      return a.second.char_start < b.second.char_start;
    }
    // Same offset: more specific (longer) name wins the later slot.
    const auto& ea = entities_[a.first];
    const auto& eb = entities_[b.first];
    if (ea.normalized.size() != eb.normalized.size()) {
      return ea.normalized.size() < eb.normalized.size();
    }
    if (ea.entity_ref.entity_id != eb.entity_ref.entity_id) {
      return ea.entity_ref.entity_id > eb.entity_ref.entity_id;
    }
    return ea.entity_ref.domain > eb.entity_ref.domain;
  });

  std::vector<EntityMention> out;
  const std::size_t keep = std::min<std::size_t>(3, mentions.size());
  for (std::size_t i = mentions.size() - keep; i < mentions.size(); ++i) {
    out.push_back(mentions[i].second);
  }
  return out;
}

std::vector<EntityMention> track_entities(const KnowledgeBase& kb,
                                          const Dialogue& d,
                                          const TrackerConfig& config) {
  return EntityIndex(kb, config).track(d);
}

}  // namespace kgdial
