// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <string>
#include <vector>

#include "kgdial/dialogue.hpp"
#include "kgdial/kb.hpp"

namespace kgdial {

struct EntityRef {
  std::string domain;
  std::string entity_id;
  bool operator==(const EntityRef&) const = default;
};

/// A knowledge-base entity name after the normalization rules.
struct NormalizedEntity {
  EntityRef entity_ref;
  std::string surface;     // original name
  std::string normalized;  // lowercase, single-spaced
  std::size_t token_count = 0;
};

/// One located mention. char_start indexes into the normalized dialogue
/// context (utterances joined with '\n', offsets global).
struct EntityMention {
  EntityRef entity_ref;
  std::size_t char_start = 0;
  double ratio = 0.0;
};

struct TrackerConfig {
  double match_threshold = 0.95;
  std::vector<std::string> place_names = {"fisherman's wharf",
                                          "san francisco", "cambridge"};
  /// 0 means scan the full dialogue; otherwise restrict to the trailing
  /// context window of this many whitespace tokens.
  std::size_t window_tokens = 0;
};

/// Applies the entity-name normalization rules in order: "&" -> "and";
/// cut at the first " - ", ", " or "/"; "guesthouse" -> "guest house";
/// strip a trailing place name; spell out integers 0..100; lowercase and
/// collapse whitespace. Idempotent.
std::string normalize_entity_name(
    const std::string& name,
    const std::vector<std::string>& place_names = TrackerConfig{}.place_names);

/// Normalization applied to utterance text before matching. Only the
/// rules that are safe inside running text: "&" -> "and",
/// "guesthouse" -> "guest house", digits to words, lowercase, collapse.
/// The name-boundary rules (suffix cut, place strip) stay on the KB side.
std::string normalize_utterance(const std::string& utterance);

/// Fuzzy match ratio 2M/T, where M is the length of the longest
/// contiguous common substring and T the combined length. In [0, 1];
/// symmetric; 1 on identical strings.
double match_ratio(const std::string& a, const std::string& b);

/// Normalized-name index over the KB's named entities, built once per KB.
class EntityIndex {
 public:
  EntityIndex(const KnowledgeBase& kb, const TrackerConfig& config = {});

  const std::vector<NormalizedEntity>& entities() const { return entities_; }
  const TrackerConfig& config() const { return config_; }

  /// Locates entity mentions in the dialogue and keeps each entity's last
  /// mention; returns at most the 3 latest distinct entities in ascending
  /// char_start order.
  std::vector<EntityMention> track(const Dialogue& d) const;

 private:
  TrackerConfig config_;
  std::vector<NormalizedEntity> entities_;
};

/// Convenience wrapper: build the index and track in one call.
std::vector<EntityMention> track_entities(const KnowledgeBase& kb,
                                          const Dialogue& d,
                                          const TrackerConfig& config = {});

}  // namespace kgdial
