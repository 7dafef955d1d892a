// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kgdial {

/// One FAQ pair. Non-empty after trimming; enforced at load.
struct Snippet {
  std::string question;
  std::string answer;
};

struct Doc {
  std::string id;
  Snippet snippet;
};

/// An entity and its FAQ list. The pseudo-entity "*" carries domain-level
/// knowledge and has no name; every named entity has one.
struct EntityRecord {
  std::string id;
  std::optional<std::string> name;
  std::vector<Doc> docs;  // file order, the global tie-break order
};

/// Address of one snippet. Resolution is always against a concrete
/// KnowledgeBase; a dangling ref raises LookupError at use.
struct SnippetRef {
  std::string domain;
  std::string entity_id;
  std::string doc_id;

  bool operator==(const SnippetRef&) const = default;
  bool operator<(const SnippetRef& o) const {
    if (domain != o.domain) return domain < o.domain;
    if (entity_id != o.entity_id) return entity_id < o.entity_id;
    return doc_id < o.doc_id;
  }
};

struct DomainStats {
  std::string domain;
  std::size_t entities = 0;  // excludes the pseudo-entity "*"
  std::size_t snippets = 0;
};

struct KbStats {
  std::vector<DomainStats> per_domain;
  std::size_t total_entities = 0;
  std::size_t total_snippets = 0;
};

/// The FAQ search universe: domains -> entities -> snippets. Immutable
/// after load; safe to share read-only across pipeline workers.
class KnowledgeBase {
 public:
  struct DomainEntry {
    std::string name;  // case-folded
    std::vector<EntityRecord> entities;  // file order
  };

  static KnowledgeBase load(std::istream& source);
  static KnowledgeBase load_file(const std::string& path);

  /// Serializes back to the on-disk layout (insertion order preserved).
  std::string to_json() const;

  const std::vector<DomainEntry>& domains() const { return domains_; }
  bool has_domain(const std::string& domain) const;
  const DomainEntry& domain(const std::string& domain) const;
  const EntityRecord& entity(const std::string& domain,
                             const std::string& entity_id) const;
  const Snippet& resolve(const SnippetRef& ref) const;

  /// All snippet refs under `domain`, restricted to `entity_ids` when
  /// given. Order: entity order as given (or file order), then snippet
  /// file order.
  std::vector<SnippetRef> candidates_for(
      const std::string& domain,
      const std::optional<std::vector<std::string>>& entity_ids =
          std::nullopt) const;

  /// Every snippet in the base, domain file order.
  std::vector<SnippetRef> all_refs() const;

  /// Domains that carry named entities (i.e. anything beyond "*").
  std::vector<std::string> entity_bearing_domains() const;

  KbStats stats() const;
  std::size_t total_snippets() const;

 private:
  void index();
  void validate() const;

  std::vector<DomainEntry> domains_;
  std::map<std::string, std::size_t> domain_index_;
  std::vector<std::map<std::string, std::size_t>> entity_index_;
};

/// Renders stats as the aligned table printed by `kgdial kb stats`.
std::string format_stats_table(const KbStats& stats);

}  // namespace kgdial
