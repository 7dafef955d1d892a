// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/kb.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"
#include "json.hpp"

namespace kgdial {

namespace {

using ordered_json = nlohmann::ordered_json;

// The DOM parser silently keeps the last value for a repeated key, so
// duplicate ids are detected with a callback pass that tracks the open
// object key sets.
void check_duplicate_keys(const std::string& body) {
  std::vector<std::set<std::string>> stack;
  auto cb = [&stack](int /*depth*/, ordered_json::parse_event_t event,
                     ordered_json& parsed) {
    switch (event) {
      case ordered_json::parse_event_t::object_start:
        stack.emplace_back();
        break;
      case ordered_json::parse_event_t::object_end:
        stack.pop_back();
        break;
      case ordered_json::parse_event_t::key: {
        const auto key = parsed.get<std::string>();
        if (!stack.back().insert(key).second) {
          throw ValidationError("duplicate key \"" + key + "\"");
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  ordered_json::parse(body, cb);
}

std::string require_string(const ordered_json& v, const std::string& path) {
  if (!v.is_string()) throw ParseError("expected string at " + path);
  return v.get<std::string>();
}

}  // namespace

KnowledgeBase KnowledgeBase::load(std::istream& source) {
  std::ostringstream buf;
  buf << source.rdbuf();
  const std::string body = buf.str();

  ordered_json root;
  try {
    check_duplicate_keys(body);
    root = ordered_json::parse(body);
  } catch (const ordered_json::parse_error& e) {
    throw ParseError(std::string("knowledge file: ") + e.what());
  }
  if (!root.is_object()) {
    throw ParseError("knowledge file: top level must be an object");
  }

  KnowledgeBase kb;
  for (auto& [raw_domain, entities] : root.items()) {
    DomainEntry dom;
    dom.name = text::to_lower(raw_domain);
    if (!entities.is_object()) {
      throw ParseError("domain \"" + dom.name + "\" must be an object");
    }
    for (auto& [entity_id, body_json] : entities.items()) {
      EntityRecord rec;
      rec.id = entity_id;
      if (!body_json.is_object()) {
        throw ParseError("entity \"" + dom.name + "/" + entity_id +
                         "\" must be an object");
      }
      if (body_json.contains("name") && !body_json["name"].is_null()) {
        rec.name = require_string(body_json["name"],
                                  dom.name + "/" + entity_id + "/name");
      }
      const auto docs_it = body_json.find("docs");
      if (docs_it == body_json.end() || !docs_it->is_object()) {
        throw ParseError("entity \"" + dom.name + "/" + entity_id +
                         "\" lacks a docs object");
      }
      for (auto& [doc_id, doc] : docs_it->items()) {
        const std::string where =
            dom.name + "/" + entity_id + "/" + doc_id;
        if (!doc.is_object() || !doc.contains("title") ||
            !doc.contains("body")) {
          throw ParseError("doc \"" + where +
                           "\" must have title and body");
        }
        Snippet s;
        s.question = text::trim(require_string(doc["title"], where));
        s.answer = text::trim(require_string(doc["body"], where));
        rec.docs.push_back(Doc{doc_id, std::move(s)});
      }
      dom.entities.push_back(std::move(rec));
    }
    kb.domains_.push_back(std::move(dom));
  }
  kb.index();
  kb.validate();
  return kb;
}

KnowledgeBase KnowledgeBase::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open knowledge file: " + path);
  return load(in);
}

void KnowledgeBase::index() {
  domain_index_.clear();
  entity_index_.clear();
  for (std::size_t d = 0; d < domains_.size(); ++d) {
    if (!domain_index_.emplace(domains_[d].name, d).second) {
      throw ValidationError("duplicate domain \"" + domains_[d].name +
                            "\" after case folding");
    }
    std::map<std::string, std::size_t> ents;
    for (std::size_t e = 0; e < domains_[d].entities.size(); ++e) {
      if (!ents.emplace(domains_[d].entities[e].id, e).second) {
        throw ValidationError("duplicate entity \"" +
                              domains_[d].entities[e].id + "\" in domain \"" +
                              domains_[d].name + "\"");
      }
    }
    entity_index_.push_back(std::move(ents));
  }
}

void KnowledgeBase::validate() const {
  for (const auto& dom : domains_) {
    const bool domain_level_only = dom.name == "train" || dom.name == "taxi";
    if (domain_level_only &&
        (dom.entities.size() != 1 || dom.entities[0].id != "*")) {
      throw ValidationError("domain \"" + dom.name +
                            "\" must hold exactly the pseudo-entity \"*\"");
    }
    for (const auto& ent : dom.entities) {
      const std::string where = dom.name + "/" + ent.id;
      if ((ent.id == "*") == ent.name.has_value()) {
        throw ValidationError("entity \"" + where +
                              "\": name must be null iff id is \"*\"");
      }
      std::set<std::string> seen;
      for (const auto& doc : ent.docs) {
        if (!seen.insert(doc.id).second) {
          throw ValidationError("duplicate doc_id \"" + doc.id +
                                "\" under \"" + where + "\"");
        }
        if (doc.snippet.question.empty() || doc.snippet.answer.empty()) {
          throw ValidationError("empty question or answer at \"" + where +
                                "/" + doc.id + "\"");
        }
      }
    }
  }
}

std::string KnowledgeBase::to_json() const {
  ordered_json root = ordered_json::object();
  for (const auto& dom : domains_) {
    ordered_json ents = ordered_json::object();
    for (const auto& ent : dom.entities) {
      ordered_json docs = ordered_json::object();
      for (const auto& doc : ent.docs) {
        docs[doc.id] = {{"title", doc.snippet.question},
                        {"body", doc.snippet.answer}};
      }
      ordered_json body;
      body["name"] = ent.name ? ordered_json(*ent.name) : ordered_json();
      body["docs"] = std::move(docs);
      ents[ent.id] = std::move(body);
    }
    root[dom.name] = std::move(ents);
  }
  return root.dump(2);
}

bool KnowledgeBase::has_domain(const std::string& domain) const {
  return domain_index_.count(domain) > 0;
}

const KnowledgeBase::DomainEntry& KnowledgeBase::domain(
    const std::string& domain) const {
  auto it = domain_index_.find(domain);
  if (it == domain_index_.end()) {
    throw LookupError("unknown domain \"" + domain + "\"");
  }
  return domains_[it->second];
}

const EntityRecord& KnowledgeBase::entity(const std::string& domain,
                                          const std::string& entity_id) const {
  auto dit = domain_index_.find(domain);
  if (dit == domain_index_.end()) {
    throw LookupError("unknown domain \"" + domain + "\"");
  }
  const auto& ents = entity_index_[dit->second];
  auto eit = ents.find(entity_id);
  if (eit == ents.end()) {
    throw LookupError("unknown entity \"" + domain + "/" + entity_id + "\"");
  }
  return domains_[dit->second].entities[eit->second];
}

const Snippet& KnowledgeBase::resolve(const SnippetRef& ref) const {
  const EntityRecord& ent = entity(ref.domain, ref.entity_id);
  for (const auto& doc : ent.docs) {
    if (doc.id == ref.doc_id) return doc.snippet;
  }
  throw LookupError("unknown doc \"" + ref.domain + "/" + ref.entity_id +
                    "/" + ref.doc_id + "\"");
}

std::vector<SnippetRef> KnowledgeBase::candidates_for(
    const std::string& domain,
    const std::optional<std::vector<std::string>>& entity_ids) const {
  const DomainEntry& dom = this->domain(domain);
  std::vector<SnippetRef> out;
  auto push_entity = [&](const EntityRecord& ent) {
    for (const auto& doc : ent.docs) {
      out.push_back(SnippetRef{domain, ent.id, doc.id});
    }
  };
  if (entity_ids) {
    for (const auto& id : *entity_ids) push_entity(entity(domain, id));
  } else {
    for (const auto& ent : dom.entities) push_entity(ent);
  }
  return out;
}

std::vector<SnippetRef> KnowledgeBase::all_refs() const {
  std::vector<SnippetRef> out;
  for (const auto& dom : domains_) {
    for (const auto& ent : dom.entities) {
      for (const auto& doc : ent.docs) {
        out.push_back(SnippetRef{dom.name, ent.id, doc.id});
      }
    }
  }
  return out;
}

std::vector<std::string> KnowledgeBase::entity_bearing_domains() const {
  std::vector<std::string> out;
  for (const auto& dom : domains_) {
    for (const auto& ent : dom.entities) {
      if (ent.id != "*") {
        out.push_back(dom.name);
        break;
      }
    }
  }
  return out;
}

KbStats KnowledgeBase::stats() const {
  KbStats st;
  for (const auto& dom : domains_) {
    DomainStats ds;
    ds.domain = dom.name;
    for (const auto& ent : dom.entities) {
      if (ent.id != "*") ++ds.entities;
      ds.snippets += ent.docs.size();
    }
    st.total_entities += ds.entities;
    st.total_snippets += ds.snippets;
    st.per_domain.push_back(std::move(ds));
  }
  return st;
}

std::size_t KnowledgeBase::total_snippets() const {
  std::size_t n = 0;
  for (const auto& dom : domains_) {
    for (const auto& ent : dom.entities) n += ent.docs.size();
  }
  return n;
}

std::string format_stats_table(const KbStats& stats) {
  std::ostringstream out;
  out << "domain        entities   snippets\n";
  auto row = [&out](const std::string& name, std::size_t ents,
                    std::size_t snips) {
    out << name;
    for (std::size_t i = name.size(); i < 14; ++i) out << ' ';
    std::string e = std::to_string(ents), s = std::to_string(snips);
    for (std::size_t i = e.size(); i < 8; ++i) out << ' ';
    out << e;
    for (std::size_t i = s.size(); i < 11; ++i) out << ' ';
    out << s << '\n';
  };
  for (const auto& d : stats.per_domain) row(d.domain, d.entities, d.snippets);
  row("total", stats.total_entities, stats.total_snippets);
  return out.str();
}

}  // namespace kgdial
