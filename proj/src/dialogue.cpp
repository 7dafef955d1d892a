// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/dialogue.hpp"

#include <fstream>
#include <sstream>

#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"
#include "json.hpp"

namespace kgdial {

namespace {

using json = nlohmann::json;

std::string id_to_string(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError("expected string or integer id at " + where);
}

json parse_stream(std::istream& in, const std::string& what) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

Dialogue parse_dialogue(const json& log, std::size_t index) {
  if (!log.is_array() || log.empty()) {
    throw ParseError("logs[" + std::to_string(index) +
                     "] must be a non-empty array of turns");
  }
  std::vector<Turn> turns;
  turns.reserve(log.size());
  for (const auto& t : log) {
    if (!t.is_object() || !t.contains("speaker") || !t.contains("text")) {
      throw ParseError("logs[" + std::to_string(index) +
                       "]: each turn needs speaker and text");
    }
    const std::string sp = t["speaker"].get<std::string>();
    Turn turn;
    if (sp == "U" || sp == "user" || sp == "User") {
      turn.speaker = Speaker::User;
    } else if (sp == "S" || sp == "agent" || sp == "Agent") {
      turn.speaker = Speaker::Agent;
    } else {
      throw ParseError("logs[" + std::to_string(index) +
                       "]: unknown speaker \"" + sp + "\"");
    }
    turn.text = t["text"].get<std::string>();
    turns.push_back(std::move(turn));
  }
  try {
    return Dialogue(std::move(turns));
  } catch (const Error& e) {
    throw ValidationError("logs[" + std::to_string(index) +
                          "]: " + e.what());
  }
}

TurnLabel parse_label(const json& l, std::size_t index) {
  const std::string where = "labels[" + std::to_string(index) + "]";
  if (!l.is_object() || !l.contains("target")) {
    throw ParseError(where + " must be an object with a target flag");
  }
  TurnLabel label;
  label.target = l["target"].get<bool>();
  if (l.contains("knowledge") && !l["knowledge"].is_null()) {
    std::vector<SnippetRef> refs;
    for (const auto& k : l["knowledge"]) {
      SnippetRef ref;
      ref.domain = text::to_lower(k.at("domain").get<std::string>());
      ref.entity_id = id_to_string(k.at("entity_id"), where);
      ref.doc_id = id_to_string(k.at("doc_id"), where);
      refs.push_back(std::move(ref));
    }
    label.knowledge = std::move(refs);
  }
  if (l.contains("response") && !l["response"].is_null()) {
    label.response = l["response"].get<std::string>();
  }
  if (label.target) {
    if (!label.knowledge || label.knowledge->empty() || !label.response) {
      throw ValidationError(where +
                            ": target samples need knowledge and response");
    }
  } else if (label.knowledge || label.response) {
    throw ValidationError(where +
                          ": non-target samples carry no knowledge/response");
  }
  return label;
}

}  // namespace

Dialogue::Dialogue(std::vector<Turn> turns) : turns_(std::move(turns)) {
  if (turns_.empty()) throw ValidationError("dialogue has no turns");
  for (const auto& t : turns_) {
    if (text::trim(t.text).empty()) {
      throw ValidationError("dialogue contains an empty turn");
    }
  }
  if (turns_.back().speaker != Speaker::User) {
    throw ValidationError("dialogue must end with a user turn");
  }
}

std::size_t LabeledCorpus::target_count() const {
  std::size_t n = 0;
  for (const auto& [d, l] : pairs) n += l.target ? 1 : 0;
  return n;
}

LabeledCorpus load_corpus(std::istream& logs_source,
                          std::istream& labels_source) {
  const json logs = parse_stream(logs_source, "logs file");
  const json labels = parse_stream(labels_source, "labels file");
  if (!logs.is_array() || !labels.is_array()) {
    throw ParseError("logs and labels files must be top-level arrays");
  }
  if (logs.size() != labels.size()) {
    throw AlignmentError("logs has " + std::to_string(logs.size()) +
                         " samples but labels has " +
                         std::to_string(labels.size()));
  }
  LabeledCorpus corpus;
  corpus.pairs.reserve(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    corpus.pairs.emplace_back(parse_dialogue(logs[i], i),
                              parse_label(labels[i], i));
  }
  return corpus;
}

LabeledCorpus load_corpus_files(const std::string& logs_path,
                                const std::string& labels_path) {
  std::ifstream logs(logs_path), labels(labels_path);
  if (!logs) throw IoError("cannot open logs file: " + logs_path);
  if (!labels) throw IoError("cannot open labels file: " + labels_path);
  return load_corpus(logs, labels);
}

std::vector<Dialogue> load_logs(std::istream& logs_source) {
  const json logs = parse_stream(logs_source, "logs file");
  if (!logs.is_array()) throw ParseError("logs file must be an array");
  std::vector<Dialogue> out;
  out.reserve(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) {
    out.push_back(parse_dialogue(logs[i], i));
  }
  return out;
}

std::vector<Dialogue> load_logs_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open logs file: " + path);
  return load_logs(in);
}

std::string last_user_utterance(const Dialogue& d) {
  if (d.empty()) throw EmptyContextError("dialogue has no turns");
  return d.turns().back().text;
}

std::vector<Turn> context_window(const Dialogue& d, std::size_t max_tokens) {
  if (d.empty()) throw EmptyContextError("dialogue has no turns");
  if (max_tokens < 1) throw InvalidArgumentError("max_tokens must be >= 1");
  const auto& turns = d.turns();
  std::size_t budget = max_tokens;
  std::size_t first = turns.size();
  for (std::size_t i = turns.size(); i > 0; --i) {
    const std::size_t n = text::token_count(turns[i - 1].text);
    if (n > budget) break;
    budget -= n;
    first = i - 1;
  }
  if (first == turns.size()) {
    // Final turn alone exceeds the budget: keep its last max_tokens tokens.
    auto toks = text::whitespace_tokens(turns.back().text);
    std::string trimmed;
    for (std::size_t i = toks.size() - max_tokens; i < toks.size(); ++i) {
      if (!trimmed.empty()) trimmed += ' ';
      trimmed += toks[i];
    }
    return {Turn{Speaker::User, std::move(trimmed)}};
  }
  return std::vector<Turn>(turns.begin() + static_cast<long>(first),
                           turns.end());
}

Dialogue windowed(const Dialogue& d, std::size_t max_tokens) {
  return Dialogue(context_window(d, max_tokens));
}

std::string dialogue_to_text(const Dialogue& d) {
  std::string out;
  for (const auto& t : d.turns()) {
    if (!out.empty()) out += '\n';
    out += t.speaker == Speaker::User ? "U: " : "S: ";
    out += t.text;
  }
  return out;
}

}  // namespace kgdial
