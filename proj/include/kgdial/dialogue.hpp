// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kgdial/kb.hpp"

namespace kgdial {

enum class Speaker { User, Agent };

struct Turn {
  Speaker speaker = Speaker::User;
  std::string text;
};

/// A dialogue context evaluated at its final turn, which is always a user
/// turn; construction enforces this.
class Dialogue {
 public:
  Dialogue() = default;
  explicit Dialogue(std::vector<Turn> turns);

  const std::vector<Turn>& turns() const { return turns_; }
  bool empty() const { return turns_.empty(); }

 private:
  std::vector<Turn> turns_;
};

/// Gold annotation for one sample. `knowledge` and `response` are present
/// exactly when the turn is knowledge-seeking.
struct TurnLabel {
  bool target = false;
  std::optional<std::vector<SnippetRef>> knowledge;
  std::optional<std::string> response;
};

struct LabeledCorpus {
  std::vector<std::pair<Dialogue, TurnLabel>> pairs;

  std::size_t size() const { return pairs.size(); }
  std::size_t target_count() const;
};

/// Loads aligned logs + labels files (DSTC9 Track 1 layout).
LabeledCorpus load_corpus(std::istream& logs_source,
                          std::istream& labels_source);
LabeledCorpus load_corpus_files(const std::string& logs_path,
                                const std::string& labels_path);

/// Logs without labels, for `run` over unlabeled data.
std::vector<Dialogue> load_logs(std::istream& logs_source);
std::vector<Dialogue> load_logs_file(const std::string& path);

std::string last_user_utterance(const Dialogue& d);

/// Longest suffix of turns within a whitespace-token budget. The final
/// turn always survives; if it alone exceeds the budget it is trimmed to
/// its last `max_tokens` tokens.
std::vector<Turn> context_window(const Dialogue& d, std::size_t max_tokens);

/// Dialogue restricted to its context window, as a Dialogue again.
Dialogue windowed(const Dialogue& d, std::size_t max_tokens);

/// Flat text form used by the domain classifier and the ranker input:
/// one line per turn, "U: ..." / "S: ...".
std::string dialogue_to_text(const Dialogue& d);

}  // namespace kgdial
