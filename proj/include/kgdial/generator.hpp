// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <string>

namespace kgdial {

/// Turns the selected knowledge answer into the system response.
/// Implemented by the local template and by the gateway client.
class ResponseGenerator {
 public:
  virtual ~ResponseGenerator() = default;
  /// context_text is the flat "U: ... / S: ..." dialogue; answer is the
  /// top-1 snippet answer. The answer must be non-empty.
  virtual std::string generate(const std::string& context_text,
                               const std::string& answer) const = 0;
};

inline constexpr const char* kDefaultFollowUp =
    "Is there anything else I can help you with?";

/// Grounded template response: the answer verbatim, then a follow-up
/// sentence. An empty follow-up yields the bare answer.
class TemplateGenerator final : public ResponseGenerator {
 public:
  explicit TemplateGenerator(std::string follow_up = kDefaultFollowUp)
      : follow_up_(std::move(follow_up)) {}
  std::string generate(const std::string& context_text,
                       const std::string& answer) const override;

 private:
  std::string follow_up_;
};

}  // namespace kgdial
