// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/generator.hpp"

#include "kgdial/errors.hpp"
#include "kgdial/text.hpp"

namespace kgdial {

std::string TemplateGenerator::generate(const std::string& /*context_text*/,
                                        const std::string& answer) const {
  if (text::trim(answer).empty()) {
    throw InvalidArgumentError("response generation needs a non-empty answer");
  }
  if (follow_up_.empty()) return answer;
  return answer + " " + follow_up_;
}

}  // namespace kgdial
