// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#include "kgdial/errors.hpp"

#include <array>
#include <string_view>

namespace kgdial {

bool is_user_error(const Error& e) {
  static constexpr std::array<std::string_view, 3> runtime_kinds = {
      "ScorerUnavailable", "GeneratorUnavailable", "ProtocolError"};
  for (std::string_view kind : runtime_kinds) {
    if (e.kind() == kind) return false;
  }
  return true;
}

}  // namespace kgdial
