// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 kgdial contributors
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgdial::text {

/// Lowercase ASCII letters in place-free form. Non-ASCII bytes pass through.
std::string to_lower(std::string_view s);

/// Trim leading/trailing whitespace.
std::string trim(std::string_view s);

/// Collapse runs of whitespace to single spaces and trim the ends.
std::string collapse_whitespace(std::string_view s);

/// Split on whitespace. Empty tokens never appear in the result.
std::vector<std::string> whitespace_tokens(std::string_view s);

/// Number of whitespace-separated tokens.
std::size_t token_count(std::string_view s);

/// Tokenization used for generation metrics and lexical features:
/// lowercase, detach ASCII punctuation into separate tokens, then split
/// on whitespace.
std::vector<std::string> metric_tokens(std::string_view s);

/// Case-insensitive substring search; returns npos when absent.
std::size_t ifind(std::string_view haystack, std::string_view needle,
                  std::size_t from = 0);

/// Case-insensitive global replacement.
std::string ireplace_all(std::string_view s, std::string_view from,
                         std::string_view to);

/// English words for integers 0..100 ("21" -> "twenty one"); empty for
/// anything else.
std::string number_to_words(long value);

/// FNV-1a 64-bit hash; the stable hash used for feature indexing and for
/// anything persisted to disk.
std::uint64_t fnv1a64(std::string_view s);

}  // namespace kgdial::text
