/*
 * Copyright 2026 The lexsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace lexsim::utf8 {

/// Offset of the first byte that does not start a well-formed UTF-8 sequence
/// (overlongs, surrogates and code points above U+10FFFF are rejected).
std::optional<std::size_t> find_invalid(std::string_view bytes);

/// Throws EncodingError naming the byte offset when `bytes` is not UTF-8.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view code_points);

/// Simple (1:1) lowercase mapping for Latin, Greek and Cyrillic letters;
/// every other code point maps to itself.
char32_t to_lower(char32_t c);

/// Lowercases valid UTF-8 text. Input must already be validated.
std::string to_lower(std::string_view bytes);

}  // namespace lexsim::utf8
