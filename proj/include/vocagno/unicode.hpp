// Copyright 2026 The Vocagno Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VOCAGNO_UNICODE_HPP_
#define VOCAGNO_UNICODE_HPP_

#include <string>
#include <string_view>

namespace vocagno {

// Offsets throughout the library count Unicode scalar values, so text is
// decoded once into UTF-32 before tokenization.
std::u32string utf8_to_u32(std::string_view utf8);
std::string u32_to_utf8(std::u32string_view text);

bool is_space(char32_t c);

}  // namespace vocagno

#endif  // VOCAGNO_UNICODE_HPP_
