// Copyright 2026 The Tinker Authors.
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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// UTF-8 helpers. All character offsets in the library count Unicode scalar
// values, the same unit Brat uses for standoff offsets.
namespace tinker::text {

// Decodes UTF-8. Throws Error(kEncoding) on malformed input.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view chars);
void AppendUtf8(std::string& out, char32_t c);

bool IsSpace(char32_t c);
bool IsAsciiAlnum(char32_t c);
bool IsUpper(char32_t c);
bool IsDigit(char32_t c);
char32_t AsciiLower(char32_t c);

std::string ToLowerAscii(std::string_view s);
std::string ToUpperAscii(std::string_view s);
std::string_view TrimAscii(std::string_view s);
std::vector<std::string_view> Split(std::string_view s, char sep);

// Lowercase, every character outside [a-z0-9] becomes '-', runs collapsed,
// leading/trailing '-' trimmed.
std::string Slug(std::string_view label);

// Variant for indicator identifiers: keeps case and the characters
// [A-Za-z0-9._~], everything else becomes '-' (collapsed, trimmed, and
// leading/trailing dots dropped).
std::string IocSlug(std::string_view label);

// Percent-encodes everything outside the RFC 3986 unreserved set.
std::string PercentEncode(std::string_view s);
// Throws Error(kSyntax) on a malformed escape.
std::string PercentDecode(std::string_view s);

// Escapes a string for inclusion in a double-quoted XML attribute or DOT id.
std::string XmlEscape(std::string_view s);
std::string DotEscape(std::string_view s);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace tinker::text
