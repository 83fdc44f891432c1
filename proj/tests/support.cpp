// Copyright 2026 The bench_audit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "support.hpp"

#include <fstream>
#include <sstream>

namespace test_support {

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  std::size_t count = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

namespace {

bool fail(std::string* why, std::string message) {
  if (why != nullptr) *why = std::move(message);
  return false;
}

bool valid_text(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '<') return false;
    if (text[i] == '&') {
      const auto end = text.find(';', i);
      if (end == std::string_view::npos) return false;
      const auto entity = text.substr(i, end - i + 1);
      if (entity != "&amp;" && entity != "&lt;" && entity != "&gt;" && entity != "&quot;" &&
          entity != "&apos;") {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

bool is_well_formed_xml(std::string_view doc, std::string* why) {
  std::vector<std::string> stack;
  std::size_t roots = 0;
  std::size_t i = 0;
  if (doc.starts_with("<?xml")) {
    i = doc.find("?>");
    if (i == std::string_view::npos) return fail(why, "unterminated declaration");
    i += 2;
  }
  while (i < doc.size()) {
    const auto open = doc.find('<', i);
    const auto text = doc.substr(i, open == std::string_view::npos ? doc.size() - i : open - i);
    if (!valid_text(text)) return fail(why, "bad character data near offset " + std::to_string(i));
    if (stack.empty() && text.find_first_not_of(" \t\r\n") != std::string_view::npos) {
      return fail(why, "text outside root element");
    }
    if (open == std::string_view::npos) break;
    const auto close = doc.find('>', open);
    if (close == std::string_view::npos) return fail(why, "unterminated tag");
    std::string_view tag = doc.substr(open + 1, close - open - 1);
    i = close + 1;
    if (tag.starts_with('/')) {
      const std::string name(tag.substr(1));
      if (stack.empty() || stack.back() != name) return fail(why, "mismatched </" + name + ">");
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with('/');
    if (self_closing) tag.remove_suffix(1);
    const auto name_end = tag.find_first_of(" \t\r\n");
    const std::string name(tag.substr(0, name_end));
    if (name.empty()) return fail(why, "empty tag name");
    // attributes: name="value" pairs
    std::string_view attrs = name_end == std::string_view::npos ? "" : tag.substr(name_end);
    std::size_t a = 0;
    while (true) {
      a = attrs.find_first_not_of(" \t\r\n", a);
      if (a == std::string_view::npos) break;
      const auto eq = attrs.find('=', a);
      if (eq == std::string_view::npos || eq + 1 >= attrs.size() || attrs[eq + 1] != '"') {
        return fail(why, "unquoted attribute in <" + name + ">");
      }
      const auto end_quote = attrs.find('"', eq + 2);
      if (end_quote == std::string_view::npos) return fail(why, "unterminated attribute");
      if (!valid_text(attrs.substr(eq + 2, end_quote - eq - 2))) {
        return fail(why, "bad attribute value in <" + name + ">");
      }
      a = end_quote + 1;
    }
    if (stack.empty()) ++roots;
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) return fail(why, "unclosed <" + stack.back() + ">");
  if (roots != 1) return fail(why, "expected exactly one root element");
  return true;
}

namespace {

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

}  // namespace

ScoreMatrix make_fixture_matrix() {
  constexpr std::size_t kSize = 13;
  SplitMix64 rng{20240917};
  std::vector<double> skill(kSize), difficulty(kSize);
  for (auto& s : skill) s = -0.3 + 0.6 * rng.unit();
  for (auto& d : difficulty) d = -0.5 + 1.0 * rng.unit();

  ScoreMatrix m;
  m.model_ids = labels("model_", kSize);
  m.dataset_names = labels("dataset_", kSize);
  m.metric_name = "smape";
  for (std::size_t i = 0; i < kSize; ++i) {
    const double spread = 0.1 + 0.06 * static_cast<double>(i);
    for (std::size_t j = 0; j < kSize; ++j) {
      const double z = (rng.unit() + rng.unit() + rng.unit() + rng.unit() - 2.0) * std::sqrt(3.0);
      const double raw = 10.0 * std::exp(skill[i] + spread * z + difficulty[j]);
      m.scores.push_back(std::round(raw * 1e6) / 1e6);
    }
  }
  return m;
}

}  // namespace test_support
