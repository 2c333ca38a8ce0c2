/*
   Copyright 2026 The cpa Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "ini.hpp"

#include <fstream>
#include <sstream>

namespace cpa::cli {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t k = 0; k < line.size(); ++k) {
    if ((line[k] == '#' || line[k] == ';') && (k == 0 || line[k - 1] == ' ' || line[k - 1] == '\t')) {
      return line.substr(0, k);
    }
  }
  return line;
}

}  // namespace

IniFile IniFile::parse(const std::string& text, const std::string& source) {
  IniFile ini;
  ini.source_ = source;
  std::istringstream in(text);
  std::string raw;
  std::string current;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string content = trim(strip_comment(raw));
    if (content.empty()) continue;
    if (content.front() == '[') {
      if (content.back() != ']') throw ConfigError(source, line, "unterminated section header");
      current = trim(content.substr(1, content.size() - 2));
      if (current.empty()) throw ConfigError(source, line, "empty section name");
      if (ini.sections_.contains(current)) {
        throw ConfigError(source, line, "section [" + current + "] repeats (first at line " +
                                            std::to_string(ini.sections_[current].line) + ")");
      }
      ini.sections_[current].line = line;
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ConfigError(source, line, "expected 'key = value'");
    if (current.empty()) throw ConfigError(source, line, "key outside of a section");
    const std::string key = trim(content.substr(0, eq));
    if (key.empty()) throw ConfigError(source, line, "empty key");
    auto& entries = ini.sections_[current].entries;
    if (entries.contains(key)) {
      throw ConfigError(source, line, "key '" + key + "' repeats in [" + current + "] (first at line " +
                                          std::to_string(entries[key].line) + ")");
    }
    entries[key] = Entry{trim(content.substr(eq + 1)), line, false};
  }
  return ini;
}

IniFile IniFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str(), path.string());
}

std::size_t IniFile::section_line(const std::string& section) const {
  auto it = sections_.find(section);
  return it == sections_.end() ? 0 : it->second.line;
}

const IniFile::Entry* IniFile::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto e = s->second.entries.find(key);
  if (e == s->second.entries.end()) return nullptr;
  e->second.used = true;
  return &e->second;
}

const IniFile::Entry& IniFile::require(const std::string& section, const std::string& key) const {
  if (const Entry* e = find(section, key)) return *e;
  throw ConfigError(source_, section_line(section), "missing key '" + key + "' in [" + section + "]");
}

void IniFile::reject_unused() const {
  for (const auto& [name, section] : sections_) {
    for (const auto& [key, entry] : section.entries) {
      if (!entry.used) throw ConfigError(source_, entry.line, "unknown key '" + key + "' in [" + name + "]");
    }
  }
}

void IniFile::fail(const Entry& at, const std::string& what) const { throw ConfigError(source_, at.line, what); }

void IniFile::fail(const std::string& section, const std::string& what) const {
  throw ConfigError(source_, section_line(section), what);
}

}  // namespace cpa::cli
