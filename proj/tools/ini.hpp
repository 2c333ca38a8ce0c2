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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpa/error.hpp"

namespace cpa::cli {

/// Configuration error with the offending line (0 when not tied to a line).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& what)
      : Error(line > 0 ? source + ":" + std::to_string(line) + ": " + what : source + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Flat "key = value" text grouped by "[section]" headers. '#' and ';' start
/// comments at the beginning of a line or after whitespace. Keys are unique
/// within a section; sections may not repeat.
class IniFile {
 public:
  struct Entry {
    std::string value;
    std::size_t line = 0;
    mutable bool used = false;
  };

  static IniFile parse(const std::string& text, const std::string& source = "<config>");
  static IniFile load(const std::filesystem::path& path);

  const std::string& source() const { return source_; }
  bool has_section(const std::string& section) const { return sections_.contains(section); }
  std::size_t section_line(const std::string& section) const;

  /// Marks the entry as consumed.
  const Entry* find(const std::string& section, const std::string& key) const;
  const Entry& require(const std::string& section, const std::string& key) const;

  /// Throws ConfigError for sections or keys that no reader consumed.
  void reject_unused() const;

  [[noreturn]] void fail(const Entry& at, const std::string& what) const;
  [[noreturn]] void fail(const std::string& section, const std::string& what) const;

 private:
  struct Section {
    std::size_t line = 0;
    std::map<std::string, Entry> entries;
  };
  std::string source_;
  std::map<std::string, Section> sections_;
};

}  // namespace cpa::cli
