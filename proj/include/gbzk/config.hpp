#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace gbzk {

struct IniEntry {
  std::string key;
  std::string value;
  int line = 0;
};

struct IniSection {
  std::string name;
  int line = 0;
  std::vector<IniEntry> entries;
};

/// Named sections of `key = value` lines. `#` and `;` start comments.
struct IniDocument {
  std::string origin;
  std::vector<IniSection> sections;
  const IniSection* find(const std::string& name) const;
};

IniDocument parse_ini(const std::string& text, const std::string& origin = "<string>");
IniDocument read_ini_file(const std::string& path);

/// Rejects sections outside `allowed` (a trailing '*' matches any suffix).
void check_sections(const IniDocument& doc, std::initializer_list<const char*> allowed);

/// Typed access to one section. Every key must be consumed before finish(),
/// otherwise the first unread key is reported as unknown.
class SectionReader {
 public:
  SectionReader(const IniDocument& doc, const std::string& name);
  explicit SectionReader(const IniSection& section);

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback);
  double number(const std::string& key);
  long integer(const std::string& key, long fallback);
  bool flag(const std::string& key, bool fallback);
  std::string text(const std::string& key, const std::string& fallback);
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback);
  int line_of(const std::string& key) const;

  void finish() const;

 private:
  const IniEntry* lookup(const std::string& key);
  const IniSection* section_ = nullptr;
  std::string name_;
  std::set<std::string> used_;
};

double parse_number(const std::string& text, int line, const std::string& what);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& data);

/// "%.17g" formatting used for every floating value written by the harness.
std::string format_double(double v);

}  // namespace gbzk
