#include "gbzk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "gbzk/error.hpp"

namespace gbzk {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '#' || line[i] == ';') {
      if (i == 0 || std::isspace(static_cast<unsigned char>(line[i - 1]))) return line.substr(0, i);
    }
  }
  return line;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  return std::all_of(k.begin(), k.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
  });
}

}  // namespace

const IniSection* IniDocument::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

IniDocument parse_ini(const std::string& text, const std::string& origin) {
  IniDocument doc;
  doc.origin = origin;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  IniSection* current = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      const std::string name = trim(s.substr(1, s.size() - 2));
      if (name.empty()) throw ConfigError("empty section name", line);
      if (doc.find(name)) throw ConfigError("duplicate section [" + name + "]", line);
      doc.sections.push_back({name, line, {}});
      current = &doc.sections.back();
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    if (!current) throw ConfigError("key outside of any section", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!valid_key(key)) throw ConfigError("invalid key '" + key + "'", line);
    for (const auto& e : current->entries)
      if (e.key == key) throw ConfigError("duplicate key '" + key + "' in [" + current->name + "]", line);
    current->entries.push_back({key, value, line});
  }
  return doc;
}

std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path + "'");
  f << content;
  if (!f) throw IoError("write failed for '" + path + "'");
}

IniDocument read_ini_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const IoError& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_ini(text, path);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void check_sections(const IniDocument& doc, std::initializer_list<const char*> allowed) {
  for (const auto& s : doc.sections) {
    bool ok = false;
    for (const char* a : allowed) {
      std::string pat(a);
      if (!pat.empty() && pat.back() == '*') {
        pat.pop_back();
        ok = ok || s.name.compare(0, pat.size(), pat) == 0;
      } else {
        ok = ok || s.name == pat;
      }
    }
    if (!ok) throw ConfigError("unknown section [" + s.name + "]", s.line);
  }
}

double parse_number(const std::string& text, int line, const std::string& what) {
  const std::string t = trim(text);
  if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  if (t == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* b = t.data();
  const char* e = t.data() + t.size();
  if (!t.empty() && *b == '+') ++b;
  const auto r = std::from_chars(b, e, v);
  if (t.empty() || r.ec != std::errc() || r.ptr != e) throw ConfigError(what + ": '" + text + "' is not a number", line);
  return v;
}

SectionReader::SectionReader(const IniDocument& doc, const std::string& name)
    : section_(doc.find(name)), name_(name) {}

SectionReader::SectionReader(const IniSection& section) : section_(&section), name_(section.name) {}

bool SectionReader::has(const std::string& key) const {
  if (!section_) return false;
  for (const auto& e : section_->entries)
    if (e.key == key) return true;
  return false;
}

const IniEntry* SectionReader::lookup(const std::string& key) {
  if (!section_) return nullptr;
  for (const auto& e : section_->entries) {
    if (e.key == key) {
      used_.insert(key);
      return &e;
    }
  }
  return nullptr;
}

int SectionReader::line_of(const std::string& key) const {
  if (section_)
    for (const auto& e : section_->entries)
      if (e.key == key) return e.line;
  return section_ ? section_->line : 0;
}

double SectionReader::number(const std::string& key, double fallback) {
  const IniEntry* e = lookup(key);
  return e ? parse_number(e->value, e->line, "[" + name_ + "] " + key) : fallback;
}

double SectionReader::number(const std::string& key) {
  const IniEntry* e = lookup(key);
  if (!e) throw ConfigError("missing required key '" + key + "' in [" + name_ + "]", section_ ? section_->line : 0);
  return parse_number(e->value, e->line, "[" + name_ + "] " + key);
}

long SectionReader::integer(const std::string& key, long fallback) {
  const IniEntry* e = lookup(key);
  if (!e) return fallback;
  long v = 0;
  const auto r = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
  if (e->value.empty() || r.ec != std::errc() || r.ptr != e->value.data() + e->value.size())
    throw ConfigError("[" + name_ + "] " + key + ": '" + e->value + "' is not an integer", e->line);
  return v;
}

bool SectionReader::flag(const std::string& key, bool fallback) {
  const IniEntry* e = lookup(key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1" || e->value == "on") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0" || e->value == "off") return false;
  throw ConfigError("[" + name_ + "] " + key + ": '" + e->value + "' is not a boolean", e->line);
}

std::string SectionReader::text(const std::string& key, const std::string& fallback) {
  const IniEntry* e = lookup(key);
  return e ? e->value : fallback;
}

std::vector<double> SectionReader::numbers(const std::string& key, const std::vector<double>& fallback) {
  const IniEntry* e = lookup(key);
  if (!e) return fallback;
  std::vector<double> out;
  std::string item;
  std::istringstream in(e->value);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(item, e->line, "[" + name_ + "] " + key));
  }
  return out;
}

void SectionReader::finish() const {
  if (!section_) return;
  for (const auto& e : section_->entries)
    if (!used_.count(e.key)) throw ConfigError("unknown key '" + e.key + "' in [" + name_ + "]", e.line);
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace gbzk
