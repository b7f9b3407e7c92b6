#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "hyperqf/igr.hpp"
#include "hyperqf/multiring.hpp"
#include "hyperqf/special_group.hpp"

namespace hyperqf {

// Line-oriented definition files. A file holds named sections:
//
//   [hyperfield Q2]          [specialgroup Z2]          [igr kQ2]
//   elements: 0 1 -1         elements: 1 -1             truncation: 2
//   zero: 0                  one: 1                     level 0 dim 1 top=1
//   one: 1                   minusone: -1               level 1 dim 1 top=1
//   neg: 0->0 1->-1 -1->1    mulrow 1: 1 -1             h 0: 1
//   mulrow 1: 0 1 -1         mulrow -1: -1 1            star 1 1: 0,0->1
//   sum: 1+1={1} ...         iso: (1,1)~(1,1) ...
//
// Products may also be given cell by cell (`mul: a*b=c`). Every cell of neg, mul and
// sum must be given. The isometry relation lists related pairs; unlisted pairs are
// unrelated. '#' starts a comment.

enum class StructureKind { Hyperfield, SpecialGroup, Igr };

inline const char* to_string(StructureKind k) {
  switch (k) {
    case StructureKind::Hyperfield: return "hyperfield";
    case StructureKind::SpecialGroup: return "specialgroup";
    default: return "igr";
  }
}

struct ParseError : std::invalid_argument {
  ParseError(int line, const std::string& what)
      : std::invalid_argument(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line(line) {}
  int line;
};

struct StructureSection {
  StructureKind kind = StructureKind::Hyperfield;
  std::string name;
  std::variant<Multiring, PreSpecialGroup, TruncatedIgr> value;

  const Multiring& hyperfield() const { return std::get<Multiring>(value); }
  const PreSpecialGroup& group() const { return std::get<PreSpecialGroup>(value); }
  const TruncatedIgr& igr() const { return std::get<TruncatedIgr>(value); }
};

struct StructureFile {
  std::vector<StructureSection> sections;

  const StructureSection& first() const {
    if (sections.empty()) throw ParseError(0, "file defines no section");
    return sections.front();
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> words(std::string_view s) {
  std::istringstream in{std::string(s)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline bool valid_label(const std::string& l) {
  if (l.empty() || l.find("->") != std::string::npos) return false;
  for (char c : l) {
    if (std::isspace(static_cast<unsigned char>(c)) || std::string_view(",*+={}~:#[]").find(c) != std::string_view::npos) {
      return false;
    }
  }
  return true;
}

inline int parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "expected an integer, got '" + s + "'");
  }
}

inline BitVector parse_bits(const std::string& s, std::size_t expected, int line, const std::string& what) {
  BitVector v(0);
  try {
    v = BitVector::from_string(s);
  } catch (const std::invalid_argument&) {
    throw ParseError(line, what + ": bad bit string '" + s + "'");
  }
  if (v.size() != expected) {
    throw ParseError(line, what + ": expected " + std::to_string(expected) + " bits, got '" + s + "'");
  }
  return v;
}

struct RawLine {
  int number;
  std::string key;   // text before ':' (or the whole line for `level`)
  std::string rest;  // text after ':'
};

struct RawSection {
  int line;
  StructureKind kind;
  std::string name;
  std::vector<RawLine> lines;
};

class LabelTable {
 public:
  LabelTable(const std::vector<std::string>& labels, std::string section) : labels_(labels), section_(std::move(section)) {
    for (std::size_t i = 0; i < labels.size(); ++i) index_[labels[i]] = static_cast<int>(i);
  }
  int operator()(const std::string& label, int line) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw ParseError(line, "unknown element '" + label + "' in " + section_);
    return it->second;
  }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& name(int i) const { return labels_[i]; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, int> index_;
  std::string section_;
};

inline std::pair<std::string, std::string> split_once(const std::string& s, std::string_view sep, int line,
                                                      const std::string& what) {
  const auto p = s.find(sep);
  if (p == std::string::npos || p == 0) throw ParseError(line, "malformed " + what + " entry '" + s + "'");
  return {s.substr(0, p), s.substr(p + sep.size())};
}

inline std::vector<std::string> read_elements(const RawSection& sec, const RawLine*& where) {
  std::optional<std::vector<std::string>> out;
  for (const auto& l : sec.lines) {
    if (l.key != "elements") continue;
    if (out) throw ParseError(l.number, "elements declared twice");
    out = words(l.rest);
    where = &l;
  }
  if (!out || out->empty()) throw ParseError(sec.line, sec.name + ": missing 'elements:' line");
  std::set<std::string> seen;
  for (const auto& e : *out) {
    if (!valid_label(e)) throw ParseError(where->number, "invalid element label '" + e + "'");
    if (!seen.insert(e).second) throw ParseError(where->number, "duplicate element label '" + e + "'");
  }
  return *out;
}

inline const RawLine& single(const RawSection& sec, const std::string& key) {
  const RawLine* found = nullptr;
  for (const auto& l : sec.lines) {
    if (l.key != key) continue;
    if (found) throw ParseError(l.number, "'" + key + "' given twice");
    found = &l;
  }
  if (!found) throw ParseError(sec.line, sec.name + ": missing '" + key + ":' line");
  return *found;
}

inline std::string single_word(const RawLine& l) {
  const auto w = words(l.rest);
  if (w.size() != 1) throw ParseError(l.number, "'" + l.key + "' takes exactly one value");
  return w.front();
}

// Fills a multiplication table from `mulrow a:` rows and `mul: a*b=c` cells.
inline std::vector<int> read_products(const RawSection& sec, const LabelTable& at) {
  const int n = at.size();
  std::vector<int> mul(static_cast<std::size_t>(n) * n, -1);
  const auto put = [&](int a, int b, int c, int line) {
    int& cell = mul[static_cast<std::size_t>(a) * n + b];
    if (cell != -1 && cell != c) throw ParseError(line, "conflicting products for " + at.name(a) + "*" + at.name(b));
    cell = c;
  };
  for (const auto& l : sec.lines) {
    if (l.key.rfind("mulrow ", 0) == 0) {
      const int a = at(trim(l.key.substr(7)), l.number);
      const auto row = words(l.rest);
      if (static_cast<int>(row.size()) != n) throw ParseError(l.number, "mulrow needs one entry per element");
      for (int b = 0; b < n; ++b) put(a, b, at(row[b], l.number), l.number);
    } else if (l.key == "mul") {
      for (const auto& w : words(l.rest)) {
        const auto [lhs, c] = split_once(w, "=", l.number, "mul");
        const auto [a, b] = split_once(lhs, "*", l.number, "mul");
        put(at(a, l.number), at(b, l.number), at(c, l.number), l.number);
      }
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (mul[static_cast<std::size_t>(a) * n + b] == -1) {
        throw ParseError(sec.line, sec.name + ": missing product " + at.name(a) + "*" + at.name(b));
      }
    }
  }
  return mul;
}

inline Multiring build_hyperfield(const RawSection& sec) {
  const RawLine* el = nullptr;
  const auto labels = read_elements(sec, el);
  const LabelTable at(labels, sec.name);
  const int n = at.size();
  const RawLine& zl = single(sec, "zero");
  const RawLine& ol = single(sec, "one");
  Multiring m = blank_multiring(sec.name, labels, at(single_word(zl), zl.number), at(single_word(ol), ol.number));
  std::vector<int> neg(static_cast<std::size_t>(n), -1);
  std::vector<bool> sum_set(static_cast<std::size_t>(n) * n, false);
  for (const auto& l : sec.lines) {
    if (l.key == "neg") {
      for (const auto& w : words(l.rest)) {
        const auto [a, b] = split_once(w, "->", l.number, "neg");
        const int x = at(a, l.number);
        if (neg[x] != -1) throw ParseError(l.number, "negation of " + a + " given twice");
        neg[x] = at(b, l.number);
      }
    } else if (l.key == "sum") {
      for (const auto& w : words(l.rest)) {
        const auto [lhs, rhs] = split_once(w, "=", l.number, "sum");
        const auto [a, b] = split_once(lhs, "+", l.number, "sum");
        if (rhs.size() < 2 || rhs.front() != '{' || rhs.back() != '}') {
          throw ParseError(l.number, "sum value must be a set {x,y,...}: '" + w + "'");
        }
        ElementSet s = 0;
        std::string body = rhs.substr(1, rhs.size() - 2);
        std::size_t start = 0;
        while (start <= body.size()) {
          const auto comma = body.find(',', start);
          const std::string item = body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
          if (item.empty()) throw ParseError(l.number, "empty element in sum set '" + w + "'");
          s |= bit_of(at(item, l.number));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
        const int x = at(a, l.number), y = at(b, l.number);
        const std::size_t cell = static_cast<std::size_t>(x) * n + y;
        if (sum_set[cell]) throw ParseError(l.number, "sum " + a + "+" + b + " given twice");
        sum_set[cell] = true;
        m.set_plus(x, y, s);
      }
    } else if (l.key != "elements" && l.key != "zero" && l.key != "one" && l.key != "mul" &&
               l.key.rfind("mulrow ", 0) != 0) {
      throw ParseError(l.number, "unknown hyperfield entry '" + l.key + "'");
    }
  }
  for (int a = 0; a < n; ++a) {
    if (neg[a] == -1) throw ParseError(sec.line, sec.name + ": missing negation of " + at.name(a));
    for (int b = 0; b < n; ++b) {
      if (!sum_set[static_cast<std::size_t>(a) * n + b]) {
        throw ParseError(sec.line, sec.name + ": missing sum " + at.name(a) + "+" + at.name(b));
      }
    }
  }
  m.neg = neg;
  m.mul = read_products(sec, at);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(sec.line, e.what());
  }
  return m;
}

inline std::pair<std::string, std::string> parse_pair(const std::string& s, int line) {
  if (s.size() < 5 || s.front() != '(' || s.back() != ')') throw ParseError(line, "expected (a,b), got '" + s + "'");
  const std::string inner = s.substr(1, s.size() - 2);
  const auto comma = inner.find(',');
  if (comma == std::string::npos || inner.find(',', comma + 1) != std::string::npos) {
    throw ParseError(line, "expected (a,b), got '" + s + "'");
  }
  return {inner.substr(0, comma), inner.substr(comma + 1)};
}

inline PreSpecialGroup build_group(const RawSection& sec) {
  const RawLine* el = nullptr;
  const auto labels = read_elements(sec, el);
  const LabelTable at(labels, sec.name);
  const RawLine& ol = single(sec, "one");
  const RawLine& ml = single(sec, "minusone");
  PreSpecialGroup g = blank_group(sec.name, labels, at(single_word(ol), ol.number), at(single_word(ml), ml.number));
  g.mul = read_products(sec, at);
  for (const auto& l : sec.lines) {
    if (l.key == "iso") {
      for (const auto& w : words(l.rest)) {
        const auto [lhs, rhs] = split_once(w, "~", l.number, "iso");
        const auto [a, b] = parse_pair(lhs, l.number);
        const auto [c, d] = parse_pair(rhs, l.number);
        g.set_iso(at(a, l.number), at(b, l.number), at(c, l.number), at(d, l.number));
      }
    } else if (l.key != "elements" && l.key != "one" && l.key != "minusone" && l.key != "mul" &&
               l.key.rfind("mulrow ", 0) != 0) {
      throw ParseError(l.number, "unknown specialgroup entry '" + l.key + "'");
    }
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(sec.line, e.what());
  }
  return g;
}

inline TruncatedIgr build_igr(const RawSection& sec) {
  const RawLine& tl = single(sec, "truncation");
  const int N = parse_int(single_word(tl), tl.number);
  if (N < 0 || N > 64) throw ParseError(tl.number, "truncation must be between 0 and 64");
  std::vector<std::optional<std::size_t>> dims(static_cast<std::size_t>(N) + 1);
  std::vector<std::string> top_text(static_cast<std::size_t>(N) + 1);
  std::vector<int> top_line(static_cast<std::size_t>(N) + 1, 0);
  std::vector<std::optional<std::pair<int, std::vector<std::string>>>> rows(static_cast<std::size_t>(N));
  std::map<std::tuple<int, int, std::size_t, std::size_t>, std::pair<int, std::string>> cells;
  const auto level_index = [&](const std::string& s, int line, int limit) {
    const int n = parse_int(s, line);
    if (n < 0 || n > limit) throw ParseError(line, "level " + s + " outside 0.." + std::to_string(limit));
    return n;
  };
  for (const auto& l : sec.lines) {
    const auto kw = words(l.key);
    if (kw.empty()) continue;
    if (kw[0] == "truncation") continue;
    if (kw[0] == "level") {
      if (kw.size() != 5 || kw[2] != "dim" || kw[4].rfind("top=", 0) != 0) {
        throw ParseError(l.number, "expected 'level n dim d top=bits'");
      }
      const int n = level_index(kw[1], l.number, N);
      if (dims[n]) throw ParseError(l.number, "level " + kw[1] + " given twice");
      const int d = parse_int(kw[3], l.number);
      if (d < 0) throw ParseError(l.number, "negative dimension");
      dims[n] = static_cast<std::size_t>(d);
      top_text[n] = kw[4].substr(4);
      top_line[n] = l.number;
    } else if (kw[0] == "h" && kw.size() == 2) {
      const int n = level_index(kw[1], l.number, N - 1);
      if (rows[n]) throw ParseError(l.number, "h " + kw[1] + " given twice");
      rows[n] = std::make_pair(l.number, words(l.rest));
    } else if (kw[0] == "star" && kw.size() == 3) {
      const int n = level_index(kw[1], l.number, N), m = level_index(kw[2], l.number, N);
      if (n + m > N) throw ParseError(l.number, "star levels exceed the truncation");
      for (const auto& w : words(l.rest)) {
        const auto [pair, bits] = split_once(w, "->", l.number, "star");
        const auto [i, j] = split_once(pair, ",", l.number, "star");
        const auto key = std::make_tuple(n, m, static_cast<std::size_t>(parse_int(i, l.number)),
                                         static_cast<std::size_t>(parse_int(j, l.number)));
        if (!cells.emplace(key, std::make_pair(l.number, bits)).second) {
          throw ParseError(l.number, "star entry " + pair + " at (" + kw[1] + "," + kw[2] + ") given twice");
        }
      }
    } else {
      throw ParseError(l.number, "unknown igr entry '" + l.key + "'");
    }
  }
  std::vector<std::size_t> d;
  std::vector<BitVector> tops;
  for (int n = 0; n <= N; ++n) {
    if (!dims[n]) throw ParseError(sec.line, sec.name + ": missing level " + std::to_string(n));
    d.push_back(*dims[n]);
    tops.push_back(parse_bits(top_text[n], *dims[n], top_line[n], "top of level " + std::to_string(n)));
  }
  std::vector<BitMatrix> hs;
  for (int n = 0; n < N; ++n) {
    if (!rows[n]) throw ParseError(sec.line, sec.name + ": missing h " + std::to_string(n));
    const auto& [line, text] = *rows[n];
    if (text.size() != d[n + 1]) {
      throw ParseError(line, "h " + std::to_string(n) + " needs " + std::to_string(d[n + 1]) + " rows");
    }
    std::vector<BitVector> rs;
    for (const auto& t : text) rs.push_back(parse_bits(t, d[n], line, "row of h " + std::to_string(n)));
    hs.push_back(BitMatrix::from_rows(d[n], rs));
  }
  for (const auto& [key, v] : cells) {
    const auto [n, m, i, j] = key;
    if (i >= d[n] || j >= d[m]) throw ParseError(v.first, "star basis index out of range");
  }
  const auto product = [&](int n, std::size_t i, int m, std::size_t j) {
    auto it = cells.find({n, m, i, j});
    if (it == cells.end()) it = cells.find({m, n, j, i});
    if (it == cells.end()) {
      throw ParseError(sec.line, sec.name + ": missing star entry " + std::to_string(i) + "," + std::to_string(j) +
                                     " at (" + std::to_string(n) + "," + std::to_string(m) + ")");
    }
    return parse_bits(it->second.second, d[n + m], it->second.first, "star value");
  };
  try {
    return assemble_igr(sec.name, N, d, tops, hs, product);
  } catch (const ParseError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ParseError(sec.line, e.what());
  }
}

}  // namespace detail

inline StructureFile parse_structure_file(std::string_view text) {
  std::vector<detail::RawSection> raw;
  std::set<std::string> names;
  std::istringstream in{std::string(text)};
  int number = 0;
  for (std::string line; std::getline(in, line);) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw ParseError(number, "unterminated section header");
      const auto w = detail::words(t.substr(1, t.size() - 2));
      if (w.size() != 2) throw ParseError(number, "section header must be [kind NAME]");
      StructureKind kind;
      if (w[0] == "hyperfield") {
        kind = StructureKind::Hyperfield;
      } else if (w[0] == "specialgroup") {
        kind = StructureKind::SpecialGroup;
      } else if (w[0] == "igr") {
        kind = StructureKind::Igr;
      } else {
        throw ParseError(number, "unknown section kind '" + w[0] + "'");
      }
      if (!names.insert(w[1]).second) throw ParseError(number, "duplicate section '" + w[1] + "'");
      raw.push_back({number, kind, w[1], {}});
      continue;
    }
    if (raw.empty()) throw ParseError(number, "entry outside any section");
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
      raw.back().lines.push_back({number, t, ""});
    } else {
      raw.back().lines.push_back({number, detail::trim(t.substr(0, colon)), detail::trim(t.substr(colon + 1))});
    }
  }
  StructureFile out;
  for (const auto& sec : raw) {
    StructureSection s;
    s.kind = sec.kind;
    s.name = sec.name;
    switch (sec.kind) {
      case StructureKind::Hyperfield: s.value = detail::build_hyperfield(sec); break;
      case StructureKind::SpecialGroup: s.value = detail::build_group(sec); break;
      case StructureKind::Igr: s.value = detail::build_igr(sec); break;
    }
    out.sections.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace detail {

inline std::string section_name(const std::string& name) {
  std::string out;
  for (char c : name) out += (std::isspace(static_cast<unsigned char>(c)) || c == '[' || c == ']' || c == '#') ? '_' : c;
  return out.empty() ? "unnamed" : out;
}

inline void check_labels(const std::vector<std::string>& labels) {
  for (const auto& l : labels) {
    if (!valid_label(l)) throw std::invalid_argument("label '" + l + "' cannot be written to a structure file");
  }
}

}  // namespace detail

inline std::string serialize(const Multiring& m) {
  detail::check_labels(m.labels);
  const int n = m.size();
  std::ostringstream out;
  out << "[hyperfield " << detail::section_name(m.name) << "]\n";
  out << "elements:";
  for (const auto& l : m.labels) out << ' ' << l;
  out << "\nzero: " << m.labels[m.zero] << "\none: " << m.labels[m.one] << "\nneg:";
  for (int a = 0; a < n; ++a) out << ' ' << m.labels[a] << "->" << m.labels[m.negate(a)];
  out << '\n';
  for (int a = 0; a < n; ++a) {
    out << "mulrow " << m.labels[a] << ':';
    for (int b = 0; b < n; ++b) out << ' ' << m.labels[m.times(a, b)];
    out << '\n';
  }
  for (int a = 0; a < n; ++a) {
    out << "sum:";
    for (int b = 0; b < n; ++b) {
      out << ' ' << m.labels[a] << '+' << m.labels[b] << "={";
      bool first = true;
      for (int c : set_elements(m.plus(a, b))) {
        out << (first ? "" : ",") << m.labels[c];
        first = false;
      }
      out << '}';
    }
    out << '\n';
  }
  return out.str();
}

inline std::string serialize(const PreSpecialGroup& g) {
  detail::check_labels(g.labels);
  const int n = g.size();
  std::ostringstream out;
  out << "[specialgroup " << detail::section_name(g.name) << "]\n";
  out << "elements:";
  for (const auto& l : g.labels) out << ' ' << l;
  out << "\none: " << g.labels[g.one] << "\nminusone: " << g.labels[g.minus_one] << '\n';
  for (int a = 0; a < n; ++a) {
    out << "mulrow " << g.labels[a] << ':';
    for (int b = 0; b < n; ++b) out << ' ' << g.labels[g.times(a, b)];
    out << '\n';
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      std::string line;
      for (int c = 0; c < n; ++c) {
        for (int d = 0; d < n; ++d) {
          if (g.iso2(a, b, c, d)) {
            line += " (" + g.labels[a] + "," + g.labels[b] + ")~(" + g.labels[c] + "," + g.labels[d] + ")";
          }
        }
      }
      if (!line.empty()) out << "iso:" << line << '\n';
    }
  }
  return out.str();
}

inline std::string serialize(const TruncatedIgr& r) {
  r.validate_shapes();
  const int N = r.truncation;
  std::ostringstream out;
  out << "[igr " << detail::section_name(r.name) << "]\n";
  out << "truncation: " << N << '\n';
  for (int n = 0; n <= N; ++n) out << "level " << n << " dim " << r.dim(n) << " top=" << r.top(n).to_string() << '\n';
  for (int n = 0; n < N; ++n) {
    out << "h " << n << ':';
    for (std::size_t i = 0; i < r.transition(n).rows(); ++i) out << ' ' << r.transition(n).row_vectors()[i].to_string();
    out << '\n';
  }
  const bool scalar_zero = r.dim(0) == 1;
  for (int n = 0; n <= N; ++n) {
    for (int m = 0; n + m <= N; ++m) {
      if (scalar_zero && (n == 0 || m == 0)) continue;
      if (r.dim(n) == 0 || r.dim(m) == 0) continue;
      out << "star " << n << ' ' << m << ':';
      for (std::size_t i = 0; i < r.dim(n); ++i) {
        for (std::size_t j = 0; j < r.dim(m); ++j) out << ' ' << i << ',' << j << "->" << r.star(n, m).at(i, j).to_string();
      }
      out << '\n';
    }
  }
  return out.str();
}

inline std::string serialize(const StructureSection& s) {
  return std::visit([](const auto& v) { return serialize(v); }, s.value);
}

inline std::string serialize(const StructureFile& f) {
  std::string out;
  for (std::size_t i = 0; i < f.sections.size(); ++i) {
    if (i > 0) out += '\n';
    out += serialize(f.sections[i]);
  }
  return out;
}

}  // namespace hyperqf
