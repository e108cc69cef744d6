// SPDX-License-Identifier: Apache-2.0
//
// The MSBN document format and the evidence format.  Both are line
// oriented; docs/formats.md has the grammar.
//
//   msbn-format 1
//   [variables]
//   rain 2 no yes
//   wet 2
//   [subnet garden]
//   nodes: rain wet
//   arc: rain -> wet
//   cpt: rain = 0.8 0.2
//   cpt: wet | rain = 0.9 0.1 0.1 0.9
//   [links]
//
// Parsing is strict: the first problem is reported with its line and
// column.  Serialization is canonical.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "msbn/model.hpp"

namespace msbn {

inline constexpr int kFormatVersion = 1;

struct DocVariable {
  std::string name;
  std::size_t cardinality = 2;
  std::vector<std::string> states;

  friend bool operator==(const DocVariable&, const DocVariable&) = default;
};

// Values are row-major over (child, parents in declared order), the child
// being the most significant digit.  Canonical form lists parents by name.
struct DocCpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<double> values;

  friend bool operator==(const DocCpt&, const DocCpt&) = default;
};

struct DocSubnet {
  std::string id;
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> arcs;  // parent, child
  std::vector<DocCpt> cpts;

  friend bool operator==(const DocSubnet&, const DocSubnet&) = default;
};

struct MsbnDocument {
  int version = kFormatVersion;
  std::vector<DocVariable> variables;
  std::vector<DocSubnet> subnets;
  std::vector<std::pair<std::string, std::string>> links;

  friend bool operator==(const MsbnDocument&, const MsbnDocument&) = default;
};

class ParseError : public Error {
 public:
  ParseError(ErrorKind kind, std::size_t line, std::size_t column, const std::string& msg,
             const std::string& source = {})
      : Error(kind, (source.empty() ? "" : source + ":") + std::to_string(line) + ":" +
                        std::to_string(column) + ": " + msg),
        line_(line),
        column_(column),
        message_(msg) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

namespace detail {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

inline bool is_name_char(char c, bool first) {
  const bool alpha = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  if (first) return alpha;
  return alpha || (c >= '0' && c <= '9') || c == '.' || c == '-';
}

inline bool is_name(std::string_view s) {
  if (s.empty() || !is_name_char(s[0], true)) return false;
  for (char c : s) {
    if (!is_name_char(c, false)) return false;
  }
  return true;
}

inline std::vector<Token> split_tokens(std::string_view line, std::size_t offset = 0) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), offset + start + 1});
  }
  return out;
}

// Splits text into lines with comments and trailing blanks removed.
inline std::vector<std::string_view> logical_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.remove_suffix(1);
    out.push_back(line);
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

class DocParser {
 public:
  explicit DocParser(std::string_view text) : lines_(logical_lines(text)) {}

  MsbnDocument parse() {
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      line_no_ = i + 1;
      const std::string_view line = lines_[i];
      if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
      for (std::size_t c = 0; c < line.size(); ++c) {
        const unsigned char ch = static_cast<unsigned char>(line[c]);
        if (ch < 0x20 && ch != '\t') syntax(c + 1, "control character");
        if (ch >= 0x7f) syntax(c + 1, "non-ASCII byte");
      }
      if (!seen_header_) {
        header(line);
        continue;
      }
      if (line.find_first_not_of(" \t") == 0 && line[0] == '[') {
        section(line);
        continue;
      }
      body(line);
    }
    if (!seen_header_) syntax_at(1, 1, "missing 'msbn-format' header");
    return std::move(doc_);
  }

 private:
  enum class Section { kNone, kVariables, kSubnet, kLinks };

  [[noreturn]] void syntax(std::size_t col, const std::string& msg) const {
    throw ParseError(ErrorKind::kSyntaxError, line_no_, col, msg);
  }
  [[noreturn]] void syntax_at(std::size_t line, std::size_t col, const std::string& msg) const {
    throw ParseError(ErrorKind::kSyntaxError, line, col, msg);
  }
  [[noreturn]] void semantic(std::size_t col, const std::string& msg) const {
    throw ParseError(ErrorKind::kSemanticError, line_no_, col, msg);
  }

  void header(std::string_view line) {
    auto t = split_tokens(line);
    if (t[0].text != "msbn-format") syntax(t[0].column, "expected 'msbn-format'");
    if (t.size() != 2) syntax(t[0].column, "expected 'msbn-format <version>'");
    if (t[1].text != "1") {
      semantic(t[1].column, "unsupported format version '" + std::string(t[1].text) + "'");
    }
    seen_header_ = true;
  }

  void section(std::string_view line) {
    const std::size_t close = line.find(']');
    if (close == std::string_view::npos) syntax(line.size() + 1, "missing ']'");
    if (close + 1 != line.size()) syntax(close + 2, "text after section header");
    auto t = split_tokens(line.substr(1, close - 1), 1);
    if (t.empty()) syntax(2, "empty section header");
    const std::string_view kind = t[0].text;
    if (kind == "variables" || kind == "links") {
      if (t.size() != 1) syntax(t[1].column, "unexpected token in section header");
      Section s = kind == "variables" ? Section::kVariables : Section::kLinks;
      if (seen_sections_.count(std::string(kind))) {
        semantic(t[0].column, "section [" + std::string(kind) + "] repeated");
      }
      if (s == Section::kVariables && !doc_.subnets.empty()) {
        semantic(t[0].column, "[variables] must precede every subnet");
      }
      seen_sections_.insert(std::string(kind));
      current_ = s;
      return;
    }
    if (kind == "subnet") {
      if (t.size() != 2) syntax(t[0].column, "expected '[subnet <id>]'");
      if (!is_name(t[1].text)) syntax(t[1].column, "invalid subnet id");
      if (!seen_sections_.count("variables")) {
        semantic(t[0].column, "[variables] must precede every subnet");
      }
      if (seen_sections_.count("links")) semantic(t[0].column, "subnet after [links]");
      const std::string id(t[1].text);
      if (!subnet_ids_.insert(id).second) semantic(t[1].column, "duplicate subnet '" + id + "'");
      doc_.subnets.push_back({id, {}, {}, {}});
      current_ = Section::kSubnet;
      nodes_seen_ = false;
      nodes_.clear();
      return;
    }
    syntax(t[0].column, "unknown section '" + std::string(kind) + "'");
  }

  void body(std::string_view line) {
    switch (current_) {
      case Section::kNone: syntax(1, "content outside any section");
      case Section::kVariables: variable(line); return;
      case Section::kSubnet: subnet_line(line); return;
      case Section::kLinks: link(line); return;
    }
  }

  void variable(std::string_view line) {
    auto t = split_tokens(line);
    if (!is_name(t[0].text)) syntax(t[0].column, "invalid variable name");
    if (t.size() < 2) syntax(line.size() + 1, "expected cardinality");
    std::size_t card = 0;
    auto [p, ec] = std::from_chars(t[1].text.data(), t[1].text.data() + t[1].text.size(), card);
    if (ec != std::errc() || p != t[1].text.data() + t[1].text.size()) {
      syntax(t[1].column, "cardinality must be an integer");
    }
    if (card < 2) semantic(t[1].column, "cardinality must be at least 2");
    if (card > 1024) semantic(t[1].column, "cardinality above 1024");
    DocVariable v{std::string(t[0].text), card, {}};
    if (t.size() > 2) {
      if (t.size() - 2 != card) {
        semantic(t[2].column, "variable '" + v.name + "' has " + std::to_string(t.size() - 2) +
                                  " state labels for " + std::to_string(card) + " states");
      }
      std::set<std::string_view> seen;
      for (std::size_t k = 2; k < t.size(); ++k) {
        if (!is_name(t[k].text)) syntax(t[k].column, "invalid state label");
        if (!seen.insert(t[k].text).second) semantic(t[k].column, "duplicate state label");
        v.states.emplace_back(t[k].text);
      }
    }
    if (!cards_.emplace(v.name, card).second) {
      semantic(t[0].column, "duplicate variable '" + v.name + "'");
    }
    doc_.variables.push_back(std::move(v));
  }

  std::string known_variable(const Token& t) const {
    if (!is_name(t.text)) syntax(t.column, "invalid variable name");
    std::string name(t.text);
    if (!cards_.count(name)) semantic(t.column, "undeclared variable '" + name + "'");
    return name;
  }

  std::string subnet_node(const Token& t) const {
    std::string name = known_variable(t);
    if (!nodes_.count(name)) {
      semantic(t.column, "'" + name + "' is not a node of subnet '" + doc_.subnets.back().id + "'");
    }
    return name;
  }

  void subnet_line(std::string_view line) {
    const std::size_t colon = line.find(':');
    if (colon == std::string_view::npos) syntax(1, "expected '<key>: ...'");
    auto keys = split_tokens(line.substr(0, colon));
    if (keys.size() != 1) syntax(1, "expected a single key before ':'");
    const std::string_view key = keys[0].text;
    auto t = split_tokens(line.substr(colon + 1), colon + 1);
    DocSubnet& s = doc_.subnets.back();
    if (key == "nodes") {
      if (nodes_seen_) semantic(keys[0].column, "nodes listed twice");
      nodes_seen_ = true;
      for (const Token& tok : t) {
        std::string name = known_variable(tok);
        if (!nodes_.insert(name).second) semantic(tok.column, "duplicate node '" + name + "'");
        s.nodes.push_back(std::move(name));
      }
      return;
    }
    if (!nodes_seen_) semantic(keys[0].column, "'nodes:' must come first in a subnet");
    if (key == "arc") {
      if (t.size() != 3 || t[1].text != "->") {
        syntax(t.empty() ? colon + 2 : t[0].column, "expected 'arc: <parent> -> <child>'");
      }
      std::string a = subnet_node(t[0]), b = subnet_node(t[2]);
      if (a == b) semantic(t[2].column, "self-loop on '" + a + "'");
      for (const auto& arc : s.arcs) {
        if (arc.first == a && arc.second == b) semantic(t[0].column, "duplicate arc");
      }
      s.arcs.emplace_back(std::move(a), std::move(b));
      return;
    }
    if (key == "cpt") {
      cpt(line, colon, t);
      return;
    }
    syntax(keys[0].column, "unknown key '" + std::string(key) + "'");
  }

  void cpt(std::string_view line, std::size_t colon, const std::vector<Token>& t) {
    DocSubnet& s = doc_.subnets.back();
    if (t.empty()) syntax(colon + 2, "expected CPT");
    DocCpt c;
    c.child = subnet_node(t[0]);
    std::size_t k = 1;
    std::set<std::string> family{c.child};
    if (k < t.size() && t[k].text == "|") {
      ++k;
      while (k < t.size() && t[k].text != "=") {
        std::string p = subnet_node(t[k]);
        if (!family.insert(p).second) semantic(t[k].column, "repeated variable in CPT scope");
        c.parents.push_back(std::move(p));
        ++k;
      }
      if (c.parents.empty()) syntax(k < t.size() ? t[k].column : line.size() + 1, "expected parents after '|'");
    }
    if (k >= t.size() || t[k].text != "=") {
      syntax(k < t.size() ? t[k].column : line.size() + 1, "expected '='");
    }
    ++k;
    std::size_t expected = cards_.at(c.child);
    for (const std::string& p : c.parents) expected *= cards_.at(p);
    for (; k < t.size(); ++k) {
      double x = 0.0;
      auto [p, ec] = std::from_chars(t[k].text.data(), t[k].text.data() + t[k].text.size(), x);
      if (ec != std::errc() || p != t[k].text.data() + t[k].text.size()) {
        syntax(t[k].column, "invalid number '" + std::string(t[k].text) + "'");
      }
      if (!std::isfinite(x) || x < 0.0) semantic(t[k].column, "CPT values must be finite and nonnegative");
      c.values.push_back(x);
    }
    if (c.values.size() != expected) {
      semantic(t[0].column, "CPT of '" + c.child + "' has " + std::to_string(c.values.size()) +
                                " values, expected " + std::to_string(expected));
    }
    for (const DocCpt& other : s.cpts) {
      if (other.child == c.child) semantic(t[0].column, "second CPT for '" + c.child + "' in subnet");
    }
    s.cpts.push_back(std::move(c));
  }

  void link(std::string_view line) {
    auto t = split_tokens(line);
    if (t.size() != 2) syntax(t.back().column, "expected '<subnet> <subnet>'");
    for (const Token& tok : t) {
      if (!is_name(tok.text)) syntax(tok.column, "invalid subnet id");
      if (!subnet_ids_.count(std::string(tok.text))) {
        semantic(tok.column, "unknown subnet '" + std::string(tok.text) + "'");
      }
    }
    if (t[0].text == t[1].text) semantic(t[1].column, "subnet linked to itself");
    doc_.links.emplace_back(std::string(t[0].text), std::string(t[1].text));
  }

  std::vector<std::string_view> lines_;
  std::size_t line_no_ = 0;
  bool seen_header_ = false;
  Section current_ = Section::kNone;
  std::set<std::string> seen_sections_;
  std::set<std::string> subnet_ids_;
  std::map<std::string, std::size_t> cards_;
  std::set<std::string> nodes_;
  bool nodes_seen_ = false;
  MsbnDocument doc_;
};

inline std::string format_number(double x) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

}  // namespace detail

inline MsbnDocument parse_msbn(std::string_view text) {
  return detail::DocParser(text).parse();
}

namespace detail {

// Rewrites a CPT with its parents in name order.
inline void sort_parents(DocCpt& c, const std::map<std::string, std::size_t>& cards) {
  std::vector<std::string> order = c.parents;
  std::sort(order.begin(), order.end());
  if (order == c.parents) return;
  std::vector<std::string> old_scope{c.child}, new_scope{c.child};
  old_scope.insert(old_scope.end(), c.parents.begin(), c.parents.end());
  new_scope.insert(new_scope.end(), order.begin(), order.end());
  const std::size_t n = old_scope.size();
  std::vector<std::size_t> old_cards(n), old_stride(n), pos(n);
  for (std::size_t k = 0; k < n; ++k) old_cards[k] = cards.at(old_scope[k]);
  std::size_t acc = 1;
  for (std::size_t k = n; k-- > 0;) {
    old_stride[k] = acc;
    acc *= old_cards[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    pos[k] = static_cast<std::size_t>(
        std::find(old_scope.begin(), old_scope.end(), new_scope[k]) - old_scope.begin());
  }
  std::vector<double> values(c.values.size());
  std::vector<std::size_t> digit(n, 0);
  for (double& out : values) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < n; ++k) idx += digit[k] * old_stride[pos[k]];
    out = c.values.at(idx);
    for (std::size_t k = n; k-- > 0;) {
      if (++digit[k] < old_cards[pos[k]]) break;
      digit[k] = 0;
    }
  }
  c.parents = std::move(order);
  c.values = std::move(values);
}

}  // namespace detail

// Sorted variables, subnets, nodes, arcs, CPTs (and CPT parents) and links;
// each link with the smaller id first.
inline MsbnDocument canonicalize(MsbnDocument doc) {
  std::map<std::string, std::size_t> cards;
  for (const DocVariable& v : doc.variables) cards[v.name] = v.cardinality;
  std::sort(doc.variables.begin(), doc.variables.end(),
            [](const DocVariable& a, const DocVariable& b) { return a.name < b.name; });
  for (DocSubnet& s : doc.subnets) {
    std::sort(s.nodes.begin(), s.nodes.end());
    std::sort(s.arcs.begin(), s.arcs.end());
    for (DocCpt& c : s.cpts) {
      if (c.values.size() == 0) continue;
      bool known = cards.count(c.child) != 0;
      for (const std::string& p : c.parents) known = known && cards.count(p) != 0;
      if (known) detail::sort_parents(c, cards);
    }
    std::sort(s.cpts.begin(), s.cpts.end(),
              [](const DocCpt& a, const DocCpt& b) { return a.child < b.child; });
  }
  std::sort(doc.subnets.begin(), doc.subnets.end(),
            [](const DocSubnet& a, const DocSubnet& b) { return a.id < b.id; });
  for (auto& [a, b] : doc.links) {
    if (b < a) std::swap(a, b);
  }
  std::sort(doc.links.begin(), doc.links.end());
  return doc;
}

inline void write_msbn(std::ostream& os, const MsbnDocument& input) {
  const MsbnDocument doc = canonicalize(input);
  os << "msbn-format " << doc.version << "\n\n[variables]\n";
  for (const DocVariable& v : doc.variables) {
    os << v.name << ' ' << v.cardinality;
    for (const std::string& s : v.states) os << ' ' << s;
    os << '\n';
  }
  for (const DocSubnet& s : doc.subnets) {
    os << "\n[subnet " << s.id << "]\nnodes:";
    for (const std::string& n : s.nodes) os << ' ' << n;
    os << '\n';
    for (const auto& [p, c] : s.arcs) os << "arc: " << p << " -> " << c << '\n';
    for (const DocCpt& c : s.cpts) {
      os << "cpt: " << c.child;
      if (!c.parents.empty()) {
        os << " |";
        for (const std::string& p : c.parents) os << ' ' << p;
      }
      os << " =";
      for (double x : c.values) os << ' ' << detail::format_number(x);
      os << '\n';
    }
  }
  os << "\n[links]\n";
  for (const auto& [a, b] : doc.links) os << a << ' ' << b << '\n';
}

inline std::string serialize_msbn(const MsbnDocument& doc) {
  std::ostringstream os;
  write_msbn(os, doc);
  return os.str();
}

// Builds the model.  Structural validity is checked separately by validate().
inline Msbn to_msbn(const MsbnDocument& doc) {
  std::vector<Variable> vars;
  for (const DocVariable& v : doc.variables) vars.push_back({v.name, v.cardinality, v.states});
  Msbn m;
  m.universe = Universe(std::move(vars));
  const Universe& u = m.universe;
  for (const DocSubnet& ds : doc.subnets) {
    Subnet s;
    s.id = ds.id;
    std::vector<VarId> nodes;
    for (const std::string& n : ds.nodes) nodes.push_back(u.id(n));
    s.dag.nodes = make_set(nodes);
    for (const auto& [p, c] : ds.arcs) s.dag.parents[u.id(c)].push_back(u.id(p));
    for (const DocCpt& dc : ds.cpts) {
      std::vector<VarId> scope{u.id(dc.child)};
      std::vector<std::size_t> cards{u.card(scope[0])};
      for (const std::string& p : dc.parents) {
        scope.push_back(u.id(p));
        cards.push_back(u.card(scope.back()));
      }
      const VarId child = scope[0];
      s.cpts.emplace(child, Factor(std::move(scope), std::move(cards), dc.values));
    }
    m.subnets.push_back(std::move(s));
  }
  for (const auto& [a, b] : doc.links) {
    m.links.emplace_back(m.subnet_index(a), m.subnet_index(b));
  }
  return m;
}

inline MsbnDocument to_document(const Msbn& m) {
  MsbnDocument doc;
  const Universe& u = m.universe;
  for (const Variable& v : u.variables()) doc.variables.push_back({v.name, v.cardinality, v.states});
  for (const Subnet& s : m.subnets) {
    DocSubnet ds;
    ds.id = s.id;
    for (VarId v : s.nodes()) ds.nodes.push_back(u.name(v));
    for (const auto& [c, ps] : s.dag.parents) {
      for (VarId p : ps) ds.arcs.emplace_back(u.name(p), u.name(c));
    }
    for (const auto& [v, cpt] : s.cpts) {
      DocCpt dc;
      dc.child = u.name(cpt.scope()[0]);
      for (std::size_t k = 1; k < cpt.scope().size(); ++k) dc.parents.push_back(u.name(cpt.scope()[k]));
      dc.values = cpt.values();
      ds.cpts.push_back(std::move(dc));
    }
    doc.subnets.push_back(std::move(ds));
  }
  for (auto [a, b] : m.links) doc.links.emplace_back(m.subnets[a].id, m.subnets[b].id);
  return canonicalize(std::move(doc));
}

//===========================================================================
// Evidence files: one `variable = state` per line, state given by label or
// index; an optional `@ subnet` suffix enters the finding at that subnet.

inline Evidence parse_evidence(std::string_view text, const Msbn& m) {
  Evidence e;
  const auto lines = detail::logical_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    auto t = detail::split_tokens(lines[i]);
    if (t.empty()) continue;
    auto fail = [&](ErrorKind k, std::size_t col, const std::string& msg) {
      throw ParseError(k, line_no, col, msg);
    };
    if (t.size() != 3 && !(t.size() == 5 && t[3].text == "@")) {
      fail(ErrorKind::kSyntaxError, t[0].column, "expected '<variable> = <state> [@ <subnet>]'");
    }
    if (t[1].text != "=") fail(ErrorKind::kSyntaxError, t[1].column, "expected '='");
    const auto var = m.universe.find(std::string(t[0].text));
    if (!var) fail(ErrorKind::kSemanticError, t[0].column, "unknown variable '" + std::string(t[0].text) + "'");
    const Variable& v = m.universe[*var];
    Finding f{*var, 0, {}};
    auto label = std::find(v.states.begin(), v.states.end(), t[2].text);
    if (label != v.states.end()) {
      f.state = static_cast<std::size_t>(label - v.states.begin());
    } else {
      auto [p, ec] = std::from_chars(t[2].text.data(), t[2].text.data() + t[2].text.size(), f.state);
      if (ec != std::errc() || p != t[2].text.data() + t[2].text.size() || f.state >= v.cardinality) {
        fail(ErrorKind::kSemanticError, t[2].column,
             "'" + std::string(t[2].text) + "' is not a state of '" + v.name + "'");
      }
    }
    if (t.size() == 5) {
      std::size_t s = m.subnets.size();
      for (std::size_t k = 0; k < m.subnets.size(); ++k) {
        if (m.subnets[k].id == t[4].text) s = k;
      }
      if (s == m.subnets.size()) {
        fail(ErrorKind::kSemanticError, t[4].column, "unknown subnet '" + std::string(t[4].text) + "'");
      }
      f.subnet = s;
    }
    e.findings.push_back(f);
  }
  return e;
}

inline std::string serialize_evidence(const Evidence& e, const Msbn& m) {
  std::ostringstream os;
  for (const Finding& f : e.findings) {
    const Variable& v = m.universe[f.var];
    os << v.name << " = ";
    if (v.states.empty()) {
      os << f.state;
    } else {
      os << v.states[f.state];
    }
    if (f.subnet) os << " @ " << m.subnets[*f.subnet].id;
    os << '\n';
  }
  return os.str();
}

}  // namespace msbn
