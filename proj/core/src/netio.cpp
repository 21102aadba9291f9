#include "beldi/netio.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace beldi {

namespace {

struct Token {
  enum class Kind { word, punct, eof };
  Kind kind = Kind::eof;
  std::string text;
  int line = 1, col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  static bool word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '.' || c == '+' || c == '-';
  }

  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++pos_;
        ++line_;
        col_ = 1;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
        ++col_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::Kind::eof;
      tok_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (word_char(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && word_char(text_[pos_])) {
        ++pos_;
        ++col_;
      }
      tok_.kind = Token::Kind::word;
      tok_.text = text_.substr(start, pos_ - start);
    } else {
      tok_.kind = Token::Kind::punct;
      tok_.text.assign(1, c);
      ++pos_;
      ++col_;
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token tok_;
};

bool is_reserved(const std::string& w) {
  return w == "node" || w == "cpt" || w == "evidence" || w == "observed";
}

bool is_ident(const std::string& w) {
  if (w.empty()) return false;
  char c0 = w[0];
  bool head_ok = (c0 >= 'a' && c0 <= 'z') || (c0 >= 'A' && c0 <= 'Z') ||
                 (c0 >= '0' && c0 <= '9') || c0 == '_';
  if (!head_ok) return false;
  for (char c : w) {
    if (c == '+') return false;
  }
  return !is_reserved(w);
}

struct Parser {
  Lexer lex;
  NetworkDocument doc;
  std::vector<ParseDiagnostic> diagnostics;

  // Declared-node bookkeeping for resolution while parsing.
  std::map<std::string, int> node_index;

  explicit Parser(const std::string& text) : lex(text) {}

  bool failed() const { return !diagnostics.empty(); }

  void error(const Token& at, std::string message) {
    if (failed()) return;  // keep the first, it names the offending position
    diagnostics.push_back({at.line, at.col, std::move(message)});
  }

  bool at_word(const char* w) const {
    return lex.peek().kind == Token::Kind::word && lex.peek().text == w;
  }

  bool at_punct(char c) const {
    return lex.peek().kind == Token::Kind::punct && lex.peek().text[0] == c;
  }

  bool expect_punct(char c, const char* what) {
    if (at_punct(c)) {
      lex.take();
      return true;
    }
    error(lex.peek(), std::string("expected '") + c + "' " + what);
    return false;
  }

  std::optional<std::string> expect_ident(const char* what) {
    Token t = lex.peek();
    if (t.kind == Token::Kind::word && is_ident(t.text)) {
      lex.take();
      return t.text;
    }
    error(t, std::string("expected ") + what);
    return std::nullopt;
  }

  std::optional<double> expect_number() {
    Token t = lex.peek();
    if (t.kind != Token::Kind::word) {
      error(t, "expected a number");
      return std::nullopt;
    }
    double v = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      error(t, "expected a number, got '" + t.text + "'");
      return std::nullopt;
    }
    if (v < 0.0) {
      error(t, "negative entry " + t.text);
      return std::nullopt;
    }
    if (!std::isfinite(v)) {
      error(t, "non-finite entry " + t.text);
      return std::nullopt;
    }
    lex.take();
    return v;
  }

  void parse_node_decl() {
    Token kw = lex.take();  // 'node'
    auto name = expect_ident("a node name");
    if (!name) return;
    if (node_index.count(*name)) {
      error(kw, "duplicate node '" + *name + "'");
      return;
    }
    if (!expect_punct(':', "after the node name")) return;

    NodeDecl decl;
    decl.name = *name;
    decl.line = kw.line;
    decl.col = kw.col;
    while (lex.peek().kind == Token::Kind::word && is_ident(lex.peek().text)) {
      Token t = lex.take();
      decl.outcomes.push_back(t.text);
    }
    if (decl.outcomes.empty()) {
      error(lex.peek(), "node '" + *name + "' needs at least one outcome label");
      return;
    }
    std::set<std::string> uniq(decl.outcomes.begin(), decl.outcomes.end());
    if (uniq.size() != decl.outcomes.size()) {
      error(kw, "node '" + *name + "' repeats an outcome label");
      return;
    }
    if (at_word("observed")) {
      lex.take();
      auto outcome = expect_ident("the observed outcome label");
      if (!outcome) return;
      if (!uniq.count(*outcome)) {
        error(kw, "observed outcome '" + *outcome + "' is not an outcome of '" + *name + "'");
        return;
      }
      decl.observed_outcome = *outcome;
    }
    node_index.emplace(decl.name, static_cast<int>(doc.nodes.size()));
    doc.nodes.push_back(std::move(decl));
  }

  const NodeDecl* lookup(const std::string& name) {
    auto it = node_index.find(name);
    return it == node_index.end() ? nullptr
                                  : &doc.nodes[static_cast<std::size_t>(it->second)];
  }

  void parse_table_decl(std::set<std::string>& have_table) {
    Token kw = lex.take();  // 'cpt'
    auto child = expect_ident("the table's node name");
    if (!child) return;
    const NodeDecl* child_decl = lookup(*child);
    if (!child_decl) {
      error(kw, "table for undeclared node '" + *child + "'");
      return;
    }
    if (!have_table.insert(*child).second) {
      error(kw, "node '" + *child + "' already has a table");
      return;
    }

    TableDecl decl;
    decl.child = *child;
    decl.line = kw.line;
    decl.col = kw.col;

    if (at_punct('|')) {
      lex.take();
      while (lex.peek().kind == Token::Kind::word && is_ident(lex.peek().text)) {
        Token t = lex.take();
        if (!lookup(t.text)) {
          error(t, "unknown parent '" + t.text + "'");
          return;
        }
        if (t.text == *child) {
          error(t, "node '" + *child + "' cannot be its own parent");
          return;
        }
        decl.parents.push_back(t.text);
      }
      if (decl.parents.empty()) {
        error(lex.peek(), "expected at least one parent name after '|'");
        return;
      }
      std::set<std::string> uniq(decl.parents.begin(), decl.parents.end());
      if (uniq.size() != decl.parents.size()) {
        error(kw, "table for '" + *child + "' repeats a parent");
        return;
      }
    }
    if (!expect_punct('{', "to open the table body")) return;

    std::size_t want_rows = 1;
    for (const std::string& p : decl.parents) {
      want_rows *= lookup(p)->outcomes.size();
    }
    std::size_t want_values =
        child_decl->observed_outcome ? 1 : child_decl->outcomes.size();

    std::set<std::vector<std::string>> seen_configs;
    while (at_punct('[')) {
      Token open = lex.take();
      TableRow row;
      row.line = open.line;
      row.col = open.col;
      while (lex.peek().kind == Token::Kind::word && is_ident(lex.peek().text)) {
        row.config.push_back(lex.take().text);
      }
      if (!expect_punct(']', "to close the row's configuration")) return;
      if (row.config.size() != decl.parents.size()) {
        error(open, "row lists " + std::to_string(row.config.size()) +
                        " parent outcomes, table has " +
                        std::to_string(decl.parents.size()) + " parents");
        return;
      }
      for (std::size_t i = 0; i < row.config.size(); ++i) {
        const NodeDecl* p = lookup(decl.parents[i]);
        bool known = false;
        for (const std::string& o : p->outcomes) {
          if (o == row.config[i]) known = true;
        }
        if (!known) {
          error(open, "'" + row.config[i] + "' is not an outcome of parent '" +
                          decl.parents[i] + "'");
          return;
        }
      }
      if (!seen_configs.insert(row.config).second) {
        error(open, "duplicate row for this parent configuration");
        return;
      }
      if (!expect_punct(':', "after the row's configuration")) return;
      while (lex.peek().kind == Token::Kind::word) {
        auto v = expect_number();
        if (!v) return;
        row.values.push_back(*v);
      }
      if (row.values.size() != want_values) {
        error(open, "row holds " + std::to_string(row.values.size()) +
                        " values, expected " + std::to_string(want_values));
        return;
      }
      if (!expect_punct(';', "to end the row")) return;
      decl.rows.push_back(std::move(row));
    }
    if (!expect_punct('}', "to close the table body")) return;
    if (decl.rows.size() != want_rows) {
      error(kw, "table for '" + *child + "' has " + std::to_string(decl.rows.size()) +
                    " rows, expected " + std::to_string(want_rows) +
                    " (one per parent configuration)");
      return;
    }
    doc.tables.push_back(std::move(decl));
  }

  void parse_evidence_block() {
    lex.take();  // 'evidence'
    if (!expect_punct('{', "to open the evidence block")) return;
    std::set<std::string> seen;
    while (lex.peek().kind == Token::Kind::word) {
      Token t = lex.peek();
      auto name = expect_ident("a node name");
      if (!name) return;
      const NodeDecl* decl = lookup(*name);
      if (!decl) {
        error(t, "evidence for undeclared node '" + *name + "'");
        return;
      }
      if (!expect_punct('=', "after the node name")) return;
      Token ot = lex.peek();
      auto outcome = expect_ident("an outcome label");
      if (!outcome) return;
      bool known = false;
      for (const std::string& o : decl->outcomes) {
        if (o == *outcome) known = true;
      }
      if (!known) {
        error(ot, "'" + *outcome + "' is not an outcome of node '" + *name + "'");
        return;
      }
      if (!seen.insert(*name).second) {
        error(t, "node '" + *name + "' appears twice in the evidence block");
        return;
      }
      if (decl->observed_outcome) {
        error(t, "node '" + *name + "' is already marked observed");
        return;
      }
      if (!expect_punct(';', "to end the assertion")) return;
      doc.evidence.push_back({*name, *outcome, t.line, t.col});
    }
    if (!expect_punct('}', "to close the evidence block")) return;
  }

  void run() {
    while (!failed() && at_word("node")) parse_node_decl();
    std::set<std::string> have_table;
    while (!failed() && at_word("cpt")) parse_table_decl(have_table);
    if (!failed() && at_word("evidence")) parse_evidence_block();
    if (!failed() && lex.peek().kind != Token::Kind::eof) {
      error(lex.peek(), "unexpected '" + lex.peek().text + "'");
    }
    if (!failed()) {
      for (const NodeDecl& n : doc.nodes) {
        if (!have_table.count(n.name)) {
          diagnostics.push_back(
              {n.line, n.col, "node '" + n.name + "' has no table"});
          break;
        }
      }
    }
  }
};

}  // namespace

NetworkParse parse_network(const std::string& text) {
  Parser p(text);
  p.run();
  NetworkParse out;
  out.diagnostics = std::move(p.diagnostics);
  if (out.diagnostics.empty()) out.document = std::move(p.doc);
  return out;
}

BuiltNetwork diagram_from_document(const NetworkDocument& doc) {
  BuiltNetwork out;
  for (const NodeDecl& n : doc.nodes) {
    out.diagram.add_node(n.name, n.outcomes);
  }
  for (const TableDecl& t : doc.tables) {
    NodeId child = out.diagram.find(t.child);
    std::vector<NodeId> parents;
    for (const std::string& p : t.parents) parents.push_back(out.diagram.find(p));
    out.diagram.set_parents(child, parents);

    const NodeDecl* decl = nullptr;
    for (const NodeDecl& n : doc.nodes) {
      if (n.name == t.child) decl = &n;
    }
    bool absorbed = decl->observed_outcome.has_value();
    std::size_t own_card = absorbed ? 1 : decl->outcomes.size();

    std::vector<TableAxis> parent_axes;
    for (NodeId p : parents) {
      parent_axes.push_back({p, out.diagram.node(p).cardinality()});
    }
    std::vector<TableAxis> axes;
    if (!absorbed) axes.push_back({child, static_cast<int>(decl->outcomes.size())});
    for (const TableAxis& a : parent_axes) axes.push_back(a);

    std::vector<double> entries(axes_volume(axes), 0.0);
    for (const TableRow& row : t.rows) {
      // Row-major index of the parent configuration.
      std::size_t cfg = 0;
      for (std::size_t i = 0; i < row.config.size(); ++i) {
        NodeId p = parents[i];
        int oi = out.diagram.outcome_index(p, row.config[i]);
        cfg = cfg * static_cast<std::size_t>(out.diagram.node(p).cardinality()) +
              static_cast<std::size_t>(oi);
      }
      // Own-outcome axis is slowest, so value v for this configuration lands
      // one block apart.
      std::size_t block = entries.size() / own_card;
      for (std::size_t v = 0; v < row.values.size(); ++v) {
        entries[v * block + cfg] = row.values[v];
      }
    }

    PotentialTable table(std::move(axes), std::move(entries));
    out.diagram.set_table(child, std::move(table));
    if (absorbed) {
      int oi = -1;
      for (std::size_t i = 0; i < decl->outcomes.size(); ++i) {
        if (decl->outcomes[i] == *decl->observed_outcome) oi = static_cast<int>(i);
      }
      out.diagram.set_observed(child, Observation{oi, true});
    }
  }
  for (const EvidenceDecl& e : doc.evidence) {
    NodeId node = out.diagram.find(e.node);
    int oi = out.diagram.outcome_index(node, e.outcome);
    out.evidence.push_back({node, oi});
  }
  return out;
}

EvidenceParse parse_evidence(const std::string& text, const BeliefDiagram& d) {
  EvidenceParse out;
  Lexer lex(text);
  std::set<NodeId> seen;
  auto error = [&out](const Token& at, std::string msg) {
    if (out.diagnostics.empty()) out.diagnostics.push_back({at.line, at.col, std::move(msg)});
  };

  while (out.diagnostics.empty() && lex.peek().kind != Token::Kind::eof) {
    Token t = lex.take();
    if (t.kind != Token::Kind::word || !is_ident(t.text)) {
      error(t, "expected a node name");
      break;
    }
    NodeId node = d.find(t.text);
    if (node == kNoNode) {
      error(t, "unknown node '" + t.text + "'");
      break;
    }
    if (!(lex.peek().kind == Token::Kind::punct && lex.peek().text == "=")) {
      error(lex.peek(), "expected '=' after the node name");
      break;
    }
    lex.take();
    Token ot = lex.take();
    if (ot.kind != Token::Kind::word || !is_ident(ot.text)) {
      error(ot, "expected an outcome label");
      break;
    }
    int oi = d.outcome_index(node, ot.text);
    if (oi < 0) {
      error(ot, "'" + ot.text + "' is not an outcome of node '" + t.text + "'");
      break;
    }
    if (!seen.insert(node).second) {
      error(t, "duplicate assertion for node '" + t.text + "'");
      break;
    }
    out.assertions.push_back({node, oi});
  }
  if (!out.diagnostics.empty()) out.assertions.clear();
  return out;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string write_network(const BeliefDiagram& d) {
  std::ostringstream os;
  for (const NodeRecord& rec : d.nodes()) {
    os << "node " << rec.name << " :";
    for (const std::string& o : rec.outcomes) os << ' ' << o;
    if (rec.is_absorbed()) {
      os << " observed " << rec.outcomes[static_cast<std::size_t>(rec.observed->outcome)];
    }
    os << '\n';
  }
  for (const NodeRecord& rec : d.nodes()) {
    os << "cpt " << rec.name;
    if (!rec.parents.empty()) {
      os << " |";
      for (NodeId p : rec.parents) os << ' ' << d.node(p).name;
    }
    os << " {\n";

    PotentialTable canon = rec.table;
    canon.rescale_unit_max();
    std::size_t own_card = rec.is_absorbed() ? 1 : static_cast<std::size_t>(rec.cardinality());
    std::size_t block = canon.size() / own_card;

    std::vector<TableAxis> parent_axes;
    for (NodeId p : rec.parents) parent_axes.push_back({p, d.node(p).cardinality()});
    MultiIndex mi(parent_axes);
    std::size_t cfg = 0;
    do {
      os << "  [";
      for (std::size_t i = 0; i < parent_axes.size(); ++i) {
        os << (i ? " " : "")
           << d.node(rec.parents[i]).outcomes[static_cast<std::size_t>(mi.digit(static_cast<int>(i)))];
      }
      os << "] :";
      for (std::size_t v = 0; v < own_card; ++v) {
        os << ' ' << fmt_double(canon.entries()[v * block + cfg]);
      }
      os << " ;\n";
      ++cfg;
    } while (mi.next());
    os << "}\n";
  }
  return os.str();
}

std::string write_network(const BeliefDiagram& d,
                          const std::vector<EvidenceAssertion>& evidence) {
  std::string out = write_network(d);
  if (!evidence.empty()) {
    std::ostringstream os;
    os << "evidence {\n";
    for (const EvidenceAssertion& e : evidence) {
      const NodeRecord& rec = d.node(e.node);
      os << "  " << rec.name << " = "
         << rec.outcomes[static_cast<std::size_t>(e.outcome)] << " ;\n";
    }
    os << "}\n";
    out += os.str();
  }
  return out;
}

std::string export_dot(const BeliefDiagram& d) {
  std::ostringstream os;
  os << "digraph beliefs {\n";
  for (const NodeRecord& rec : d.nodes()) {
    os << "  \"" << rec.name << '"';
    if (rec.observed) os << " [style=filled]";
    os << ";\n";
  }
  for (const NodeRecord& rec : d.nodes()) {
    for (NodeId p : rec.parents) {
      os << "  \"" << d.node(p).name << "\" -> \"" << rec.name << "\";\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace beldi
