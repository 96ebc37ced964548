// Copyright (c) sharing-analysis contributors.
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "sharing/program.hpp"

namespace sharing {

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_{line},
      column_{column} {}

UnsupportedConstruct::UnsupportedConstruct(const std::string& construct, std::size_t line, std::size_t column)
    : ParseError("unsupported construct: " + construct, line, column), construct_{construct} {}

namespace {

enum class Tok { Atom, FunctorOpen, Var, Int, Str, Punct, End, Eof };

struct Token {
  Tok kind = Tok::Eof;
  std::string text;
  std::size_t line = 1;
  std::size_t column = 1;
  /// For Atom tokens: true when written between single quotes.
  bool quoted = false;
};

constexpr std::string_view kSymbolChars = "+-*/\\^<>=~:.?@#&$";

bool is_symbol_char(char c) { return kSymbolChars.find(c) != std::string_view::npos; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_{text} {}

  Token next() {
    skip_layout();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) {
      tok.kind = Tok::Eof;
      return tok;
    }
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      tok.kind = Tok::Int;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) tok.text += advance();
      if (pos_ + 1 < text_.size() && text_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
        throw UnsupportedConstruct("floating-point number", tok.line, tok.column);
      }
      return tok;
    }
    if (c == '_' || std::isupper(static_cast<unsigned char>(c))) {
      tok.kind = Tok::Var;
      while (pos_ < text_.size() && is_alnum(text_[pos_])) tok.text += advance();
      return tok;
    }
    if (std::islower(static_cast<unsigned char>(c))) {
      tok.kind = Tok::Atom;
      while (pos_ < text_.size() && is_alnum(text_[pos_])) tok.text += advance();
      return functor_check(tok);
    }
    if (c == '\'') {
      advance();
      tok.kind = Tok::Atom;
      tok.quoted = true;
      while (true) {
        if (pos_ >= text_.size()) throw ParseError("unterminated quoted atom", tok.line, tok.column);
        char d = advance();
        if (d == '\\') {
          if (pos_ >= text_.size()) throw ParseError("unterminated quoted atom", tok.line, tok.column);
          tok.text += advance();
          continue;
        }
        if (d == '\'') {
          if (pos_ < text_.size() && text_[pos_] == '\'') {
            tok.text += advance();
            continue;
          }
          break;
        }
        tok.text += d;
      }
      return functor_check(tok);
    }
    if (c == '"') throw UnsupportedConstruct("double-quoted string", tok.line, tok.column);
    if (c == '.' && end_follows(pos_ + 1)) {
      advance();
      tok.kind = Tok::End;
      return tok;
    }
    if (c == '(' || c == ')' || c == '[' || c == ']' || c == '|' || c == ',' || c == '{' || c == '}') {
      tok.kind = Tok::Punct;
      tok.text = std::string(1, advance());
      return tok;
    }
    if (c == '!' || c == ';') {
      tok.kind = Tok::Atom;
      tok.text = std::string(1, advance());
      return functor_check(tok);
    }
    if (is_symbol_char(c)) {
      tok.kind = Tok::Atom;
      while (pos_ < text_.size() && is_symbol_char(text_[pos_])) {
        if (text_[pos_] == '.' && end_follows(pos_ + 1)) break;
        tok.text += advance();
      }
      return functor_check(tok);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", tok.line, tok.column);
  }

 private:
  Token functor_check(Token tok) {
    if (pos_ < text_.size() && text_[pos_] == '(') tok.kind = Tok::FunctorOpen;
    return tok;
  }

  bool end_follows(std::size_t at) const {
    return at >= text_.size() || std::isspace(static_cast<unsigned char>(text_[at])) || text_[at] == '%';
  }

  char advance() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_layout() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        const std::size_t l = line_, col = column_;
        advance();
        advance();
        while (true) {
          if (pos_ + 1 >= text_.size()) throw ParseError("unterminated block comment", l, col);
          if (text_[pos_] == '*' && text_[pos_ + 1] == '/') {
            advance();
            advance();
            break;
          }
          advance();
        }
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

enum class Assoc { XFX, XFY, YFX, FY, FX };

struct OpDef {
  int priority;
  Assoc assoc;
};

const std::map<std::string, OpDef, std::less<>>& infix_ops() {
  static const std::map<std::string, OpDef, std::less<>> ops = {
      {":-", {1200, Assoc::XFX}},  {"-->", {1200, Assoc::XFX}}, {";", {1100, Assoc::XFY}},
      {"->", {1050, Assoc::XFY}},  {",", {1000, Assoc::XFY}},   {"=", {700, Assoc::XFX}},
      {"\\=", {700, Assoc::XFX}},  {"==", {700, Assoc::XFX}},   {"\\==", {700, Assoc::XFX}},
      {"is", {700, Assoc::XFX}},   {"<", {700, Assoc::XFX}},    {">", {700, Assoc::XFX}},
      {"=<", {700, Assoc::XFX}},   {">=", {700, Assoc::XFX}},   {"=:=", {700, Assoc::XFX}},
      {"=\\=", {700, Assoc::XFX}}, {"@<", {700, Assoc::XFX}},   {"@>", {700, Assoc::XFX}},
      {"@=<", {700, Assoc::XFX}},  {"@>=", {700, Assoc::XFX}},  {"=..", {700, Assoc::XFX}},
      {"+", {500, Assoc::YFX}},    {"-", {500, Assoc::YFX}},    {"*", {400, Assoc::YFX}},
      {"/", {400, Assoc::YFX}},    {"//", {400, Assoc::YFX}},   {"mod", {400, Assoc::YFX}},
      {"rem", {400, Assoc::YFX}},  {"**", {200, Assoc::XFX}},   {"^", {200, Assoc::XFY}},
  };
  return ops;
}

const std::map<std::string, OpDef, std::less<>>& prefix_ops() {
  static const std::map<std::string, OpDef, std::less<>> ops = {
      {":-", {1200, Assoc::FX}}, {"\\+", {900, Assoc::FY}}, {"-", {200, Assoc::FY}}, {"+", {200, Assoc::FY}},
  };
  return ops;
}

/// Variable scope of the clause being read.
class Scope {
 public:
  VarId lookup(const std::string& name, const Token& at) {
    if (name == "_") {
      const VarId id = fresh(at);
      anonymous_.push_back(id);
      names_.emplace_back();
      return id;
    }
    if (auto it = ids_.find(name); it != ids_.end()) return it->second;
    const VarId id = fresh(at);
    ids_.emplace(name, id);
    names_.push_back(name);
    return id;
  }

  /// Names anonymous variables so that they do not collide with named ones.
  VarNames finish() {
    std::set<std::string> used(names_.begin(), names_.end());
    std::size_t counter = 0;
    for (VarId id : anonymous_) {
      std::string candidate;
      do {
        candidate = "_" + std::to_string(++counter);
      } while (used.contains(candidate));
      used.insert(candidate);
      names_[id] = candidate;
    }
    return std::move(names_);
  }

 private:
  VarId fresh(const Token& at) {
    if (next_ >= kMaxVars) {
      throw UnsupportedConstruct("clause with more than " + std::to_string(kMaxVars) + " variables", at.line,
                                 at.column);
    }
    return next_++;
  }

  std::map<std::string, VarId> ids_;
  VarNames names_;
  std::vector<VarId> anonymous_;
  VarId next_ = 0;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lexer_{text} { advance(); }

  bool at_eof() const { return tok_.kind == Tok::Eof; }

  /// Reads one clause-level term terminated by '.'.
  std::pair<Term, Token> read_clause(Scope& scope) {
    scope_ = &scope;
    const Token start = tok_;
    Term t = parse(1200).first;
    if (tok_.kind != Tok::End) fail("expected '.' at end of clause");
    advance();
    return {std::move(t), start};
  }

 private:
  void advance() { tok_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, tok_.line, tok_.column); }

  bool is_punct(const char* p) const { return tok_.kind == Tok::Punct && tok_.text == p; }

  void expect_punct(const char* p) {
    if (!is_punct(p)) fail(std::string("expected '") + p + "'");
    advance();
  }

  bool starts_term() const {
    switch (tok_.kind) {
      case Tok::Atom:
      case Tok::FunctorOpen:
      case Tok::Var:
      case Tok::Int:
        return true;
      case Tok::Punct:
        return tok_.text == "(" || tok_.text == "[" || tok_.text == "{";
      default:
        return false;
    }
  }

  /// The infix operator named by the current token, if any.
  std::optional<std::pair<std::string, OpDef>> current_infix() const {
    std::string name;
    if (tok_.kind == Tok::Atom && !tok_.quoted) {
      name = tok_.text;
    } else if (tok_.kind == Tok::Punct && (tok_.text == "," || tok_.text == "|")) {
      name = tok_.text == "|" ? ";" : ",";
    } else {
      return std::nullopt;
    }
    auto it = infix_ops().find(name);
    if (it == infix_ops().end()) return std::nullopt;
    return std::make_pair(name, it->second);
  }

  std::pair<Term, int> parse(int max_prec) {
    auto [left, left_prec] = parse_primary(max_prec);
    while (true) {
      auto op = current_infix();
      if (!op) break;
      const auto& [name, def] = *op;
      if (def.priority > max_prec) break;
      const int left_max = def.assoc == Assoc::YFX ? def.priority : def.priority - 1;
      const int right_max = def.assoc == Assoc::XFY ? def.priority : def.priority - 1;
      if (left_prec > left_max) break;
      advance();
      Term right = parse(right_max).first;
      std::vector<Term> args;
      args.push_back(std::move(left));
      args.push_back(std::move(right));
      left = Term::compound(name, std::move(args));
      left_prec = def.priority;
    }
    return {std::move(left), left_prec};
  }

  std::pair<Term, int> parse_primary(int max_prec) {
    const Token tok = tok_;
    switch (tok.kind) {
      case Tok::Int:
        advance();
        return {Term::atom(tok.text), 0};
      case Tok::Var:
        advance();
        return {Term::variable(scope_->lookup(tok.text, tok)), 0};
      case Tok::FunctorOpen: {
        advance();
        expect_punct("(");
        std::vector<Term> args;
        args.push_back(parse(999).first);
        while (is_punct(",")) {
          advance();
          args.push_back(parse(999).first);
        }
        expect_punct(")");
        return {Term::compound(tok.text, std::move(args)), 0};
      }
      case Tok::Atom: {
        advance();
        if (!tok.quoted) {
          if (tok.text == "-" && tok_.kind == Tok::Int && tok_.line == tok.line &&
              tok_.column == tok.column + 1) {
            Token num = tok_;
            advance();
            return {Term::atom("-" + num.text), 0};
          }
          if (auto it = prefix_ops().find(tok.text); it != prefix_ops().end() && starts_term() &&
                                                     current_infix_is_not_operand()) {
            const OpDef def = it->second;
            const int prec = std::min(def.priority, std::max(max_prec, 200));
            const int arg_max = def.assoc == Assoc::FY ? prec : prec - 1;
            Term arg = parse(arg_max).first;
            return {Term::compound(tok.text, {std::move(arg)}), prec};
          }
        }
        return {Term::atom(tok.text), 0};
      }
      case Tok::Punct:
        if (tok.text == "(") {
          advance();
          Term inner = parse(1200).first;
          expect_punct(")");
          return {std::move(inner), 0};
        }
        if (tok.text == "[") {
          advance();
          if (is_punct("]")) {
            advance();
            return {Term::atom("[]"), 0};
          }
          return {parse_list_tail(), 0};
        }
        if (tok.text == "{") throw UnsupportedConstruct("curly-brace term", tok.line, tok.column);
        fail("unexpected '" + tok.text + "'");
      case Tok::Str:
      case Tok::End:
        fail("unexpected end of clause");
      case Tok::Eof:
        fail("unexpected end of input");
    }
    fail("unexpected token");
  }

  /// A prefix operator followed by an infix operator is read as an atom operand.
  bool current_infix_is_not_operand() const {
    if (tok_.kind == Tok::Atom && !tok_.quoted) {
      return !infix_ops().contains(tok_.text) || prefix_ops().contains(tok_.text);
    }
    return true;
  }

  Term parse_list_tail() {
    std::vector<Term> items;
    items.push_back(parse(999).first);
    while (is_punct(",")) {
      advance();
      items.push_back(parse(999).first);
    }
    Term tail = Term::atom("[]");
    if (is_punct("|")) {
      advance();
      tail = parse(999).first;
    }
    expect_punct("]");
    for (auto it = items.rbegin(); it != items.rend(); ++it) {
      tail = Term::compound(".", {std::move(*it), std::move(tail)});
    }
    return tail;
  }

  Lexer lexer_;
  Token tok_;
  Scope* scope_ = nullptr;
};

bool is_callable(const Term& t) { return t.is_compound() || (t.is_atomic() && !std::isdigit(static_cast<unsigned char>(t.functor()[0])) && t.functor()[0] != '-'); }

void flatten_body(const Term& t, std::vector<Term>& out, const Token& at) {
  if (t.is_compound() && t.arity() == 2 && t.functor() == ",") {
    flatten_body(t.args()[0], out, at);
    flatten_body(t.args()[1], out, at);
    return;
  }
  if (t.is_variable()) throw UnsupportedConstruct("variable goal (meta-call)", at.line, at.column);
  if (t.is_compound() && t.arity() == 2 && (t.functor() == ";" || t.functor() == "->")) {
    throw UnsupportedConstruct(t.functor() == ";" ? "disjunction ';'/2" : "if-then-else '->'/2", at.line,
                               at.column);
  }
  if (!is_callable(t)) throw ParseError("goal is not callable", at.line, at.column);
  out.push_back(t);
}

}  // namespace

Program parse_program(std::string_view text) {
  Program program;
  Parser parser{text};
  while (!parser.at_eof()) {
    Scope scope;
    auto [term, at] = parser.read_clause(scope);
    VarNames names = scope.finish();
    if (term.is_compound() && term.functor() == ":-" && term.arity() == 1) {
      const Term& directive = term.args()[0];
      if (directive.is_compound() && directive.functor() == "entry" && directive.arity() == 1) {
        const Term& goal = directive.args()[0];
        if (!is_callable(goal)) throw ParseError("entry goal is not callable", at.line, at.column);
        program.entries.push_back({goal, std::move(names)});
        continue;
      }
      const std::string what = directive.is_variable()
                                   ? std::string("variable")
                                   : directive.functor() + "/" + std::to_string(directive.arity());
      throw UnsupportedConstruct("directive " + what, at.line, at.column);
    }
    if (term.is_compound() && term.functor() == "-->" && term.arity() == 2) {
      throw UnsupportedConstruct("grammar rule '-->'/2", at.line, at.column);
    }
    Clause clause;
    clause.line = at.line;
    if (term.is_compound() && term.functor() == ":-" && term.arity() == 2) {
      clause.head = term.args()[0];
      flatten_body(term.args()[1], clause.body, at);
    } else {
      clause.head = std::move(term);
    }
    if (!is_callable(clause.head)) throw ParseError("clause head is not callable", at.line, at.column);
    clause.names = std::move(names);
    program.clauses.push_back(std::move(clause));
  }
  return program;
}

std::vector<EntryGoal> parse_goals(std::string_view text) {
  std::vector<EntryGoal> goals;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line{text.substr(start, end - start)};
    ++line_no;
    start = end + 1;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(0, last + 1);
    if (line.back() != '.') line += '.';
    try {
      Program p = parse_program(":- entry(" + line.substr(0, line.size() - 1) + ").");
      for (auto& e : p.entries) goals.push_back(std::move(e));
    } catch (const ParseError& e) {
      throw ParseError(std::string("in goal: ") + e.what(), line_no, e.column());
    }
  }
  return goals;
}

std::string to_string(const Program& program) {
  std::ostringstream out;
  for (const EntryGoal& e : program.entries) out << ":- entry(" << to_string(e.goal, e.names) << ").\n";
  for (const Clause& c : program.clauses) {
    out << to_string(c.head, c.names);
    for (std::size_t i = 0; i < c.body.size(); ++i) {
      out << (i == 0 ? " :- " : ", ") << to_string(c.body[i], c.names);
    }
    out << ".\n";
  }
  return out.str();
}

}  // namespace sharing
