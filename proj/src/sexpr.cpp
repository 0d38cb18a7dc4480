#include "ubsolve/sexpr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace ubsolve {

namespace {

bool is_ident_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' &&
         c != ')' && c != ';';
}

bool is_natural(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

bool is_reserved(const std::string& s) {
  return s == "var" || s == "+" || s == "*" || s == "max" || s == ">=";
}

struct Token {
  enum Kind { LParen, RParen, Atom, End } kind;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_ws();
    SourceSpan span{pos_, pos_, line_, col_};
    if (pos_ >= text_.size()) return {Token::End, "", span};
    char c = text_[pos_];
    if (c == '(') {
      advance();
      span.end = pos_;
      return {Token::LParen, "(", span};
    }
    if (c == ')') {
      advance();
      span.end = pos_;
      return {Token::RParen, ")", span};
    }
    std::string atom;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) {
      atom += text_[pos_];
      advance();
    }
    span.end = pos_;
    return {Token::Atom, atom, span};
  }

  Token peek() {
    auto save_pos = pos_;
    auto save_line = line_;
    auto save_col = col_;
    Token t = next();
    pos_ = save_pos;
    line_ = save_line;
    col_ = save_col;
    return t;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  unsigned line_ = 1;
  unsigned col_ = 1;
};

class SystemParser {
 public:
  explicit SystemParser(const std::string& text) : lex_(text) {}

  ConstraintSystem parse() {
    std::vector<Constraint> out;
    for (;;) {
      Token t = lex_.peek();
      if (t.kind == Token::End) break;
      out.push_back(parse_constraint());
    }
    return ConstraintSystem(std::move(out));
  }

  TermPtr parse_term() {
    Token t = lex_.next();
    if (t.kind == Token::End)
      throw ParseError(t.span, "unexpected end of input, expected term");
    if (t.kind == Token::RParen)
      throw ParseError(t.span, "unexpected ')'");
    if (t.kind == Token::Atom) {
      if (is_natural(t.text)) return Term::constant(Nat(t.text));
      // A bare identifier in term position is ambiguous with a variable.
      throw ParseError(t.span, "bare identifier '" + t.text +
                                   "' in term position; write (var " + t.text +
                                   ") or (" + t.text + ")");
    }
    // LParen
    Token head = lex_.next();
    if (head.kind != Token::Atom)
      throw ParseError(head.span, "expected operator or symbol after '('");
    if (head.text == "var") {
      Token name = lex_.next();
      if (name.kind != Token::Atom || is_natural(name.text) ||
          is_reserved(name.text))
        throw ParseError(name.span, "'var' requires an identifier argument");
      expect_rparen();
      return Term::var(name.text);
    }
    if (head.text == "+" || head.text == "*" || head.text == "max") {
      BinOp op = head.text == "+"   ? BinOp::Plus
                 : head.text == "*" ? BinOp::Mul
                                    : BinOp::Max;
      std::vector<TermPtr> args = parse_args();
      if (args.size() < 2)
        throw ParseError(head.span,
                         "'" + head.text + "' needs at least two arguments");
      TermPtr acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i)
        acc = Term::bin(op, acc, args[i]);
      return acc;
    }
    if (is_natural(head.text) || is_reserved(head.text))
      throw ParseError(head.span,
                       "'" + head.text + "' cannot be used as a symbol");
    std::vector<TermPtr> args = parse_args();
    unsigned arity = static_cast<unsigned>(args.size());
    auto [it, fresh] = arities_.emplace(head.text, arity);
    if (!fresh && it->second != arity)
      throw ParseError(head.span, "symbol " + head.text + " used with arity " +
                                      std::to_string(arity) +
                                      " but previously " +
                                      std::to_string(it->second));
    return Term::app(Symbol{head.text, it->second}, std::move(args));
  }

 private:
  Constraint parse_constraint() {
    Token t = lex_.next();
    if (t.kind != Token::LParen)
      throw ParseError(t.span, "expected '(' starting a constraint");
    Token ge = lex_.next();
    if (ge.kind != Token::Atom || ge.text != ">=")
      throw ParseError(ge.span, "expected '>=' after '('");
    TermPtr lhs = parse_term();
    TermPtr rhs = parse_term();
    expect_rparen();
    return {std::move(lhs), std::move(rhs)};
  }

  std::vector<TermPtr> parse_args() {
    std::vector<TermPtr> args;
    for (;;) {
      Token t = lex_.peek();
      if (t.kind == Token::RParen) {
        lex_.next();
        return args;
      }
      if (t.kind == Token::End)
        throw ParseError(t.span, "unexpected end of input, expected ')'");
      args.push_back(parse_term());
    }
  }

  void expect_rparen() {
    Token t = lex_.next();
    if (t.kind != Token::RParen)
      throw ParseError(t.span, "expected ')'");
  }

  Lexer lex_;
  std::map<std::string, unsigned> arities_;
};

void print_term_to(std::ostream& os, const TermPtr& t) {
  const auto& node = t->node();
  if (auto* v = std::get_if<Term::Var>(&node)) {
    os << "(var " << v->name << ")";
  } else if (auto* c = std::get_if<Term::Const>(&node)) {
    os << nat_str(c->value);
  } else if (auto* b = std::get_if<Term::Bin>(&node)) {
    const char* op = b->op == BinOp::Plus ? "+" : b->op == BinOp::Mul ? "*" : "max";
    os << "(" << op << " ";
    print_term_to(os, b->left);
    os << " ";
    print_term_to(os, b->right);
    os << ")";
  } else {
    auto& app = std::get<Term::App>(node);
    os << "(" << app.symbol.name;
    for (auto& a : app.args) {
      os << " ";
      print_term_to(os, a);
    }
    os << ")";
  }
}

std::vector<std::string> positional_vars(unsigned arity) {
  std::vector<std::string> vs;
  for (unsigned i = 0; i < arity; ++i) vs.push_back("x" + std::to_string(i));
  return vs;
}

void print_monomial_human(std::ostream& os, const Monomial& m, const Nat& c,
                          const std::vector<std::string>& vars) {
  bool printed = false;
  if (c != 1 || m.exps.empty()) {
    os << nat_str(c);
    printed = true;
  }
  for (auto& [pos, e] : m.exps)
    for (unsigned i = 0; i < e; ++i) {
      if (printed) os << "*";
      os << vars[pos];
      printed = true;
    }
}

void print_branch_human(std::ostream& os, const NatPoly& p,
                        const std::vector<std::string>& vars) {
  if (p.terms.empty()) {
    os << "0";
    return;
  }
  bool first = true;
  for (auto& [m, c] : p.terms) {
    if (!first) os << " + ";
    print_monomial_human(os, m, c, vars);
    first = false;
  }
}

TermPtr monomial_term(const Monomial& m, const Nat& c,
                      const std::vector<std::string>& vars) {
  TermPtr acc;
  if (c != 1 || m.exps.empty()) acc = Term::constant(c);
  for (auto& [pos, e] : m.exps)
    for (unsigned i = 0; i < e; ++i) {
      TermPtr v = Term::var(vars[pos]);
      acc = acc ? Term::bin(BinOp::Mul, acc, v) : v;
    }
  return acc;
}

TermPtr branch_term(const NatPoly& p, const std::vector<std::string>& vars) {
  TermPtr acc;
  for (auto& [m, c] : p.terms) {
    TermPtr t = monomial_term(m, c, vars);
    acc = acc ? Term::bin(BinOp::Plus, acc, t) : t;
  }
  return acc ? acc : Term::constant(0);
}

TermPtr maxpoly_term(const MaxPolynomial& mp,
                     const std::vector<std::string>& vars) {
  TermPtr acc;
  for (auto& b : mp.branches) {
    TermPtr t = branch_term(b, vars);
    acc = acc ? Term::bin(BinOp::Max, acc, t) : t;
  }
  return acc;
}

// ---- human-style model parsing ----

class HumanExprParser {
 public:
  HumanExprParser(const std::string& line, std::size_t pos, unsigned lineno)
      : s_(line), pos_(pos), lineno_(lineno) {}

  TermPtr parse() {
    TermPtr t = parse_sum();
    skip_ws();
    if (pos_ < s_.size()) fail("trailing input '" + s_.substr(pos_) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError({pos_, pos_, lineno_, static_cast<unsigned>(pos_ + 1)},
                     msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() &&
           std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  TermPtr parse_sum() {
    TermPtr acc = parse_product();
    for (;;) {
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '-')
        fail("subtraction is not in the model grammar");
      if (!eat('+')) return acc;
      acc = Term::bin(BinOp::Plus, acc, parse_product());
    }
  }

  TermPtr parse_product() {
    TermPtr acc = parse_atom();
    while (eat('*')) acc = Term::bin(BinOp::Mul, acc, parse_atom());
    return acc;
  }

  TermPtr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      TermPtr t = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return t;
    }
    if (c == '-') fail("subtraction is not in the model grammar");
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < s_.size() &&
             std::isdigit(static_cast<unsigned char>(s_[pos_])))
        num += s_[pos_++];
      return Term::constant(Nat(num));
    }
    std::string ident;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
            s_[pos_] == '_' || s_[pos_] == '\''))
      ident += s_[pos_++];
    if (ident.empty()) fail(std::string("unexpected character '") + c + "'");
    if (ident == "max") {
      if (!eat('(')) fail("expected '(' after max");
      TermPtr acc = parse_sum();
      while (eat(',')) acc = Term::bin(BinOp::Max, acc, parse_sum());
      if (!eat(')')) fail("expected ')'");
      return acc;
    }
    return Term::var(ident);
  }

  const std::string& s_;
  std::size_t pos_;
  unsigned lineno_;
};

MaxPolynomial term_to_maxpoly(const TermPtr& t,
                              const std::vector<std::string>& vars,
                              unsigned lineno) {
  try {
    return interpret_term(t, Interpretation{}, vars);
  } catch (const EvalError& e) {
    throw ParseError({0, 0, lineno, 1}, e.what());
  }
}

Interpretation parse_model_human(const std::string& text) {
  Interpretation interp;
  std::istringstream in(text);
  std::string line;
  unsigned lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto sc = line.find(';'); sc != std::string::npos) line.resize(sc);
    std::size_t pos = 0;
    auto skip_ws = [&] {
      while (pos < line.size() &&
             std::isspace(static_cast<unsigned char>(line[pos])))
        ++pos;
    };
    skip_ws();
    if (pos >= line.size()) continue;
    std::string name;
    while (pos < line.size() && line[pos] != '(' && line[pos] != '=' &&
           !std::isspace(static_cast<unsigned char>(line[pos])))
      name += line[pos++];
    if (name.empty())
      throw ParseError({pos, pos, lineno, 1}, "expected symbol name");
    std::vector<std::string> vars;
    skip_ws();
    if (pos < line.size() && line[pos] == '(') {
      ++pos;
      std::string v;
      for (;;) {
        if (pos >= line.size())
          throw ParseError({pos, pos, lineno, 1}, "unterminated argument list");
        char c = line[pos];
        if (c == ',' || c == ')') {
          if (v.empty())
            throw ParseError({pos, pos, lineno, 1}, "empty argument name");
          vars.push_back(v);
          v.clear();
          ++pos;
          if (c == ')') break;
        } else if (!std::isspace(static_cast<unsigned char>(c))) {
          v += c;
          ++pos;
        } else {
          ++pos;
        }
      }
      skip_ws();
    }
    if (pos >= line.size() || line[pos] != '=')
      throw ParseError({pos, pos, lineno, 1}, "expected '='");
    ++pos;
    HumanExprParser expr(line, pos, lineno);
    TermPtr t = expr.parse();
    for (auto& v : variables_of(t))
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        throw ParseError({0, 0, lineno, 1},
                         "unknown variable '" + v + "' in definition of " +
                             name);
    MaxPolynomial mp = term_to_maxpoly(t, vars, lineno);
    interp.set(Symbol{name, static_cast<unsigned>(vars.size())},
               std::move(mp));
  }
  return interp;
}

TermPtr parse_entry_term(Lexer& lex);

Interpretation parse_model_sexpr(const std::string& text) {
  Lexer lex(text);
  auto expect = [&](Token::Kind k, const char* what) {
    Token t = lex.next();
    if (t.kind != k) throw ParseError(t.span, std::string("expected ") + what);
    return t;
  };
  expect(Token::LParen, "'('");
  Token head = expect(Token::Atom, "'model'");
  if (head.text != "model")
    throw ParseError(head.span, "expected 'model', got '" + head.text + "'");
  Interpretation interp;
  for (;;) {
    Token t = lex.next();
    if (t.kind == Token::RParen) break;
    if (t.kind != Token::LParen)
      throw ParseError(t.span, "expected '(' starting a model entry");
    Token name = expect(Token::Atom, "symbol name");
    if (is_natural(name.text) || is_reserved(name.text))
      throw ParseError(name.span,
                       "'" + name.text + "' cannot be used as a symbol");
    expect(Token::LParen, "'(vars ...)'");
    Token vkw = expect(Token::Atom, "'vars'");
    if (vkw.text != "vars") throw ParseError(vkw.span, "expected 'vars'");
    std::vector<std::string> vars;
    for (;;) {
      Token v = lex.next();
      if (v.kind == Token::RParen) break;
      if (v.kind != Token::Atom || is_natural(v.text) || is_reserved(v.text))
        throw ParseError(v.span, "expected variable identifier");
      vars.push_back(v.text);
    }
    TermPtr term = parse_entry_term(lex);
    expect(Token::RParen, "')'");
    if (!symbols_of(term).empty())
      throw ParseError(name.span,
                       "model entry for " + name.text +
                           " contains a function application");
    for (auto& v : variables_of(term))
      if (std::find(vars.begin(), vars.end(), v) == vars.end())
        throw ParseError(name.span, "unknown variable '" + v +
                                        "' in entry for " + name.text);
    MaxPolynomial mp = interpret_term(term, Interpretation{}, vars);
    interp.set(Symbol{name.text, static_cast<unsigned>(vars.size())},
               std::move(mp));
  }
  Token end = lex.next();
  if (end.kind != Token::End)
    throw ParseError(end.span, "trailing input after model");
  return interp;
}

TermPtr parse_entry_term_inner(Lexer& lex) {
  Token t = lex.next();
  if (t.kind == Token::Atom) {
    if (is_natural(t.text)) return Term::constant(Nat(t.text));
    throw ParseError(t.span, "bare identifier '" + t.text +
                                 "' in term position");
  }
  if (t.kind != Token::LParen) throw ParseError(t.span, "expected term");
  Token head = lex.next();
  if (head.kind != Token::Atom)
    throw ParseError(head.span, "expected operator after '('");
  if (head.text == "var") {
    Token name = lex.next();
    if (name.kind != Token::Atom || is_natural(name.text) ||
        is_reserved(name.text))
      throw ParseError(name.span, "'var' requires an identifier argument");
    Token rp = lex.next();
    if (rp.kind != Token::RParen) throw ParseError(rp.span, "expected ')'");
    return Term::var(name.text);
  }
  if (head.text == "+" || head.text == "*" || head.text == "max") {
    BinOp op = head.text == "+"   ? BinOp::Plus
               : head.text == "*" ? BinOp::Mul
                                  : BinOp::Max;
    std::vector<TermPtr> args;
    for (;;) {
      Token p = lex.peek();
      if (p.kind == Token::RParen) {
        lex.next();
        break;
      }
      if (p.kind == Token::End)
        throw ParseError(p.span, "unexpected end of input");
      args.push_back(parse_entry_term_inner(lex));
    }
    if (args.size() < 2)
      throw ParseError(head.span,
                       "'" + head.text + "' needs at least two arguments");
    TermPtr acc = args[0];
    for (std::size_t i = 1; i < args.size(); ++i)
      acc = Term::bin(op, acc, args[i]);
    return acc;
  }
  throw ParseError(head.span, "function application '" + head.text +
                                  "' not allowed in model terms");
}

TermPtr parse_entry_term(Lexer& lex) { return parse_entry_term_inner(lex); }

}  // namespace

ConstraintSystem parse_system(const std::string& text) {
  return SystemParser(text).parse();
}

std::string print_term(const TermPtr& term) {
  std::ostringstream os;
  print_term_to(os, term);
  return os.str();
}

std::string print_system(const ConstraintSystem& cs) {
  std::ostringstream os;
  for (auto& c : cs.constraints()) {
    os << "(>= ";
    print_term_to(os, c.lhs);
    os << " ";
    print_term_to(os, c.rhs);
    os << ")\n";
  }
  return os.str();
}

std::string print_model(const Interpretation& interp, ModelStyle style) {
  std::ostringstream os;
  if (style == ModelStyle::Human) {
    for (auto& [name, entry] : interp.entries()) {
      auto& [sym, mp] = entry;
      auto vars = positional_vars(sym.arity);
      os << name;
      if (sym.arity > 0) {
        os << "(";
        for (unsigned i = 0; i < sym.arity; ++i)
          os << (i ? "," : "") << vars[i];
        os << ")";
      }
      os << " = ";
      if (mp.branches.size() > 1) {
        os << "max(";
        bool first = true;
        for (auto& b : mp.branches) {
          if (!first) os << ", ";
          print_branch_human(os, b, vars);
          first = false;
        }
        os << ")";
      } else {
        print_branch_human(os, mp.branches.front(), vars);
      }
      os << "\n";
    }
    return os.str();
  }
  os << "(model";
  for (auto& [name, entry] : interp.entries()) {
    auto& [sym, mp] = entry;
    auto vars = positional_vars(sym.arity);
    os << "\n  (" << name << " (vars";
    for (auto& v : vars) os << " " << v;
    os << ") ";
    print_term_to(os, maxpoly_term(mp, vars));
    os << ")";
  }
  os << ")\n";
  return os.str();
}

Interpretation parse_model(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      return c == '(' ? parse_model_sexpr(text) : parse_model_human(text);
    }
  }
  return Interpretation{};
}

}  // namespace ubsolve
