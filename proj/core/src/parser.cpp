#include <cctype>
#include <optional>

#include "cl12/syntax.hpp"

namespace cl12 {

namespace {

enum class Tok {
  Ident,
  Numeral,
  Not,
  ParAnd,
  ParOr,
  ChoAnd,
  ChoOr,
  Arrow,
  Eq,
  Neq,
  Bang,
  Query,
  LParen,
  RParen,
  Comma,
  Colon,
  Turnstile,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(s.substr(i, len)), i});
    i += len;
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    auto starts = [&](std::string_view p) { return s.substr(i, p.size()) == p; };
    if (starts("||-")) push(Tok::Turnstile, 3);
    else if (starts("/\\")) push(Tok::ParAnd, 2);
    else if (starts("\\/")) push(Tok::ParOr, 2);
    else if (starts("->")) push(Tok::Arrow, 2);
    else if (starts("!=")) push(Tok::Neq, 2);
    else if (c == '~') push(Tok::Not, 1);
    else if (c == '&') push(Tok::ChoAnd, 1);
    else if (c == '|') push(Tok::ChoOr, 1);
    else if (c == '=') push(Tok::Eq, 1);
    else if (c == '!') push(Tok::Bang, 1);
    else if (c == '?') push(Tok::Query, 1);
    else if (c == '(') push(Tok::LParen, 1);
    else if (c == ')') push(Tok::RParen, 1);
    else if (c == ',') push(Tok::Comma, 1);
    else if (c == ':') push(Tok::Colon, 1);
    else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (!is_numeral(s.substr(i, j - i)))
        throw ParseError("constants are binary numerals without leading zeros", i);
      push(Tok::Numeral, j - i);
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      push(Tok::Ident, j - i);
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

bool is_keyword(const std::string& s) { return s == "A" || s == "E" || s == "T" || s == "F"; }

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(lex(text)) {}

  Sequent sequent() {
    Sequent s;
    if (peek().kind != Tok::Turnstile) {
      s.antecedent.push_back(formula());
      while (peek().kind == Tok::Comma) {
        next();
        s.antecedent.push_back(formula());
      }
    }
    expect(Tok::Turnstile, "expected '||-'");
    s.succedent = formula();
    expect(Tok::End, "unexpected trailing input");
    return s;
  }

  Formula whole_formula() {
    Formula f = formula();
    expect(Tok::End, "unexpected trailing input");
    return f;
  }

  bool has_turnstile() const {
    for (const auto& t : toks_)
      if (t.kind == Tok::Turnstile) return true;
    return false;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, std::size_t> fn_arity_, pred_arity_;

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, peek().offset); }
  void expect(Tok k, const char* msg) {
    if (peek().kind != k) fail(msg);
    next();
  }

  Formula formula() {
    Formula lhs = or_level();
    if (peek().kind == Tok::Arrow) {
      next();
      Formula rhs = formula();
      return Formula::binary(Op::ParOr, negate(lhs), rhs);
    }
    return lhs;
  }

  Formula chain(Tok a, Op opa, Tok b, Op opb, Formula (Parser::*sub)()) {
    std::vector<Formula> parts{(this->*sub)()};
    std::optional<Tok> used;
    while (peek().kind == a || peek().kind == b) {
      if (used && *used != peek().kind)
        fail("mixing parallel and choice operators needs parentheses");
      used = peek().kind;
      next();
      parts.push_back((this->*sub)());
    }
    if (!used) return parts[0];
    Op op = *used == a ? opa : opb;
    Formula acc = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) acc = Formula::binary(op, parts[i], acc);
    return acc;
  }

  Formula or_level() { return chain(Tok::ParOr, Op::ParOr, Tok::ChoOr, Op::ChoOr, &Parser::and_level); }
  Formula and_level() { return chain(Tok::ParAnd, Op::ParAnd, Tok::ChoAnd, Op::ChoAnd, &Parser::unary); }

  static bool starts_unary_without_paren(Tok k) {
    return k == Tok::Ident || k == Tok::Numeral || k == Tok::Not || k == Tok::Bang ||
           k == Tok::Query;
  }

  Formula quantified(Op op) {
    if (peek().kind != Tok::Ident || is_keyword(peek().text)) fail("expected a variable after quantifier");
    std::string var = next().text;
    return quantified_body(op, std::move(var));
  }

  Formula quantified_body(Op op, std::string var) {
    if (peek().kind == Tok::Colon) next();
    return Formula::quantifier(op, std::move(var), unary());
  }

  Formula unary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Not:
        next();
        return negate(unary());
      case Tok::Bang:
        next();
        return quantified(Op::ChoAll);
      case Tok::Query:
        next();
        return quantified(Op::ChoEx);
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen, "expected ')'");
        return f;
      }
      case Tok::Ident: {
        if (t.text == "T") { next(); return Formula::top(); }
        if (t.text == "F") { next(); return Formula::bottom(); }
        if (t.text == "A" || t.text == "E") {
          Op op = t.text == "A" ? Op::BlindAll : Op::BlindEx;
          next();
          return quantified(op);
        }
        // Glued blind quantifier such as "Ax: p(x)" or "Ax p(x)".
        if (t.text.size() > 1 && (t.text[0] == 'A' || t.text[0] == 'E') &&
            std::islower(static_cast<unsigned char>(t.text[1]))) {
          Tok after = peek(1).kind;
          if (after == Tok::Colon || starts_unary_without_paren(after)) {
            Op op = t.text[0] == 'A' ? Op::BlindAll : Op::BlindEx;
            std::string var = next().text.substr(1);
            return quantified_body(op, std::move(var));
          }
        }
        return atom();
      }
      case Tok::Numeral:
        return atom();
      default:
        fail("expected a formula");
    }
  }

  void note_arity(std::map<std::string, std::size_t>& table, const std::map<std::string, std::size_t>& other,
                  const std::string& name, std::size_t arity, std::size_t offset) {
    if (other.count(name)) throw ArityError("'" + name + "' used both as predicate and function", offset);
    auto [it, inserted] = table.emplace(name, arity);
    if (!inserted && it->second != arity)
      throw ArityError("'" + name + "' used with arity " + std::to_string(arity) + " and " +
                           std::to_string(it->second),
                       offset);
  }

  std::vector<Term> arg_list() {
    std::vector<Term> args;
    expect(Tok::LParen, "expected '('");
    args.push_back(term());
    while (peek().kind == Tok::Comma) {
      next();
      args.push_back(term());
    }
    expect(Tok::RParen, "expected ')'");
    return args;
  }

  Term term() {
    const Token& t = peek();
    if (t.kind == Tok::Numeral) return Term::constant(next().text);
    if (t.kind != Tok::Ident || is_keyword(t.text)) fail("expected a term");
    std::size_t off = t.offset;
    std::string name = next().text;
    if (peek().kind != Tok::LParen) return Term::variable(std::move(name));
    auto args = arg_list();
    note_arity(fn_arity_, pred_arity_, name, args.size(), off);
    return Term::application(std::move(name), std::move(args));
  }

  Formula equality_rest(Term lhs) {
    bool neg = peek().kind == Tok::Neq;
    next();
    return Formula::equality(std::move(lhs), term(), neg);
  }

  Formula atom() {
    const Token& t = peek();
    if (t.kind == Tok::Numeral) {
      Term lhs = term();
      if (peek().kind != Tok::Eq && peek().kind != Tok::Neq) fail("expected '=' or '!='");
      return equality_rest(std::move(lhs));
    }
    std::size_t off = t.offset;
    std::string name = next().text;
    std::vector<Term> args;
    if (peek().kind == Tok::LParen) args = arg_list();
    if (peek().kind == Tok::Eq || peek().kind == Tok::Neq) {
      Term lhs = args.empty() ? Term::variable(name) : Term::application(name, args);
      if (!args.empty()) note_arity(fn_arity_, pred_arity_, name, args.size(), off);
      return equality_rest(std::move(lhs));
    }
    note_arity(pred_arity_, fn_arity_, name, args.size(), off);
    return Formula::atom(std::move(name), std::move(args));
  }
};

// Rename bound variables that clash with free variables of the whole unit.
Formula rename_apart(const Formula& f, const std::set<std::string>& clash, std::set<std::string>& taken) {
  if (is_quantifier(f.op())) {
    Formula body = rename_apart(f.body(), clash, taken);
    if (!clash.count(f.name())) return Formula::quantifier(f.op(), f.name(), body);
    std::string fresh = fresh_name(taken, f.name());
    taken.insert(fresh);
    return Formula::quantifier(f.op(), fresh, substitute(body, f.name(), Term::variable(fresh)));
  }
  if (is_binary(f.op()))
    return Formula::binary(f.op(), rename_apart(f.left(), clash, taken), rename_apart(f.right(), clash, taken));
  return f;
}

Sequent rename_apart(Sequent s) {
  auto fv = free_vars(s);
  auto taken = all_vars(s);
  bool clash = false;
  for (const auto& b : bound_vars(s)) clash = clash || fv.count(b);
  if (!clash) return s;
  for (auto& g : s.antecedent) g = rename_apart(g, fv, taken);
  s.succedent = rename_apart(s.succedent, fv, taken);
  return s;
}

}  // namespace

Formula parse_formula(std::string_view text) {
  Parser p(text);
  Sequent s;
  s.succedent = p.whole_formula();
  return rename_apart(std::move(s)).succedent;
}

Sequent parse_sequent(std::string_view text) {
  Parser p(text);
  return rename_apart(p.sequent());
}

Sequent parse_sequent_or_formula(std::string_view text) {
  Parser probe(text);
  if (probe.has_turnstile()) return parse_sequent(text);
  Sequent s;
  s.succedent = parse_formula(text);
  return s;
}

}  // namespace cl12
