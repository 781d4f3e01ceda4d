#include "multival/locsent.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "multival/approx.hpp"
#include "multival/error.hpp"
#include "multival/random.hpp"

namespace multival {

// ---------------------------------------------------------------------------
// Lexing

namespace {

struct Token {
  enum class Kind { Ident, Int, Sym, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1, column = 1;
};

bool is_keyword(std::string_view s) {
  return s == "forall" || s == "exists" || s == "in" || s == "and" || s == "or" || s == "not";
}

bool is_topology_name(std::string_view s) {
  if (s.substr(0, 3) != "tau") return false;
  return std::all_of(s.begin() + 3, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

bool is_upper(std::string_view s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  int line = 1, column = 1;
  std::size_t pos = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t j = 0; j < n; ++j, ++pos) {
      if (text[pos] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };
  while (pos < text.size()) {
    char c = text[pos];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (pos < text.size() && text[pos] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.line = line;
    tok.column = column;
    std::size_t len = 1;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos + len < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[pos + len])) || text[pos + len] == '_')) {
        ++len;
      }
      tok.kind = Token::Kind::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (pos + len < text.size() && std::isdigit(static_cast<unsigned char>(text[pos + len]))) ++len;
      tok.kind = Token::Kind::Int;
    } else if (text.substr(pos, 2) == "!=" || text.substr(pos, 2) == "->") {
      len = 2;
      tok.kind = Token::Kind::Sym;
    } else if (std::string_view("()+-*/=:").find(c) != std::string_view::npos) {
      tok.kind = Token::Kind::Sym;
    } else {
      throw SyntaxError(line, column, std::string("unexpected character '") + c + "'");
    }
    tok.text = std::string(text.substr(pos, len));
    out.push_back(tok);
    advance(len);
  }
  Token end;
  end.line = line;
  end.column = column;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  FormulaPtr sentence() {
    FormulaPtr f = formula();
    if (peek().kind != Token::Kind::End) fail(peek(), "unexpected '" + peek().text + "' after the sentence");
    return f;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at(std::string_view text) const { return peek().kind != Token::Kind::End && peek().text == text; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] static void fail(const Token& t, const std::string& message) {
    throw SyntaxError(t.line, t.column, message);
  }

  void expect(std::string_view text) {
    if (!at(text)) fail(peek(), "expected '" + std::string(text) + "'" + found());
    next();
  }

  std::string found() const {
    return peek().kind == Token::Kind::End ? " at end of input" : ", found '" + peek().text + "'";
  }

  static std::shared_ptr<Formula> node(Formula::Op op, const Token& at) {
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->line = at.line;
    f->column = at.column;
    return f;
  }

  FormulaPtr formula() {
    if (at("forall") || at("exists")) return quantified();
    return implication();
  }

  FormulaPtr quantified() {
    const Token& q = next();
    auto f = node(q.text == "forall" ? Formula::Op::Forall : Formula::Op::Exists, q);
    const Token& name = peek();
    if (name.kind != Token::Kind::Ident || is_keyword(name.text) || name.text == "i" || is_topology_name(name.text)) {
      fail(name, "expected a variable after '" + q.text + "'" + found());
    }
    next();
    if (std::find(scope_.begin(), scope_.end(), name.text) != scope_.end()) {
      fail(name, "variable '" + name.text + "' is already bound");
    }
    f->var = name.text;
    f->neighborhood = is_upper(name.text);
    if (at("!=")) {
      if (f->neighborhood) fail(peek(), "neighborhood variables take no '!= 0' guard");
      next();
      if (peek().kind != Token::Kind::Int || peek().text != "0") fail(peek(), "expected '0' after '!='" + found());
      next();
      f->nonzero = true;
    }
    if (at("in")) {
      if (!f->neighborhood) fail(peek(), "field variables range over the field; 'in' is for neighborhood variables");
      next();
      if (peek().kind != Token::Kind::Ident || !is_topology_name(peek().text)) fail(peek(), "expected tau or tauN" + found());
      std::string digits = next().text.substr(3);
      f->topology = digits.empty() ? 0 : std::stoi(digits);
    }
    if (at(":")) next();
    scope_.push_back(f->var);
    f->body = formula();
    scope_.pop_back();
    return f;
  }

  FormulaPtr implication() {
    const Token& start = peek();
    FormulaPtr lhs = disjunction();
    if (!at("->")) return lhs;
    next();
    auto f = node(Formula::Op::Implies, start);
    f->lhs = lhs;
    f->rhs = formula();
    return f;
  }

  FormulaPtr disjunction() {
    const Token& start = peek();
    FormulaPtr acc = conjunction();
    while (at("or")) {
      next();
      auto f = node(Formula::Op::Or, start);
      f->lhs = acc;
      f->rhs = conjunction();
      acc = f;
    }
    return acc;
  }

  FormulaPtr conjunction() {
    const Token& start = peek();
    FormulaPtr acc = unary();
    while (at("and")) {
      next();
      auto f = node(Formula::Op::And, start);
      f->lhs = acc;
      f->rhs = unary();
      acc = f;
    }
    return acc;
  }

  FormulaPtr unary() {
    if (at("not")) {
      auto f = node(Formula::Op::Not, next());
      f->body = unary();
      return f;
    }
    if (at("forall") || at("exists")) return quantified();
    if (at("(")) {
      // Either a parenthesized formula or an atom whose term starts with '('.
      const std::size_t saved = pos_;
      const std::size_t saved_scope = scope_.size();
      try {
        next();
        FormulaPtr f = formula();
        expect(")");
        return f;
      } catch (const SyntaxError& as_formula) {
        pos_ = saved;
        scope_.resize(saved_scope);
        try {
          return atom();
        } catch (const SyntaxError& as_atom) {
          bool later = std::pair(as_atom.line(), as_atom.column()) > std::pair(as_formula.line(), as_formula.column());
          if (later) throw;
          throw as_formula;
        }
      }
    }
    return atom();
  }

  FormulaPtr atom() {
    const Token& start = peek();
    TermPtr t = expr();
    if (at("in")) {
      next();
      auto f = node(Formula::Op::In, start);
      f->term = t;
      if (!(peek().kind == Token::Kind::Ident && is_upper(peek().text))) {
        f->scale = product();
        expect("*");
      }
      if (!(peek().kind == Token::Kind::Ident && is_upper(peek().text))) fail(peek(), "expected a neighborhood variable" + found());
      f->set = next().text;
      return f;
    }
    if (at("=") || at("!=")) {
      auto f = node(next().text == "=" ? Formula::Op::Eq : Formula::Op::Neq, start);
      f->left = t;
      f->right = expr();
      return f;
    }
    fail(peek(), "expected 'in', '=' or '!='" + found());
  }

  static TermPtr binary(Term::Op op, TermPtr l, TermPtr r) {
    auto t = std::make_shared<Term>();
    t->op = op;
    t->lhs = std::move(l);
    t->rhs = std::move(r);
    return t;
  }

  TermPtr expr() {
    TermPtr acc = product();
    while (at("+") || at("-")) {
      Term::Op op = next().text == "+" ? Term::Op::Add : Term::Op::Sub;
      acc = binary(op, acc, product());
    }
    return acc;
  }

  TermPtr product() {
    TermPtr acc = negation();
    while (true) {
      // `c*U` ends the scale of a scaled membership.
      if (at("*") && peek(1).kind == Token::Kind::Ident && is_upper(peek(1).text)) break;
      if (!at("*") && !at("/")) break;
      Term::Op op = next().text == "*" ? Term::Op::Mul : Term::Op::Div;
      acc = binary(op, acc, negation());
    }
    return acc;
  }

  TermPtr negation() {
    if (at("-")) {
      next();
      auto t = std::make_shared<Term>();
      t->op = Term::Op::Neg;
      t->lhs = negation();
      return t;
    }
    return primary();
  }

  TermPtr primary() {
    const Token& tok = peek();
    auto t = std::make_shared<Term>();
    if (tok.kind == Token::Kind::Int) {
      next();
      t->op = Term::Op::Const;
      t->value = GaussianInt(Integer(tok.text), 0);
      return t;
    }
    if (at("(")) {
      next();
      TermPtr inner = expr();
      expect(")");
      return inner;
    }
    if (tok.kind == Token::Kind::Ident && !is_keyword(tok.text) && !is_topology_name(tok.text)) {
      if (is_upper(tok.text)) fail(tok, "neighborhood variable '" + tok.text + "' used as a field term");
      next();
      if (tok.text == "i") {
        t->op = Term::Op::Const;
        t->value = GaussianInt(0, 1);
      } else {
        t->op = Term::Op::Var;
        t->name = tok.text;
      }
      return t;
    }
    fail(tok, "expected a field term" + found());
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

// ---------------------------------------------------------------------------
// Printing

std::string print_term(const Term& t) {
  switch (t.op) {
    case Term::Op::Const:
      return t.value.im != 0 ? "i" : t.value.re.get_str();
    case Term::Op::Var:
      return t.name;
    case Term::Op::Neg:
      return "(-" + print_term(*t.lhs) + ")";
    default: {
      const char* op = t.op == Term::Op::Add ? "+" : t.op == Term::Op::Sub ? "-" : t.op == Term::Op::Mul ? "*" : "/";
      return "(" + print_term(*t.lhs) + op + print_term(*t.rhs) + ")";
    }
  }
}

bool is_binary(const Formula& f) {
  return f.op == Formula::Op::And || f.op == Formula::Op::Or || f.op == Formula::Op::Implies;
}

std::string print_formula(const Formula& f, bool nested) {
  switch (f.op) {
    case Formula::Op::Forall:
    case Formula::Op::Exists: {
      std::string s = (f.op == Formula::Op::Forall ? "forall " : "exists ") + f.var;
      if (f.nonzero) s += " != 0";
      if (f.topology != 0) s += " in tau" + std::to_string(f.topology);
      if (f.body->is_quantifier() || is_binary(*f.body)) {
        s += " " + print_formula(*f.body, false);
      } else {
        s += ": " + print_formula(*f.body, false);
      }
      return nested ? "(" + s + ")" : s;
    }
    case Formula::Op::Not:
      return "not " + print_formula(*f.body, true);
    case Formula::Op::And:
    case Formula::Op::Or:
    case Formula::Op::Implies: {
      const char* op = f.op == Formula::Op::And ? " and " : f.op == Formula::Op::Or ? " or " : " -> ";
      return "(" + print_formula(*f.lhs, true) + op + print_formula(*f.rhs, true) + ")";
    }
    case Formula::Op::In:
      return print_term(*f.term) + " in " + (f.scale ? print_term(*f.scale) + "*" : "") + f.set;
    case Formula::Op::Eq:
      return print_term(*f.left) + " = " + print_term(*f.right);
    case Formula::Op::Neq:
      return print_term(*f.left) + " != " + print_term(*f.right);
  }
  return "";
}

void collect_term_vars(const Term& t, const std::vector<std::string>& bound, std::vector<std::string>& out) {
  if (t.op == Term::Op::Var) {
    if (std::find(bound.begin(), bound.end(), t.name) == bound.end() &&
        std::find(out.begin(), out.end(), t.name) == out.end()) {
      out.push_back(t.name);
    }
    return;
  }
  if (t.lhs) collect_term_vars(*t.lhs, bound, out);
  if (t.rhs) collect_term_vars(*t.rhs, bound, out);
}

void collect_free(const Formula& f, std::vector<std::string>& bound, std::vector<std::string>& out) {
  if (f.is_quantifier()) {
    bound.push_back(f.var);
    collect_free(*f.body, bound, out);
    bound.pop_back();
    return;
  }
  if (f.op == Formula::Op::Not) return collect_free(*f.body, bound, out);
  if (is_binary(f)) {
    collect_free(*f.lhs, bound, out);
    collect_free(*f.rhs, bound, out);
    return;
  }
  if (f.op == Formula::Op::In) {
    collect_term_vars(*f.term, bound, out);
    if (f.scale) collect_term_vars(*f.scale, bound, out);
    if (std::find(bound.begin(), bound.end(), f.set) == bound.end() &&
        std::find(out.begin(), out.end(), f.set) == out.end()) {
      out.push_back(f.set);
    }
    return;
  }
  collect_term_vars(*f.left, bound, out);
  collect_term_vars(*f.right, bound, out);
}

// ---------------------------------------------------------------------------
// Polarity

struct Binder {
  std::string var;
  const Formula* quantifier;
};

void polarity_walk(const Formula& f, bool positive, std::vector<Binder>& scope, std::vector<std::string>& path,
                   PolarityReport& report) {
  switch (f.op) {
    case Formula::Op::Forall:
    case Formula::Op::Exists:
      scope.push_back({f.var, &f});
      path.push_back((f.op == Formula::Op::Forall ? "forall " : "exists ") + f.var);
      polarity_walk(*f.body, positive, scope, path, report);
      path.pop_back();
      scope.pop_back();
      return;
    case Formula::Op::Not:
      path.push_back("not");
      polarity_walk(*f.body, !positive, scope, path, report);
      path.pop_back();
      return;
    case Formula::Op::And:
    case Formula::Op::Or:
    case Formula::Op::Implies: {
      const std::string name = f.op == Formula::Op::And ? "and" : f.op == Formula::Op::Or ? "or" : "->";
      path.push_back(name + "[1]");
      polarity_walk(*f.lhs, f.op == Formula::Op::Implies ? !positive : positive, scope, path, report);
      path.back() = name + "[2]";
      polarity_walk(*f.rhs, positive, scope, path, report);
      path.pop_back();
      return;
    }
    case Formula::Op::In: {
      auto it = std::find_if(scope.rbegin(), scope.rend(), [&](const Binder& b) { return b.var == f.set; });
      if (it == scope.rend()) return;
      const Formula& q = *it->quantifier;
      const bool ok = q.op == Formula::Op::Forall ? positive : !positive;
      if (ok) return;
      std::string where;
      for (const auto& step : path) where += step + " > ";
      where += print_formula(f, false);
      report.ok = false;
      report.violations.push_back(f.set + " occurs " + (positive ? "positively" : "negatively") + " under '" +
                                  (q.op == Formula::Op::Forall ? "forall " : "exists ") + q.var + "' (" +
                                  std::to_string(q.line) + ":" + std::to_string(q.column) + ") at " + where);
      return;
    }
    default:
      return;
  }
}

}  // namespace

LocalSentence parse_sentence(std::string_view text) { return LocalSentence{Parser(lex(text)).sentence()}; }

std::string LocalSentence::to_string() const { return print_formula(*root, false); }

std::vector<std::string> LocalSentence::free_variables() const {
  std::vector<std::string> bound, out;
  collect_free(*root, bound, out);
  return out;
}

PolarityReport check_polarity(const LocalSentence& s) {
  PolarityReport report;
  std::vector<Binder> scope;
  std::vector<std::string> path;
  polarity_walk(*s.root, true, scope, path, report);
  return report;
}

std::vector<std::string> named_sentences() { return {"locality", "fine-generation", "coarse-generation"}; }

std::string named_sentence(std::string_view name) {
  if (name == "locality") {
    return "exists U forall c != 0 forall V exists e != 0 forall x "
           "(x/c in U -> (1/(x*e) in V or 1/((1-x)*e) in V))";
  }
  if (name == "fine-generation") {
    return "forall U in tau exists V in tau1 exists W in tau2 forall x (x in V and x in W -> x in U)";
  }
  if (name == "coarse-generation") {
    return "forall V in tau1 forall W in tau2 exists U in tau forall x (x in U -> x in V and x in W)";
  }
  throw Error(ErrorKind::InvalidSpec, "no shipped sentence named '" + std::string(name) + "'");
}

std::string truth_name(Truth t) {
  switch (t) {
    case Truth::Holds:
      return "Holds";
    case Truth::Fails:
      return "Fails";
    case Truth::Unknown:
      return "Unknown";
  }
  return "";
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct BudgetExhausted {};

FieldElem power(const FieldElem& base, long n) {
  FieldElem out = FieldElem::from_int(base.field(), 1);
  FieldElem b = n < 0 ? base.inverse() : base;
  for (long j = 0; j < (n < 0 ? -n : n); ++j) out *= b;
  return out;
}

struct Bound {
  std::string name;
  bool is_ball = false;
  FieldElem x;
  int topology = 0;
  long m = 0;
};

struct Leaf {
  std::vector<std::pair<std::string, std::string>> path;
  bool expect = false;
};

class Evaluator {
 public:
  Evaluator(const std::vector<TopologySpec>& tops, const SearchBounds& b) : tops_(tops), bounds_(b) {
    if (tops.empty()) throw Error(ErrorKind::SpecMismatch, "no topology given");
    if (b.scale_bound < 0 || b.height < 1 || b.samples < 0) throw Error(ErrorKind::InvalidSpec, "search bounds must be nonnegative");
    field_ = tops.front().ring.field();
    for (const auto& t : tops) {
      if (t.ring.field() != field_) throw Error(ErrorKind::FieldMismatch, "topologies over different fields");
      gens_.push_back(chain_generator(t.ring));
      for (const auto& v : t.ring.valuations()) {
        if (std::find(vals_.begin(), vals_.end(), v) == vals_.end()) vals_.push_back(v);
      }
    }
  }

  std::uint64_t atoms() const { return atoms_; }

  void check_sentence(const LocalSentence& s) const {
    auto free = s.free_variables();
    if (!free.empty()) throw Error(ErrorKind::InvalidSpec, "sentence is not closed: '" + free.front() + "' is free");
    auto polarity = check_polarity(s);
    if (!polarity.ok) throw Error(ErrorKind::InvalidSpec, "polarity violation: " + polarity.violations.front());
    check_topologies(*s.root);
  }

  void bind(const Formula& q, const std::string& value) {
    Bound b;
    b.name = q.var;
    if (q.neighborhood) {
      int j = 0;
      long m = 0;
      char tail = 0;
      if (std::sscanf(value.c_str(), "ball(%d,%ld%c", &j, &m, &tail) != 3 || tail != ')' || j != q.topology) {
        throw Error(ErrorKind::ParseError, "bad neighborhood binding '" + value + "' for " + q.var);
      }
      b.is_ball = true;
      b.topology = j;
      b.m = m;
    } else {
      b.x = parse_elem(value, field_);
      if (q.nonzero && b.x.is_zero()) throw Error(ErrorKind::ParseError, q.var + " is guarded nonzero");
    }
    env_.push_back(b);
  }

  bool eval(const Formula& f, bool want, std::vector<Leaf>& leaves) {
    switch (f.op) {
      case Formula::Op::Forall:
      case Formula::Op::Exists:
        return quantifier(f, want, leaves);
      default: {
        bool value = connective(f);
        if (want) leaves.push_back(Leaf{path_, value});
        return value;
      }
    }
  }

 private:
  void check_topologies(const Formula& f) const {
    if (f.is_quantifier() && f.neighborhood && f.topology >= static_cast<int>(tops_.size())) {
      throw Error(ErrorKind::SpecMismatch, "sentence uses tau" + std::to_string(f.topology) + " but only " +
                                               std::to_string(tops_.size()) + " topologies were given");
    }
    if (f.body) check_topologies(*f.body);
    if (f.lhs) check_topologies(*f.lhs);
    if (f.rhs) check_topologies(*f.rhs);
  }

  const Bound& lookup(const std::string& name) const {
    for (auto it = env_.rbegin(); it != env_.rend(); ++it) {
      if (it->name == name) return *it;
    }
    throw Error(ErrorKind::InvalidSpec, "unbound variable '" + name + "'");
  }

  std::optional<FieldElem> term(const Term& t) const {
    switch (t.op) {
      case Term::Op::Const:
        if (t.value.im != 0 && field_ == FieldId::Rationals) throw Error(ErrorKind::FieldMismatch, "'i' is not in Q");
        return FieldElem(field_, Rational(t.value.re), Rational(t.value.im));
      case Term::Op::Var:
        return lookup(t.name).x;
      case Term::Op::Neg: {
        auto a = term(*t.lhs);
        if (!a) return std::nullopt;
        return -*a;
      }
      default: {
        auto a = term(*t.lhs);
        auto b = term(*t.rhs);
        if (!a || !b) return std::nullopt;
        switch (t.op) {
          case Term::Op::Add:
            return *a + *b;
          case Term::Op::Sub:
            return *a - *b;
          case Term::Op::Mul:
            return *a * *b;
          default:
            if (b->is_zero()) return std::nullopt;
            return *a / *b;
        }
      }
    }
  }

  const FieldElem& ball_scale(int topology, long m) {
    auto key = std::pair(topology, m);
    auto it = scales_.find(key);
    if (it == scales_.end()) it = scales_.emplace(key, power(gens_[topology], m)).first;
    return it->second;
  }

  bool connective(const Formula& f) {
    switch (f.op) {
      case Formula::Op::Not:
        return !eval(*f.body, false, scratch_);
      case Formula::Op::And:
        return eval(*f.lhs, false, scratch_) && eval(*f.rhs, false, scratch_);
      case Formula::Op::Or:
        return eval(*f.lhs, false, scratch_) || eval(*f.rhs, false, scratch_);
      case Formula::Op::Implies:
        return !eval(*f.lhs, false, scratch_) || eval(*f.rhs, false, scratch_);
      default:
        return atom(f);
    }
  }

  bool atom(const Formula& f) {
    if (++atoms_ > bounds_.budget) throw BudgetExhausted{};
    if (f.op == Formula::Op::In) {
      auto t = term(*f.term);
      if (!t) return false;
      const Bound& set = lookup(f.set);
      FieldElem scale = ball_scale(set.topology, set.m);
      if (f.scale) {
        auto c = term(*f.scale);
        if (!c || c->is_zero()) return false;
        scale *= *c;
      }
      return contains(tops_[set.topology].ring, *t / scale);
    }
    auto l = term(*f.left);
    auto r = term(*f.right);
    if (!l || !r) return false;
    return f.op == Formula::Op::Eq ? *l == *r : !(*l == *r);
  }

  // --- quantifier domains

  const std::vector<FieldElem>& scalars() {
    if (!scalars_.empty()) return scalars_;
    const long k = bounds_.scalar_bound();
    std::vector<long> a(vals_.size(), -k);
    while (true) {
      FieldElem c = FieldElem::from_int(field_, 1);
      for (std::size_t j = 0; j < vals_.size(); ++j) c *= power(uniformizer(vals_[j]), a[j]);
      scalars_.push_back(c);
      std::size_t j = vals_.size();
      while (j > 0 && a[j - 1] == k) a[--j] = -k;
      if (j == 0) break;
      ++a[j - 1];
    }
    return scalars_;
  }

  const std::vector<FieldElem>& samples() {
    if (!samples_.empty()) return samples_;
    auto push = [&](const FieldElem& x) {
      if (std::find(samples_.begin(), samples_.end(), x) == samples_.end()) samples_.push_back(x);
    };
    // The escaping family: val_a(x) = J and val_b(1 - x) = J, deepest first.
    const FieldElem one = FieldElem::from_int(field_, 1);
    const long deepest = bounds_.scalar_bound() + 1;
    for (std::size_t a = 0; a < vals_.size(); ++a) {
      for (std::size_t b = 0; b < vals_.size(); ++b) {
        if (a == b) continue;
        for (long depth = deepest; depth >= 1; --depth) {
          std::vector<ValueTarget> targets;
          for (std::size_t j = 0; j < vals_.size(); ++j) {
            if (j == a) {
              targets.push_back(ValueTarget::congruence(vals_[j], power(uniformizer(vals_[j]), depth), depth + 1));
            } else if (j == b) {
              targets.push_back(ValueTarget::congruence(vals_[j], one - power(uniformizer(vals_[j]), depth), depth + 1));
            } else {
              targets.push_back(ValueTarget::at_least(vals_[j], 0));
            }
          }
          push(approximate(targets));
        }
      }
    }
    for (long n : {0, 1, -1, 2, -2}) push(FieldElem::from_int(field_, n));
    push(FieldElem(field_, Rational(1, 2)));
    push(FieldElem(field_, Rational(1, 3)));
    if (field_ == FieldId::GaussianRationals) {
      push(FieldElem::imaginary_unit());
      push(FieldElem(field_, 1, 1));
      push(FieldElem(field_, 1, -1));
    }
    for (const auto& v : vals_) {
      push(uniformizer(v));
      push(uniformizer(v).inverse());
    }
    for (const auto& s : bounds_.seeds) push(s);
    for (int j = 0; j < bounds_.samples; ++j) {
      Rng rng(Rng::sub_seed(bounds_.seed, static_cast<std::uint64_t>(j)));
      push(rng.element(field_, bounds_.height));
    }
    return samples_;
  }

  bool quantifier(const Formula& q, bool want, std::vector<Leaf>& leaves) {
    const bool forall = q.op == Formula::Op::Forall;
    // Instances of an unguarded field variable are summarized by their count.
    const bool sweep = !q.neighborhood && !q.nonzero;
    std::vector<Bound> domain;
    if (q.neighborhood) {
      const long k = bounds_.scale_bound;
      for (long m = k; m >= (bounds_.collapse ? k : -k); --m) {
        Bound b;
        b.name = q.var;
        b.is_ball = true;
        b.topology = q.topology;
        b.m = m;
        domain.push_back(b);
      }
    } else {
      for (const auto& x : q.nonzero ? scalars() : samples()) {
        Bound b;
        b.name = q.var;
        b.x = x;
        domain.push_back(b);
      }
    }
    std::vector<Leaf> kept;
    for (const auto& b : domain) {
      env_.push_back(b);
      path_.emplace_back(q.var, b.is_ball ? "ball(" + std::to_string(b.topology) + "," + std::to_string(b.m) + ")"
                                          : b.x.to_string());
      std::vector<Leaf> child;
      const bool value = eval(*q.body, want && !sweep, child);
      if (value != forall) {
        // Decisive instance: a counterexample for forall, a witness for exists.
        if (want) {
          if (sweep) eval(*q.body, true, child);
          leaves.insert(leaves.end(), child.begin(), child.end());
        }
        path_.pop_back();
        env_.pop_back();
        return !forall;
      }
      if (want && !sweep) kept.insert(kept.end(), child.begin(), child.end());
      path_.pop_back();
      env_.pop_back();
    }
    if (want) {
      if (sweep) {
        leaves.push_back(Leaf{path_, forall});
      } else {
        leaves.insert(leaves.end(), kept.begin(), kept.end());
      }
    }
    return forall;
  }

  const std::vector<TopologySpec>& tops_;
  const SearchBounds& bounds_;
  FieldId field_ = FieldId::Rationals;
  std::vector<FieldElem> gens_;
  std::vector<Valuation> vals_;
  std::vector<FieldElem> scalars_, samples_;
  std::map<std::pair<int, long>, FieldElem> scales_;
  std::vector<Bound> env_;
  std::vector<std::pair<std::string, std::string>> path_;
  std::vector<Leaf> scratch_;
  std::uint64_t atoms_ = 0;
};

std::string join_topologies(const std::vector<TopologySpec>& tops) {
  std::string out;
  for (std::size_t j = 0; j < tops.size(); ++j) {
    if (j) out += "|";
    out += tops[j].ring.to_string();
  }
  return out;
}

Witness leaf_witness(const LocalSentence& s, const std::vector<TopologySpec>& tops, const SearchBounds& b,
                     const Leaf& leaf) {
  std::string bindings;
  for (const auto& [name, value] : leaf.path) {
    if (!bindings.empty()) bindings += ";";
    bindings += name + "=" + value;
  }
  Witness w("locsent");
  w.add("sentence", s.to_string())
      .add("topologies", join_topologies(tops))
      .add("bindings", bindings)
      .add("expect", leaf.expect ? "true" : "false")
      .add("k", std::to_string(b.scale_bound))
      .add("height", std::to_string(b.height))
      .add("samples", std::to_string(b.samples))
      .add("seed", std::to_string(b.seed))
      .add("collapse", b.collapse ? "yes" : "no");
  if (!b.seeds.empty()) w.add("seeds", format_tuple(b.seeds));
  return w;
}

}  // namespace

SentenceVerdict evaluate(const LocalSentence& s, const std::vector<TopologySpec>& topologies,
                         const SearchBounds& bounds) {
  Evaluator ev(topologies, bounds);
  ev.check_sentence(s);
  SentenceVerdict verdict;
  std::vector<Leaf> leaves;
  try {
    verdict.truth = ev.eval(*s.root, true, leaves) ? Truth::Holds : Truth::Fails;
  } catch (const BudgetExhausted&) {
    verdict.truth = Truth::Unknown;
    leaves.clear();
  }
  verdict.atoms = ev.atoms();
  for (const auto& leaf : leaves) verdict.witnesses.push_back(leaf_witness(s, topologies, bounds, leaf));
  return verdict;
}

std::optional<bool> evaluate_under(const LocalSentence& s, const std::vector<TopologySpec>& topologies,
                                   const SearchBounds& bounds,
                                   const std::vector<std::pair<std::string, std::string>>& bindings) {
  Evaluator ev(topologies, bounds);
  ev.check_sentence(s);
  const Formula* f = s.root.get();
  for (const auto& [name, value] : bindings) {
    if (!f->is_quantifier() || f->var != name) {
      throw Error(ErrorKind::ParseError, "binding for '" + name + "' does not match the quantifier prefix");
    }
    ev.bind(*f, value);
    f = f->body.get();
  }
  std::vector<Leaf> unused;
  try {
    return ev.eval(*f, false, unused);
  } catch (const BudgetExhausted&) {
    return std::nullopt;
  }
}

}  // namespace multival
