#include "rzk/lambda.hpp"

#include <cctype>
#include <map>

namespace rzk {

LambdaTerm::LambdaTerm() { *this = constant(Term::k()); }

LambdaTerm LambdaTerm::var(std::string name) {
  Node n(Tag::Var);
  n.name = std::move(name);
  return LambdaTerm{std::make_shared<const Node>(std::move(n))};
}

LambdaTerm LambdaTerm::lam(std::string name, LambdaTerm body) {
  Node n(Tag::Lam);
  n.name = std::move(name);
  n.lhs = std::move(body);
  return LambdaTerm{std::make_shared<const Node>(std::move(n))};
}

LambdaTerm LambdaTerm::app(LambdaTerm fun, LambdaTerm arg) {
  Node n(Tag::App);
  n.lhs = std::move(fun);
  n.rhs = std::move(arg);
  return LambdaTerm{std::make_shared<const Node>(std::move(n))};
}

LambdaTerm LambdaTerm::constant(Term t) {
  Node n(Tag::Const);
  n.constant = std::move(t);
  return LambdaTerm{std::make_shared<const Node>(std::move(n))};
}

bool LambdaTerm::has_free(const std::string& name) const {
  switch (tag()) {
    case Tag::Var: return this->name() == name;
    case Tag::Const: return false;
    case Tag::Lam: return this->name() != name && body().has_free(name);
    case Tag::App: return fun().has_free(name) || arg().has_free(name);
  }
  return false;
}

namespace {

// Intermediate shape during compilation: applicative combinations of Term
// constants and still-unabstracted variables.
struct CTerm {
  bool is_var = false;
  std::string var;
  bool is_app = false;
  std::shared_ptr<CTerm> fun, arg;
  Term constant;

  bool has_free(const std::string& name) const {
    if (is_var) return var == name;
    if (is_app) return fun->has_free(name) || arg->has_free(name);
    return false;
  }
};

using CRef = std::shared_ptr<CTerm>;

CRef cvar(std::string n) {
  auto t = std::make_shared<CTerm>();
  t->is_var = true;
  t->var = std::move(n);
  return t;
}
CRef cconst(Term t) {
  auto c = std::make_shared<CTerm>();
  c->constant = std::move(t);
  return c;
}
CRef capp(CRef f, CRef a) {
  auto t = std::make_shared<CTerm>();
  t->is_app = true;
  t->fun = std::move(f);
  t->arg = std::move(a);
  return t;
}

CRef abstract(const std::string& x, const CRef& e) {
  if (e->is_var && e->var == x) return cconst(Term::app(Term::s(), Term::k(), Term::k()));
  if (!e->has_free(x)) return capp(cconst(Term::k()), e);
  // e is an application here: a var other than x has no free x, consts neither
  return capp(capp(cconst(Term::s()), abstract(x, e->fun)), abstract(x, e->arg));
}

CRef lower(const LambdaTerm& e) {
  switch (e.tag()) {
    case LambdaTerm::Tag::Var: return cvar(e.name());
    case LambdaTerm::Tag::Const: return cconst(e.term());
    case LambdaTerm::Tag::App: return capp(lower(e.fun()), lower(e.arg()));
    case LambdaTerm::Tag::Lam: return abstract(e.name(), lower(e.body()));
  }
  throw std::logic_error("lower: bad tag");
}

Term finish(const CRef& e) {
  if (e->is_var) throw FreeVariable(e->var);
  if (e->is_app) return Term::app(finish(e->fun), finish(e->arg));
  return e->constant;
}

}  // namespace

Term compile(const LambdaTerm& e) { return finish(lower(e)); }

namespace {

using L = LambdaTerm;

L V(const char* n) { return L::var(n); }
L C(const Term& t) { return L::constant(t); }

struct Library {
  Term i, kbar, pair, fst, snd, case_guard, curry, uncurry, comp;
  Term const_k, const_kbar, exfalso;
  Library() {
    i = compile(L::lam("x", V("x")));
    kbar = Term::app(Term::k(), i);  // k̄ = k i
    pair = compile(L::lam("x", L::lam("y", L::lam("z", L::app(V("z"), V("x"), V("y"))))));
    fst = compile(L::lam("q", L::app(V("q"), C(Term::k()))));
    snd = compile(L::lam("q", L::app(V("q"), C(kbar))));
    // guarded case: the selector picks one thunk, the other is discarded
    // before weak reduction ever looks inside it
    case_guard = compile(L::lam(
        "z", L::lam("f", L::lam("g",
            L::app(L::app(L::app(C(fst), V("z")),
                          L::lam("d", L::app(V("f"), L::app(C(snd), V("z")))),
                          L::lam("d", L::app(V("g"), L::app(C(snd), V("z"))))),
                   C(i))))));
    curry = compile(L::lam("f", L::lam("x", L::lam("y",
        L::app(V("f"), L::app(C(pair), V("x"), V("y")))))));
    uncurry = compile(L::lam("f", L::lam("z",
        L::app(L::app(V("f"), L::app(C(fst), V("z"))), L::app(C(snd), V("z"))))));
    comp = compile(L::lam("f", L::lam("g", L::lam("x", L::app(V("f"), L::app(V("g"), V("x")))))));
    const_k = compile(L::lam("x", C(Term::k())));
    const_kbar = compile(L::lam("x", C(kbar)));
    exfalso = i;
  }
};

const Library& library() {
  static const Library lib;
  return lib;
}

}  // namespace

Term standard_realizer(const std::string& name) {
  const Library& lib = library();
  static const std::map<std::string, Term Library::*> table = {
      {"id", &Library::i},          {"comp", &Library::comp},
      {"pair", &Library::pair},     {"fst", &Library::fst},
      {"snd", &Library::snd},       {"case", &Library::case_guard},
      {"curry", &Library::curry},   {"uncurry", &Library::uncurry},
      {"exfalso", &Library::exfalso},
      {"const_k", &Library::const_k},
      {"const_kbar", &Library::const_kbar},
  };
  auto it = table.find(name);
  if (it == table.end()) throw UnknownName(name);
  return lib.*(it->second);
}

namespace {

struct LambdaParser {
  const std::string& src;
  std::size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (src[pos] == '\n') { ++line; col = 1; } else ++col;
    ++pos;
  }
  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance();
  }
  [[noreturn]] void fail(const std::string& msg, const std::string& expected) {
    throw SyntaxError(msg, line, col, expected);
  }
  bool at(char c) { skip_ws(); return pos < src.size() && src[pos] == c; }

  std::string ident() {
    skip_ws();
    std::string name;
    while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      name += src[pos];
      advance();
    }
    if (name.empty()) fail("identifier expected", "identifier");
    return name;
  }

  LambdaTerm atom() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of lambda expression", "expression");
    char c = src[pos];
    if (c == '\\') {
      advance();
      std::string v = ident();
      skip_ws();
      if (pos >= src.size() || src[pos] != '.') fail("'.' expected after binder", ".");
      advance();
      return LambdaTerm::lam(v, expr());
    }
    if (c == '(') {
      advance();
      LambdaTerm e = expr();
      skip_ws();
      if (pos >= src.size() || src[pos] != ')') fail("unclosed parenthesis", ")");
      advance();
      return e;
    }
    if (c == '#') {
      advance();
      return LambdaTerm::constant(Term::oracle(ident()));
    }
    if (c == 'K' && !more_ident(pos + 1)) { advance(); return LambdaTerm::constant(Term::k()); }
    if (c == 'S' && !more_ident(pos + 1)) { advance(); return LambdaTerm::constant(Term::s()); }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return LambdaTerm::var(ident());
    fail(std::string("unexpected character '") + c + "'", "expression");
  }

  bool more_ident(std::size_t p) {
    return p < src.size() && (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_');
  }

  bool at_atom() {
    skip_ws();
    if (pos >= src.size()) return false;
    char c = src[pos];
    return c == '\\' || c == '(' || c == '#' || std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  LambdaTerm expr() {
    LambdaTerm e = atom();
    while (at_atom()) {
      // a lambda extends as far right as possible; stop application on '\'
      if (at('\\')) break;
      e = LambdaTerm::app(e, atom());
    }
    return e;
  }
};

}  // namespace

LambdaTerm parse_lambda(const std::string& src) {
  LambdaParser p{src};
  LambdaTerm e = p.expr();
  p.skip_ws();
  if (p.pos < src.size()) p.fail("trailing input after lambda expression", "end of input");
  return e;
}

std::string to_string(const LambdaTerm& e) {
  switch (e.tag()) {
    case LambdaTerm::Tag::Var: return e.name();
    case LambdaTerm::Tag::Const: {
      const Term& t = e.term();
      if (t.is_leaf()) return to_string(t);
      return "(" + to_string(t) + ")";
    }
    case LambdaTerm::Tag::Lam: return "\\" + e.name() + ". " + to_string(e.body());
    case LambdaTerm::Tag::App: {
      std::string f = to_string(e.fun());
      if (e.fun().tag() == LambdaTerm::Tag::Lam) f = "(" + f + ")";
      std::string a = to_string(e.arg());
      if (e.arg().tag() == LambdaTerm::Tag::App || e.arg().tag() == LambdaTerm::Tag::Lam)
        a = "(" + a + ")";
      return f + " " + a;
    }
  }
  return {};
}

}  // namespace rzk
