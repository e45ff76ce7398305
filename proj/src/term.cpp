#include "rzk/term.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>

namespace rzk {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  constexpr std::uint64_t cap = 1ull << 63;
  if (a >= cap - b) return cap;
  return a + b;
}

}  // namespace

Term::Term() { *this = k(); }

Term Term::k() {
  static const Term t{std::make_shared<const Node>([] {
    Node n(TermTag::K);
    n.hash = mix(1);
    return n;
  }())};
  return t;
}

Term Term::s() {
  static const Term t{std::make_shared<const Node>([] {
    Node n(TermTag::S);
    n.hash = mix(2);
    return n;
  }())};
  return t;
}

Term Term::oracle(std::string name) {
  Node n(TermTag::Oracle);
  n.name = std::move(name);
  n.oracle = true;
  n.hash = mix(3);
  for (unsigned char c : n.name) n.hash = mix(n.hash ^ c);
  return Term{std::make_shared<const Node>(std::move(n))};
}

Term Term::app(Term fun, Term arg) {
  Node n(std::move(fun), std::move(arg));
  n.size = sat_add(n.fun.size(), n.arg.size());
  n.oracle = !n.fun.pure() || !n.arg.pure();
  n.hash = mix(n.fun.hash() * 0x100000001b3ull ^ n.arg.hash());
  // a node is a redex iff it completes K·a·b or S·a·b·c
  bool redex = false;
  if (!n.fun.is_leaf()) {
    if (n.fun.fun().tag() == TermTag::K) redex = true;
    else if (!n.fun.fun().is_leaf() && n.fun.fun().fun().tag() == TermTag::S) redex = true;
  }
  n.normal = n.fun.is_normal_form() && n.arg.is_normal_form() && !redex;
  return Term{std::make_shared<const Node>(std::move(n))};
}

bool Term::equal(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.tag() != b.tag()) return false;
  switch (a.tag()) {
    case TermTag::K:
    case TermTag::S: return true;
    case TermTag::Oracle: return a.oracle_name() == b.oracle_name();
    case TermTag::App: return equal(a.fun(), b.fun()) && equal(a.arg(), b.arg());
  }
  return false;
}

int Term::compare(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return 0;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  if (a.tag() != b.tag()) return static_cast<int>(a.tag()) < static_cast<int>(b.tag()) ? -1 : 1;
  switch (a.tag()) {
    case TermTag::K:
    case TermTag::S: return 0;
    case TermTag::Oracle: return a.oracle_name().compare(b.oracle_name());
    case TermTag::App: {
      int c = compare(a.fun(), b.fun());
      return c != 0 ? c : compare(a.arg(), b.arg());
    }
  }
  return 0;
}

bool TermSet::insert(const Term& t) {
  auto it = std::lower_bound(items_.begin(), items_.end(), t);
  if (it != items_.end() && *it == t) return false;
  items_.insert(it, t);
  return true;
}

bool TermSet::contains(const Term& t) const {
  auto it = std::lower_bound(items_.begin(), items_.end(), t);
  return it != items_.end() && *it == t;
}

namespace {

// Contracts the leftmost-outermost redex; caller guarantees one exists.
Term contract(const Term& t) {
  if (!t.is_leaf()) {
    const Term& f = t.fun();
    if (!f.is_leaf()) {
      if (f.fun().tag() == TermTag::K) return f.arg();  // K·a·b -> a
      const Term& g = f.fun();
      if (!g.is_leaf() && g.fun().tag() == TermTag::S) {
        // S·a·b·c -> a·c·(b·c)
        return Term::app(Term::app(g.arg(), t.arg()), Term::app(f.arg(), t.arg()));
      }
    }
    if (!t.fun().is_normal_form()) return Term::app(contract(t.fun()), t.arg());
    return Term::app(t.fun(), contract(t.arg()));
  }
  return t;  // unreachable on non-normal input
}

}  // namespace

ReductionOutcome reduce(const Term& t, std::uint64_t fuel) {
  // size blow-up counts as exhaustion; keeps single steps from costing
  // ever-longer spine walks on exploding candidates
  constexpr std::uint64_t size_cap = 1ull << 22;
  Term cur = t;
  std::uint64_t steps = 0;
  while (!cur.is_normal_form()) {
    if (steps >= fuel || cur.size() > size_cap) return ReductionOutcome::exhausted(steps);
    cur = contract(cur);
    ++steps;
  }
  return ReductionOutcome::normal(cur, steps);
}

ReductionOutcome apply(const Term& fun, const Term& arg, std::uint64_t fuel) {
  return reduce(Term::app(fun, arg), fuel);
}

const std::vector<Term>& enumerate_subpca(std::size_t max_size) {
  if (max_size < 1) throw std::invalid_argument("enumerate_subpca: max_size must be >= 1");
  static std::mutex table_mutex;
  static std::vector<std::vector<Term>> by_size;  // by_size[s-1] = terms with exactly s leaves
  static std::vector<std::vector<Term>> prefix;   // prefix[s-1] = all terms with <= s leaves
  std::scoped_lock lock(table_mutex);
  while (by_size.size() < max_size) {
    std::size_t s = by_size.size() + 1;
    std::vector<Term> level;
    if (s == 1) {
      level = {Term::k(), Term::s()};
    } else {
      for (std::size_t l = 1; l < s; ++l)
        for (const Term& f : by_size[l - 1])
          for (const Term& a : by_size[s - l - 1]) level.push_back(Term::app(f, a));
    }
    std::vector<Term> acc = prefix.empty() ? std::vector<Term>{} : prefix.back();
    acc.insert(acc.end(), level.begin(), level.end());
    by_size.push_back(std::move(level));
    prefix.push_back(std::move(acc));
  }
  return prefix[max_size - 1];
}

namespace {

void emit_term(const Term& u, bool parens, std::string& s) {
  switch (u.tag()) {
    case TermTag::K: s += 'K'; return;
    case TermTag::S: s += 'S'; return;
    case TermTag::Oracle: s += '#'; s += u.oracle_name(); return;
    case TermTag::App:
      if (parens) s += '(';
      emit_term(u.fun(), false, s);
      s += ' ';
      emit_term(u.arg(), !u.arg().is_leaf(), s);
      if (parens) s += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  emit_term(t, false, out);
  return out;
}

namespace {

struct TermParser {
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
  bool eof() { skip_ws(); return pos >= src.size(); }
  [[noreturn]] void fail(const std::string& msg, const std::string& expected) {
    throw SyntaxError(msg, line, col, expected);
  }

  Term atom() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of term", "K, S, #name or (");
    char c = src[pos];
    if (c == 'K') { advance(); return Term::k(); }
    if (c == 'S') { advance(); return Term::s(); }
    if (c == '#') {
      advance();
      std::string name;
      while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
        name += src[pos];
        advance();
      }
      if (name.empty()) fail("oracle name expected after '#'", "identifier");
      return Term::oracle(name);
    }
    if (c == '(') {
      advance();
      Term t = expr();
      skip_ws();
      if (pos >= src.size() || src[pos] != ')') fail("unclosed parenthesis", ")");
      advance();
      return t;
    }
    fail(std::string("unexpected character '") + c + "' in term", "K, S, #name or (");
  }

  bool at_atom() {
    skip_ws();
    if (pos >= src.size()) return false;
    char c = src[pos];
    return c == 'K' || c == 'S' || c == '#' || c == '(';
  }

  Term expr() {
    Term t = atom();
    while (at_atom()) t = Term::app(t, atom());
    return t;
  }
};

}  // namespace

Term parse_term(const std::string& src) {
  TermParser p{src};
  Term t = p.expr();
  if (!p.eof()) p.fail("trailing input after term", "end of input");
  return t;
}

}  // namespace rzk
