#include "rzk/dsl.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace rzk {

namespace {

struct Cursor {
  std::string src;  // comment lines blanked, positions preserved
  std::size_t pos = 0;
  int line = 1, col = 1;

  explicit Cursor(const std::string& raw) {
    // '#' starts a comment to end of line unless it is glued to an
    // identifier, which is an oracle constant like #c0
    src = raw;
    for (std::size_t i = 0; i < src.size(); ++i) {
      if (src[i] != '#') continue;
      bool oracle = i + 1 < src.size() &&
                    (std::isalnum(static_cast<unsigned char>(src[i + 1])) || src[i + 1] == '_');
      if (oracle) continue;
      while (i < src.size() && src[i] != '\n') src[i++] = ' ';
    }
  }

  void advance() {
    if (src[pos] == '\n') { ++line; col = 1; } else ++col;
    ++pos;
  }
  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) advance();
  }
  bool eof() { skip_ws(); return pos >= src.size(); }
  char peek() { skip_ws(); return pos < src.size() ? src[pos] : '\0'; }
  bool starts(const std::string& s) {
    skip_ws();
    return src.compare(pos, s.size(), s) == 0;
  }
  [[noreturn]] void fail(const std::string& msg, const std::string& expected) {
    throw SyntaxError(msg, line, col, expected);
  }
  void expect(const std::string& s) {
    skip_ws();
    if (!starts(s)) fail("expected '" + s + "'", s);
    for (std::size_t i = 0; i < s.size(); ++i) advance();
  }
  bool accept(const std::string& s) {
    skip_ws();
    if (!starts(s)) return false;
    // keywords must not glue onto identifier characters
    if (std::isalpha(static_cast<unsigned char>(s[0]))) {
      std::size_t after = pos + s.size();
      if (after < src.size() &&
          (std::isalnum(static_cast<unsigned char>(src[after])) || src[after] == '_'))
        return false;
    }
    for (std::size_t i = 0; i < s.size(); ++i) advance();
    return true;
  }
  std::string ident() {
    skip_ws();
    std::string out;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      out += src[pos];
      advance();
    }
    if (out.empty()) fail("identifier expected", "identifier");
    return out;
  }
  std::uint64_t number() {
    skip_ws();
    std::string out;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
      out += src[pos];
      advance();
    }
    if (out.empty()) fail("number expected", "number");
    return std::stoull(out);
  }
  // raw text until one of the stop characters at depth zero
  std::string until(const std::string& stops) {
    skip_ws();
    std::string out;
    int depth = 0;
    while (pos < src.size()) {
      char c = src[pos];
      if (depth == 0 && stops.find(c) != std::string::npos) break;
      if (c == '(' || c == '{') ++depth;
      if (c == ')' || c == '}') --depth;
      out += c;
      advance();
    }
    return out;
  }
};

struct Parser {
  Cursor cur;
  SessionAst ast;

  // declared names per kind, for resolution
  std::set<std::string> oracles, props, nesteds, preds, assemblies, maps, universes;
  std::map<std::string, std::set<std::string>> assembly_elements;

  explicit Parser(const std::string& src) : cur(src) {}

  static const std::set<std::string>& realizer_names() {
    static const std::set<std::string> names{
        "i",   "kbar", "p",    "p0",    "p1",      "succ",    "pred",
        "iszero", "case", "id",   "comp",  "pair",    "fst",     "snd",
        "curry",  "uncurry", "exfalso", "const_k", "const_kbar"};
    return names;
  }

  void check_lambda_refs(const LambdaTerm& e, std::set<std::string> bound, int line) {
    switch (e.tag()) {
      case LambdaTerm::Tag::Var:
        if (!bound.count(e.name()) && !realizer_names().count(e.name()))
          throw UnresolvedReference(e.name(), line);
        return;
      case LambdaTerm::Tag::Lam: {
        bound.insert(e.name());
        check_lambda_refs(e.body(), std::move(bound), line);
        return;
      }
      case LambdaTerm::Tag::App:
        check_lambda_refs(e.fun(), bound, line);
        check_lambda_refs(e.arg(), std::move(bound), line);
        return;
      case LambdaTerm::Tag::Const: check_term_refs(e.term(), line); return;
    }
  }

  void check_term_refs(const Term& t, int line) {
    if (t.tag() == TermTag::Oracle && !oracles.count(t.oracle_name()))
      throw UnresolvedReference("#" + t.oracle_name(), line);
    if (!t.is_leaf()) {
      check_term_refs(t.fun(), line);
      check_term_refs(t.arg(), line);
    }
  }

  Term term_until(const std::string& stops, int line) {
    std::string raw = cur.until(stops);
    try {
      Term t = parse_term(raw);
      check_term_refs(t, line);
      return t;
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.what(), line, cur.col, e.expected);
    }
  }

  LambdaTerm lambda_until(const std::string& stops, int line) {
    std::string raw = cur.until(stops);
    try {
      LambdaTerm e = parse_lambda(raw);
      check_lambda_refs(e, {}, line);
      return e;
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.what(), line, cur.col, e.expected);
    }
  }

  PropExpr prop_atom(int line) {
    if (cur.accept("base")) {
      cur.expect("{");
      PropExpr e;
      e.kind = PropExpr::Kind::Base;
      if (!cur.starts("}")) {
        for (;;) {
          e.witnesses.push_back(term_until(",}", line));
          if (cur.accept(",")) continue;
          break;
        }
      }
      cur.expect("}");
      return e;
    }
    if (cur.accept("fullsub")) {
      PropExpr e;
      e.kind = PropExpr::Kind::FullSub;
      return e;
    }
    if (cur.accept("full")) {
      PropExpr e;
      e.kind = PropExpr::Kind::Full;
      return e;
    }
    if (cur.accept("(")) {
      PropExpr e = prop_expr(line);
      cur.expect(")");
      return e;
    }
    PropExpr e;
    e.kind = PropExpr::Kind::Ref;
    e.name = cur.ident();
    if (!props.count(e.name)) throw UnresolvedReference(e.name, line);
    return e;
  }

  PropExpr prop_conj(int line) {
    PropExpr e = prop_atom(line);
    while (cur.starts("/\\")) {
      cur.expect("/\\");
      PropExpr rhs = prop_atom(line);
      PropExpr out;
      out.kind = PropExpr::Kind::Conj;
      out.args = {std::move(e), std::move(rhs)};
      e = std::move(out);
    }
    return e;
  }

  PropExpr prop_disj(int line) {
    PropExpr e = prop_conj(line);
    while (cur.starts("\\/")) {
      cur.expect("\\/");
      PropExpr rhs = prop_conj(line);
      PropExpr out;
      out.kind = PropExpr::Kind::Disj;
      out.args = {std::move(e), std::move(rhs)};
      e = std::move(out);
    }
    return e;
  }

  PropExpr prop_expr(int line) {
    PropExpr e = prop_disj(line);
    if (cur.starts("->")) {
      cur.expect("->");
      PropExpr rhs = prop_expr(line);  // right associative
      PropExpr out;
      out.kind = PropExpr::Kind::Imp;
      out.args = {std::move(e), std::move(rhs)};
      return out;
    }
    return e;
  }

  NestedExpr nested_value(int line) {
    NestedExpr v;
    if (cur.starts("(")) {
      cur.expect("(");
      PropExpr pot = prop_expr(line);
      cur.expect(",");
      PropExpr act = prop_expr(line);
      cur.expect(")");
      v.pair = {std::move(pot), std::move(act)};
      return v;
    }
    std::string name = cur.ident();
    if (!nesteds.count(name)) throw UnresolvedReference(name, line);
    v.ref = std::move(name);
    return v;
  }

  void statement() {
    int line = cur.line;
    if (cur.accept("oracle")) {
      OracleDecl d;
      while (!cur.starts(";")) {
        std::string n = cur.ident();
        if (!oracles.insert(n).second) throw NameClash("#" + n, line);
        d.names.push_back(std::move(n));
      }
      if (d.names.empty()) cur.fail("oracle declaration needs at least one name", "identifier");
      cur.expect(";");
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("prop")) {
      PropDecl d;
      d.name = cur.ident();
      cur.expect("=");
      d.value = prop_expr(line);
      cur.expect(";");
      if (!props.insert(d.name).second) throw NameClash(d.name, line);
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("nested")) {
      NestedDecl d;
      d.name = cur.ident();
      cur.expect("=");
      cur.expect("(");
      d.pot = prop_expr(line);
      cur.expect(",");
      d.act = prop_expr(line);
      cur.expect(")");
      cur.expect(";");
      if (!nesteds.insert(d.name).second) throw NameClash(d.name, line);
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("pred")) {
      PredDecl d;
      d.name = cur.ident();
      cur.expect("over");
      cur.expect("{");
      for (;;) {
        d.index.push_back(cur.ident());
        if (cur.accept(",")) continue;
        break;
      }
      cur.expect("}");
      cur.expect("=");
      cur.expect("{");
      for (;;) {
        std::string label = cur.ident();
        cur.expect(":");
        d.fibers.emplace_back(std::move(label), nested_value(line));
        if (cur.accept(",")) continue;
        break;
      }
      cur.expect("}");
      cur.expect(";");
      std::set<std::string> idx(d.index.begin(), d.index.end());
      if (idx.size() != d.index.size()) throw NameClash("duplicate index label", line);
      std::set<std::string> seen;
      for (const auto& [l, v] : d.fibers) {
        if (!idx.count(l)) throw UnresolvedReference(l, line);
        if (!seen.insert(l).second) throw NameClash(d.name + "." + l, line);
      }
      for (const auto& i : d.index) {
        bool found = false;
        for (const auto& [l, v] : d.fibers) found = found || l == i;
        if (!found) cur.fail("fiber missing for index " + i, i + ":");
      }
      if (!preds.insert(d.name).second) throw NameClash(d.name, line);
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("check")) {
      CheckStmt d;
      d.lhs = cur.ident();
      cur.expect("|-");
      d.rhs = cur.ident();
      if (!preds.count(d.lhs)) throw UnresolvedReference(d.lhs, line);
      if (!preds.count(d.rhs)) throw UnresolvedReference(d.rhs, line);
      if (cur.accept("with")) d.realizer = lambda_until(";", line);
      cur.expect(";");
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("search")) {
      SearchStmt d;
      d.lhs = cur.ident();
      cur.expect("|-");
      d.rhs = cur.ident();
      if (!preds.count(d.lhs)) throw UnresolvedReference(d.lhs, line);
      if (!preds.count(d.rhs)) throw UnresolvedReference(d.rhs, line);
      cur.expect("depth");
      d.depth = static_cast<std::size_t>(cur.number());
      cur.expect(";");
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("assembly")) {
      AssemblyDecl d;
      d.name = cur.ident();
      cur.expect("=");
      cur.expect("{");
      for (;;) {
        std::string label = cur.ident();
        cur.expect(":");
        d.elements.emplace_back(std::move(label), nested_value(line));
        if (cur.accept(",")) continue;
        break;
      }
      cur.expect("}");
      cur.expect(";");
      if (!assemblies.insert(d.name).second) throw NameClash(d.name, line);
      auto& elems = assembly_elements[d.name];
      for (const auto& [l, v] : d.elements)
        if (!elems.insert(l).second) throw NameClash(d.name + "." + l, line);
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("map")) {
      MapDecl d;
      d.name = cur.ident();
      cur.expect(":");
      d.source = cur.ident();
      cur.expect("->");
      d.target = cur.ident();
      if (!assemblies.count(d.source)) throw UnresolvedReference(d.source, line);
      if (!assemblies.count(d.target)) throw UnresolvedReference(d.target, line);
      cur.expect("=");
      cur.expect("{");
      std::set<std::string> sources_seen;
      for (;;) {
        std::string from = cur.ident();
        cur.expect("->");
        std::string to = cur.ident();
        if (!assembly_elements[d.source].count(from)) throw UnresolvedReference(from, line);
        if (!assembly_elements[d.target].count(to)) throw UnresolvedReference(to, line);
        if (!sources_seen.insert(from).second) throw NameClash(d.name + "." + from, line);
        d.arrows.emplace_back(std::move(from), std::move(to));
        if (cur.accept(",")) continue;
        break;
      }
      cur.expect("}");
      cur.expect("tracked");
      d.tracker = lambda_until(";", line);
      cur.expect(";");
      if (!maps.insert(d.name).second) throw NameClash(d.name, line);
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("universe")) {
      UniverseDecl d;
      d.name = cur.ident();
      cur.expect("=");
      cur.expect("{");
      for (;;) {
        d.members.push_back(nested_value(line));
        if (cur.accept(",")) continue;
        break;
      }
      cur.expect("}");
      cur.expect(";");
      if (!universes.insert(d.name).second) throw NameClash(d.name, line);
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("suite")) {
      SuiteStmt d;
      if (cur.accept("small"))
        d.kind = SuiteStmt::Kind::Small;
      else if (cur.accept("tripos"))
        d.kind = SuiteStmt::Kind::Tripos;
      else if (cur.accept("subtopos")) {
        if (cur.accept("open"))
          d.kind = SuiteStmt::Kind::SubtoposOpen;
        else if (cur.accept("closed"))
          d.kind = SuiteStmt::Kind::SubtoposClosed;
        else
          cur.fail("subtopos suite needs 'open' or 'closed'", "open|closed");
      } else
        cur.fail("unknown suite", "small|tripos|subtopos");
      for (;;) {
        if (cur.accept("bound")) {
          d.bound = static_cast<std::size_t>(cur.number());
          continue;
        }
        if (cur.accept("seed")) {
          d.seed = cur.number();
          continue;
        }
        if (cur.accept("count")) {
          d.count = static_cast<int>(cur.number());
          continue;
        }
        break;
      }
      cur.expect(";");
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("set")) {
      SetStmt d;
      if (cur.accept("fuel"))
        d.key = "fuel";
      else if (cur.accept("depth"))
        d.key = "depth";
      else
        cur.fail("unknown setting", "fuel|depth");
      d.value = cur.number();
      cur.expect(";");
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    if (cur.accept("eval")) {
      EvalStmt d;
      d.term = term_until(";-", line);
      if (cur.starts("->")) {
        cur.expect("->");
        d.expected = term_until(";", line);
      }
      cur.expect(";");
      ast.statements.push_back({line, std::move(d)});
      return;
    }
    cur.fail("unknown statement", "oracle|prop|nested|pred|check|search|assembly|map|universe|suite|set|eval");
  }
};

std::string print_prop(const PropExpr& e) {
  switch (e.kind) {
    case PropExpr::Kind::Ref: return e.name;
    case PropExpr::Kind::Full: return "full";
    case PropExpr::Kind::FullSub: return "fullsub";
    case PropExpr::Kind::Base: {
      std::string out = "base {";
      for (std::size_t i = 0; i < e.witnesses.size(); ++i) {
        if (i) out += ", ";
        out += to_string(e.witnesses[i]);
      }
      return out + "}";
    }
    case PropExpr::Kind::Imp:
      return "(" + print_prop(e.args[0]) + " -> " + print_prop(e.args[1]) + ")";
    case PropExpr::Kind::Conj:
      return "(" + print_prop(e.args[0]) + " /\\ " + print_prop(e.args[1]) + ")";
    case PropExpr::Kind::Disj:
      return "(" + print_prop(e.args[0]) + " \\/ " + print_prop(e.args[1]) + ")";
  }
  return {};
}

std::string print_nested_value(const NestedExpr& v) {
  if (v.ref) return *v.ref;
  return "(" + print_prop(v.pair->first) + ", " + print_prop(v.pair->second) + ")";
}

}  // namespace

SessionAst parse_session(const std::string& source) {
  Parser p(source);
  while (!p.cur.eof()) p.statement();
  return std::move(p.ast);
}

std::string pretty_print(const SessionAst& ast) {
  std::ostringstream out;
  for (const auto& st : ast.statements) {
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, OracleDecl>) {
            out << "oracle";
            for (const auto& n : d.names) out << " " << n;
            out << ";";
          } else if constexpr (std::is_same_v<T, PropDecl>) {
            out << "prop " << d.name << " = " << print_prop(d.value) << ";";
          } else if constexpr (std::is_same_v<T, NestedDecl>) {
            out << "nested " << d.name << " = (" << print_prop(d.pot) << ", "
                << print_prop(d.act) << ");";
          } else if constexpr (std::is_same_v<T, PredDecl>) {
            out << "pred " << d.name << " over {";
            for (std::size_t i = 0; i < d.index.size(); ++i)
              out << (i ? ", " : "") << d.index[i];
            out << "} = {";
            for (std::size_t i = 0; i < d.fibers.size(); ++i)
              out << (i ? ", " : "") << d.fibers[i].first << ": "
                  << print_nested_value(d.fibers[i].second);
            out << "};";
          } else if constexpr (std::is_same_v<T, CheckStmt>) {
            out << "check " << d.lhs << " |- " << d.rhs;
            if (d.realizer) out << " with " << to_string(*d.realizer);
            out << ";";
          } else if constexpr (std::is_same_v<T, SearchStmt>) {
            out << "search " << d.lhs << " |- " << d.rhs << " depth " << d.depth << ";";
          } else if constexpr (std::is_same_v<T, AssemblyDecl>) {
            out << "assembly " << d.name << " = {";
            for (std::size_t i = 0; i < d.elements.size(); ++i)
              out << (i ? ", " : "") << d.elements[i].first << ": "
                  << print_nested_value(d.elements[i].second);
            out << "};";
          } else if constexpr (std::is_same_v<T, MapDecl>) {
            out << "map " << d.name << " : " << d.source << " -> " << d.target << " = {";
            for (std::size_t i = 0; i < d.arrows.size(); ++i)
              out << (i ? ", " : "") << d.arrows[i].first << " -> " << d.arrows[i].second;
            out << "} tracked " << to_string(d.tracker) << ";";
          } else if constexpr (std::is_same_v<T, UniverseDecl>) {
            out << "universe " << d.name << " = {";
            for (std::size_t i = 0; i < d.members.size(); ++i)
              out << (i ? ", " : "") << print_nested_value(d.members[i]);
            out << "};";
          } else if constexpr (std::is_same_v<T, SuiteStmt>) {
            out << "suite ";
            switch (d.kind) {
              case SuiteStmt::Kind::Small: out << "small"; break;
              case SuiteStmt::Kind::Tripos: out << "tripos"; break;
              case SuiteStmt::Kind::SubtoposOpen: out << "subtopos open"; break;
              case SuiteStmt::Kind::SubtoposClosed: out << "subtopos closed"; break;
            }
            if (d.bound) out << " bound " << *d.bound;
            if (d.seed) out << " seed " << *d.seed;
            if (d.count) out << " count " << *d.count;
            out << ";";
          } else if constexpr (std::is_same_v<T, SetStmt>) {
            out << "set " << d.key << " " << d.value << ";";
          } else if constexpr (std::is_same_v<T, EvalStmt>) {
            out << "eval " << to_string(d.term);
            if (d.expected) out << " -> " << to_string(*d.expected);
            out << ";";
          }
        },
        st.body);
    out << "\n";
  }
  return out.str();
}

}  // namespace rzk
