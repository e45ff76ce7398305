#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rzk/lambda.hpp"
#include "rzk/term.hpp"

namespace rzk {

struct NameClash : std::runtime_error {
  int line;
  NameClash(const std::string& n, int ln)
      : std::runtime_error("name already declared: " + n), line(ln) {}
};

struct UnresolvedReference : std::runtime_error {
  int line;
  UnresolvedReference(const std::string& n, int ln)
      : std::runtime_error("unresolved reference: " + n), line(ln) {}
};

/// Surface syntax of single-level propositions.
struct PropExpr {
  enum class Kind : std::uint8_t { Ref, Base, Full, FullSub, Imp, Conj, Disj };
  Kind kind = Kind::Full;
  std::string name;                        // Ref
  std::vector<Term> witnesses;             // Base
  std::vector<PropExpr> args;              // binary nodes
};

/// A nested-proposition value: a reference or an inline (pot, act) pair.
struct NestedExpr {
  std::optional<std::string> ref;
  std::optional<std::pair<PropExpr, PropExpr>> pair;
};

struct OracleDecl {
  std::vector<std::string> names;
};
struct PropDecl {
  std::string name;
  PropExpr value;
};
struct NestedDecl {
  std::string name;
  PropExpr pot, act;
};
struct PredDecl {
  std::string name;
  std::vector<std::string> index;
  std::vector<std::pair<std::string, NestedExpr>> fibers;
};
struct CheckStmt {
  std::string lhs, rhs;
  std::optional<LambdaTerm> realizer;
};
struct SearchStmt {
  std::string lhs, rhs;
  std::size_t depth = 7;
};
struct AssemblyDecl {
  std::string name;
  std::vector<std::pair<std::string, NestedExpr>> elements;
};
struct MapDecl {
  std::string name, source, target;
  std::vector<std::pair<std::string, std::string>> arrows;
  LambdaTerm tracker;
};
struct UniverseDecl {
  std::string name;
  std::vector<NestedExpr> members;
};
struct SuiteStmt {
  enum class Kind : std::uint8_t { Small, Tripos, SubtoposOpen, SubtoposClosed };
  Kind kind = Kind::Tripos;
  std::optional<std::size_t> bound;
  std::optional<std::uint64_t> seed;
  std::optional<int> count;
};
struct SetStmt {
  std::string key;  // "fuel" or "depth"
  std::uint64_t value = 0;
};
struct EvalStmt {
  Term term;
  std::optional<Term> expected;
};

using StatementBody = std::variant<OracleDecl, PropDecl, NestedDecl, PredDecl, CheckStmt,
                                   SearchStmt, AssemblyDecl, MapDecl, UniverseDecl, SuiteStmt,
                                   SetStmt, EvalStmt>;

struct Statement {
  int line = 0;
  StatementBody body;
};

struct SessionAst {
  std::vector<Statement> statements;
};

/// Parse and resolve a session; SyntaxError carries position and expectation,
/// NameClash/UnresolvedReference carry the offending line.
SessionAst parse_session(const std::string& source);

/// Canonical source regeneration; parse ∘ pretty_print is the identity on
/// the AST and pretty_print ∘ parse is the identity up to whitespace.
std::string pretty_print(const SessionAst& ast);

}  // namespace rzk
