#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "rzk/term.hpp"

namespace rzk {

struct FreeVariable : std::runtime_error {
  std::string name;
  explicit FreeVariable(std::string n)
      : std::runtime_error("free variable: " + n), name(std::move(n)) {}
};

struct UnknownName : std::runtime_error {
  explicit UnknownName(const std::string& n) : std::runtime_error("unknown realizer name: " + n) {}
};

/// λ-terms over combinator constants; the notation realizers are written in
/// before bracket abstraction grinds them down to pure applicative terms.
class LambdaTerm {
 public:
  enum class Tag { Var, Lam, App, Const };

  LambdaTerm();  // the constant K

  static LambdaTerm var(std::string name);
  static LambdaTerm lam(std::string name, LambdaTerm body);
  static LambdaTerm app(LambdaTerm fun, LambdaTerm arg);
  static LambdaTerm app(LambdaTerm f, LambdaTerm a, LambdaTerm b) {
    return app(app(std::move(f), std::move(a)), std::move(b));
  }
  static LambdaTerm constant(Term t);

  Tag tag() const;
  const std::string& name() const;
  const LambdaTerm& body() const;
  const LambdaTerm& fun() const;
  const LambdaTerm& arg() const;
  const Term& term() const;

  bool has_free(const std::string& name) const;

 private:
  struct Node;
  struct Null {};
  explicit LambdaTerm(Null) {}
  explicit LambdaTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct LambdaTerm::Node {
  Tag tag;
  std::string name;
  LambdaTerm lhs{Null{}}, rhs{Null{}};
  Term constant;
  explicit Node(Tag t) : tag(t) {}
};

inline LambdaTerm::Tag LambdaTerm::tag() const { return node_->tag; }
inline const std::string& LambdaTerm::name() const { return node_->name; }
inline const LambdaTerm& LambdaTerm::body() const { return node_->lhs; }
inline const LambdaTerm& LambdaTerm::fun() const { return node_->lhs; }
inline const LambdaTerm& LambdaTerm::arg() const { return node_->rhs; }
inline const Term& LambdaTerm::term() const { return node_->constant; }

/// Bracket abstraction: [x]x = S K K, [x]M = K M when x not free in M,
/// [x](M N) = S ([x]M) ([x]N). Closed inputs only; the output is pure-SK
/// whenever every constant is.
Term compile(const LambdaTerm& e);

/// Named realizer library covering the Heyting laws: id, comp, pair, fst,
/// snd, case (guarded), curry, uncurry, exfalso, const_k, const_kbar.
Term standard_realizer(const std::string& name);

/// λ-syntax used by the DSL: `\x. e`, juxtaposition, `K`, `S`, `#c`.
/// Bare identifiers resolve to standard/derived realizer names.
LambdaTerm parse_lambda(const std::string& src);

std::string to_string(const LambdaTerm& e);

}  // namespace rzk
