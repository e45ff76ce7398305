#pragma once

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rzk {

/// Raised by term/DSL parsers; carries a 1-based position.
struct SyntaxError : std::runtime_error {
  int line = 0, column = 0;
  std::string expected;
  SyntaxError(std::string msg, int ln, int col, std::string exp = {})
      : std::runtime_error(std::move(msg)), line(ln), column(col), expected(std::move(exp)) {}
};

enum class TermTag : std::uint8_t { K, S, Oracle, App };

/// An element of the applicative term algebra over {K, S} and inert oracle
/// constants. Immutable, structurally shared; size, normal-form and purity
/// flags are cached on construction so reduction can skip redex-free
/// subtrees.
class Term {
 public:
  Term();

  static Term k();
  static Term s();
  static Term oracle(std::string name);
  static Term app(Term fun, Term arg);
  static Term app(Term fun, Term a, Term b) { return app(app(std::move(fun), std::move(a)), std::move(b)); }
  static Term app(Term fun, Term a, Term b, Term c) {
    return app(app(std::move(fun), std::move(a), std::move(b)), std::move(c));
  }

  TermTag tag() const;
  bool is_leaf() const { return tag() != TermTag::App; }
  const Term& fun() const;
  const Term& arg() const;
  const std::string& oracle_name() const;

  /// Leaf count, saturating at 2^63 (S-duplication can explode sizes).
  std::uint64_t size() const;
  bool is_normal_form() const;
  bool pure() const;
  std::uint64_t hash() const;

  friend bool operator==(const Term& a, const Term& b) { return equal(a, b); }
  friend bool operator!=(const Term& a, const Term& b) { return !equal(a, b); }

  /// Total order: size first, then tag, then structure. Fixes enumeration
  /// and witness-set iteration order everywhere.
  static int compare(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b) { return compare(a, b) < 0; }

 private:
  struct Node;
  struct Null {};
  explicit Term(Null) {}
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static bool equal(const Term& a, const Term& b);
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermTag tag;
  Term fun{Null{}}, arg{Null{}};  // App only
  std::string name;               // Oracle only
  std::uint64_t size = 1;
  std::uint64_t hash = 0;
  bool normal = true;
  bool oracle = false;
  explicit Node(TermTag t) : tag(t) {}
  Node(Term f, Term a) : tag(TermTag::App), fun(std::move(f)), arg(std::move(a)) {}
};

inline TermTag Term::tag() const { return node_->tag; }
inline const Term& Term::fun() const { return node_->fun; }
inline const Term& Term::arg() const { return node_->arg; }
inline const std::string& Term::oracle_name() const { return node_->name; }
inline std::uint64_t Term::size() const { return node_->size; }
inline bool Term::is_normal_form() const { return node_->normal; }
inline bool Term::pure() const { return !node_->oracle; }
inline std::uint64_t Term::hash() const { return node_->hash; }

struct TermHash {
  std::size_t operator()(const Term& t) const { return static_cast<std::size_t>(t.hash()); }
};

/// Deterministically ordered duplicate-free set of terms.
class TermSet {
 public:
  TermSet() = default;
  TermSet(std::initializer_list<Term> ts) { for (const auto& t : ts) insert(t); }
  bool insert(const Term& t);
  bool contains(const Term& t) const;
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }
  const std::vector<Term>& items() const { return items_; }
  friend bool operator==(const TermSet& a, const TermSet& b) { return a.items_ == b.items_; }

 private:
  std::vector<Term> items_;  // sorted by Term order
};

/// Result of fuel-bounded reduction: either the normal form reached or the
/// number of steps burned before giving up. FuelExhausted is a value, not an
/// error; it is how partiality of application shows up at desk scale.
class ReductionOutcome {
 public:
  static ReductionOutcome normal(Term t, std::uint64_t steps) { return ReductionOutcome(std::move(t), steps); }
  static ReductionOutcome exhausted(std::uint64_t steps) { return ReductionOutcome(std::nullopt, steps); }
  bool normalized() const { return nf_.has_value(); }
  const Term& term() const { return *nf_; }
  std::uint64_t steps_used() const { return steps_; }

 private:
  ReductionOutcome(std::optional<Term> nf, std::uint64_t steps) : nf_(std::move(nf)), steps_(steps) {}
  std::optional<Term> nf_;
  std::uint64_t steps_ = 0;
};

/// Leftmost-outermost weak reduction of K/S redexes, at most `fuel` steps.
/// Deterministic; monotone in fuel once a normal form is reached.
ReductionOutcome reduce(const Term& t, std::uint64_t fuel);

/// Partial application of the pca: reduce(fun · arg, fuel).
ReductionOutcome apply(const Term& fun, const Term& arg, std::uint64_t fuel);

/// Membership in the sub-pca A#: no oracle leaf anywhere.
inline bool in_subpca(const Term& t) { return t.pure(); }

/// All pure-SK terms with at most max_size leaves, duplicate-free, ordered
/// by (size, structure); the brute-force search space for realizers.
const std::vector<Term>& enumerate_subpca(std::size_t max_size);

/// Canonical syntax: `K`, `S`, `#name`, juxtaposition left-associative,
/// parentheses around compound arguments.
std::string to_string(const Term& t);
Term parse_term(const std::string& src);

}  // namespace rzk
