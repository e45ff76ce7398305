#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rzk/context.hpp"
#include "rzk/term.hpp"

namespace rzk {

struct IndexMismatch : std::runtime_error {
  IndexMismatch() : std::runtime_error("predicates do not share an index set") {}
};

struct NotAPullback : std::runtime_error {
  explicit NotAPullback(const std::string& why) : std::runtime_error("not a pullback: " + why) {}
};

/// Three-valued verdict. In meets No dominates Unknown dominates Yes;
/// entailment never reads Unknown as success.
enum class Verdict : std::uint8_t { Yes, No, Unknown };

Verdict verdict_meet(Verdict a, Verdict b);
Verdict verdict_join(Verdict a, Verdict b);
std::string to_string(Verdict v);

/// A single-level proposition: an expression tree denoting a subset of A.
/// Membership is three-valued (fuel may run out); witness samples are the
/// finite desk-scale handle on the denoted set.
class Prop1 {
 public:
  enum class Kind : std::uint8_t { Base, FullA, FullSub, Imp, Conj, Disj, Inter, Union };

  Prop1();  // Base {}

  static Prop1 base(TermSet witnesses);
  static Prop1 full_a();
  static Prop1 full_sub();
  static Prop1 imp(Prop1 a, Prop1 b);
  static Prop1 conj(Prop1 a, Prop1 b);
  static Prop1 disj(Prop1 a, Prop1 b);
  static Prop1 inter(std::vector<Prop1> parts);
  static Prop1 union_of(std::vector<Prop1> parts);

  Kind kind() const;
  const TermSet& base_witnesses() const;
  const Prop1& lhs() const;
  const Prop1& rhs() const;
  const std::vector<Prop1>& parts() const;
  const TermSet& attached() const;

  /// Same tree with one more trusted sample member on the root node.
  Prop1 attach_witness(const Term& t) const;

  static bool equal(const Prop1& a, const Prop1& b);
  friend bool operator==(const Prop1& a, const Prop1& b) { return equal(a, b); }
  friend bool operator!=(const Prop1& a, const Prop1& b) { return !equal(a, b); }

 private:
  struct Node;
  struct Null {};
  explicit Prop1(Null) {}
  explicit Prop1(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Three-valued membership of t (a normal form) in P.
Verdict test(const PcaContext& ctx, const Prop1& p, const Term& t, std::uint64_t fuel);

/// Finite enumerable sample of members; every element tests Yes barring
/// fuel exhaustion. Imp samples are empty unless attached.
TermSet witness_sample(const PcaContext& ctx, const Prop1& p);

/// A nested proposition (potential, actual) in Sigma(A, A#): actual
/// realizers are potential and lie in the sub-pca.
struct NestedProp {
  Prop1 pot, act;
  friend bool operator==(const NestedProp& a, const NestedProp& b) {
    return a.pot == b.pot && a.act == b.act;
  }
};

/// A -> B = (Ap -> Bp, A# ∩ (Ap -> Bp) ∩ (Aa -> Ba))
NestedProp nimp(const NestedProp& a, const NestedProp& b);
/// A ∧ B = (Ap ∧ Bp, Aa ∧ Ba)
NestedProp nconj(const NestedProp& a, const NestedProp& b);
/// A ∨ B = (Ap ∨ Bp, Aa ∨ Ba)
NestedProp ndisj(const NestedProp& a, const NestedProp& b);

NestedProp nested_top();     // (FullA, FullSub)
NestedProp nested_bottom();  // (Base {}, Base {})
NestedProp nested_base(const TermSet& witnesses);  // (Base w, Base (w ∩ A#))

/// Eq(x,y) = ({a ∈ A | x = y}, {a ∈ A# | x = y})
NestedProp eq_prop(const std::string& x, const std::string& y);

/// Containment invariant check on the actual sample.
bool validate_nested(const PcaContext& ctx, const NestedProp& np, std::uint64_t fuel);

/// Total function between finite label sets.
struct FinMap {
  std::vector<std::string> dom, cod;
  std::map<std::string, std::string> at;

  static FinMap make(std::vector<std::string> dom, std::vector<std::string> cod,
                     std::map<std::string, std::string> at);
  static FinMap identity(std::vector<std::string> labels);
  const std::string& operator()(const std::string& x) const;
};

FinMap compose(const FinMap& g, const FinMap& f);  // g after f

/// Predicate over a finite index set: one nested proposition per label.
struct Predicate {
  std::vector<std::string> index;
  std::map<std::string, NestedProp> at;

  static Predicate make(std::vector<std::string> index, std::map<std::string, NestedProp> at);
  static Predicate constant(std::vector<std::string> index, const NestedProp& v);
  const NestedProp& fiber(const std::string& i) const;
};

bool same_index(const Predicate& a, const Predicate& b);

Predicate pointwise_conj(const Predicate& a, const Predicate& b);
Predicate pointwise_disj(const Predicate& a, const Predicate& b);
Predicate pointwise_imp(const Predicate& a, const Predicate& b);

struct CheckRecord {
  std::string index;
  std::string level;  // "pot" or "act"
  Term witness;
  Verdict verdict;
};

struct EntailmentReport {
  Verdict holds = Verdict::Unknown;
  std::optional<Term> realizer;
  std::vector<CheckRecord> evidence;
  std::string note;
};

/// phi ⊢_I psi via realizer a: a is actual (pure-SK) and maps every fiber's
/// potential sample into the potential consequent, actual into actual.
EntailmentReport entails_verify(const PcaContext& ctx, const Predicate& phi, const Predicate& psi,
                                const Term& realizer, std::uint64_t fuel);

/// Smallest pure-SK realizer (enumeration order) within max_size, if any.
std::optional<Term> entails_search(const PcaContext& ctx, const Predicate& phi,
                                   const Predicate& psi, std::size_t max_size, std::uint64_t fuel);

/// Both directions; used for every ⊣⊢ claim.
struct BiEntailment {
  std::optional<Term> forward, backward;
  bool holds() const { return forward.has_value() && backward.has_value(); }
};
BiEntailment bi_entails_search(const PcaContext& ctx, const Predicate& a, const Predicate& b,
                               std::size_t max_size, std::uint64_t fuel);

/// Reindexing along u : J -> I is precomposition.
Predicate reindex(const FinMap& u, const Predicate& phi);

/// ∃_u(φ)(i) = (⋃_{u(j)=i} φp(j), ⋃_{u(j)=i} φa(j)); empty preimage is ⊥.
Predicate exists_along(const FinMap& u, const Predicate& phi);

/// ∀_u(φ)(i) = (⋂_j (Eq(u(j),i) → φ(j))_p, ⋂_j (Eq(u(j),i) → φ(j))_a);
/// empty J gives (FullA, FullSub).
Predicate forall_along(const FinMap& u, const Predicate& phi);

/// The generic family is the identity on Sigma(A,A#): a predicate is its own
/// classifying map, and pulling the generic family back along it re-yields it.
std::map<std::string, NestedProp> generic_decompose(const Predicate& phi);
Predicate generic_pullback(const std::vector<std::string>& index,
                           const std::map<std::string, NestedProp>& classifying);

/// Pullback square of finite index maps:
///   P --w--> J
///   |vprime  |v      with v∘w = u∘vprime and P the set-pullback.
///   K --u--> I
struct IndexSquare {
  FinMap v;       // J -> I
  FinMap u;       // K -> I
  FinMap w;       // P -> J
  FinMap vprime;  // P -> K
};

struct BCDirection {
  std::string name;
  std::optional<Term> realizer;
};

struct BCReport {
  std::vector<BCDirection> directions;  // exists fwd/bwd, forall fwd/bwd
  bool holds() const {
    for (const auto& d : directions)
      if (!d.realizer) return false;
    return true;
  }
};

/// Verifies u*∃_v φ ⊣⊢ ∃_v' w*φ and the ∀ dual on a genuine pullback square.
BCReport beck_chevalley_check(const PcaContext& ctx, const IndexSquare& square,
                              const Predicate& phi, std::uint64_t fuel, std::size_t max_size);

}  // namespace rzk
