#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rzk/logic.hpp"

namespace rzk {

/// The unique nontrivial subterminal u = (A, ∅): potentially true everywhere,
/// actually true nowhere.
NestedProp subterminal_u();

/// A local operator on Sigma(A,A#): the open one o_u(p) = u -> p, the closed
/// one c_u(p) = u ∨ p, or a user-supplied candidate to be law-checked.
struct ClosureOperator {
  enum class Kind : std::uint8_t { Open, Closed, Custom };
  Kind kind = Kind::Open;
  std::function<NestedProp(const NestedProp&)> custom;

  static ClosureOperator open() { return {Kind::Open, {}}; }
  static ClosureOperator closed() { return {Kind::Closed, {}}; }
  static ClosureOperator make_custom(std::function<NestedProp(const NestedProp&)> f) {
    return {Kind::Custom, std::move(f)};
  }
  std::string name() const;
};

NestedProp apply_closure(const ClosureOperator& j, const NestedProp& p);

/// Pointwise closure of every fiber; idempotent up to ⊣⊢.
Predicate sheafify(const ClosureOperator& j, const Predicate& phi);

struct LawResult {
  std::string law;
  Verdict verdict = Verdict::Unknown;
  std::optional<Term> realizer;
  std::string via;  // "library" or "search"
};

struct JLawsReport {
  std::vector<LawResult> laws;
  bool all_pass() const {
    for (const auto& l : laws)
      if (l.verdict != Verdict::Yes) return false;
    return true;
  }
};

/// Local-operator laws with explicit realizers: inflation, idempotence,
/// meet preservation (both ways), monotonicity on an entailed pair.
JLawsReport j_laws_check(const PcaContext& ctx, const ClosureOperator& j,
                         const std::vector<Predicate>& samples, std::uint64_t fuel,
                         std::size_t max_size);

/// Fibre of the relative tripos: single-level propositions P(A).
struct RelPredicate {
  std::vector<std::string> index;
  std::map<std::string, Prop1> at;

  static RelPredicate make(std::vector<std::string> index, std::map<std::string, Prop1> at);
  const Prop1& fiber(const std::string& i) const;
};

/// ⊢^r: a single actual realizer maps each fiber sample into the consequent;
/// no separate actual-level obligations.
EntailmentReport entails_rel(const PcaContext& ctx, const RelPredicate& phi,
                             const RelPredicate& psi, const Term& realizer, std::uint64_t fuel);

std::optional<Term> entails_rel_search(const PcaContext& ctx, const RelPredicate& phi,
                                       const RelPredicate& psi, std::size_t max_size,
                                       std::uint64_t fuel);

/// The injective geometric morphism into the nested tripos:
/// φ(i) ↦ (φ(i), A# ∩ φ(i)).
Predicate embed_relative(const RelPredicate& phi);

/// A fibre element of the modified tripos: a predicate together with one
/// uniform actual potential witness.
struct ModPredicate {
  Predicate base;
  Term global_witness;
};

/// Bounded search for the uniform pure-SK potential witness.
std::optional<ModPredicate> mod_validate(const PcaContext& ctx, const Predicate& phi,
                                         std::size_t max_size, std::uint64_t fuel);

enum class ModOp : std::uint8_t { Conj, Disj, Imp };

struct ModConnectResult {
  ModPredicate value;
  bool closure_inserted = false;
};

/// Connective in the modified tripos: compute in P(A,A#), inserting c_u only
/// when the uniform witness would not otherwise exist.
ModConnectResult mod_connect(const PcaContext& ctx, ModOp op, const ModPredicate& a,
                             const ModPredicate& b, std::size_t max_size, std::uint64_t fuel);

}  // namespace rzk
