#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rzk/assembly.hpp"
#include "rzk/rng.hpp"
#include "rzk/subtopos.hpp"

namespace rzk {

/// Finite stand-in for the inaccessible cardinal: a map is small when every
/// fiber has fewer than `bound` elements. Registered assemblies feed the
/// universal family; their carriers use labels from {0..bound-1} and stay
/// strictly below the bound, mirroring |X| ⊆ κ, card |X| < κ.
struct SmallMapConfig {
  std::size_t bound = 4;
  std::vector<Assembly> universe;
  std::uint64_t fuel = 10000;
  std::size_t depth = 7;

  static SmallMapConfig make(std::size_t bound, std::uint64_t fuel = 10000,
                             std::size_t depth = 7);
  void register_assembly(const Assembly& a);
  std::optional<std::size_t> find_registered(const Assembly& a) const;
};

bool is_small(const AsmMap& f, const SmallMapConfig& cfg);

enum class SquareClass : std::uint8_t { Pullback, Quasipullback, Neither };
std::string to_string(SquareClass c);

/// top: W -> TR, left: W -> BL, right: TR -> A, bottom: BL -> A,
/// commuting as right ∘ top = bottom ∘ left.
struct CommutingSquare {
  AsmMap top, left, right, bottom;
};

struct SquareWitness {
  CommutingSquare square;
  SquareClass cls = SquareClass::Neither;
  AsmMap mediator;
  CoverReport mediator_cover;
  std::string note;
};

/// Computes the pullback of (bottom, right), the canonical mediator from W,
/// and classifies: iso mediator = Pullback, cover mediator = Quasipullback.
SquareWitness quasipullback_check(const PcaContext& ctx, const CommutingSquare& sq,
                                  std::uint64_t fuel, std::size_t max_size);

struct CollectionResult {
  Assembly z;
  AsmMap inclusion;  // Z into Y
  CommutingSquare rectangle;
  SquareWitness witness;
};

/// The (A6) construction: Z picks one fiber representative per (x, potential
/// witness) from the cover's lifting evidence; p ∘ i stays a cover.
CollectionResult collection_construct(const PcaContext& ctx, const AsmMap& cover,
                                      const AsmMap& small_map, const SmallMapConfig& cfg);

struct UniversalFamily {
  Assembly u, e;
  AsmMap pi;
};

/// U = Δ(universe), |E| = {(X,x)}, E_E(X,x) = E_X(x), π = first projection.
UniversalFamily universal_family(const PcaContext& ctx, const SmallMapConfig& cfg);

/// Every registered-fiber small map is a genuine pullback of π.
SquareWitness exhibit_pullback(const PcaContext& ctx, const AsmMap& f, const UniversalFamily& fam,
                               const SmallMapConfig& cfg);

struct AxiomResult {
  std::string axiom;
  int instances = 0;
  int failures = 0;
  std::vector<std::string> notes;
};

struct AxiomSuiteReport {
  std::vector<AxiomResult> axioms;
  std::string deviation;
  bool all_pass() const {
    for (const auto& a : axioms)
      if (a.failures != 0) return false;
    return true;
  }
};

/// Instance-level checks of (A0)-(A7), (A9) and the bounded-(A8) surrogate.
AxiomSuiteReport axiom_suite(const PcaContext& ctx, const SmallMapConfig& cfg, int count,
                             std::uint64_t seed);

/// An object of the exact/regular completion in presentation form: an
/// assembly with a realizer-verified equivalence relation over its carrier.
struct QuotObject {
  Assembly base;
  Predicate relation;  // over pair labels of carrier × carrier
  Term refl, sym, trans;

  static QuotObject make(const PcaContext& ctx, Assembly base, Predicate relation, Term refl,
                         Term sym, Term trans, std::uint64_t fuel);
  static QuotObject discrete(const PcaContext& ctx, const Assembly& a);
  bool related(const PcaContext& ctx, const std::string& x, const std::string& y) const;
};

/// A map of quotient objects: a base map respecting the relations.
struct QuotMap {
  QuotObject source, target;
  AsmMap base_map;
  Term respect;

  static QuotMap make(const PcaContext& ctx, QuotObject source, QuotObject target,
                      AsmMap base_map, Term respect, std::uint64_t fuel);
};

/// The shadow assembly of a quotient object: one element per equivalence
/// class, existence = union of the members' existence.
Assembly collapse(const PcaContext& ctx, const QuotObject& q);
/// Class projection base -> collapse, a cover lifted by i.
AsmMap collapse_map(const PcaContext& ctx, const QuotObject& q);
/// Collapsed map between the shadows.
AsmMap collapsed_map(const PcaContext& ctx, const QuotMap& f);

struct TransferWitness {
  AsmMap g;  // the assembly-level small map
  CommutingSquare square;
  SquareWitness qpb;
  std::string route;  // "canonical" or "searched"
};

/// S̄ membership: a quasipullback with covers on top and bottom and a small
/// assembly map on the left, checked on the quotient presentation.
std::optional<TransferWitness> sbar_check(const PcaContext& ctx, const QuotMap& f,
                                          const SmallMapConfig& cfg);

/// Sheafified assembly: fiberwise closure with canonical inhabitants
/// attached so existence stays potentially realized.
Assembly sheafify_assembly(const PcaContext& ctx, const ClosureOperator& j, const Assembly& a);
/// Sheafified map: same graph, tracker transported through the closure.
AsmMap sheafify_map(const PcaContext& ctx, const ClosureOperator& j, const AsmMap& f);

/// S_F membership: a g in S and a j-cover e with a(g) covering e*f in a
/// quasipullback. Canonical origins are tried first, then a bounded search
/// over the registered universe.
std::optional<TransferWitness> sf_check(const PcaContext& ctx, const ClosureOperator& j,
                                        const AsmMap& f, const SmallMapConfig& cfg);

/// Direct witness for f = a(g) with e = identity; re-verified, not assumed.
TransferWitness sf_canonical_witness(const PcaContext& ctx, const ClosureOperator& j,
                                     const AsmMap& g, const SmallMapConfig& cfg);

/// Lemma-epi instance check: the image factorization of a cover sheafifies
/// to (iso mono) ∘ (j-cover epi) with the same graph.
bool epi_factorization_check(const PcaContext& ctx, const ClosureOperator& j, const AsmMap& cover,
                             const SmallMapConfig& cfg);

/// Instance-level (A0)(A1)(A2)(A3)(A4)(A5)(A7) for the transferred class.
AxiomSuiteReport sf_axiom_suite(const PcaContext& ctx, const ClosureOperator& j,
                                const SmallMapConfig& cfg, int count, std::uint64_t seed);

}  // namespace rzk
