#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rzk/logic.hpp"

namespace rzk {

struct UniverseTooSmall : std::runtime_error {
  explicit UniverseTooSmall(const std::string& what)
      : std::runtime_error("universe too small: " + what) {}
};

struct NotACover : std::runtime_error {
  explicit NotACover(const std::string& what) : std::runtime_error("not a cover: " + what) {}
};

struct NotCommuting : std::runtime_error {
  explicit NotCommuting(const std::string& what)
      : std::runtime_error("square does not commute: " + what) {}
};

/// An assembly: finite carrier, one nested proposition per element, every
/// element potentially realized.
struct Assembly {
  std::string name;
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> existence;

  static Assembly make(std::string name, std::vector<std::string> carrier,
                       std::map<std::string, NestedProp> existence);
  const NestedProp& ex(const std::string& x) const;
  bool same_shape(const Assembly& other) const;  // carrier + existence, names ignored
};

/// Throws when some element has an empty potential sample.
void validate_assembly(const PcaContext& ctx, const Assembly& a);

/// Existence as a predicate over the carrier.
Predicate existence_predicate(const Assembly& a);

/// A tracked map of assemblies.
struct AsmMap {
  std::string name;
  Assembly source, target;
  FinMap graph;
  Term tracker;

  static AsmMap make(std::string name, Assembly source, Assembly target,
                     std::map<std::string, std::string> graph, Term tracker);
  const std::string& operator()(const std::string& x) const { return graph(x); }
};

/// E_X ⊢_{|X|} f*E_Y with the map's tracker.
EntailmentReport verify_map(const PcaContext& ctx, const AsmMap& f, std::uint64_t fuel);

AsmMap identity_map(const PcaContext& ctx, const Assembly& x);
/// g ∘ f with the composite tracker λx. g#(f# x).
AsmMap compose_maps(const PcaContext& ctx, const AsmMap& g, const AsmMap& f);

Assembly sub_assembly(const Assembly& x, const std::vector<std::string>& subset,
                      std::string name = {});
/// Inclusion of a sub-assembly, tracked by i.
AsmMap include_map(const PcaContext& ctx, const Assembly& sub, const Assembly& whole);

Assembly terminal_assembly();
Assembly initial_assembly();
/// The unique map X -> 1.
AsmMap bang_map(const PcaContext& ctx, const Assembly& x);
/// A global point 1 -> X of an element with an actual realizer.
std::optional<AsmMap> point_map(const PcaContext& ctx, const Assembly& x, const std::string& elem);

std::string pair_label(const std::string& x, const std::string& y);

struct ProductResult {
  Assembly object;
  AsmMap proj0, proj1;
};
ProductResult product(const PcaContext& ctx, const Assembly& x, const Assembly& y);
/// The canonical mediator <f, g> into a product.
AsmMap pair_map(const PcaContext& ctx, const AsmMap& f, const AsmMap& g,
                const ProductResult& prod);

struct EqualizerResult {
  Assembly object;
  AsmMap include;
};
EqualizerResult equalizer(const PcaContext& ctx, const AsmMap& f, const AsmMap& g);

/// Pullback of f : X -> Z against g : Y -> Z, as a sub-assembly of X × Y.
ProductResult pullback_asm(const PcaContext& ctx, const AsmMap& f, const AsmMap& g);

struct SumResult {
  Assembly object;
  AsmMap inj0, inj1;
};
SumResult sum(const PcaContext& ctx, const Assembly& x, const Assembly& y);
/// Case analysis [f, g] out of a sum, tracked by the guarded case.
AsmMap copair(const PcaContext& ctx, const AsmMap& f, const AsmMap& g, const SumResult& s);
/// f + g : X+Y -> X'+Y'.
AsmMap sum_map(const PcaContext& ctx, const AsmMap& f, const AsmMap& g, const SumResult& dom,
               const SumResult& cod);

/// Bounded tracker search: canonical hints first, then enumeration.
std::optional<Term> find_tracker(const PcaContext& ctx, const Assembly& src, const Assembly& tgt,
                                 const FinMap& graph, const std::vector<Term>& hints,
                                 std::size_t max_size, std::uint64_t fuel);

struct ExponentialResult {
  Assembly object;                             // carrier: found-tracked graphs
  ProductResult domain;                        // object × X
  AsmMap eval;                                 // domain -> Y
  std::map<std::string, FinMap> graph_of;      // carrier label -> graph
  std::map<std::string, Term> tracker_of;      // carrier label -> found tracker
  std::optional<std::string> label_of(const FinMap& g) const;
};
/// Carrier = graphs |X| -> |Y| with a tracker found at the given depth; the
/// undecidability of trackability makes this an explicit under-approximation.
ExponentialResult exponential(const PcaContext& ctx, const Assembly& x, const Assembly& y,
                              std::size_t depth, std::uint64_t fuel);

/// Transpose W -> Y^X of f : W × X -> Y; absent when some slice is not a
/// found point of the exponential.
std::optional<AsmMap> transpose(const PcaContext& ctx, const AsmMap& f, const Assembly& w,
                                const Assembly& x, const ExponentialResult& exp,
                                std::uint64_t fuel);

/// Subobjects of X are predicates over its carrier; lattice operations are
/// the fiberwise connectives and the quantifiers along tracked maps.
Predicate full_subobject(const Assembly& x);
Predicate empty_subobject(const Assembly& x);
enum class QuantMode : std::uint8_t { Exists, Forall };
Predicate sub_quantify(const AsmMap& f, const Predicate& s, QuantMode mode);

struct CoverChoice {
  std::string x;
  Term witness;
  std::string y;
  std::string level;
};

struct CoverReport {
  Verdict verdict = Verdict::Unknown;
  std::optional<Term> lifting;
  std::vector<CoverChoice> choices;
  std::string note;
};

/// Cover = surjective graph + a uniform actual lifting of codomain evidence
/// into the fibers (the (1p)/(1a) conditions). Hints are tried before the
/// enumeration.
CoverReport is_cover(const PcaContext& ctx, const AsmMap& f, std::uint64_t fuel,
                     std::size_t max_size, const std::vector<Term>& hints = {});

struct PropObjects {
  Assembly prop, tr;
  AsmMap top;  // Tr ↣ Prop
  std::vector<NestedProp> universe;
  std::optional<std::string> label_of(const NestedProp& p) const;
  const NestedProp& prop_at(const std::string& label) const;
};
/// Prop = Δ(universe), Tr = its potentially-inhabited part with E_Tr(A) = A.
PropObjects prop_objects(const PcaContext& ctx, const std::vector<NestedProp>& universe);

struct ClassifyResult {
  AsmMap chi;           // X -> Prop
  Assembly pb;          // pullback of top along chi
  AsmMap pb_into_x;     // mono
  AsmMap iso_fwd;       // Y -> pb
  AsmMap iso_bwd;       // pb -> Y
};
/// Characteristic map of a mono m : Y ↣ X; every fiberwise proposition must
/// be registered.
ClassifyResult classify(const PcaContext& ctx, const AsmMap& m, const PropObjects& props,
                        std::uint64_t fuel);

struct WeakPowerResult {
  ExponentialResult exp;   // PX = Prop^X with evaluation
  Assembly membership;     // ∋^w_X
  AsmMap membership_mono;  // into PX × X
  AsmMap to_tr;            // membership -> Tr
};
WeakPowerResult weak_power(const PcaContext& ctx, const Assembly& x, const PropObjects& props,
                           std::size_t depth, std::uint64_t fuel);

/// Fiber of f over x as a sub-assembly of the source.
Assembly fiber_assembly(const AsmMap& f, const std::string& x);

/// Graph bijection plus trackers both ways (hints, then bounded search).
struct IsoWitness {
  AsmMap fwd, bwd;
};
std::optional<IsoWitness> find_iso(const PcaContext& ctx, const Assembly& x, const Assembly& y,
                                   const FinMap& graph, const std::vector<Term>& hints_fwd,
                                   const std::vector<Term>& hints_bwd, std::size_t depth,
                                   std::uint64_t fuel);

}  // namespace rzk
