#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rzk/assembly.hpp"
#include "rzk/rng.hpp"
#include "rzk/small_maps.hpp"
#include "rzk/subtopos.hpp"

namespace rzk {

struct SuiteOptions {
  int count = 50;
  std::uint64_t seed = 1;
  std::uint64_t fuel = 10000;
  std::size_t depth = 7;
};

struct SuiteCheck {
  std::string name;
  Verdict verdict = Verdict::Unknown;
  std::string detail;
  std::optional<Term> realizer;
};

struct SuiteReport {
  std::string suite;
  std::vector<SuiteCheck> checks;
  int yes = 0, no = 0, unknown = 0;

  void add(SuiteCheck c);
  bool all_yes() const { return no == 0 && unknown == 0; }
  double unknown_rate() const {
    int total = yes + no + unknown;
    return total == 0 ? 0.0 : double(unknown) / double(total);
  }
};

// shared randomized generators (deterministic per seed)
NestedProp random_nested_prop(const PcaContext& ctx, Rng& rng, std::size_t max_witnesses = 3);
Predicate random_predicate(const PcaContext& ctx, Rng& rng, std::vector<std::string> index,
                           std::size_t max_witnesses = 3);
Assembly random_assembly(const PcaContext& ctx, Rng& rng, const std::string& name,
                         std::size_t size);
AsmMap random_tracked_map_onto(const PcaContext& ctx, Rng& rng, const Assembly& target,
                               const std::string& name, std::size_t source_size);

/// k/s laws, pairing, sub-pca closure, fuel monotonicity on random normal
/// forms.
SuiteReport pca_law_suite(const PcaContext& ctx, const SuiteOptions& opt);

/// Twelve Heyting laws verified by library realizers on random predicates.
SuiteReport heyting_suite(const PcaContext& ctx, const SuiteOptions& opt);

/// Adjunction units/counits, Frobenius, and Beck-Chevalley on every function
/// and every pullback square between canonical index sets of size <= 3.
SuiteReport quantifier_suite(const PcaContext& ctx, const SuiteOptions& opt);

/// Local-operator laws, o_u(u) ⊣⊢ ⊤, c_u(⊥) ⊣⊢ u, complementarity, relative
/// embedding fullness, o_u-closedness of the image, mod_validate on c_u
/// images.
SuiteReport subtopos_suite(const PcaContext& ctx, const SuiteOptions& opt);

/// Category laws plus exhaustive universal properties at carrier <= 3 and
/// random instances at carrier 4.
SuiteReport assemblies_suite(const PcaContext& ctx, const SuiteOptions& opt);

/// sbar/sf on canonical witnesses, epi factorization for both operators,
/// and the transferred axiom checks.
SuiteReport transfer_suite(const PcaContext& ctx, const SuiteOptions& opt);

/// The fixed 20-entailment corpus: every law has a library realizer that
/// verifies and a brute-search realizer at depth <= 7.
SuiteReport standard_law_corpus(const PcaContext& ctx, const SuiteOptions& opt);

}  // namespace rzk
