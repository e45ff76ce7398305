#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "rzk/term.hpp"

namespace rzk {

/// The nested pca (A, A#) fixed by this workbench: closed SK-terms over the
/// declared oracle signature, with A# the pure-SK subalgebra. Holds the
/// derived combinator table (all pure-SK, so all actual), the default fuel,
/// and the finite sample standing in for "all of A" in witness queries.
///
/// Construction self-checks the pairing laws on the sample at default fuel.
class PcaContext {
 public:
  explicit PcaContext(std::set<std::string> oracle_signature = {},
                      std::uint64_t default_fuel = 10000,
                      TermSet full_sample = {});

  const std::set<std::string>& oracle_signature() const { return oracles_; }
  std::uint64_t default_fuel() const { return fuel_; }
  const TermSet& full_sample() const { return sample_; }

  /// Named derived combinator (i, kbar, p, p0, p1, succ, pred, iszero,
  /// case_guard); throws UnknownName otherwise.
  Term derived(const std::string& name) const;

  const Term& identity() const { return i_; }
  const Term& kbar() const { return kbar_; }
  const Term& pairing() const { return p_; }
  const Term& proj0() const { return p0_; }
  const Term& proj1() const { return p1_; }
  const Term& succ() const { return succ_; }
  const Term& pred() const { return pred_; }
  const Term& is_zero() const { return iszero_; }
  const Term& case_guard() const { return case_; }

  /// Curry numeral: 0 = i, n+1 = p k̄ n̲ (reduced to normal form).
  Term numeral(unsigned n) const;

  /// p·a·b reduced to normal form; total for normal-form a, b.
  Term pair_of(const Term& a, const Term& b) const;

  bool has_oracle(const std::string& name) const { return oracles_.count(name) > 0; }

 private:
  std::set<std::string> oracles_;
  std::uint64_t fuel_;
  TermSet sample_;
  Term i_, kbar_, p_, p0_, p1_, succ_, pred_, iszero_, case_;
};

}  // namespace rzk
