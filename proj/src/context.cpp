#include "rzk/context.hpp"

#include "rzk/lambda.hpp"

namespace rzk {

PcaContext::PcaContext(std::set<std::string> oracle_signature, std::uint64_t default_fuel,
                       TermSet full_sample)
    : oracles_(std::move(oracle_signature)), fuel_(default_fuel), sample_(std::move(full_sample)) {
  i_ = standard_realizer("id");
  kbar_ = Term::app(Term::k(), i_);
  p_ = standard_realizer("pair");
  p0_ = standard_realizer("fst");
  p1_ = standard_realizer("snd");
  case_ = standard_realizer("case");
  auto r = apply(p_, kbar_, fuel_);
  if (!r.normalized()) throw std::logic_error("p k̄ did not normalize");
  succ_ = r.term();
  pred_ = p1_;
  iszero_ = p0_;
  if (sample_.empty()) sample_ = TermSet{i_, Term::k(), kbar_};

  for (const Term& t : sample_) {
    if (!t.is_normal_form())
      throw std::invalid_argument("full_sample must contain normal forms: " + to_string(t));
  }
  // pairing must be total and surjective on the sample: p0 (p a b) = a, p1 (p a b) = b
  for (const Term& a : sample_) {
    for (const Term& b : sample_) {
      auto pr = reduce(Term::app(p_, a, b), fuel_);
      if (!pr.normalized()) throw std::logic_error("p a b not defined on sample");
      auto l = apply(p0_, pr.term(), fuel_);
      auto rgt = apply(p1_, pr.term(), fuel_);
      if (!l.normalized() || l.term() != a || !rgt.normalized() || rgt.term() != b)
        throw std::logic_error("pairing laws fail on sample");
    }
  }
}

Term PcaContext::derived(const std::string& name) const {
  if (name == "i") return i_;
  if (name == "kbar") return kbar_;
  if (name == "p") return p_;
  if (name == "p0") return p0_;
  if (name == "p1") return p1_;
  if (name == "succ") return succ_;
  if (name == "pred") return pred_;
  if (name == "iszero") return iszero_;
  if (name == "case_guard") return case_;
  throw UnknownName(name);
}

Term PcaContext::numeral(unsigned n) const {
  Term t = i_;
  for (unsigned j = 0; j < n; ++j) t = pair_of(kbar_, t);
  return t;
}

Term PcaContext::pair_of(const Term& a, const Term& b) const {
  auto r = reduce(Term::app(p_, a, b), fuel_);
  if (!r.normalized()) throw std::logic_error("p a b did not normalize");
  return r.term();
}

}  // namespace rzk
