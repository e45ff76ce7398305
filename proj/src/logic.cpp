#include "rzk/logic.hpp"

#include <algorithm>

namespace rzk {

Verdict verdict_meet(Verdict a, Verdict b) {
  if (a == Verdict::No || b == Verdict::No) return Verdict::No;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::Yes;
}

Verdict verdict_join(Verdict a, Verdict b) {
  if (a == Verdict::Yes || b == Verdict::Yes) return Verdict::Yes;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::No;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

struct Prop1::Node {
  Kind kind;
  TermSet base;
  Prop1 lhs{Null{}}, rhs{Null{}};
  std::vector<Prop1> parts;
  TermSet attached;
  explicit Node(Kind k) : kind(k) {}
};

Prop1::Prop1() { *this = base(TermSet{}); }

Prop1 Prop1::base(TermSet witnesses) {
  Node n(Kind::Base);
  n.base = std::move(witnesses);
  return Prop1{std::make_shared<const Node>(std::move(n))};
}

Prop1 Prop1::full_a() { return Prop1{std::make_shared<const Node>(Node(Kind::FullA))}; }
Prop1 Prop1::full_sub() { return Prop1{std::make_shared<const Node>(Node(Kind::FullSub))}; }

Prop1 Prop1::imp(Prop1 a, Prop1 b) {
  Node n(Kind::Imp);
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return Prop1{std::make_shared<const Node>(std::move(n))};
}

Prop1 Prop1::conj(Prop1 a, Prop1 b) {
  Node n(Kind::Conj);
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return Prop1{std::make_shared<const Node>(std::move(n))};
}

Prop1 Prop1::disj(Prop1 a, Prop1 b) {
  Node n(Kind::Disj);
  n.lhs = std::move(a);
  n.rhs = std::move(b);
  return Prop1{std::make_shared<const Node>(std::move(n))};
}

Prop1 Prop1::inter(std::vector<Prop1> parts) {
  Node n(Kind::Inter);
  n.parts = std::move(parts);
  return Prop1{std::make_shared<const Node>(std::move(n))};
}

Prop1 Prop1::union_of(std::vector<Prop1> parts) {
  Node n(Kind::Union);
  n.parts = std::move(parts);
  return Prop1{std::make_shared<const Node>(std::move(n))};
}

Prop1::Kind Prop1::kind() const { return node_->kind; }
const TermSet& Prop1::base_witnesses() const { return node_->base; }
const Prop1& Prop1::lhs() const { return node_->lhs; }
const Prop1& Prop1::rhs() const { return node_->rhs; }
const std::vector<Prop1>& Prop1::parts() const { return node_->parts; }
const TermSet& Prop1::attached() const { return node_->attached; }

Prop1 Prop1::attach_witness(const Term& t) const {
  Node n(node_->kind);
  n.base = node_->base;
  n.lhs = node_->lhs;
  n.rhs = node_->rhs;
  n.parts = node_->parts;
  n.attached = node_->attached;
  n.attached.insert(t);
  return Prop1{std::make_shared<const Node>(std::move(n))};
}

bool Prop1::equal(const Prop1& a, const Prop1& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind()) return false;
  if (!(a.attached() == b.attached())) return false;
  switch (a.kind()) {
    case Kind::Base: return a.base_witnesses() == b.base_witnesses();
    case Kind::FullA:
    case Kind::FullSub: return true;
    case Kind::Imp:
    case Kind::Conj:
    case Kind::Disj: return equal(a.lhs(), b.lhs()) && equal(a.rhs(), b.rhs());
    case Kind::Inter:
    case Kind::Union: {
      if (a.parts().size() != b.parts().size()) return false;
      for (std::size_t i = 0; i < a.parts().size(); ++i)
        if (!equal(a.parts()[i], b.parts()[i])) return false;
      return true;
    }
  }
  return false;
}

namespace {

// application inside membership tests; exhaustion surfaces as Unknown
std::optional<Term> try_apply(const Term& f, const Term& a, std::uint64_t fuel) {
  auto r = apply(f, a, fuel);
  if (!r.normalized()) return std::nullopt;
  return r.term();
}

}  // namespace

Verdict test(const PcaContext& ctx, const Prop1& p, const Term& t, std::uint64_t fuel) {
  switch (p.kind()) {
    case Prop1::Kind::Base: return p.base_witnesses().contains(t) ? Verdict::Yes : Verdict::No;
    case Prop1::Kind::FullA: return Verdict::Yes;
    case Prop1::Kind::FullSub: return in_subpca(t) ? Verdict::Yes : Verdict::No;
    case Prop1::Kind::Imp: {
      Verdict acc = Verdict::Yes;
      for (const Term& w : witness_sample(ctx, p.lhs())) {
        auto r = try_apply(t, w, fuel);
        Verdict v = r ? test(ctx, p.rhs(), *r, fuel) : Verdict::Unknown;
        acc = verdict_meet(acc, v);
        if (acc == Verdict::No) return acc;
      }
      return acc;
    }
    case Prop1::Kind::Conj: {
      auto l = try_apply(ctx.proj0(), t, fuel);
      auto r = try_apply(ctx.proj1(), t, fuel);
      Verdict vl = l ? test(ctx, p.lhs(), *l, fuel) : Verdict::Unknown;
      if (vl == Verdict::No) return Verdict::No;
      Verdict vr = r ? test(ctx, p.rhs(), *r, fuel) : Verdict::Unknown;
      return verdict_meet(vl, vr);
    }
    case Prop1::Kind::Disj: {
      auto tag = try_apply(ctx.proj0(), t, fuel);
      if (!tag) return Verdict::Unknown;
      auto payload = try_apply(ctx.proj1(), t, fuel);
      if (*tag == Term::k())
        return payload ? test(ctx, p.lhs(), *payload, fuel) : Verdict::Unknown;
      if (*tag == ctx.kbar())
        return payload ? test(ctx, p.rhs(), *payload, fuel) : Verdict::Unknown;
      return Verdict::No;
    }
    case Prop1::Kind::Inter: {
      Verdict acc = Verdict::Yes;
      for (const Prop1& q : p.parts()) {
        acc = verdict_meet(acc, test(ctx, q, t, fuel));
        if (acc == Verdict::No) return acc;
      }
      return acc;
    }
    case Prop1::Kind::Union: {
      Verdict acc = Verdict::No;
      for (const Prop1& q : p.parts()) {
        acc = verdict_join(acc, test(ctx, q, t, fuel));
        if (acc == Verdict::Yes) return acc;
      }
      return acc;
    }
  }
  return Verdict::Unknown;
}

TermSet witness_sample(const PcaContext& ctx, const Prop1& p) {
  TermSet out;
  std::uint64_t fuel = ctx.default_fuel();
  switch (p.kind()) {
    case Prop1::Kind::Base: out = p.base_witnesses(); break;
    case Prop1::Kind::FullA: out = ctx.full_sample(); break;
    case Prop1::Kind::FullSub:
      for (const Term& t : ctx.full_sample())
        if (in_subpca(t)) out.insert(t);
      break;
    case Prop1::Kind::Imp: break;  // empty unless attached
    case Prop1::Kind::Conj:
      for (const Term& a : witness_sample(ctx, p.lhs()))
        for (const Term& b : witness_sample(ctx, p.rhs())) out.insert(ctx.pair_of(a, b));
      break;
    case Prop1::Kind::Disj:
      for (const Term& a : witness_sample(ctx, p.lhs())) out.insert(ctx.pair_of(Term::k(), a));
      for (const Term& b : witness_sample(ctx, p.rhs())) out.insert(ctx.pair_of(ctx.kbar(), b));
      break;
    case Prop1::Kind::Inter: {
      if (p.parts().empty()) {
        out = ctx.full_sample();  // empty intersection reads as FullA
        break;
      }
      // terms present in every component's sample and testing Yes in each
      TermSet candidates = witness_sample(ctx, p.parts().front());
      for (std::size_t i = 1; i < p.parts().size(); ++i) {
        TermSet si = witness_sample(ctx, p.parts()[i]);
        TermSet keep;
        for (const Term& t : candidates)
          if (si.contains(t)) keep.insert(t);
        candidates = std::move(keep);
      }
      for (const Term& t : candidates) {
        bool all = true;
        for (const Prop1& q : p.parts())
          if (test(ctx, q, t, fuel) != Verdict::Yes) {
            all = false;
            break;
          }
        if (all) out.insert(t);
      }
      break;
    }
    case Prop1::Kind::Union:
      for (const Prop1& q : p.parts())
        for (const Term& t : witness_sample(ctx, q)) out.insert(t);
      break;
  }
  for (const Term& t : p.attached()) out.insert(t);
  return out;
}

NestedProp nimp(const NestedProp& a, const NestedProp& b) {
  Prop1 pot = Prop1::imp(a.pot, b.pot);
  Prop1 act = Prop1::inter({Prop1::full_sub(), Prop1::imp(a.pot, b.pot), Prop1::imp(a.act, b.act)});
  return {std::move(pot), std::move(act)};
}

NestedProp nconj(const NestedProp& a, const NestedProp& b) {
  return {Prop1::conj(a.pot, b.pot), Prop1::conj(a.act, b.act)};
}

NestedProp ndisj(const NestedProp& a, const NestedProp& b) {
  return {Prop1::disj(a.pot, b.pot), Prop1::disj(a.act, b.act)};
}

NestedProp nested_top() { return {Prop1::full_a(), Prop1::full_sub()}; }
NestedProp nested_bottom() { return {Prop1::base(TermSet{}), Prop1::base(TermSet{})}; }

NestedProp nested_base(const TermSet& witnesses) {
  TermSet actual;
  for (const Term& t : witnesses)
    if (in_subpca(t)) actual.insert(t);
  return {Prop1::base(witnesses), Prop1::base(actual)};
}

NestedProp eq_prop(const std::string& x, const std::string& y) {
  if (x == y) return nested_top();
  return nested_bottom();
}

bool validate_nested(const PcaContext& ctx, const NestedProp& np, std::uint64_t fuel) {
  for (const Term& w : witness_sample(ctx, np.act)) {
    if (!in_subpca(w)) return false;
    if (test(ctx, np.pot, w, fuel) != Verdict::Yes) return false;
  }
  return true;
}

FinMap FinMap::make(std::vector<std::string> dom, std::vector<std::string> cod,
                    std::map<std::string, std::string> at) {
  FinMap m{std::move(dom), std::move(cod), std::move(at)};
  for (const auto& d : m.dom) {
    auto it = m.at.find(d);
    if (it == m.at.end()) throw std::invalid_argument("FinMap: not total at " + d);
    if (std::find(m.cod.begin(), m.cod.end(), it->second) == m.cod.end())
      throw std::invalid_argument("FinMap: image outside codomain at " + d);
  }
  return m;
}

FinMap FinMap::identity(std::vector<std::string> labels) {
  std::map<std::string, std::string> at;
  for (const auto& l : labels) at[l] = l;
  return FinMap{labels, labels, std::move(at)};
}

const std::string& FinMap::operator()(const std::string& x) const {
  auto it = at.find(x);
  if (it == at.end()) throw std::invalid_argument("FinMap: applied outside domain: " + x);
  return it->second;
}

FinMap compose(const FinMap& g, const FinMap& f) {
  std::map<std::string, std::string> at;
  for (const auto& d : f.dom) at[d] = g(f(d));
  return FinMap{f.dom, g.cod, std::move(at)};
}

Predicate Predicate::make(std::vector<std::string> index, std::map<std::string, NestedProp> at) {
  Predicate p{std::move(index), std::move(at)};
  for (const auto& i : p.index)
    if (p.at.find(i) == p.at.end()) throw std::invalid_argument("Predicate: missing fiber " + i);
  return p;
}

Predicate Predicate::constant(std::vector<std::string> index, const NestedProp& v) {
  std::map<std::string, NestedProp> at;
  for (const auto& i : index) at.emplace(i, v);
  return Predicate{std::move(index), std::move(at)};
}

const NestedProp& Predicate::fiber(const std::string& i) const {
  auto it = at.find(i);
  if (it == at.end()) throw std::invalid_argument("Predicate: no fiber " + i);
  return it->second;
}

bool same_index(const Predicate& a, const Predicate& b) {
  if (a.index.size() != b.index.size()) return false;
  auto x = a.index, y = b.index;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

namespace {

Predicate pointwise(const Predicate& a, const Predicate& b,
                    NestedProp (*op)(const NestedProp&, const NestedProp&)) {
  if (!same_index(a, b)) throw IndexMismatch();
  std::map<std::string, NestedProp> at;
  for (const auto& i : a.index) at.emplace(i, op(a.fiber(i), b.fiber(i)));
  return Predicate{a.index, std::move(at)};
}

}  // namespace

Predicate pointwise_conj(const Predicate& a, const Predicate& b) { return pointwise(a, b, nconj); }
Predicate pointwise_disj(const Predicate& a, const Predicate& b) { return pointwise(a, b, ndisj); }
Predicate pointwise_imp(const Predicate& a, const Predicate& b) { return pointwise(a, b, nimp); }

namespace {

struct Obligation {
  std::string index;
  const char* level;
  TermSet witnesses;
  Prop1 target;
};

std::vector<Obligation> entailment_obligations(const PcaContext& ctx, const Predicate& phi,
                                               const Predicate& psi) {
  if (!same_index(phi, psi)) throw IndexMismatch();
  std::vector<Obligation> obs;
  for (const auto& i : phi.index) {
    const NestedProp& a = phi.fiber(i);
    const NestedProp& b = psi.fiber(i);
    obs.push_back({i, "pot", witness_sample(ctx, a.pot), b.pot});
    obs.push_back({i, "act", witness_sample(ctx, a.act), b.act});
  }
  return obs;
}

EntailmentReport verify_against(const PcaContext& ctx, const std::vector<Obligation>& obs,
                                const Term& realizer, std::uint64_t fuel, bool keep_evidence) {
  EntailmentReport rep;
  rep.realizer = realizer;
  if (!in_subpca(realizer)) {
    rep.holds = Verdict::No;
    rep.note = "realizer is not actual (contains an oracle)";
    return rep;
  }
  Verdict acc = Verdict::Yes;
  for (const auto& ob : obs) {
    for (const Term& w : ob.witnesses) {
      auto r = apply(realizer, w, fuel);
      Verdict v = r.normalized() ? test(ctx, ob.target, r.term(), fuel) : Verdict::Unknown;
      if (keep_evidence) rep.evidence.push_back({ob.index, ob.level, w, v});
      acc = verdict_meet(acc, v);
      if (acc == Verdict::No && !keep_evidence) {
        rep.holds = acc;
        return rep;
      }
    }
  }
  rep.holds = acc;
  return rep;
}

}  // namespace

EntailmentReport entails_verify(const PcaContext& ctx, const Predicate& phi, const Predicate& psi,
                                const Term& realizer, std::uint64_t fuel) {
  auto obs = entailment_obligations(ctx, phi, psi);
  return verify_against(ctx, obs, realizer, fuel, /*keep_evidence=*/true);
}

std::optional<Term> entails_search(const PcaContext& ctx, const Predicate& phi,
                                   const Predicate& psi, std::size_t max_size,
                                   std::uint64_t fuel) {
  auto obs = entailment_obligations(ctx, phi, psi);
  for (const Term& cand : enumerate_subpca(max_size)) {
    auto rep = verify_against(ctx, obs, cand, fuel, /*keep_evidence=*/false);
    if (rep.holds == Verdict::Yes) return cand;
  }
  return std::nullopt;
}

BiEntailment bi_entails_search(const PcaContext& ctx, const Predicate& a, const Predicate& b,
                               std::size_t max_size, std::uint64_t fuel) {
  return {entails_search(ctx, a, b, max_size, fuel), entails_search(ctx, b, a, max_size, fuel)};
}

Predicate reindex(const FinMap& u, const Predicate& phi) {
  std::map<std::string, NestedProp> at;
  for (const auto& j : u.dom) at.emplace(j, phi.fiber(u(j)));
  return Predicate{u.dom, std::move(at)};
}

Predicate exists_along(const FinMap& u, const Predicate& phi) {
  std::map<std::string, NestedProp> at;
  for (const auto& i : u.cod) {
    std::vector<Prop1> pots, acts;
    for (const auto& j : u.dom) {
      if (u(j) != i) continue;
      pots.push_back(phi.fiber(j).pot);
      acts.push_back(phi.fiber(j).act);
    }
    if (pots.empty())
      at.emplace(i, nested_bottom());
    else
      at.emplace(i, NestedProp{Prop1::union_of(std::move(pots)), Prop1::union_of(std::move(acts))});
  }
  return Predicate{u.cod, std::move(at)};
}

Predicate forall_along(const FinMap& u, const Predicate& phi) {
  std::map<std::string, NestedProp> at;
  for (const auto& i : u.cod) {
    if (u.dom.empty()) {
      at.emplace(i, nested_top());
      continue;
    }
    std::vector<Prop1> pots, acts;
    for (const auto& j : u.dom) {
      NestedProp clause = nimp(eq_prop(u(j), i), phi.fiber(j));
      pots.push_back(clause.pot);
      acts.push_back(clause.act);
    }
    at.emplace(i, NestedProp{Prop1::inter(std::move(pots)), Prop1::inter(std::move(acts))});
  }
  return Predicate{u.cod, std::move(at)};
}

std::map<std::string, NestedProp> generic_decompose(const Predicate& phi) { return phi.at; }

Predicate generic_pullback(const std::vector<std::string>& index,
                           const std::map<std::string, NestedProp>& classifying) {
  return Predicate::make(index, classifying);
}

BCReport beck_chevalley_check(const PcaContext& ctx, const IndexSquare& sq, const Predicate& phi,
                              std::uint64_t fuel, std::size_t max_size) {
  auto label_set = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (label_set(sq.w.dom) != label_set(sq.vprime.dom))
    throw NotAPullback("apex domains disagree");
  if (label_set(sq.w.cod) != label_set(sq.v.dom) || label_set(sq.vprime.cod) != label_set(sq.u.dom) ||
      label_set(sq.v.cod) != label_set(sq.u.cod))
    throw NotAPullback("square boundaries do not line up");
  std::vector<std::pair<std::string, std::string>> image;
  for (const auto& p : sq.w.dom) {
    if (sq.v(sq.w(p)) != sq.u(sq.vprime(p))) throw NotAPullback("square does not commute");
    image.emplace_back(sq.w(p), sq.vprime(p));
  }
  std::sort(image.begin(), image.end());
  if (std::adjacent_find(image.begin(), image.end()) != image.end())
    throw NotAPullback("apex is not jointly monic");
  std::vector<std::pair<std::string, std::string>> want;
  for (const auto& j : sq.v.dom)
    for (const auto& k : sq.u.dom)
      if (sq.v(j) == sq.u(k)) want.emplace_back(j, k);
  std::sort(want.begin(), want.end());
  if (image != want) throw NotAPullback("apex misses matching pairs");

  if (label_set(sq.v.dom) != label_set(phi.index)) throw IndexMismatch();

  BCReport rep;
  {
    Predicate lhs = reindex(sq.u, exists_along(sq.v, phi));
    Predicate rhs = exists_along(sq.vprime, reindex(sq.w, phi));
    rep.directions.push_back({"exists_fwd", entails_search(ctx, lhs, rhs, max_size, fuel)});
    rep.directions.push_back({"exists_bwd", entails_search(ctx, rhs, lhs, max_size, fuel)});
  }
  {
    Predicate lhs = reindex(sq.u, forall_along(sq.v, phi));
    Predicate rhs = forall_along(sq.vprime, reindex(sq.w, phi));
    rep.directions.push_back({"forall_fwd", entails_search(ctx, lhs, rhs, max_size, fuel)});
    rep.directions.push_back({"forall_bwd", entails_search(ctx, rhs, lhs, max_size, fuel)});
  }
  return rep;
}

}  // namespace rzk
