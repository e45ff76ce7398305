#include "rzk/subtopos.hpp"

#include "rzk/lambda.hpp"

namespace rzk {

NestedProp subterminal_u() { return {Prop1::full_a(), Prop1::base(TermSet{})}; }

std::string ClosureOperator::name() const {
  switch (kind) {
    case Kind::Open: return "open";
    case Kind::Closed: return "closed";
    case Kind::Custom: return "custom";
  }
  return "custom";
}

NestedProp apply_closure(const ClosureOperator& j, const NestedProp& p) {
  switch (j.kind) {
    case ClosureOperator::Kind::Open: return nimp(subterminal_u(), p);
    case ClosureOperator::Kind::Closed: return ndisj(subterminal_u(), p);
    case ClosureOperator::Kind::Custom: return j.custom(p);
  }
  throw std::logic_error("apply_closure: bad kind");
}

Predicate sheafify(const ClosureOperator& j, const Predicate& phi) {
  std::map<std::string, NestedProp> at;
  for (const auto& i : phi.index) at.emplace(i, apply_closure(j, phi.fiber(i)));
  return Predicate{phi.index, std::move(at)};
}

namespace {

using L = LambdaTerm;

L V(const char* n) { return L::var(n); }
L C(const Term& t) { return L::constant(t); }

// library realizers for the two canonical operators
struct JRealizers {
  std::optional<Term> inflate, idem, meet_fwd, meet_bwd;
  std::function<Term(const Term&)> mono;  // realizer transformer
};

JRealizers library_realizers(const PcaContext& ctx, const ClosureOperator& j) {
  JRealizers out;
  const Term p = ctx.pairing();
  const Term p0 = ctx.proj0();
  const Term p1 = ctx.proj1();
  const Term kb = ctx.kbar();
  const Term cs = ctx.case_guard();
  if (j.kind == ClosureOperator::Kind::Open) {
    out.inflate = Term::k();  // \x. \d. x
    out.idem = compile(L::lam("f", L::lam("d", L::app(L::app(V("f"), V("d")), V("d")))));
    out.meet_fwd = compile(L::lam(
        "f", L::app(C(p), L::lam("d", L::app(C(p0), L::app(V("f"), V("d")))),
                    L::lam("d", L::app(C(p1), L::app(V("f"), V("d")))))));
    out.meet_bwd = compile(L::lam(
        "z", L::lam("d", L::app(C(p), L::app(L::app(C(p0), V("z")), V("d")),
                                L::app(L::app(C(p1), V("z")), V("d"))))));
    out.mono = [p0 = ctx.proj0()](const Term& a) {
      return compile(L::lam("f", L::lam("d", L::app(C(a), L::app(V("f"), V("d"))))));
    };
  } else if (j.kind == ClosureOperator::Kind::Closed) {
    out.inflate = compile(L::lam("x", L::app(C(p), C(kb), V("x"))));
    out.idem = compile(L::lam(
        "z", L::app(L::app(C(cs), V("z")), L::lam("y", L::app(C(p), C(Term::k()), V("y"))),
                    L::lam("w", V("w")))));
    out.meet_fwd = compile(L::lam(
        "z", L::app(L::app(C(cs), V("z")),
                    L::lam("y", L::app(C(p), L::app(C(p), C(Term::k()), V("y")),
                                       L::app(C(p), C(Term::k()), V("y")))),
                    L::lam("w", L::app(C(p), L::app(C(p), C(kb), L::app(C(p0), V("w"))),
                                       L::app(C(p), C(kb), L::app(C(p1), V("w"))))))));
    out.meet_bwd = compile(L::lam(
        "z", L::app(L::app(C(cs), L::app(C(p0), V("z"))),
                    L::lam("y", L::app(C(p), C(Term::k()), V("y"))),
                    L::lam("x", L::app(L::app(C(cs), L::app(C(p1), V("z"))),
                                       L::lam("y2", L::app(C(p), C(Term::k()), V("y2"))),
                                       L::lam("y3", L::app(C(p), C(kb),
                                                           L::app(C(p), V("x"), V("y3")))))))));
    out.mono = [p, kb, cs](const Term& a) {
      return compile(L::lam(
          "z", L::app(L::app(C(cs), V("z")), L::lam("y", L::app(C(p), C(Term::k()), V("y"))),
                      L::lam("w", L::app(C(p), C(kb), L::app(C(a), V("w")))))));
    };
  }
  return out;
}

LawResult check_law(const PcaContext& ctx, const Predicate& from, const Predicate& to,
                    const std::string& name, const std::optional<Term>& lib, std::uint64_t fuel,
                    std::size_t max_size) {
  LawResult r;
  r.law = name;
  if (lib) {
    auto rep = entails_verify(ctx, from, to, *lib, fuel);
    if (rep.holds == Verdict::Yes) {
      r.verdict = Verdict::Yes;
      r.realizer = *lib;
      r.via = "library";
      return r;
    }
  }
  auto found = entails_search(ctx, from, to, max_size, fuel);
  if (found) {
    r.verdict = Verdict::Yes;
    r.realizer = found;
    r.via = "search";
  } else {
    r.verdict = lib ? Verdict::No : Verdict::Unknown;
    r.via = "search";
  }
  return r;
}

}  // namespace

JLawsReport j_laws_check(const PcaContext& ctx, const ClosureOperator& j,
                         const std::vector<Predicate>& samples, std::uint64_t fuel,
                         std::size_t max_size) {
  JLawsReport rep;
  JRealizers lib = library_realizers(ctx, j);
  for (std::size_t n = 0; n < samples.size(); ++n) {
    const Predicate& p = samples[n];
    const Predicate& q = samples[(n + 1) % samples.size()];
    std::string tag = "[" + std::to_string(n) + "] ";
    Predicate jp = sheafify(j, p);
    Predicate jq = sheafify(j, q);
    rep.laws.push_back(
        check_law(ctx, p, jp, tag + "inflation", lib.inflate, fuel, max_size));
    rep.laws.push_back(check_law(ctx, sheafify(j, jp), jp, tag + "idempotence", lib.idem, fuel,
                                 max_size));
    Predicate pq = pointwise_conj(p, q);
    rep.laws.push_back(check_law(ctx, sheafify(j, pq), pointwise_conj(jp, jq),
                                 tag + "meet_fwd", lib.meet_fwd, fuel, max_size));
    rep.laws.push_back(check_law(ctx, pointwise_conj(jp, jq), sheafify(j, pq),
                                 tag + "meet_bwd", lib.meet_bwd, fuel, max_size));
    // monotone on the entailed pair p ⊢ p ∨ q (left injection)
    Term inl = compile(L::lam("x", L::app(C(ctx.pairing()), C(Term::k()), V("x"))));
    Predicate por = pointwise_disj(p, q);
    std::optional<Term> mono_lib;
    if (lib.mono) mono_lib = lib.mono(inl);
    rep.laws.push_back(
        check_law(ctx, jp, sheafify(j, por), tag + "monotone", mono_lib, fuel, max_size));
  }
  return rep;
}

RelPredicate RelPredicate::make(std::vector<std::string> index, std::map<std::string, Prop1> at) {
  RelPredicate p{std::move(index), std::move(at)};
  for (const auto& i : p.index)
    if (p.at.find(i) == p.at.end())
      throw std::invalid_argument("RelPredicate: missing fiber " + i);
  return p;
}

const Prop1& RelPredicate::fiber(const std::string& i) const {
  auto it = at.find(i);
  if (it == at.end()) throw std::invalid_argument("RelPredicate: no fiber " + i);
  return it->second;
}

namespace {

bool same_rel_index(const RelPredicate& a, const RelPredicate& b) {
  auto x = a.index, y = b.index;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

}  // namespace

EntailmentReport entails_rel(const PcaContext& ctx, const RelPredicate& phi,
                             const RelPredicate& psi, const Term& realizer, std::uint64_t fuel) {
  if (!same_rel_index(phi, psi)) throw IndexMismatch();
  EntailmentReport rep;
  rep.realizer = realizer;
  if (!in_subpca(realizer)) {
    rep.holds = Verdict::No;
    rep.note = "realizer is not actual (contains an oracle)";
    return rep;
  }
  Verdict acc = Verdict::Yes;
  for (const auto& i : phi.index) {
    for (const Term& w : witness_sample(ctx, phi.fiber(i))) {
      auto r = apply(realizer, w, fuel);
      Verdict v = r.normalized() ? test(ctx, psi.fiber(i), r.term(), fuel) : Verdict::Unknown;
      rep.evidence.push_back({i, "rel", w, v});
      acc = verdict_meet(acc, v);
    }
  }
  rep.holds = acc;
  return rep;
}

std::optional<Term> entails_rel_search(const PcaContext& ctx, const RelPredicate& phi,
                                       const RelPredicate& psi, std::size_t max_size,
                                       std::uint64_t fuel) {
  for (const Term& cand : enumerate_subpca(max_size)) {
    auto rep = entails_rel(ctx, phi, psi, cand, fuel);
    if (rep.holds == Verdict::Yes) return cand;
  }
  return std::nullopt;
}

Predicate embed_relative(const RelPredicate& phi) {
  std::map<std::string, NestedProp> at;
  for (const auto& i : phi.index) {
    const Prop1& p = phi.fiber(i);
    at.emplace(i, NestedProp{p, Prop1::inter({Prop1::full_sub(), p})});
  }
  return Predicate{phi.index, std::move(at)};
}

std::optional<ModPredicate> mod_validate(const PcaContext& ctx, const Predicate& phi,
                                         std::size_t max_size, std::uint64_t fuel) {
  auto global = [&](const Term& t) {
    for (const auto& i : phi.index)
      if (test(ctx, phi.fiber(i).pot, t, fuel) != Verdict::Yes) return false;
    return true;
  };
  // fiber samples first (cheap and often exact), then brute enumeration
  for (const auto& i : phi.index) {
    for (const Term& t : witness_sample(ctx, phi.fiber(i).pot))
      if (in_subpca(t) && global(t)) return ModPredicate{phi, t};
    break;  // candidates from the first fiber suffice; the rest must agree anyway
  }
  for (const Term& t : enumerate_subpca(max_size))
    if (global(t)) return ModPredicate{phi, t};
  return std::nullopt;
}

ModConnectResult mod_connect(const PcaContext& ctx, ModOp op, const ModPredicate& a,
                             const ModPredicate& b, std::size_t max_size, std::uint64_t fuel) {
  Predicate plain = op == ModOp::Conj   ? pointwise_conj(a.base, b.base)
                    : op == ModOp::Disj ? pointwise_disj(a.base, b.base)
                                        : pointwise_imp(a.base, b.base);
  auto global = [&](const Predicate& phi, const Term& t) {
    if (!in_subpca(t)) return false;
    for (const auto& i : phi.index)
      if (test(ctx, phi.fiber(i).pot, t, fuel) != Verdict::Yes) return false;
    return true;
  };
  // canonical witnesses from the inputs' global witnesses
  std::vector<Term> hints;
  if (op == ModOp::Conj) hints.push_back(ctx.pair_of(a.global_witness, b.global_witness));
  if (op == ModOp::Disj) {
    hints.push_back(ctx.pair_of(Term::k(), a.global_witness));
    hints.push_back(ctx.pair_of(ctx.kbar(), b.global_witness));
  }
  for (const Term& h : hints)
    if (global(plain, h)) return {ModPredicate{plain, h}, false};
  if (auto direct = mod_validate(ctx, plain, max_size, fuel)) return {*direct, false};

  // stay inside the modified fibre by closing with c_u
  Predicate closed = sheafify(ClosureOperator::closed(), plain);
  for (const Term& w : ctx.full_sample()) {
    if (!in_subpca(w)) continue;
    Term h = ctx.pair_of(Term::k(), w);
    if (global(closed, h)) return {ModPredicate{closed, h}, true};
  }
  if (auto fallback = mod_validate(ctx, closed, max_size, fuel)) return {*fallback, true};
  throw std::logic_error("mod_connect: c_u image lost its uniform witness");
}

}  // namespace rzk
