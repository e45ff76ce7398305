#include "rzk/suites.hpp"

#include <algorithm>

#include "rzk/lambda.hpp"

namespace rzk {

namespace {

using L = LambdaTerm;
L V(const char* n) { return L::var(n); }
L C(const Term& t) { return L::constant(t); }

std::vector<Term> witness_pool(const PcaContext& ctx) {
  std::vector<Term> pool{Term::k(),           Term::s(),
                         ctx.identity(),      ctx.kbar(),
                         ctx.numeral(1),      ctx.numeral(2),
                         Term::app(Term::k(), Term::k())};
  for (const auto& name : ctx.oracle_signature()) {
    pool.push_back(Term::oracle(name));
    pool.push_back(Term::app(Term::k(), Term::oracle(name)));
  }
  return pool;
}

std::vector<std::string> canon_labels(const char* stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

// all functions between canonical label sets of the given sizes
std::vector<FinMap> all_functions(const std::vector<std::string>& dom,
                                  const std::vector<std::string>& cod) {
  std::vector<FinMap> out;
  if (dom.empty()) {
    out.push_back(FinMap::make(dom, cod, {}));
    return out;
  }
  if (cod.empty()) return out;
  std::vector<std::size_t> pick(dom.size(), 0);
  for (;;) {
    std::map<std::string, std::string> at;
    for (std::size_t i = 0; i < dom.size(); ++i) at[dom[i]] = cod[pick[i]];
    out.push_back(FinMap::make(dom, cod, std::move(at)));
    std::size_t i = 0;
    for (; i < dom.size(); ++i) {
      if (++pick[i] < cod.size()) break;
      pick[i] = 0;
    }
    if (i == dom.size()) break;
  }
  return out;
}

}  // namespace

void SuiteReport::add(SuiteCheck c) {
  switch (c.verdict) {
    case Verdict::Yes: ++yes; break;
    case Verdict::No: ++no; break;
    case Verdict::Unknown: ++unknown; break;
  }
  checks.push_back(std::move(c));
}

NestedProp random_nested_prop(const PcaContext& ctx, Rng& rng, std::size_t max_witnesses) {
  std::vector<Term> pool = witness_pool(ctx);
  TermSet w;
  std::size_t n = 1 + rng.below(max_witnesses);
  for (std::size_t i = 0; i < n; ++i) w.insert(pool[rng.below(pool.size())]);
  if (rng.coin()) w.insert(pool[rng.below(4)]);  // keep actual realizers likely
  if (rng.below(5) == 0) {
    NestedProp a = nested_base(w);
    NestedProp b = nested_base(TermSet{pool[rng.below(pool.size())]});
    return rng.coin() ? nconj(a, b) : ndisj(a, b);
  }
  return nested_base(w);
}

Predicate random_predicate(const PcaContext& ctx, Rng& rng, std::vector<std::string> index,
                           std::size_t max_witnesses) {
  std::map<std::string, NestedProp> at;
  for (const auto& i : index) at.emplace(i, random_nested_prop(ctx, rng, max_witnesses));
  return Predicate::make(std::move(index), std::move(at));
}

Assembly random_assembly(const PcaContext& ctx, Rng& rng, const std::string& name,
                         std::size_t size) {
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;
  for (std::size_t i = 0; i < size; ++i) {
    std::string l = std::to_string(i);
    carrier.push_back(l);
    ex.emplace(l, random_nested_prop(ctx, rng, 2));
  }
  return Assembly::make(name, std::move(carrier), std::move(ex));
}

AsmMap random_tracked_map_onto(const PcaContext& ctx, Rng& rng, const Assembly& target,
                               const std::string& name, std::size_t source_size) {
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;
  std::map<std::string, std::string> g;
  for (std::size_t i = 0; i < source_size; ++i) {
    std::string l = std::to_string(i);
    const std::string& to = target.carrier[rng.below(target.carrier.size())];
    carrier.push_back(l);
    ex.emplace(l, target.ex(to));
    g[l] = to;
  }
  Assembly src = Assembly::make(name, std::move(carrier), std::move(ex));
  return AsmMap::make(name, std::move(src), target, std::move(g), ctx.identity());
}

SuiteReport pca_law_suite(const PcaContext& ctx, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "pca_laws";
  Rng rng(opt.seed);
  std::vector<std::string> oracles(ctx.oracle_signature().begin(), ctx.oracle_signature().end());

  auto random_nf = [&](std::size_t max_leaves) {
    for (;;) {
      std::function<Term(std::size_t)> tree = [&](std::size_t leaves) -> Term {
        if (leaves <= 1 || rng.below(4) == 0) {
          std::size_t n = rng.below(2 + oracles.size());
          if (n == 0) return Term::k();
          if (n == 1) return Term::s();
          return Term::oracle(oracles[n - 2]);
        }
        std::size_t left = 1 + rng.below(leaves - 1);
        return Term::app(tree(left), tree(leaves - left));
      };
      auto r = reduce(tree(max_leaves), 500);
      if (r.normalized() && r.term().size() < 64) return r.term();
    }
  };

  for (int i = 0; i < opt.count; ++i) {
    Term a = random_nf(4), b = random_nf(4), c = random_nf(3);
    SuiteCheck chk;
    chk.name = "instance " + std::to_string(i);
    chk.verdict = Verdict::Yes;

    auto fail = [&](const std::string& why) {
      chk.verdict = Verdict::No;
      chk.detail = why;
    };

    auto kr = reduce(Term::app(Term::k(), a, b), opt.fuel);
    if (!kr.normalized() || kr.term() != a) fail("K law");
    if (!Term::app(Term::s(), a, b).is_normal_form()) fail("S a b undefined");
    auto sl = reduce(Term::app(Term::s(), a, b, c), 2000);
    auto sr = reduce(Term::app(Term::app(a, c), Term::app(b, c)), 2000);
    if (sl.normalized() && sr.normalized() && sl.term() != sr.term()) fail("S law");
    if (sl.normalized()) {
      auto more = reduce(Term::app(Term::s(), a, b, c), 2000 + 5);
      if (!more.normalized() || more.term() != sl.term()) fail("fuel monotonicity");
    }
    if (a.pure() && b.pure()) {
      auto ab = apply(a, b, 2000);
      if (ab.normalized() && !ab.term().pure()) fail("sub-pca closure");
    }
    Term pr = ctx.pair_of(a, b);
    auto l = apply(ctx.proj0(), pr, opt.fuel);
    auto r = apply(ctx.proj1(), pr, opt.fuel);
    if (!l.normalized() || l.term() != a || !r.normalized() || r.term() != b)
      fail("pairing law");
    rep.add(std::move(chk));
  }
  return rep;
}

namespace {

struct HeytingLaw {
  std::string name;
  Predicate from, to;
  Term realizer;
};

std::vector<HeytingLaw> heyting_laws(const PcaContext& ctx, Rng& rng,
                                     const std::vector<std::string>& index,
                                     std::size_t max_witnesses) {
  Predicate phi = random_predicate(ctx, rng, index, max_witnesses);
  Predicate psi = random_predicate(ctx, rng, index, max_witnesses);
  Predicate top = Predicate::constant(index, nested_top());
  Predicate bot = Predicate::constant(index, nested_bottom());
  const Term p = ctx.pairing();
  const Term kb = ctx.kbar();
  const Term cs = ctx.case_guard();

  std::vector<HeytingLaw> laws;
  laws.push_back({"refl", phi, phi, ctx.identity()});
  laws.push_back({"conj_elim_l", pointwise_conj(phi, psi), phi, ctx.proj0()});
  laws.push_back({"conj_elim_r", pointwise_conj(phi, psi), psi, ctx.proj1()});
  laws.push_back({"conj_diag", phi, pointwise_conj(phi, phi),
                  compile(L::lam("x", L::app(C(p), V("x"), V("x"))))});
  laws.push_back({"conj_comm", pointwise_conj(phi, psi), pointwise_conj(psi, phi),
                  compile(L::lam("z", L::app(C(p), L::app(C(ctx.proj1()), V("z")),
                                             L::app(C(ctx.proj0()), V("z")))))});
  laws.push_back({"disj_intro_l", phi, pointwise_disj(phi, psi),
                  compile(L::lam("x", L::app(C(p), C(Term::k()), V("x"))))});
  laws.push_back({"disj_intro_r", psi, pointwise_disj(phi, psi),
                  compile(L::lam("x", L::app(C(p), C(kb), V("x"))))});
  laws.push_back({"disj_comm", pointwise_disj(phi, psi), pointwise_disj(psi, phi),
                  compile(L::lam("z", L::app(L::app(C(cs), V("z")),
                                             L::lam("x", L::app(C(p), C(kb), V("x"))),
                                             L::lam("y", L::app(C(p), C(Term::k()), V("y"))))))});
  laws.push_back({"curry_pair", phi, pointwise_imp(psi, pointwise_conj(phi, psi)), p});
  {
    // modus ponens on an implication with an attached identity witness
    Predicate imp_pp = pointwise_imp(phi, phi);
    std::map<std::string, NestedProp> at;
    for (const auto& i : index) {
      NestedProp f = imp_pp.fiber(i);
      at.emplace(i, NestedProp{f.pot.attach_witness(ctx.identity()),
                               f.act.attach_witness(ctx.identity())});
    }
    Predicate with_wit = Predicate::make(index, at);
    Term eval = compile(L::lam("w", L::app(L::app(C(ctx.proj0()), V("w")),
                                           L::app(C(ctx.proj1()), V("w")))));
    laws.push_back({"eval_mp", pointwise_conj(with_wit, phi), phi, eval});
  }
  laws.push_back({"top_intro", phi, top, standard_realizer("const_k")});
  laws.push_back({"bot_elim", bot, phi, standard_realizer("exfalso")});
  return laws;
}

}  // namespace

SuiteReport heyting_suite(const PcaContext& ctx, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "heyting";
  Rng rng(opt.seed);
  std::vector<std::vector<std::string>> indexes{
      {"a"}, {"a", "b"}, {"a", "b", "c"}, {"a", "b", "c", "d"}};
  for (int i = 0; i < opt.count; ++i) {
    const auto& index = indexes[rng.below(indexes.size())];
    for (auto& law : heyting_laws(ctx, rng, index, 3)) {
      SuiteCheck chk;
      chk.name = law.name + " #" + std::to_string(i);
      auto r = entails_verify(ctx, law.from, law.to, law.realizer, opt.fuel);
      chk.verdict = r.holds;
      chk.realizer = law.realizer;
      if (r.holds != Verdict::Yes) chk.detail = r.note;
      rep.add(std::move(chk));
    }
  }
  return rep;
}

SuiteReport quantifier_suite(const PcaContext& ctx, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "quantifier";
  Rng rng(opt.seed);

  auto searched = [&](const std::string& name, const Predicate& from, const Predicate& to) {
    SuiteCheck chk;
    chk.name = name;
    auto found = entails_search(ctx, from, to, opt.depth, opt.fuel);
    if (found) {
      chk.verdict = Verdict::Yes;
      chk.realizer = found;
    } else {
      chk.verdict = Verdict::No;
      chk.detail = "no realizer at depth";
    }
    rep.add(std::move(chk));
  };

  // adjunctions and Frobenius on every function between sets of size <= 3
  for (std::size_t nj = 0; nj <= 3; ++nj) {
    for (std::size_t ni = 0; ni <= 3; ++ni) {
      auto J = canon_labels("j", nj);
      auto I = canon_labels("i", ni);
      for (const FinMap& u : all_functions(J, I)) {
        std::string tag = "u[" + std::to_string(nj) + "->" + std::to_string(ni) + "#" +
                          std::to_string(rng.below(1000)) + "]";
        Predicate phi = random_predicate(ctx, rng, J, 2);
        Predicate psi = random_predicate(ctx, rng, I, 2);
        searched(tag + " exists_unit", phi, reindex(u, exists_along(u, phi)));
        searched(tag + " exists_counit", exists_along(u, reindex(u, psi)), psi);
        searched(tag + " forall_unit", psi, forall_along(u, reindex(u, psi)));
        searched(tag + " forall_counit", reindex(u, forall_along(u, phi)), phi);
        Predicate lhs = exists_along(u, pointwise_conj(phi, reindex(u, psi)));
        Predicate rhs = pointwise_conj(exists_along(u, phi), psi);
        searched(tag + " frobenius_fwd", lhs, rhs);
        searched(tag + " frobenius_bwd", rhs, lhs);
      }
    }
  }

  // Beck-Chevalley on every pullback square between sets of size <= 3
  for (std::size_t ni = 0; ni <= 3; ++ni) {
    auto I = canon_labels("i", ni);
    for (std::size_t nj = 0; nj <= 3; ++nj) {
      auto J = canon_labels("j", nj);
      for (std::size_t nk = 0; nk <= 3; ++nk) {
        auto K = canon_labels("k", nk);
        for (const FinMap& v : all_functions(J, I)) {
          for (const FinMap& u : all_functions(K, I)) {
            // canonical apex
            std::vector<std::string> P;
            std::map<std::string, std::string> wg, vg;
            for (const auto& j : J)
              for (const auto& k : K)
                if (v(j) == u(k)) {
                  std::string l = "p" + std::to_string(P.size());
                  P.push_back(l);
                  wg[l] = j;
                  vg[l] = k;
                }
            IndexSquare sq{v, u, FinMap::make(P, J, wg), FinMap::make(P, K, vg)};
            Predicate phi = random_predicate(ctx, rng, J, 2);
            BCReport bc = beck_chevalley_check(ctx, sq, phi, opt.fuel, opt.depth);
            for (const auto& d : bc.directions) {
              SuiteCheck chk;
              chk.name = "bc[" + std::to_string(nj) + "," + std::to_string(nk) + "->" +
                         std::to_string(ni) + "] " + d.name;
              chk.verdict = d.realizer ? Verdict::Yes : Verdict::No;
              chk.realizer = d.realizer;
              rep.add(std::move(chk));
            }
          }
        }
      }
    }
  }
  return rep;
}

namespace {

NestedProp open_closure_with_witness(const PcaContext& ctx, const NestedProp& p) {
  NestedProp jp = apply_closure(ClosureOperator::open(), p);
  TermSet pot = witness_sample(ctx, p.pot);
  if (!pot.empty()) jp.pot = jp.pot.attach_witness(Term::app(Term::k(), *pot.begin()));
  TermSet act = witness_sample(ctx, p.act);
  if (!act.empty()) jp.act = jp.act.attach_witness(Term::app(Term::k(), *act.begin()));
  return jp;
}

Prop1 random_prop1(const PcaContext& ctx, Rng& rng, std::size_t max_witnesses) {
  return random_nested_prop(ctx, rng, max_witnesses).pot;
}

}  // namespace

SuiteReport subtopos_suite(const PcaContext& ctx, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "subtopos";
  Rng rng(opt.seed);
  std::vector<std::string> index{"a", "b"};

  // local-operator laws for both canonical operators
  {
    std::vector<Predicate> samples;
    for (int i = 0; i < std::max(2, opt.count / 10); ++i)
      samples.push_back(random_predicate(ctx, rng, index, 2));
    for (auto j : {ClosureOperator::open(), ClosureOperator::closed()}) {
      JLawsReport laws = j_laws_check(ctx, j, samples, opt.fuel, opt.depth);
      for (const auto& l : laws.laws) {
        SuiteCheck chk;
        chk.name = j.name() + " " + l.law;
        chk.verdict = l.verdict;
        chk.realizer = l.realizer;
        chk.detail = l.via;
        rep.add(std::move(chk));
      }
    }
  }

  // o_u(u) ⊣⊢ ⊤ and c_u(⊥) ⊣⊢ u
  {
    Predicate top = Predicate::constant({"*"}, nested_top());
    Predicate upred = Predicate::constant({"*"}, subterminal_u());
    Predicate bot = Predicate::constant({"*"}, nested_bottom());
    auto both = [&](const std::string& name, const Predicate& x, const Predicate& y) {
      BiEntailment bi = bi_entails_search(ctx, x, y, opt.depth, opt.fuel);
      SuiteCheck chk;
      chk.name = name;
      chk.verdict = bi.holds() ? Verdict::Yes : Verdict::No;
      rep.add(std::move(chk));
    };
    both("o_u(u) equiv top", sheafify(ClosureOperator::open(), upred), top);
    both("c_u(bot) equiv u", sheafify(ClosureOperator::closed(), bot), upred);
    both("o_u(top) equiv top", sheafify(ClosureOperator::open(), top), top);
  }

  // complementarity on inhabited closures
  {
    Term real = compile(L::lam(
        "z", L::app(L::app(C(ctx.case_guard()), L::app(C(ctx.proj1()), V("z"))),
                    L::lam("y", L::app(L::app(C(ctx.proj0()), V("z")), V("y"))),
                    L::lam("w", V("w")))));
    for (int i = 0; i < opt.count; ++i) {
      Predicate p = random_predicate(ctx, rng, index, 2);
      std::map<std::string, NestedProp> op_at, cp_at;
      for (const auto& l : index) {
        op_at.emplace(l, open_closure_with_witness(ctx, p.fiber(l)));
        cp_at.emplace(l, apply_closure(ClosureOperator::closed(), p.fiber(l)));
      }
      SuiteCheck chk;
      chk.name = "complementarity #" + std::to_string(i);
      chk.verdict = entails_verify(ctx, pointwise_conj(Predicate::make(index, op_at),
                                                       Predicate::make(index, cp_at)),
                                   p, real, opt.fuel)
                        .holds;
      chk.realizer = real;
      rep.add(std::move(chk));
    }
  }

  // relative embedding fullness on at least 500 triples
  {
    std::vector<Term> pool = enumerate_subpca(4);
    pool.push_back(ctx.proj0());
    pool.push_back(ctx.proj1());
    for (const auto& name : ctx.oracle_signature()) pool.push_back(Term::oracle(name));
    int triples = 0;
    while (triples < std::max(500, opt.count)) {
      std::map<std::string, Prop1> pat, qat;
      for (const auto& l : index) {
        pat.emplace(l, random_prop1(ctx, rng, 2));
        qat.emplace(l, random_prop1(ctx, rng, 2));
      }
      RelPredicate phi = RelPredicate::make(index, pat);
      RelPredicate psi = RelPredicate::make(index, qat);
      for (int k = 0; k < 5; ++k) {
        const Term& a = pool[rng.below(pool.size())];
        Verdict rel = entails_rel(ctx, phi, psi, a, opt.fuel).holds;
        Verdict nested =
            entails_verify(ctx, embed_relative(phi), embed_relative(psi), a, opt.fuel).holds;
        SuiteCheck chk;
        chk.name = "fullness #" + std::to_string(triples);
        chk.verdict = rel == nested ? Verdict::Yes : Verdict::No;
        if (rel != nested) chk.detail = "verdicts disagree on " + to_string(a);
        rep.add(std::move(chk));
        ++triples;
      }
    }
  }

  // o_u-closedness of the relative image
  for (int i = 0; i < std::max(5, opt.count / 10); ++i) {
    std::map<std::string, Prop1> at;
    for (const auto& l : index) at.emplace(l, random_prop1(ctx, rng, 2));
    Predicate e = embed_relative(RelPredicate::make(index, at));
    BiEntailment bi =
        bi_entails_search(ctx, sheafify(ClosureOperator::open(), e), e, opt.depth, opt.fuel);
    SuiteCheck chk;
    chk.name = "o_u-closed image #" + std::to_string(i);
    chk.verdict = bi.holds() ? Verdict::Yes : Verdict::No;
    rep.add(std::move(chk));
  }

  // mod_validate succeeds on every c_u-image
  for (int i = 0; i < opt.count; ++i) {
    Predicate p = random_predicate(ctx, rng, index, 2);
    Predicate cp = sheafify(ClosureOperator::closed(), p);
    auto m = mod_validate(ctx, cp, 5, opt.fuel);
    SuiteCheck chk;
    chk.name = "mod_validate c_u-image #" + std::to_string(i);
    chk.verdict = m.has_value() ? Verdict::Yes : Verdict::No;
    if (m) chk.realizer = m->global_witness;
    rep.add(std::move(chk));
  }
  return rep;
}

SuiteReport assemblies_suite(const PcaContext& ctx, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "assemblies";
  Rng rng(opt.seed);

  auto expect = [&](const std::string& name, bool ok, const std::string& why = {}) {
    SuiteCheck chk;
    chk.name = name;
    chk.verdict = ok ? Verdict::Yes : Verdict::No;
    chk.detail = ok ? "" : why;
    rep.add(std::move(chk));
  };

  auto run_instance = [&](std::size_t nx, std::size_t ny, int tag, bool exhaustive) {
    std::string t = "[" + std::to_string(nx) + "x" + std::to_string(ny) + "#" +
                    std::to_string(tag) + "] ";
    Assembly x = random_assembly(ctx, rng, "x", nx);
    Assembly y = random_assembly(ctx, rng, "y", ny);
    AsmMap f = random_tracked_map_onto(ctx, rng, x, "f", 1 + rng.below(3));
    AsmMap g = random_tracked_map_onto(ctx, rng, y, "g", f.source.carrier.size());
    // align the two sources: rebuild g over f's source with conjoined existence
    {
      std::map<std::string, std::string> gg;
      std::map<std::string, NestedProp> ex;
      std::vector<std::string> carrier = f.source.carrier;
      for (const auto& e : carrier) {
        const std::string& to = y.carrier[rng.below(y.carrier.size())];
        gg[e] = to;
        ex.emplace(e, nconj(f.source.ex(e), y.ex(to)));
      }
      Assembly w = Assembly::make("w", carrier, std::move(ex));
      std::map<std::string, std::string> fg;
      for (const auto& e : carrier) fg[e] = f(e);
      f = AsmMap::make("f", w, x, std::move(fg), ctx.proj0());
      g = AsmMap::make("g", w, y, std::move(gg), ctx.proj1());
    }

    expect(t + "f tracked", verify_map(ctx, f, opt.fuel).holds == Verdict::Yes);
    expect(t + "g tracked", verify_map(ctx, g, opt.fuel).holds == Verdict::Yes);

    // category laws
    AsmMap idx = identity_map(ctx, x);
    AsmMap idf = compose_maps(ctx, idx, f);
    bool graphs_eq = true;
    for (const auto& e : f.source.carrier) graphs_eq = graphs_eq && idf(e) == f(e);
    expect(t + "identity law", graphs_eq && verify_map(ctx, idf, opt.fuel).holds == Verdict::Yes);

    // product universal property
    ProductResult xy = product(ctx, x, y);
    AsmMap med = pair_map(ctx, f, g, xy);
    bool tri = true;
    for (const auto& e : f.source.carrier)
      tri = tri && xy.proj0(med(e)) == f(e) && xy.proj1(med(e)) == g(e);
    expect(t + "product mediator", tri && verify_map(ctx, med, opt.fuel).holds == Verdict::Yes);
    {
      // set-level uniqueness of the mediating graph, enumerated exhaustively
      int commuting = 0;
      for (const FinMap& h : all_functions(f.source.carrier, xy.object.carrier)) {
        bool ok = true;
        for (const auto& e : f.source.carrier)
          ok = ok && xy.proj0(h(e)) == f(e) && xy.proj1(h(e)) == g(e);
        if (ok) ++commuting;
      }
      expect(t + "product uniqueness", commuting == 1);
    }

    // equalizer of a genuinely parallel pair: shared source with conjoined
    // existence, the two legs tracked by the projections
    {
      std::vector<std::string> carrier;
      std::map<std::string, NestedProp> ex;
      std::map<std::string, std::string> g1, g2;
      std::size_t agree_expected = 0;
      for (std::size_t i = 0; i < 3; ++i) {
        std::string e = "e" + std::to_string(i);
        const std::string& t1 = x.carrier[rng.below(x.carrier.size())];
        const std::string& t2 = rng.coin() ? t1 : x.carrier[rng.below(x.carrier.size())];
        carrier.push_back(e);
        ex.emplace(e, nconj(x.ex(t1), x.ex(t2)));
        g1[e] = t1;
        g2[e] = t2;
        if (t1 == t2) ++agree_expected;
      }
      Assembly w2 = Assembly::make("w2", carrier, std::move(ex));
      AsmMap fa = AsmMap::make("fa", w2, x, g1, ctx.proj0());
      AsmMap fb = AsmMap::make("fb", w2, x, g2, ctx.proj1());
      bool ok = verify_map(ctx, fa, opt.fuel).holds == Verdict::Yes &&
                verify_map(ctx, fb, opt.fuel).holds == Verdict::Yes;
      EqualizerResult eq = equalizer(ctx, fa, fb);
      ok = ok && eq.object.carrier.size() == agree_expected &&
           verify_map(ctx, eq.include, opt.fuel).holds == Verdict::Yes;
      // universal property at set level: the agreement set is exactly the
      // carrier of the equalizer, so equalizing maps factor by corestriction
      for (const auto& e : w2.carrier) {
        bool agrees = fa(e) == fb(e);
        bool inside = std::find(eq.object.carrier.begin(), eq.object.carrier.end(), e) !=
                      eq.object.carrier.end();
        ok = ok && agrees == inside;
      }
      expect(t + "equalizer", ok);
    }

    // sums: copair of f and itself from X + X
    SumResult s = sum(ctx, f.source, f.source);
    AsmMap cp = copair(ctx, f, f, s);
    expect(t + "copair tracked", verify_map(ctx, cp, opt.fuel).holds == Verdict::Yes);
    if (exhaustive) {
      bool unique = true;
      for (const auto& e : f.source.carrier) {
        unique = unique && cp(std::string("inl:") + e) == f(e) &&
                 cp(std::string("inr:") + e) == f(e);
      }
      expect(t + "copair commutes", unique);
      ProductResult disj = pullback_asm(ctx, s.inj0, s.inj1);
      expect(t + "sum disjoint", disj.object.carrier.empty());
    }

    if (exhaustive && nx <= 3 && ny <= 2) {
      // exponential beta on found points
      ExponentialResult ex = exponential(ctx, x, y, opt.depth, opt.fuel);
      expect(t + "eval tracked", verify_map(ctx, ex.eval, opt.fuel).holds == Verdict::Yes);
      auto tp = transpose(ctx, ex.eval, ex.object, x, ex, opt.fuel);
      bool beta = tp.has_value();
      if (beta)
        for (const auto& l : ex.object.carrier) beta = beta && (*tp)(l) == l;
      expect(t + "currying round-trip", beta);

      // classification round-trip for a random mono
      std::vector<std::string> subset;
      for (const auto& e : x.carrier)
        if (rng.coin()) subset.push_back(e);
      if (subset.empty()) subset.push_back(x.carrier[0]);
      AsmMap m = include_map(ctx, sub_assembly(x, subset, "S"), x);
      std::vector<NestedProp> universe{nested_top(), nested_bottom()};
      for (const auto& e : x.carrier) universe.push_back(x.ex(e));
      PropObjects props = prop_objects(ctx, universe);
      ClassifyResult cls = classify(ctx, m, props, opt.fuel);
      bool ok = verify_map(ctx, cls.chi, opt.fuel).holds == Verdict::Yes &&
                verify_map(ctx, cls.iso_fwd, opt.fuel).holds == Verdict::Yes &&
                verify_map(ctx, cls.iso_bwd, opt.fuel).holds == Verdict::Yes;
      for (const auto& e : subset)
        ok = ok && cls.iso_bwd(cls.iso_fwd(e)) == e && cls.pb_into_x(cls.iso_fwd(e)) == m(e);
      expect(t + "classify round-trip", ok);

      // weak power membership square over a 2-element slice of x
      if (x.carrier.size() >= 2) {
        Assembly x2 = sub_assembly(x, {x.carrier[0], x.carrier[1]}, "x2");
        WeakPowerResult wp = weak_power(ctx, x2, props, opt.depth, opt.fuel);
        bool wok = verify_map(ctx, wp.membership_mono, opt.fuel).holds == Verdict::Yes &&
                   verify_map(ctx, wp.to_tr, opt.fuel).holds == Verdict::Yes;
        for (const auto& l : wp.membership.carrier) {
          const std::string& plabel = wp.exp.eval(l);
          wok = wok && std::find(props.tr.carrier.begin(), props.tr.carrier.end(), plabel) !=
                           props.tr.carrier.end();
        }
        expect(t + "weak power membership", wok);

        // weak classification: a registered relation mono on y × x2 is
        // recovered from its classifying graph into PX
        {
          ProductResult yx = product(ctx, y, x2);
          std::map<std::string, NestedProp> rel;  // fiberwise propositions
          for (const auto& a : y.carrier)
            for (const auto& b : x2.carrier)
              rel.emplace(pair_label(a, b),
                          rng.coin() ? x2.ex(b) : nested_bottom());
          bool ok = true;
          std::map<std::string, std::string> rg;  // y -> PX label
          for (const auto& a : y.carrier) {
            std::map<std::string, std::string> slice;
            for (const auto& b : x2.carrier) {
              auto lbl = props.label_of(rel.at(pair_label(a, b)));
              if (!lbl) ok = false;
              else slice[b] = *lbl;
            }
            if (!ok) break;
            auto gl = wp.exp.label_of(FinMap::make(x2.carrier, props.prop.carrier, slice));
            if (!gl) ok = false;
            else rg[a] = *gl;
          }
          if (ok) {
            // pullback of the membership mono along (r × id), compared with
            // the relation subobject through uniform realizers
            std::vector<std::string> sub;
            std::map<std::string, NestedProp> pex, rex;
            for (const auto& l : yx.object.carrier) {
              const std::string& a = yx.proj0(l);
              const std::string& b = yx.proj1(l);
              std::string mem_label = pair_label(rg[a], b);
              bool inhabited =
                  std::find(wp.membership.carrier.begin(), wp.membership.carrier.end(),
                            mem_label) != wp.membership.carrier.end();
              bool expected = !witness_sample(ctx, rel.at(pair_label(a, b)).pot).empty();
              if (inhabited != expected) ok = false;
              if (!inhabited) continue;
              sub.push_back(l);
              pex.emplace(l, nconj(yx.object.ex(l), wp.membership.ex(mem_label)));
              rex.emplace(l, nconj(yx.object.ex(l), rel.at(pair_label(a, b))));
            }
            if (ok && !sub.empty()) {
              Predicate pulled = Predicate::make(sub, pex);
              Predicate relation = Predicate::make(sub, rex);
              Term fwd = compile(L::lam(
                  "w", L::app(C(ctx.pairing()), L::app(C(ctx.proj0()), V("w")),
                              L::app(C(ctx.proj1()), L::app(C(ctx.proj1()), V("w"))))));
              // the uniform PX evidence is the identity tracker of graphs
              // into the constant-existence Prop
              Term bwd = compile(L::lam(
                  "w",
                  L::app(C(ctx.pairing()), L::app(C(ctx.proj0()), V("w")),
                         L::app(C(ctx.pairing()),
                                L::app(C(ctx.pairing()), C(ctx.identity()),
                                       L::app(C(ctx.proj1()),
                                              L::app(C(ctx.proj0()), V("w")))),
                                L::app(C(ctx.proj1()), V("w"))))));
              ok = entails_verify(ctx, pulled, relation, fwd, opt.fuel).holds == Verdict::Yes &&
                   entails_verify(ctx, relation, pulled, bwd, opt.fuel).holds == Verdict::Yes;
            }
          }
          expect(t + "weak classification", ok);
        }
      }
    }
  };

  // exhaustive family at carriers <= 3
  int tag = 0;
  for (std::size_t nx = 1; nx <= 3; ++nx)
    for (std::size_t ny = 1; ny <= 2; ++ny) run_instance(nx, ny, tag++, true);
  run_instance(3, 2, tag++, true);

  // random instances at carrier 4 (lighter checks)
  for (int i = 0; i < opt.count; ++i) run_instance(4, 2 + rng.below(2), 1000 + i, false);
  return rep;
}

SuiteReport transfer_suite(const PcaContext& ctx, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "transfer";
  Rng rng(opt.seed);
  SmallMapConfig cfg = SmallMapConfig::make(4, opt.fuel, opt.depth);

  auto expect = [&](const std::string& name, bool ok, const std::string& why = {}) {
    SuiteCheck chk;
    chk.name = name;
    chk.verdict = ok ? Verdict::Yes : Verdict::No;
    chk.detail = ok ? "" : why;
    rep.add(std::move(chk));
  };

  Term const_k = standard_realizer("const_k");

  // sbar on canonical quotients of small maps
  for (int i = 0; i < std::max(10, opt.count / 5); ++i) {
    Assembly y = random_assembly(ctx, rng, "Y", 1 + rng.below(2));
    AsmMap f0 = random_tracked_map_onto(ctx, rng, y, "f0", 1 + rng.below(3));
    QuotObject qx = QuotObject::discrete(ctx, f0.source);
    // coarse target: everything related
    std::vector<std::string> index;
    std::map<std::string, NestedProp> at;
    for (const auto& a : y.carrier)
      for (const auto& b : y.carrier) {
        index.push_back(pair_label(a, b));
        at.emplace(index.back(), rng.coin() ? nested_top() : eq_prop(a, b));
      }
    // make the relation an equivalence: fall back to discrete when the draw
    // is not symmetric/transitive
    QuotObject qy = QuotObject::discrete(ctx, y);
    try {
      qy = QuotObject::make(ctx, y, Predicate::make(index, at), const_k, const_k, const_k,
                            opt.fuel);
    } catch (const std::invalid_argument&) {
    }
    try {
      QuotMap qf = QuotMap::make(ctx, qx, qy, f0, const_k, opt.fuel);
      auto w = sbar_check(ctx, qf, cfg);
      bool ok = w.has_value() &&
                (w->qpb.cls == SquareClass::Quasipullback || w->qpb.cls == SquareClass::Pullback);
      // witnesses re-verify: rerun the mediator cover
      if (ok) {
        CoverReport again = is_cover(ctx, w->qpb.mediator, opt.fuel, opt.depth,
                                     {w->qpb.mediator_cover.lifting ? *w->qpb.mediator_cover.lifting
                                                                    : ctx.identity()});
        ok = again.verdict == Verdict::Yes;
      }
      expect("sbar canonical #" + std::to_string(i), ok);
    } catch (const std::invalid_argument& e) {
      expect("sbar canonical #" + std::to_string(i), false, e.what());
    }
  }

  for (auto j : {ClosureOperator::open(), ClosureOperator::closed()}) {
    // sf on sheafifications of small maps
    for (int i = 0; i < std::max(5, opt.count / 10); ++i) {
      Assembly y = random_assembly(ctx, rng, "Y", 1 + rng.below(2));
      AsmMap g = random_tracked_map_onto(ctx, rng, y, "g", 1 + rng.below(3));
      SmallMapConfig local = cfg;
      local.register_assembly(g.source);
      local.register_assembly(y);
      TransferWitness cw = sf_canonical_witness(ctx, j, g, local);
      bool ok = cw.qpb.cls == SquareClass::Pullback || cw.qpb.cls == SquareClass::Quasipullback;
      expect(j.name() + " sf canonical #" + std::to_string(i), ok);

      AsmMap f = sheafify_map(ctx, j, g);
      auto found = sf_check(ctx, j, f, local);
      expect(j.name() + " sf search #" + std::to_string(i),
             found.has_value() && is_small(found->g, local));
    }

    // Lemma-epi factorization on generated j-epis
    for (int i = 0; i < std::max(100, opt.count); ++i) {
      Assembly y = random_assembly(ctx, rng, "Y", 1 + rng.below(2));
      std::vector<std::string> srcs;
      std::vector<std::string> tos;
      int k = 0;
      for (const auto& t : y.carrier) {
        std::size_t copies = 1 + rng.below(2);
        for (std::size_t c = 0; c < copies; ++c) {
          srcs.push_back(std::to_string(k++));
          tos.push_back(t);
        }
      }
      std::map<std::string, std::string> g;
      std::map<std::string, NestedProp> ex;
      for (std::size_t n = 0; n < srcs.size(); ++n) {
        g[srcs[n]] = tos[n];
        ex.emplace(srcs[n], y.ex(tos[n]));
      }
      AsmMap cover = AsmMap::make("c", Assembly::make("C", srcs, std::move(ex)), y, std::move(g),
                                  ctx.identity());
      expect(j.name() + " epi factorization #" + std::to_string(i),
             epi_factorization_check(ctx, j, cover, cfg));
    }

    // transferred axioms
    AxiomSuiteReport ax = sf_axiom_suite(ctx, j, cfg, std::max(5, opt.count / 10), opt.seed + 7);
    for (const auto& a : ax.axioms)
      expect(j.name() + " sf " + a.axiom, a.failures == 0,
             a.notes.empty() ? "" : a.notes.front());
  }
  return rep;
}

SuiteReport standard_law_corpus(const PcaContext& ctx, const SuiteOptions& opt) {
  SuiteReport rep;
  rep.suite = "standard_laws";
  Rng rng(opt.seed);
  std::vector<std::string> index{"a", "b"};
  Predicate phi = random_predicate(ctx, rng, index, 2);
  Predicate psi = random_predicate(ctx, rng, index, 2);
  Predicate top = Predicate::constant(index, nested_top());
  Predicate bot = Predicate::constant(index, nested_bottom());
  const Term p = ctx.pairing();
  const Term kb = ctx.kbar();

  FinMap bang = FinMap::make(index, {"*"}, {{"a", "*"}, {"b", "*"}});
  Predicate psi_star = random_predicate(ctx, rng, {"*"}, 2);

  // tagged sums for the searchable disjunction introductions
  Predicate ktag = Predicate::constant(index, nested_base({Term::k()}));
  Predicate kbtag = Predicate::constant(index, nested_base({ctx.kbar()}));

  // Beck-Chevalley data on a fixed small pullback square
  FinMap v = FinMap::make({"j0", "j1"}, {"i0", "i1"}, {{"j0", "i0"}, {"j1", "i0"}});
  FinMap u = FinMap::make({"k0"}, {"i0", "i1"}, {{"k0", "i0"}});
  FinMap w = FinMap::make({"p0", "p1"}, {"j0", "j1"}, {{"p0", "j0"}, {"p1", "j1"}});
  FinMap vp = FinMap::make({"p0", "p1"}, {"k0"}, {{"p0", "k0"}, {"p1", "k0"}});
  Predicate phj = random_predicate(ctx, rng, {"j0", "j1"}, 2);

  Predicate mp_ante;
  {
    Predicate imp_pp = pointwise_imp(phi, phi);
    std::map<std::string, NestedProp> at;
    for (const auto& i : index) {
      NestedProp f = imp_pp.fiber(i);
      at.emplace(i, NestedProp{f.pot.attach_witness(ctx.identity()),
                               f.act.attach_witness(ctx.identity())});
    }
    mp_ante = pointwise_conj(Predicate::make(index, at), phi);
  }

  struct Law {
    std::string name;
    Predicate from, to;
    Term lib;
  };
  std::vector<Law> laws;
  laws.push_back({"refl", phi, phi, ctx.identity()});
  laws.push_back({"conj_elim_l", pointwise_conj(phi, psi), phi, ctx.proj0()});
  laws.push_back({"conj_elim_r", pointwise_conj(phi, psi), psi, ctx.proj1()});
  laws.push_back({"conj_diag", phi, pointwise_conj(phi, phi),
                  compile(L::lam("x", L::app(C(p), V("x"), V("x"))))});
  laws.push_back({"tagged_disj_intro_l", pointwise_conj(ktag, phi), pointwise_disj(phi, psi),
                  ctx.identity()});
  laws.push_back({"tagged_disj_intro_r", pointwise_conj(kbtag, psi), pointwise_disj(phi, psi),
                  ctx.identity()});
  laws.push_back({"top_intro", phi, top, standard_realizer("const_k")});
  laws.push_back({"bot_elim", bot, phi, standard_realizer("exfalso")});
  laws.push_back({"eval_mp", mp_ante, phi,
                  compile(L::lam("w2", L::app(L::app(C(ctx.proj0()), V("w2")),
                                              L::app(C(ctx.proj1()), V("w2")))))});
  laws.push_back({"eq_weaken", phi,
                  pointwise_imp(Predicate::constant(index, eq_prop("x", "x")), phi), Term::k()});
  laws.push_back({"exists_unit", phi, reindex(bang, exists_along(bang, phi)), ctx.identity()});
  laws.push_back({"exists_counit", exists_along(bang, reindex(bang, psi_star)), psi_star,
                  ctx.identity()});
  laws.push_back({"forall_unit", psi_star, forall_along(bang, reindex(bang, psi_star)),
                  Term::k()});
  laws.push_back({"forall_counit", reindex(bang, forall_along(bang, phi)), phi,
                  ctx.identity()});
  {
    Predicate lhs = exists_along(bang, pointwise_conj(phi, reindex(bang, psi_star)));
    Predicate rhs = pointwise_conj(exists_along(bang, phi), psi_star);
    laws.push_back({"frobenius_fwd", lhs, rhs, ctx.identity()});
    laws.push_back({"frobenius_bwd", rhs, lhs, ctx.identity()});
  }
  {
    Predicate lhs = reindex(u, exists_along(v, phj));
    Predicate rhs = exists_along(vp, reindex(w, phj));
    laws.push_back({"bc_exists_fwd", lhs, rhs, ctx.identity()});
    laws.push_back({"bc_exists_bwd", rhs, lhs, ctx.identity()});
    laws.push_back({"bc_forall_fwd", reindex(u, forall_along(v, phj)),
                    forall_along(vp, reindex(w, phj)), ctx.identity()});
  }
  laws.push_back({"open_inflate", phi, sheafify(ClosureOperator::open(), phi), Term::k()});

  for (const auto& law : laws) {
    SuiteCheck lib;
    lib.name = law.name + " (library)";
    lib.verdict = entails_verify(ctx, law.from, law.to, law.lib, opt.fuel).holds;
    lib.realizer = law.lib;
    rep.add(std::move(lib));

    SuiteCheck found;
    found.name = law.name + " (search)";
    auto r = entails_search(ctx, law.from, law.to, opt.depth, opt.fuel);
    found.verdict = r.has_value() ? Verdict::Yes : Verdict::No;
    found.realizer = r;
    rep.add(std::move(found));
  }
  return rep;
}

}  // namespace rzk
