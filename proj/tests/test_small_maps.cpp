#include <vector>

#include "doctest.h"
#include "rzk/lambda.hpp"
#include "rzk/small_maps.hpp"
#include "test_util.hpp"

using namespace rzk;
using testutil::Rng;

namespace {

const PcaContext& ctx() {
  static const PcaContext c({"c0", "c1"});
  return c;
}

constexpr std::uint64_t FUEL = 10000;

NestedProp np(std::initializer_list<Term> ts) { return nested_base(TermSet(ts)); }

Assembly small3() {
  return Assembly::make("X", {"0", "1", "2"},
                        {{"0", np({Term::k()})},
                         {"1", np({ctx().kbar()})},
                         {"2", np({ctx().identity()})}});
}

AsmMap pulled_map(const Assembly& tgt, const std::vector<std::string>& srcs,
                  const std::vector<std::string>& to, const std::string& name) {
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;
  std::map<std::string, std::string> g;
  for (std::size_t i = 0; i < srcs.size(); ++i) {
    carrier.push_back(srcs[i]);
    ex.emplace(srcs[i], tgt.ex(to[i]));
    g[srcs[i]] = to[i];
  }
  Assembly src = Assembly::make(name, std::move(carrier), std::move(ex));
  return AsmMap::make(name, std::move(src), tgt, std::move(g), ctx().identity());
}

}  // namespace

TEST_CASE("is_small") {
  SmallMapConfig cfg3 = SmallMapConfig::make(3);
  Assembly x = small3();
  CHECK(is_small(identity_map(ctx(), x), cfg3));

  SumResult two = sum(ctx(), terminal_assembly(), terminal_assembly());
  CHECK(is_small(bang_map(ctx(), two.object), cfg3));

  Assembly four = Assembly::make("F", {"0", "1", "2", "3"},
                                 {{"0", np({Term::k()})},
                                  {"1", np({Term::k()})},
                                  {"2", np({Term::k()})},
                                  {"3", np({Term::k()})}});
  CHECK(!is_small(bang_map(ctx(), four), cfg3));
}

TEST_CASE("quasipullback_check classifications") {
  SmallMapConfig cfg = SmallMapConfig::make(4);
  Assembly a = small3();
  AsmMap f = pulled_map(a, {"p", "q"}, {"0", "1"}, "f");
  AsmMap b = pulled_map(a, {"r", "s", "t"}, {"0", "1", "2"}, "b");

  // the genuine pullback of (b, f)
  ProductResult pb = pullback_asm(ctx(), b, f);
  CommutingSquare genuine{pb.proj1, pb.proj0, f, b};
  SquareWitness w1 = quasipullback_check(ctx(), genuine, FUEL, 7);
  CHECK(w1.cls == SquareClass::Pullback);

  // compose a cover on top: still a quasipullback, no longer a pullback
  AsmMap cover = pulled_map(pb.object, {"a0", "a1", "b0"},
                            {pb.object.carrier[0], pb.object.carrier[0],
                             pb.object.carrier.size() > 1 ? pb.object.carrier[1]
                                                          : pb.object.carrier[0]},
                            "c");
  // make the cover hit everything
  {
    std::vector<std::string> srcs, tos;
    int k = 0;
    for (const auto& l : pb.object.carrier) {
      srcs.push_back("c" + std::to_string(k++));
      tos.push_back(l);
      srcs.push_back("c" + std::to_string(k++));
      tos.push_back(l);
    }
    cover = pulled_map(pb.object, srcs, tos, "cover");
  }
  CommutingSquare quasi{compose_maps(ctx(), pb.proj1, cover), compose_maps(ctx(), pb.proj0, cover),
                        f, b};
  SquareWitness w2 = quasipullback_check(ctx(), quasi, FUEL, 7);
  CHECK(w2.cls == SquareClass::Quasipullback);

  // a square whose mediator misses part of the pullback
  if (pb.object.carrier.size() > 1) {
    AsmMap partial = pulled_map(pb.object, {"z"}, {pb.object.carrier[0]}, "z");
    CommutingSquare missing{compose_maps(ctx(), pb.proj1, partial),
                            compose_maps(ctx(), pb.proj0, partial), f, b};
    SquareWitness w3 = quasipullback_check(ctx(), missing, FUEL, 5);
    CHECK(w3.cls == SquareClass::Neither);
  }

  // non-commuting squares are rejected
  if (a.carrier.size() >= 2) {
    AsmMap id = identity_map(ctx(), a);
    std::map<std::string, std::string> tw;
    tw["0"] = "1";
    tw["1"] = "0";
    tw["2"] = "2";
    AsmMap twist = AsmMap::make("twist", a, a, std::move(tw), ctx().identity());
    CHECK_THROWS_AS(quasipullback_check(ctx(), CommutingSquare{id, id, id, twist}, FUEL, 5),
                    NotCommuting);
  }
}

TEST_CASE("collection_construct") {
  SmallMapConfig cfg = SmallMapConfig::make(4);
  Assembly a = small3();
  AsmMap f = pulled_map(a, {"x0", "x1"}, {"0", "1"}, "X");

  // p = identity: Z has one representative per potential witness
  CollectionResult c1 = collection_construct(ctx(), identity_map(ctx(), f.source), f, cfg);
  CHECK(c1.z.carrier.size() == f.source.carrier.size());
  CHECK(c1.witness.cls == SquareClass::Quasipullback);

  // a genuine cover over the source
  AsmMap p = pulled_map(f.source, {"y0", "y1", "y2"}, {"x0", "x0", "x1"}, "p");
  CollectionResult c2 = collection_construct(ctx(), p, f, cfg);
  CHECK(c2.witness.cls == SquareClass::Quasipullback);
  AsmMap pi = compose_maps(ctx(), p, c2.inclusion);
  CHECK(is_cover(ctx(), pi, FUEL, 7).verdict == Verdict::Yes);
  for (const auto& x : f.source.carrier) {
    std::size_t fiber = 0;
    for (const auto& z : c2.z.carrier)
      if (pi(z) == x) ++fiber;
    CHECK(fiber <= witness_sample(ctx(), f.source.ex(x).pot).size());
  }

  // a non-cover is rejected
  AsmMap notonto = pulled_map(f.source, {"w"}, {"x0"}, "w");
  CHECK_THROWS_AS(collection_construct(ctx(), notonto, f, cfg), NotACover);
}

TEST_CASE("universal family and representability") {
  SmallMapConfig cfg = SmallMapConfig::make(4);
  Assembly x = Assembly::make("X", {"0", "1"},
                              {{"0", np({Term::k()})}, {"1", np({ctx().kbar()})}});
  cfg.register_assembly(x);

  // fibers of the identity over x
  AsmMap idx = identity_map(ctx(), x);
  for (const auto& e : x.carrier) {
    Assembly fb = fiber_assembly(idx, e);
    if (!cfg.find_registered(fb)) cfg.register_assembly(fb);
  }
  UniversalFamily fam = universal_family(ctx(), cfg);
  CHECK(is_small(fam.pi, cfg));
  CHECK(verify_map(ctx(), fam.pi, FUEL).holds == Verdict::Yes);

  SquareWitness w = exhibit_pullback(ctx(), idx, fam, cfg);
  CHECK(w.cls == SquareClass::Pullback);
  for (const auto& e : x.carrier) CHECK(w.square.bottom(e).substr(0, 1) == "U");

  // the bang map has the registered X itself as its one fiber, so its
  // classifying graph is constantly X
  {
    SmallMapConfig cfg1 = cfg;
    Assembly one = terminal_assembly();
    AsmMap bang = AsmMap::make("bang", x, one, {{"0", "*"}, {"1", "*"}}, Term::k());
    SquareWitness wb = exhibit_pullback(ctx(), bang, fam, cfg1);
    CHECK(wb.cls == SquareClass::Pullback);
    auto reg = cfg1.find_registered(x);
    REQUIRE(reg.has_value());
    CHECK(wb.square.bottom("*") == "U" + std::to_string(*reg));
  }

  // a random small map over registered fibers
  AsmMap f = pulled_map(x, {"0", "1", "2"}, {"0", "0", "1"}, "f");
  SmallMapConfig cfg2 = cfg;
  for (const auto& e : x.carrier) {
    Assembly fb = fiber_assembly(f, e);
    if (!cfg2.find_registered(fb)) cfg2.register_assembly(fb);
  }
  UniversalFamily fam2 = universal_family(ctx(), cfg2);
  SquareWitness w2 = exhibit_pullback(ctx(), f, fam2, cfg2);
  CHECK(w2.cls == SquareClass::Pullback);

  // unregistered fiber raises
  SmallMapConfig empty_cfg = SmallMapConfig::make(4);
  UniversalFamily fam3 = universal_family(ctx(), empty_cfg);
  CHECK_THROWS_AS(exhibit_pullback(ctx(), f, fam3, empty_cfg), UniverseTooSmall);

  // registration guards
  CHECK_THROWS_AS(cfg.register_assembly(Assembly::make(
                      "big", {"0", "1", "2", "3"},
                      {{"0", np({Term::k()})}, {"1", np({Term::k()})},
                       {"2", np({Term::k()})}, {"3", np({Term::k()})}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(cfg.register_assembly(Assembly::make("odd", {"seven"},
                                                       {{"seven", np({Term::k()})}})),
                  std::invalid_argument);
}

TEST_CASE("axiom suite passes at bound 4") {
  SmallMapConfig cfg = SmallMapConfig::make(4);
  AxiomSuiteReport rep = axiom_suite(ctx(), cfg, 25, 0xA11CE);
  for (const auto& ax : rep.axioms) {
    INFO(ax.axiom, ": ", ax.notes.empty() ? "" : ax.notes.front());
    CHECK(ax.failures == 0);
  }
  CHECK(rep.all_pass());
  CHECK(rep.deviation.find("A8") != std::string::npos);
  CHECK(rep.deviation.find("bound") != std::string::npos);
}

TEST_CASE("quotient objects: discrete, realized relation, collapse") {
  Assembly x = small3();
  QuotObject d = QuotObject::discrete(ctx(), x);
  CHECK(d.related(ctx(), "0", "0"));
  CHECK(!d.related(ctx(), "0", "1"));
  CHECK(collapse(ctx(), d).carrier.size() == x.carrier.size());

  // collapse "0" and "1" with a realizer-verified total relation on them
  std::vector<std::string> index;
  std::map<std::string, NestedProp> at;
  auto related_set = [](const std::string& a, const std::string& b) {
    return (a == b) || (a == "0" && b == "1") || (a == "1" && b == "0");
  };
  for (const auto& a : x.carrier)
    for (const auto& b : x.carrier) {
      index.push_back(pair_label(a, b));
      at.emplace(index.back(), related_set(a, b) ? nested_top() : nested_bottom());
    }
  Term const_k = standard_realizer("const_k");
  QuotObject q = QuotObject::make(ctx(), x, Predicate::make(index, at), const_k, const_k,
                                  const_k, FUEL);
  Assembly qc = collapse(ctx(), q);
  CHECK(qc.carrier.size() == 2);
  AsmMap proj = collapse_map(ctx(), q);
  CHECK(verify_map(ctx(), proj, FUEL).holds == Verdict::Yes);
  CHECK(is_cover(ctx(), proj, FUEL, 7).verdict == Verdict::Yes);

  // an unrealized "relation" is rejected
  std::map<std::string, NestedProp> bad = at;
  bad[pair_label("0", "0")] = nested_bottom();
  CHECK_THROWS_AS(QuotObject::make(ctx(), x, Predicate::make(index, bad), const_k, const_k,
                                   const_k, FUEL),
                  std::invalid_argument);
}

TEST_CASE("sbar_check: canonical witnesses and honest absence") {
  SmallMapConfig cfg = SmallMapConfig::make(4);
  Assembly x = small3();
  Assembly y = Assembly::make("Y", {"0", "1"},
                              {{"0", np({Term::k()})}, {"1", np({ctx().kbar()})}});

  // quotient of a small map by identity relations
  QuotObject qx = QuotObject::discrete(ctx(), x);
  QuotObject qy = QuotObject::discrete(ctx(), y);
  AsmMap f0 = AsmMap::make("f0", x, y, {{"0", "0"}, {"1", "1"}, {"2", "1"}}, ctx().identity());
  // existence must be tracked: rebuild x with pulled existences
  Assembly x2 = Assembly::make("X2", {"0", "1", "2"},
                               {{"0", y.ex("0")}, {"1", y.ex("1")}, {"2", y.ex("1")}});
  QuotObject qx2 = QuotObject::discrete(ctx(), x2);
  AsmMap f1 = AsmMap::make("f1", x2, y, {{"0", "0"}, {"1", "1"}, {"2", "1"}}, ctx().identity());
  Term const_k = standard_realizer("const_k");
  QuotMap qf = QuotMap::make(ctx(), qx2, qy, f1, const_k, FUEL);
  auto w = sbar_check(ctx(), qf, cfg);
  REQUIRE(w.has_value());
  CHECK(w->route == "canonical");
  CHECK(w->qpb.cls == SquareClass::Quasipullback);
  for (const auto& e : w->g.source.carrier) CHECK(w->g(e) == f1(e));

  // quotient of a small map by a coarser realized equivalence
  std::vector<std::string> index;
  std::map<std::string, NestedProp> at;
  for (const auto& a : y.carrier)
    for (const auto& b : y.carrier) {
      index.push_back(pair_label(a, b));
      at.emplace(index.back(), nested_top());  // total relation: one class
    }
  QuotObject qy_total =
      QuotObject::make(ctx(), y, Predicate::make(index, at), const_k, const_k, const_k, FUEL);
  QuotMap qf2 = QuotMap::make(ctx(), qx2, qy_total, f1, const_k, FUEL);
  auto w2 = sbar_check(ctx(), qf2, cfg);
  REQUIRE(w2.has_value());
  CHECK(w2->qpb.cls == SquareClass::Quasipullback);

  // non-small quotient map with no small resolution in a tiny universe
  Assembly big = Assembly::make("B", {"0", "1", "2", "3"},
                                {{"0", np({Term::k()})},
                                 {"1", np({Term::k()})},
                                 {"2", np({Term::k()})},
                                 {"3", np({Term::k()})}});
  QuotObject qbig = QuotObject::discrete(ctx(), big);
  Assembly one = Assembly::make("one", {"0"}, {{"0", np({Term::k()})}});
  QuotObject qone = QuotObject::discrete(ctx(), one);
  AsmMap collapse_all = AsmMap::make(
      "all", big, one, {{"0", "0"}, {"1", "0"}, {"2", "0"}, {"3", "0"}}, ctx().identity());
  QuotMap qbad = QuotMap::make(ctx(), qbig, qone, collapse_all, const_k, FUEL);
  SmallMapConfig tiny = SmallMapConfig::make(4);
  tiny.register_assembly(Assembly::make("w", {"0", "1"},
                                        {{"0", np({Term::k()})}, {"1", np({Term::k()})}}));
  CHECK(!sbar_check(ctx(), qbad, tiny).has_value());
}

TEST_CASE("sheafified assemblies and maps verify for both operators") {
  Assembly x = small3();
  Assembly y = Assembly::make("Y", {"0", "1"},
                              {{"0", np({Term::k()})}, {"1", np({ctx().kbar()})}});
  AsmMap f = pulled_map(y, {"0", "1", "2"}, {"0", "1", "1"}, "f");
  for (auto j : {ClosureOperator::open(), ClosureOperator::closed()}) {
    Assembly ax = sheafify_assembly(ctx(), j, x);
    validate_assembly(ctx(), ax);
    AsmMap af = sheafify_map(ctx(), j, f);
    CHECK(verify_map(ctx(), af, FUEL).holds == Verdict::Yes);
  }
}

TEST_CASE("sf transfer: canonical witness, search, epi factorization") {
  SmallMapConfig cfg = SmallMapConfig::make(4);
  Assembly y = Assembly::make("Y", {"0", "1"},
                              {{"0", np({Term::k()})}, {"1", np({ctx().kbar()})}});
  AsmMap g = pulled_map(y, {"0", "1", "2"}, {"0", "1", "1"}, "g");
  cfg.register_assembly(g.source);
  cfg.register_assembly(y);

  for (auto j : {ClosureOperator::open(), ClosureOperator::closed()}) {
    CAPTURE(j.name());
    TransferWitness w = sf_canonical_witness(ctx(), j, g, cfg);
    CHECK((w.qpb.cls == SquareClass::Pullback || w.qpb.cls == SquareClass::Quasipullback));

    AsmMap f = sheafify_map(ctx(), j, g);
    auto found = sf_check(ctx(), j, f, cfg);
    REQUIRE(found.has_value());
    CHECK(found->route == "searched");
    CHECK(is_small(found->g, cfg));

    AsmMap cover = pulled_map(y, {"0", "1", "2"}, {"0", "1", "0"}, "c");
    CHECK(epi_factorization_check(ctx(), j, cover, cfg));
  }
}

TEST_CASE("sf axiom suite") {
  SmallMapConfig cfg = SmallMapConfig::make(4);
  for (auto j : {ClosureOperator::open(), ClosureOperator::closed()}) {
    AxiomSuiteReport rep = sf_axiom_suite(ctx(), j, cfg, 8, 0xBEEF);
    for (const auto& ax : rep.axioms) {
      INFO(j.name(), " ", ax.axiom, ": ", ax.notes.empty() ? "" : ax.notes.front());
      CHECK(ax.failures == 0);
    }
  }
}
