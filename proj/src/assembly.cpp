#include "rzk/assembly.hpp"

#include <algorithm>

#include "rzk/lambda.hpp"

namespace rzk {

namespace {

using L = LambdaTerm;
L V(const char* n) { return L::var(n); }
L C(const Term& t) { return L::constant(t); }

}  // namespace

Assembly Assembly::make(std::string name, std::vector<std::string> carrier,
                        std::map<std::string, NestedProp> existence) {
  Assembly a{std::move(name), std::move(carrier), std::move(existence)};
  for (const auto& x : a.carrier)
    if (a.existence.find(x) == a.existence.end())
      throw std::invalid_argument("assembly " + a.name + ": no existence for " + x);
  return a;
}

const NestedProp& Assembly::ex(const std::string& x) const {
  auto it = existence.find(x);
  if (it == existence.end())
    throw std::invalid_argument("assembly " + name + ": no element " + x);
  return it->second;
}

bool Assembly::same_shape(const Assembly& other) const {
  if (carrier != other.carrier) return false;
  for (const auto& x : carrier)
    if (!(ex(x) == other.ex(x))) return false;
  return true;
}

void validate_assembly(const PcaContext& ctx, const Assembly& a) {
  for (const auto& x : a.carrier)
    if (witness_sample(ctx, a.ex(x).pot).empty())
      throw std::invalid_argument("assembly " + a.name + ": element " + x +
                                  " has no potential realizer");
}

Predicate existence_predicate(const Assembly& a) {
  return Predicate::make(a.carrier, a.existence);
}

AsmMap AsmMap::make(std::string name, Assembly source, Assembly target,
                    std::map<std::string, std::string> graph, Term tracker) {
  FinMap g = FinMap::make(source.carrier, target.carrier, std::move(graph));
  return AsmMap{std::move(name), std::move(source), std::move(target), std::move(g),
                std::move(tracker)};
}

EntailmentReport verify_map(const PcaContext& ctx, const AsmMap& f, std::uint64_t fuel) {
  return entails_verify(ctx, existence_predicate(f.source),
                        reindex(f.graph, existence_predicate(f.target)), f.tracker, fuel);
}

AsmMap identity_map(const PcaContext& ctx, const Assembly& x) {
  std::map<std::string, std::string> g;
  for (const auto& e : x.carrier) g[e] = e;
  return AsmMap::make("id_" + x.name, x, x, std::move(g), ctx.identity());
}

AsmMap compose_maps(const PcaContext& ctx, const AsmMap& g, const AsmMap& f) {
  std::map<std::string, std::string> h;
  for (const auto& e : f.source.carrier) h[e] = g(f(e));
  Term tracker = compile(L::lam("x", L::app(C(g.tracker), L::app(C(f.tracker), V("x")))));
  return AsmMap::make(g.name + "." + f.name, f.source, g.target, std::move(h),
                      std::move(tracker));
}

Assembly sub_assembly(const Assembly& x, const std::vector<std::string>& subset,
                      std::string name) {
  std::map<std::string, NestedProp> ex;
  for (const auto& e : subset) ex.emplace(e, x.ex(e));
  return Assembly::make(name.empty() ? x.name + "|sub" : std::move(name), subset, std::move(ex));
}

AsmMap include_map(const PcaContext& ctx, const Assembly& sub, const Assembly& whole) {
  std::map<std::string, std::string> g;
  for (const auto& e : sub.carrier) g[e] = e;
  return AsmMap::make(sub.name + "->" + whole.name, sub, whole, std::move(g), ctx.identity());
}

Assembly terminal_assembly() {
  return Assembly::make("1", {"*"}, {{"*", nested_top()}});
}

Assembly initial_assembly() { return Assembly::make("0", {}, {}); }

AsmMap bang_map(const PcaContext&, const Assembly& x) {
  std::map<std::string, std::string> g;
  for (const auto& e : x.carrier) g[e] = "*";
  return AsmMap::make(x.name + "->1", x, terminal_assembly(), std::move(g), Term::k());
}

std::optional<AsmMap> point_map(const PcaContext& ctx, const Assembly& x,
                                const std::string& elem) {
  TermSet act = witness_sample(ctx, x.ex(elem).act);
  if (act.empty()) return std::nullopt;
  Term tracker = Term::app(Term::k(), *act.begin());
  return AsmMap::make("pt_" + elem, terminal_assembly(), x, {{"*", elem}}, tracker);
}

std::string pair_label(const std::string& x, const std::string& y) {
  return "(" + x + "," + y + ")";
}

ProductResult product(const PcaContext& ctx, const Assembly& x, const Assembly& y) {
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;
  std::map<std::string, std::string> g0, g1;
  for (const auto& a : x.carrier)
    for (const auto& b : y.carrier) {
      std::string l = pair_label(a, b);
      carrier.push_back(l);
      ex.emplace(l, nconj(x.ex(a), y.ex(b)));
      g0[l] = a;
      g1[l] = b;
    }
  Assembly obj = Assembly::make(x.name + "*" + y.name, std::move(carrier), std::move(ex));
  AsmMap p0 = AsmMap::make("proj0", obj, x, std::move(g0), ctx.proj0());
  AsmMap p1 = AsmMap::make("proj1", obj, y, std::move(g1), ctx.proj1());
  return {std::move(obj), std::move(p0), std::move(p1)};
}

AsmMap pair_map(const PcaContext& ctx, const AsmMap& f, const AsmMap& g,
                const ProductResult& prod) {
  std::map<std::string, std::string> h;
  for (const auto& w : f.source.carrier) h[w] = pair_label(f(w), g(w));
  Term tracker = compile(L::lam(
      "w", L::app(C(ctx.pairing()), L::app(C(f.tracker), V("w")), L::app(C(g.tracker), V("w")))));
  return AsmMap::make("<" + f.name + "," + g.name + ">", f.source, prod.object, std::move(h),
                      std::move(tracker));
}

EqualizerResult equalizer(const PcaContext& ctx, const AsmMap& f, const AsmMap& g) {
  std::vector<std::string> subset;
  for (const auto& e : f.source.carrier)
    if (f(e) == g(e)) subset.push_back(e);
  Assembly obj = sub_assembly(f.source, subset, "eq(" + f.name + "," + g.name + ")");
  AsmMap inc = include_map(ctx, obj, f.source);
  return {std::move(obj), std::move(inc)};
}

ProductResult pullback_asm(const PcaContext& ctx, const AsmMap& f, const AsmMap& g) {
  ProductResult prod = product(ctx, f.source, g.source);
  std::vector<std::string> subset;
  for (const auto& a : f.source.carrier)
    for (const auto& b : g.source.carrier)
      if (f(a) == g(b)) subset.push_back(pair_label(a, b));
  Assembly obj = sub_assembly(prod.object, subset, "pb(" + f.name + "," + g.name + ")");
  std::map<std::string, std::string> g0, g1;
  for (const auto& l : subset) {
    g0[l] = prod.proj0(l);
    g1[l] = prod.proj1(l);
  }
  AsmMap p0 = AsmMap::make("pb0", obj, f.source, std::move(g0), ctx.proj0());
  AsmMap p1 = AsmMap::make("pb1", obj, g.source, std::move(g1), ctx.proj1());
  return {std::move(obj), std::move(p0), std::move(p1)};
}

SumResult sum(const PcaContext& ctx, const Assembly& x, const Assembly& y) {
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;
  std::map<std::string, std::string> g0, g1;
  NestedProp tag_l = nested_base({Term::k()});
  NestedProp tag_r = nested_base({ctx.kbar()});
  for (const auto& a : x.carrier) {
    std::string l = "inl:" + a;
    carrier.push_back(l);
    ex.emplace(l, nconj(tag_l, x.ex(a)));
    g0[a] = l;
  }
  for (const auto& b : y.carrier) {
    std::string l = "inr:" + b;
    carrier.push_back(l);
    ex.emplace(l, nconj(tag_r, y.ex(b)));
    g1[b] = l;
  }
  Assembly obj = Assembly::make(x.name + "+" + y.name, std::move(carrier), std::move(ex));
  Term inl_tr = compile(L::lam("w", L::app(C(ctx.pairing()), C(Term::k()), V("w"))));
  Term inr_tr = compile(L::lam("w", L::app(C(ctx.pairing()), C(ctx.kbar()), V("w"))));
  AsmMap i0 = AsmMap::make("inl", x, obj, std::move(g0), std::move(inl_tr));
  AsmMap i1 = AsmMap::make("inr", y, obj, std::move(g1), std::move(inr_tr));
  return {std::move(obj), std::move(i0), std::move(i1)};
}

AsmMap copair(const PcaContext& ctx, const AsmMap& f, const AsmMap& g, const SumResult& s) {
  std::map<std::string, std::string> h;
  for (const auto& a : f.source.carrier) h["inl:" + a] = f(a);
  for (const auto& b : g.source.carrier) h["inr:" + b] = g(b);
  Term tracker = compile(L::lam(
      "z", L::app(L::app(C(ctx.case_guard()), V("z")), C(f.tracker), C(g.tracker))));
  return AsmMap::make("[" + f.name + "," + g.name + "]", s.object, f.target, std::move(h),
                      std::move(tracker));
}

AsmMap sum_map(const PcaContext& ctx, const AsmMap& f, const AsmMap& g, const SumResult& dom,
               const SumResult& cod) {
  AsmMap left = compose_maps(ctx, cod.inj0, f);
  AsmMap right = compose_maps(ctx, cod.inj1, g);
  return copair(ctx, left, right, dom);
}

std::optional<Term> find_tracker(const PcaContext& ctx, const Assembly& src, const Assembly& tgt,
                                 const FinMap& graph, const std::vector<Term>& hints,
                                 std::size_t max_size, std::uint64_t fuel) {
  Predicate from = existence_predicate(src);
  Predicate to = reindex(graph, existence_predicate(tgt));
  for (const Term& h : hints)
    if (entails_verify(ctx, from, to, h, fuel).holds == Verdict::Yes) return h;
  return entails_search(ctx, from, to, max_size, fuel);
}

std::optional<std::string> ExponentialResult::label_of(const FinMap& g) const {
  for (const auto& [label, gr] : graph_of) {
    bool same = true;
    for (const auto& x : gr.dom)
      if (gr(x) != g(x)) {
        same = false;
        break;
      }
    if (same) return label;
  }
  return std::nullopt;
}

namespace {

std::string graph_label(const std::vector<std::string>& dom, const FinMap& g) {
  std::string out = "[";
  for (std::size_t i = 0; i < dom.size(); ++i) {
    if (i) out += ",";
    out += dom[i] + ">" + g(dom[i]);
  }
  return out + "]";
}

}  // namespace

ExponentialResult exponential(const PcaContext& ctx, const Assembly& x, const Assembly& y,
                              std::size_t depth, std::uint64_t fuel) {
  ExponentialResult res;
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;

  // all graphs |X| -> |Y| in lexicographic target order
  std::vector<FinMap> graphs;
  std::size_t n = x.carrier.size(), m = y.carrier.size();
  if (m == 0 && n > 0) {
    // no graphs at all
  } else {
    std::vector<std::size_t> pick(n, 0);
    for (;;) {
      std::map<std::string, std::string> g;
      for (std::size_t i = 0; i < n; ++i) g[x.carrier[i]] = y.carrier[pick[i]];
      graphs.push_back(FinMap::make(x.carrier, y.carrier, std::move(g)));
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (++pick[i] < m) break;
        pick[i] = 0;
      }
      if (i == n) break;
      if (n == 0) break;
    }
    if (n == 0 && !graphs.empty()) graphs.resize(1);
  }

  std::vector<Term> hints{ctx.identity(), standard_realizer("const_k"), ctx.proj0(),
                          ctx.proj1()};
  for (const FinMap& g : graphs) {
    auto tracker = find_tracker(ctx, x, y, g, hints, depth, fuel);
    if (!tracker) continue;
    std::string label = graph_label(x.carrier, g);
    carrier.push_back(label);
    std::vector<Prop1> pots, acts{Prop1::full_sub()};
    for (const auto& e : x.carrier) {
      NestedProp clause = nimp(x.ex(e), y.ex(g(e)));
      pots.push_back(clause.pot);
      acts.push_back(clause.act);
    }
    NestedProp existence{Prop1::inter(std::move(pots)).attach_witness(*tracker),
                         Prop1::inter(std::move(acts)).attach_witness(*tracker)};
    ex.emplace(label, std::move(existence));
    res.graph_of.emplace(label, g);
    res.tracker_of.emplace(label, *tracker);
  }

  res.object = Assembly::make(y.name + "^" + x.name, std::move(carrier), std::move(ex));
  res.domain = product(ctx, res.object, x);
  std::map<std::string, std::string> evg;
  for (const auto& f : res.object.carrier)
    for (const auto& e : x.carrier) evg[pair_label(f, e)] = res.graph_of.at(f)(e);
  Term ev_tracker = compile(L::lam(
      "w", L::app(L::app(C(ctx.proj0()), V("w")), L::app(C(ctx.proj1()), V("w")))));
  res.eval = AsmMap::make("ev", res.domain.object, y, std::move(evg), std::move(ev_tracker));
  return res;
}

std::optional<AsmMap> transpose(const PcaContext& ctx, const AsmMap& f, const Assembly& w,
                                const Assembly& x, const ExponentialResult& exp,
                                std::uint64_t fuel) {
  std::map<std::string, std::string> g;
  for (const auto& a : w.carrier) {
    std::map<std::string, std::string> slice;
    for (const auto& e : x.carrier) slice[e] = f(pair_label(a, e));
    auto label = exp.label_of(FinMap::make(x.carrier, f.target.carrier, std::move(slice)));
    if (!label) return std::nullopt;
    g[a] = *label;
  }
  Term tracker = compile(L::lam(
      "a", L::lam("b", L::app(C(f.tracker),
                              L::app(C(ctx.pairing()), V("a"), V("b"))))));
  AsmMap t = AsmMap::make("curry(" + f.name + ")", w, exp.object, std::move(g), tracker);
  if (entails_verify(ctx, existence_predicate(w),
                     reindex(t.graph, existence_predicate(exp.object)), tracker, fuel)
          .holds != Verdict::Yes)
    return std::nullopt;
  return t;
}

Predicate full_subobject(const Assembly& x) {
  return Predicate::constant(x.carrier, nested_top());
}

Predicate empty_subobject(const Assembly& x) {
  return Predicate::constant(x.carrier, nested_bottom());
}

Predicate sub_quantify(const AsmMap& f, const Predicate& s, QuantMode mode) {
  return mode == QuantMode::Exists ? exists_along(f.graph, s) : forall_along(f.graph, s);
}

CoverReport is_cover(const PcaContext& ctx, const AsmMap& f, std::uint64_t fuel,
                     std::size_t max_size, const std::vector<Term>& hints) {
  CoverReport rep;
  // fibers in source order
  std::map<std::string, std::vector<std::string>> fiber;
  for (const auto& y : f.source.carrier) fiber[f(y)].push_back(y);
  for (const auto& x : f.target.carrier)
    if (fiber[x].empty()) {
      rep.verdict = Verdict::No;
      rep.note = "graph misses " + x;
      return rep;
    }

  auto attempt = [&](const Term& a) -> std::optional<std::vector<CoverChoice>> {
    if (!in_subpca(a)) return std::nullopt;
    std::vector<CoverChoice> choices;
    for (const auto& x : f.target.carrier) {
      const NestedProp& ex = f.target.ex(x);
      std::map<std::string, std::string> chosen;  // witness string -> y
      for (const Term& b : witness_sample(ctx, ex.pot)) {
        auto r = apply(a, b, fuel);
        if (!r.normalized()) return std::nullopt;
        std::string pick;
        for (const auto& y : fiber[x])
          if (test(ctx, f.source.ex(y).pot, r.term(), fuel) == Verdict::Yes) {
            pick = y;
            break;
          }
        if (pick.empty()) return std::nullopt;
        chosen[to_string(b)] = pick;
        choices.push_back({x, b, pick, "pot"});
      }
      for (const Term& b : witness_sample(ctx, ex.act)) {
        auto r = apply(a, b, fuel);
        if (!r.normalized()) return std::nullopt;
        auto it = chosen.find(to_string(b));
        if (it != chosen.end()) {
          if (test(ctx, f.source.ex(it->second).act, r.term(), fuel) != Verdict::Yes)
            return std::nullopt;
          choices.push_back({x, b, it->second, "act"});
        } else {
          std::string pick;
          for (const auto& y : fiber[x])
            if (test(ctx, f.source.ex(y).pot, r.term(), fuel) == Verdict::Yes &&
                test(ctx, f.source.ex(y).act, r.term(), fuel) == Verdict::Yes) {
              pick = y;
              break;
            }
          if (pick.empty()) return std::nullopt;
          choices.push_back({x, b, pick, "act"});
        }
      }
    }
    return choices;
  };

  std::vector<Term> candidates;
  for (const Term& h : hints)
    if (h.pure()) candidates.push_back(h);
  if (f.tracker.pure()) candidates.push_back(f.tracker);
  candidates.push_back(ctx.identity());
  for (const Term& c : enumerate_subpca(max_size)) candidates.push_back(c);
  for (const Term& a : candidates) {
    auto got = attempt(a);
    if (got) {
      rep.verdict = Verdict::Yes;
      rep.lifting = a;
      rep.choices = std::move(*got);
      return rep;
    }
  }
  rep.verdict = Verdict::Unknown;
  rep.note = "no lifting found at depth";
  return rep;
}

PropObjects prop_objects(const PcaContext& ctx, const std::vector<NestedProp>& universe) {
  PropObjects res;
  for (const auto& p : universe) {
    bool dup = false;
    for (const auto& q : res.universe)
      if (p == q) {
        dup = true;
        break;
      }
    if (!dup) res.universe.push_back(p);
  }
  std::vector<std::string> pc, tc;
  std::map<std::string, NestedProp> pe, te;
  std::map<std::string, std::string> topg;
  for (std::size_t i = 0; i < res.universe.size(); ++i) {
    std::string l = "P" + std::to_string(i);
    pc.push_back(l);
    pe.emplace(l, nested_top());
    if (!witness_sample(ctx, res.universe[i].pot).empty()) {
      tc.push_back(l);
      te.emplace(l, res.universe[i]);
      topg[l] = l;
    }
  }
  res.prop = Assembly::make("Prop", std::move(pc), std::move(pe));
  res.tr = Assembly::make("Tr", std::move(tc), std::move(te));
  res.top = AsmMap::make("top", res.tr, res.prop, std::move(topg),
                         standard_realizer("const_k"));
  return res;
}

std::optional<std::string> PropObjects::label_of(const NestedProp& p) const {
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (universe[i] == p) return "P" + std::to_string(i);
  return std::nullopt;
}

const NestedProp& PropObjects::prop_at(const std::string& label) const {
  std::size_t i = std::stoul(label.substr(1));
  return universe.at(i);
}

ClassifyResult classify(const PcaContext& ctx, const AsmMap& m, const PropObjects& props,
                        std::uint64_t) {
  // monos have injective graphs
  std::map<std::string, std::string> preimage;
  for (const auto& y : m.source.carrier) {
    if (preimage.count(m(y))) throw std::invalid_argument("classify: graph is not injective");
    preimage[m(y)] = y;
  }

  std::map<std::string, std::string> chig;
  for (const auto& x : m.target.carrier) {
    auto it = preimage.find(x);
    NestedProp want = it != preimage.end() ? m.source.ex(it->second) : nested_bottom();
    auto label = props.label_of(want);
    if (!label) throw UniverseTooSmall("fiberwise proposition of " + m.name + " at " + x);
    chig[x] = *label;
  }
  ClassifyResult res;
  res.chi = AsmMap::make("chi_" + m.name, m.target, props.prop, std::move(chig),
                         standard_realizer("const_k"));

  // pullback of top along chi, carried by the image of m
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;
  std::map<std::string, std::string> inc, fwd, bwd;
  for (const auto& x : m.target.carrier) {
    auto it = preimage.find(x);
    if (it == preimage.end()) continue;
    carrier.push_back(x);
    ex.emplace(x, nconj(m.target.ex(x), m.source.ex(it->second)));
    inc[x] = x;
    fwd[it->second] = x;
    bwd[x] = it->second;
  }
  res.pb = Assembly::make("pb_top_" + m.name, std::move(carrier), std::move(ex));
  res.pb_into_x = AsmMap::make("pb_incl", res.pb, m.target, std::move(inc), ctx.proj0());
  Term fwd_tr = compile(L::lam(
      "w", L::app(C(ctx.pairing()), L::app(C(m.tracker), V("w")), V("w"))));
  res.iso_fwd = AsmMap::make("into_pb", m.source, res.pb, std::move(fwd), std::move(fwd_tr));
  res.iso_bwd = AsmMap::make("from_pb", res.pb, m.source, std::move(bwd), ctx.proj1());
  return res;
}

WeakPowerResult weak_power(const PcaContext& ctx, const Assembly& x, const PropObjects& props,
                           std::size_t depth, std::uint64_t fuel) {
  WeakPowerResult res;
  res.exp = exponential(ctx, x, props.prop, depth, fuel);
  // membership: pullback of top along the evaluation map
  std::vector<std::string> carrier;
  std::map<std::string, NestedProp> ex;
  std::map<std::string, std::string> inc, totr;
  for (const auto& l : res.exp.domain.object.carrier) {
    std::string plabel = res.exp.eval(l);
    bool in_tr = std::find(props.tr.carrier.begin(), props.tr.carrier.end(), plabel) !=
                 props.tr.carrier.end();
    if (!in_tr) continue;
    carrier.push_back(l);
    ex.emplace(l, nconj(res.exp.domain.object.ex(l), props.prop_at(plabel)));
    inc[l] = l;
    totr[l] = plabel;
  }
  res.membership = Assembly::make("mem_" + x.name, std::move(carrier), std::move(ex));
  res.membership_mono = AsmMap::make("mem_incl", res.membership, res.exp.domain.object,
                                     std::move(inc), ctx.proj0());
  res.to_tr = AsmMap::make("mem_to_tr", res.membership, props.tr, std::move(totr),
                           ctx.proj1());
  return res;
}

Assembly fiber_assembly(const AsmMap& f, const std::string& x) {
  std::vector<std::string> subset;
  for (const auto& y : f.source.carrier)
    if (f(y) == x) subset.push_back(y);
  return sub_assembly(f.source, subset, "fiber(" + f.name + "," + x + ")");
}

std::optional<IsoWitness> find_iso(const PcaContext& ctx, const Assembly& x, const Assembly& y,
                                   const FinMap& graph, const std::vector<Term>& hints_fwd,
                                   const std::vector<Term>& hints_bwd, std::size_t depth,
                                   std::uint64_t fuel) {
  // graph must be a bijection
  std::map<std::string, std::string> back;
  for (const auto& a : x.carrier) {
    if (back.count(graph(a))) return std::nullopt;
    back[graph(a)] = a;
  }
  if (back.size() != y.carrier.size()) return std::nullopt;

  auto fwd_tr = find_tracker(ctx, x, y, graph, hints_fwd, depth, fuel);
  if (!fwd_tr) return std::nullopt;
  FinMap inverse = FinMap::make(y.carrier, x.carrier, std::move(back));
  auto bwd_tr = find_tracker(ctx, y, x, inverse, hints_bwd, depth, fuel);
  if (!bwd_tr) return std::nullopt;
  std::map<std::string, std::string> g1, g2;
  for (const auto& a : x.carrier) g1[a] = graph(a);
  for (const auto& b : y.carrier) g2[b] = inverse(b);
  IsoWitness w{AsmMap::make("iso", x, y, std::move(g1), *fwd_tr),
               AsmMap::make("iso_inv", y, x, std::move(g2), *bwd_tr)};
  return w;
}

}  // namespace rzk
