#include "rzk/session.hpp"

#include <atomic>
#include <functional>
#include <set>
#include <thread>

#include "rzk/assembly.hpp"
#include "rzk/subtopos.hpp"

namespace rzk {

namespace {

struct Env {
  std::map<std::string, Prop1> props;
  std::map<std::string, NestedProp> nesteds;
  std::map<std::string, Predicate> preds;
  std::map<std::string, Assembly> assemblies;
  std::map<std::string, std::vector<NestedProp>> universes;
};

Prop1 eval_prop(const Env& env, const PropExpr& e) {
  switch (e.kind) {
    case PropExpr::Kind::Ref: return env.props.at(e.name);
    case PropExpr::Kind::Full: return Prop1::full_a();
    case PropExpr::Kind::FullSub: return Prop1::full_sub();
    case PropExpr::Kind::Base: {
      TermSet w;
      for (const Term& t : e.witnesses) w.insert(t);
      return Prop1::base(std::move(w));
    }
    case PropExpr::Kind::Imp: return Prop1::imp(eval_prop(env, e.args[0]), eval_prop(env, e.args[1]));
    case PropExpr::Kind::Conj:
      return Prop1::conj(eval_prop(env, e.args[0]), eval_prop(env, e.args[1]));
    case PropExpr::Kind::Disj:
      return Prop1::disj(eval_prop(env, e.args[0]), eval_prop(env, e.args[1]));
  }
  throw std::logic_error("eval_prop: bad kind");
}

NestedProp eval_nested(const Env& env, const NestedExpr& v) {
  if (v.ref) return env.nesteds.at(*v.ref);
  return NestedProp{eval_prop(env, v.pair->first), eval_prop(env, v.pair->second)};
}

Term resolve_lambda(const PcaContext& ctx, const LambdaTerm& e) {
  std::function<LambdaTerm(const LambdaTerm&, std::set<std::string>)> walk =
      [&](const LambdaTerm& t, std::set<std::string> bound) -> LambdaTerm {
    switch (t.tag()) {
      case LambdaTerm::Tag::Var: {
        if (bound.count(t.name())) return t;
        // derived names first, then the realizer library
        static const std::set<std::string> derived{"i",    "kbar", "p",      "p0",  "p1",
                                                   "succ", "pred", "iszero", "case"};
        if (derived.count(t.name()))
          return LambdaTerm::constant(
              ctx.derived(t.name() == "case" ? "case_guard" : t.name()));
        return LambdaTerm::constant(standard_realizer(t.name()));
      }
      case LambdaTerm::Tag::Lam: {
        auto b = bound;
        b.insert(t.name());
        return LambdaTerm::lam(t.name(), walk(t.body(), std::move(b)));
      }
      case LambdaTerm::Tag::App:
        return LambdaTerm::app(walk(t.fun(), bound), walk(t.arg(), bound));
      case LambdaTerm::Tag::Const: return t;
    }
    return t;
  };
  return compile(walk(e, {}));
}

struct Entry {
  int line = 0;
  std::string kind, name;
  Verdict verdict = Verdict::Yes;
  bool error = false;
  bool counts = false;  // counts towards query totals
  Json payload = Json::object();
};

Json entry_json(const Entry& e) {
  Json j;
  j["line"] = e.line;
  j["kind"] = e.kind;
  j["name"] = e.name;
  j["verdict"] = e.error ? "error" : to_string(e.verdict);
  j["detail"] = e.payload;
  return j;
}

}  // namespace

SessionResult run_session(const SessionAst& ast, const RunConfig& config) {
  // the pca context is fixed by the oracle signature of the whole session
  std::set<std::string> oracle_names;
  for (const auto& st : ast.statements)
    if (const auto* d = std::get_if<OracleDecl>(&st.body))
      oracle_names.insert(d->names.begin(), d->names.end());
  PcaContext ctx(oracle_names, config.fuel);

  Env env;
  std::vector<Entry> entries(ast.statements.size());
  struct QueryTask {
    std::size_t index;
    std::function<Entry()> run;
  };
  std::vector<QueryTask> tasks;

  std::uint64_t fuel = config.fuel;
  std::size_t depth = config.depth;

  for (std::size_t si = 0; si < ast.statements.size(); ++si) {
    const Statement& st = ast.statements[si];
    Entry& entry = entries[si];
    entry.line = st.line;
    try {
      std::visit(
          [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, OracleDecl>) {
              entry.kind = "oracle";
              std::string names;
              for (const auto& n : d.names) names += (names.empty() ? "" : " ") + n;
              entry.name = names;
            } else if constexpr (std::is_same_v<T, PropDecl>) {
              entry.kind = "prop";
              entry.name = d.name;
              Prop1 p = eval_prop(env, d.value);
              entry.payload["prop"] = prop_json(p);
              env.props.emplace(d.name, std::move(p));
            } else if constexpr (std::is_same_v<T, NestedDecl>) {
              entry.kind = "nested";
              entry.name = d.name;
              NestedProp np{eval_prop(env, d.pot), eval_prop(env, d.act)};
              bool ok = validate_nested(ctx, np, fuel);
              entry.verdict = ok ? Verdict::Yes : Verdict::No;
              entry.counts = !ok;
              if (!ok) entry.payload["note"] = "actual part violates containment";
              env.nesteds.emplace(d.name, std::move(np));
            } else if constexpr (std::is_same_v<T, PredDecl>) {
              entry.kind = "pred";
              entry.name = d.name;
              std::map<std::string, NestedProp> at;
              for (const auto& [l, v] : d.fibers) {
                NestedProp np = eval_nested(env, v);
                if (!validate_nested(ctx, np, fuel)) {
                  entry.verdict = Verdict::No;
                  entry.counts = true;
                  entry.payload["note"] = "fiber " + l + " violates actual containment";
                }
                at.emplace(l, std::move(np));
              }
              env.preds.emplace(d.name, Predicate::make(d.index, std::move(at)));
            } else if constexpr (std::is_same_v<T, AssemblyDecl>) {
              entry.kind = "assembly";
              entry.name = d.name;
              std::vector<std::string> carrier;
              std::map<std::string, NestedProp> ex;
              for (const auto& [l, v] : d.elements) {
                carrier.push_back(l);
                NestedProp np = eval_nested(env, v);
                if (!validate_nested(ctx, np, fuel)) {
                  entry.verdict = Verdict::No;
                  entry.counts = true;
                  entry.payload["note"] = "element " + l + " violates actual containment";
                }
                ex.emplace(l, std::move(np));
              }
              Assembly a = Assembly::make(d.name, std::move(carrier), std::move(ex));
              validate_assembly(ctx, a);
              env.assemblies.emplace(d.name, std::move(a));
            } else if constexpr (std::is_same_v<T, MapDecl>) {
              entry.kind = "map";
              entry.name = d.name;
              std::map<std::string, std::string> g(d.arrows.begin(), d.arrows.end());
              Term tracker = resolve_lambda(ctx, d.tracker);
              AsmMap f = AsmMap::make(d.name, env.assemblies.at(d.source),
                                      env.assemblies.at(d.target), std::move(g), tracker);
              auto rep = verify_map(ctx, f, fuel);
              entry.verdict = rep.holds;
              entry.counts = true;
              entry.payload = entailment_json(rep);
            } else if constexpr (std::is_same_v<T, UniverseDecl>) {
              entry.kind = "universe";
              entry.name = d.name;
              std::vector<NestedProp> members;
              for (const auto& v : d.members) members.push_back(eval_nested(env, v));
              // registering a universe builds Prop/Tr and verifies the
              // generic mono over it
              PropObjects props = prop_objects(ctx, members);
              auto rep = verify_map(ctx, props.top, fuel);
              entry.verdict = rep.holds;
              entry.counts = true;
              entry.payload["props"] = static_cast<int>(props.prop.carrier.size());
              entry.payload["inhabited"] = static_cast<int>(props.tr.carrier.size());
              entry.payload["top"] = to_string(rep.holds);
              env.universes.emplace(d.name, std::move(members));
            } else if constexpr (std::is_same_v<T, SetStmt>) {
              entry.kind = "set";
              entry.name = d.key;
              if (d.key == "fuel")
                fuel = d.value;
              else
                depth = static_cast<std::size_t>(d.value);
              entry.payload["value"] = d.value;
            } else if constexpr (std::is_same_v<T, CheckStmt>) {
              entry.kind = "check";
              entry.name = d.lhs + " |- " + d.rhs;
              entry.counts = true;
              Predicate lhs = env.preds.at(d.lhs);
              Predicate rhs = env.preds.at(d.rhs);
              std::optional<Term> realizer;
              if (d.realizer) realizer = resolve_lambda(ctx, *d.realizer);
              std::uint64_t f = fuel;
              std::size_t dep = depth;
              Entry snapshot = entry;
              tasks.push_back({si, [&ctx, lhs, rhs, realizer, f, dep, snapshot]() {
                                 Entry e = snapshot;
                                 if (realizer) {
                                   auto rep = entails_verify(ctx, lhs, rhs, *realizer, f);
                                   e.verdict = rep.holds;
                                   e.payload = entailment_json(rep);
                                 } else {
                                   auto found = entails_search(ctx, lhs, rhs, dep, f);
                                   if (found) {
                                     e.verdict = Verdict::Yes;
                                     e.payload["realizer"] = to_string(*found);
                                   } else {
                                     e.verdict = Verdict::No;
                                     e.payload["note"] =
                                         "no realizer found at depth (not a refutation)";
                                   }
                                 }
                                 return e;
                               }});
            } else if constexpr (std::is_same_v<T, SearchStmt>) {
              entry.kind = "search";
              entry.name = d.lhs + " |- " + d.rhs;
              entry.counts = true;
              Predicate lhs = env.preds.at(d.lhs);
              Predicate rhs = env.preds.at(d.rhs);
              std::uint64_t f = fuel;
              std::size_t dep = d.depth;
              Entry snapshot = entry;
              tasks.push_back({si, [&ctx, lhs, rhs, f, dep, snapshot]() {
                                 Entry e = snapshot;
                                 auto found = entails_search(ctx, lhs, rhs, dep, f);
                                 if (found) {
                                   e.verdict = Verdict::Yes;
                                   e.payload["realizer"] = to_string(*found);
                                 } else {
                                   e.verdict = Verdict::No;
                                   e.payload["note"] =
                                       "no realizer found at depth (not a refutation)";
                                 }
                                 return e;
                               }});
            } else if constexpr (std::is_same_v<T, SuiteStmt>) {
              entry.kind = "suite";
              entry.counts = true;
              SuiteOptions opt;
              opt.seed = d.seed.value_or(config.seed);
              opt.count = d.count.value_or(20);
              opt.fuel = fuel;
              opt.depth = depth;
              SuiteStmt stmt = d;
              // session assemblies that fit the registration constraints
              // become the suite's universe
              std::vector<Assembly> session_universe;
              if (d.kind == SuiteStmt::Kind::Small) {
                SmallMapConfig probe = SmallMapConfig::make(d.bound.value_or(4));
                for (const auto& [n, a] : env.assemblies) {
                  try {
                    probe.register_assembly(a);
                    session_universe.push_back(a);
                  } catch (const std::invalid_argument&) {
                  }
                }
              }
              Entry snapshot = entry;
              tasks.push_back({si, [&ctx, stmt, opt, snapshot, session_universe]() {
                                 Entry e = snapshot;
                                 switch (stmt.kind) {
                                   case SuiteStmt::Kind::Small: {
                                     e.name = "small";
                                     SmallMapConfig cfg = SmallMapConfig::make(
                                         stmt.bound.value_or(4), opt.fuel, opt.depth);
                                     for (const Assembly& a : session_universe)
                                       cfg.register_assembly(a);
                                     AxiomSuiteReport rep =
                                         axiom_suite(ctx, cfg, opt.count, opt.seed);
                                     e.verdict =
                                         rep.all_pass() ? Verdict::Yes : Verdict::No;
                                     e.payload = axiom_suite_json(rep);
                                     e.payload["registered"] =
                                         static_cast<int>(cfg.universe.size());
                                     break;
                                   }
                                   case SuiteStmt::Kind::Tripos: {
                                     e.name = "tripos";
                                     SuiteReport rep = heyting_suite(ctx, opt);
                                     e.verdict = rep.all_yes() ? Verdict::Yes : Verdict::No;
                                     e.payload = suite_json(rep);
                                     break;
                                   }
                                   case SuiteStmt::Kind::SubtoposOpen:
                                   case SuiteStmt::Kind::SubtoposClosed: {
                                     bool open = stmt.kind == SuiteStmt::Kind::SubtoposOpen;
                                     e.name = open ? "subtopos open" : "subtopos closed";
                                     Rng rng(opt.seed);
                                     std::vector<Predicate> samples;
                                     for (int i = 0; i < std::max(2, opt.count); ++i)
                                       samples.push_back(
                                           random_predicate(ctx, rng, {"a", "b"}, 2));
                                     JLawsReport rep = j_laws_check(
                                         ctx,
                                         open ? ClosureOperator::open()
                                              : ClosureOperator::closed(),
                                         samples, opt.fuel, opt.depth);
                                     e.verdict =
                                         rep.all_pass() ? Verdict::Yes : Verdict::No;
                                     Json laws = Json::array();
                                     for (const auto& l : rep.laws) {
                                       Json lj;
                                       lj["law"] = l.law;
                                       lj["verdict"] = to_string(l.verdict);
                                       if (l.realizer) lj["realizer"] = to_string(*l.realizer);
                                       lj["via"] = l.via;
                                       laws.push_back(std::move(lj));
                                     }
                                     e.payload["laws"] = std::move(laws);
                                     break;
                                   }
                                 }
                                 return e;
                               }});
            } else if constexpr (std::is_same_v<T, EvalStmt>) {
              entry.kind = "eval";
              entry.name = to_string(d.term);
              entry.counts = true;
              EvalStmt stmt = d;
              std::uint64_t f = fuel;
              Entry snapshot = entry;
              tasks.push_back({si, [stmt, f, snapshot]() {
                                 Entry e = snapshot;
                                 auto r = reduce(stmt.term, f);
                                 if (!r.normalized()) {
                                   e.verdict = stmt.expected ? Verdict::No : Verdict::Unknown;
                                   e.payload["outcome"] = "fuel exhausted";
                                   e.payload["steps"] = r.steps_used();
                                 } else {
                                   e.payload["normal_form"] = to_string(r.term());
                                   e.payload["steps"] = r.steps_used();
                                   if (stmt.expected)
                                     e.verdict = r.term() == *stmt.expected ? Verdict::Yes
                                                                            : Verdict::No;
                                   else
                                     e.verdict = Verdict::Yes;
                                 }
                                 return e;
                               }});
            }
          },
          st.body);
    } catch (const std::exception& ex) {
      entry.error = true;
      entry.counts = true;
      if (entry.kind.empty()) entry.kind = "statement";
      entry.payload["error"] = ex.what();
    }
  }

  // run queries, possibly on a pool; results always land at their indices
  auto run_task = [&](const QueryTask& t) {
    try {
      entries[t.index] = t.run();
    } catch (const std::exception& ex) {
      entries[t.index].error = true;
      entries[t.index].counts = true;
      entries[t.index].payload["error"] = ex.what();
    }
  };
  if (config.jobs <= 1 || tasks.size() <= 1) {
    for (const auto& t : tasks) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    int n = std::min<int>(config.jobs, static_cast<int>(tasks.size()));
    for (int i = 0; i < n; ++i)
      pool.emplace_back([&] {
        for (;;) {
          std::size_t k = next.fetch_add(1);
          if (k >= tasks.size()) return;
          run_task(tasks[k]);
        }
      });
    for (auto& th : pool) th.join();
  }

  SessionResult res;
  Json jentries = Json::array();
  for (const auto& e : entries) {
    jentries.push_back(entry_json(e));
    if (e.error) {
      ++res.errors;
      continue;
    }
    if (!e.counts) continue;
    ++res.queries;
    switch (e.verdict) {
      case Verdict::Yes: ++res.yes; break;
      case Verdict::No: ++res.no; break;
      case Verdict::Unknown: ++res.unknown; break;
    }
  }
  res.report["schema"] = 1;
  Json cfg;
  cfg["fuel"] = config.fuel;
  cfg["depth"] = config.depth;
  cfg["seed"] = config.seed;
  cfg["jobs"] = config.jobs;
  res.report["config"] = std::move(cfg);
  res.report["entries"] = std::move(jentries);
  Json summary;
  summary["queries"] = res.queries;
  summary["yes"] = res.yes;
  summary["no"] = res.no;
  summary["unknown"] = res.unknown;
  summary["errors"] = res.errors;
  res.report["summary"] = std::move(summary);
  return res;
}

}  // namespace rzk
