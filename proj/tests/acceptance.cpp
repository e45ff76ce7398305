// Acceptance suite: one pass/fail line per criterion, each with its stated
// instance counts, tolerances and time budgets. Defaults: fuel 10000, search
// depth 7, fixed seeds.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rzk/report.hpp"
#include "rzk/session.hpp"
#include "subst_oracle.hpp"

using namespace rzk;
using namespace rzk::testutil;

namespace {

const PcaContext& ctx() {
  static const PcaContext c({"c0", "c1"});
  return c;
}

struct Criterion {
  const char* name;
  double budget_s;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  double elapsed() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - started)
               .count() /
           1000.0;
  }
  void finish(bool pass, const std::string& detail = {}) {
    double t = elapsed();
    std::printf("%s criterion %s (%.1f s, budget %.0f s)%s%s\n", pass ? "PASS" : "FAIL", name,
                t, budget_s, detail.empty() ? "" : ": ", detail.c_str());
    CHECK(pass);
    CHECK(t < budget_s);
  }
};

std::string failures_of(const SuiteReport& rep, std::size_t cap = 3) {
  std::string out;
  std::size_t n = 0;
  for (const auto& c : rep.checks) {
    if (c.verdict == Verdict::Yes) continue;
    if (n++ >= cap) break;
    out += c.name + " [" + to_string(c.verdict) + "] " + c.detail + "; ";
  }
  return out;
}

}  // namespace

TEST_CASE("1. pca kernel laws") {
  Criterion cr{"1 (pca kernel laws)", 10};
  SuiteOptions opt;
  opt.count = 1000;
  opt.seed = 0xC0FFEE;
  SuiteReport rep = pca_law_suite(ctx(), opt);
  cr.finish(rep.all_yes() && rep.yes == 1000, failures_of(rep));
}

TEST_CASE("2. compiler soundness") {
  Criterion cr{"2 (compiler soundness)", 30};
  Rng rng(0xABCD);
  std::vector<Term> pool{Term::k(), Term::s(), Term::oracle("c0"), ctx().identity(),
                         ctx().proj0()};
  std::vector<std::string> oracle_names{"c0", "c1"};
  int disagreements = 0, compared = 0;
  for (int iter = 0; iter < 200; ++iter) {
    RandomClosed rc = random_closed(rng, pool);
    Term compiled = compile(rc.e);
    Term lhs_app = compiled;
    HRef rhs_app = from_lambda(rc.e);
    for (unsigned i = 0; i < rc.binders; ++i) {
      Term arg;
      for (;;) {
        arg = pool[rng.below(pool.size())];
        if (rng.coin()) break;
        auto r = reduce(Term::app(arg, pool[rng.below(pool.size())]), 500);
        if (r.normalized() && r.term().size() < 32) {
          arg = r.term();
          break;
        }
      }
      lhs_app = Term::app(lhs_app, arg);
      rhs_app = hmk(HT::App, {}, rhs_app, from_term(arg));
    }
    auto lhs = reduce(lhs_app, 6000);
    HRef rhs;
    bool rhs_ok = hreduce(rhs_app, 6000, rhs);
    if (!lhs.normalized() || !rhs_ok) continue;  // agreement required only when co-terminating
    ++compared;
    if (agree(lhs.term(), rhs, 2) == Agree::No) ++disagreements;
  }
  cr.finish(disagreements == 0 && compared > 100,
            "compared " + std::to_string(compared) + ", disagreements " +
                std::to_string(disagreements));
}

TEST_CASE("3. heyting suite") {
  Criterion cr{"3 (heyting suite)", 120};
  SuiteOptions opt;
  opt.count = 50;
  opt.seed = 0x12EA;
  SuiteReport rep = heyting_suite(ctx(), opt);
  bool pass = rep.no == 0 && rep.unknown_rate() < 0.01 && rep.yes >= 50 * 12;
  cr.finish(pass, failures_of(rep));
}

TEST_CASE("4. quantifier suite") {
  Criterion cr{"4 (quantifier suite)", 300};
  SuiteOptions opt;
  opt.seed = 0x0041;
  SuiteReport rep = quantifier_suite(ctx(), opt);
  cr.finish(rep.all_yes(), "cases " + std::to_string(rep.yes) + "; " + failures_of(rep));
}

TEST_CASE("5. subtopos suite") {
  Criterion cr{"5 (subtopos suite)", 180};
  SuiteOptions opt;
  opt.count = 50;
  opt.seed = 0x5174;
  SuiteReport rep = subtopos_suite(ctx(), opt);
  cr.finish(rep.all_yes(), failures_of(rep));
}

TEST_CASE("6. assemblies suite") {
  Criterion cr{"6 (assemblies suite)", 300};
  SuiteOptions opt;
  opt.count = 100;  // random instances at carrier 4
  opt.seed = 0xA55E;
  SuiteReport rep = assemblies_suite(ctx(), opt);
  cr.finish(rep.all_yes(), failures_of(rep));
}

TEST_CASE("7. small-maps suite") {
  Criterion cr{"7 (small maps suite)", 300};
  SmallMapConfig cfg = SmallMapConfig::make(4);
  AxiomSuiteReport rep = axiom_suite(ctx(), cfg, 100, 0x5AFE);
  bool pass = rep.all_pass();
  for (const auto& a : rep.axioms)
    if (a.axiom.find("A8") == std::string::npos && a.axiom.find("degenerate") == std::string::npos)
      pass = pass && a.instances >= 100;
  // the bounded-(A8) deviation must be flagged in the report
  pass = pass && rep.deviation.find("(A8)") != std::string::npos &&
         rep.deviation.find("bounded-numerals") != std::string::npos;
  std::string notes;
  for (const auto& a : rep.axioms)
    if (a.failures) notes += a.axiom + ": " + a.notes.front() + "; ";
  cr.finish(pass, notes);
}

TEST_CASE("8. transfer suite") {
  Criterion cr{"8 (transfer suite)", 300};
  SuiteOptions opt;
  opt.count = 100;  // 100 generated j-epis per operator
  opt.seed = 0x7AB5;
  SuiteReport rep = transfer_suite(ctx(), opt);
  cr.finish(rep.all_yes(), failures_of(rep));
}

TEST_CASE("9. search/verify agreement on the standard law corpus") {
  Criterion cr{"9 (standard law corpus)", 120};
  SuiteOptions opt;
  opt.seed = 0x20C0;
  SuiteReport rep = standard_law_corpus(ctx(), opt);
  bool pass = rep.all_yes() && rep.yes == 40;  // 20 laws x (library + search)
  cr.finish(pass, failures_of(rep));
}

TEST_CASE("10. determinism of suite reports") {
  Criterion cr{"10 (determinism)", 120};
  std::ifstream in(std::string(RZK_CORPUS_DIR) + "/suites.rzk");
  std::stringstream buf;
  buf << in.rdbuf();
  SessionAst ast = parse_session(buf.str());
  RunConfig cfg;
  cfg.seed = 0xD37E;
  std::string a = run_session(ast, cfg).report.dump(2);
  std::string b = run_session(ast, cfg).report.dump(2);
  cr.finish(!a.empty() && a == b,
            a == b ? "byte-identical reports" : "reports differ");
}
