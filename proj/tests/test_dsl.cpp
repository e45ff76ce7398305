#include <fstream>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "rzk/rng.hpp"
#include "rzk/session.hpp"

using namespace rzk;
using rzk::Rng;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string corpus(const std::string& name) { return std::string(RZK_CORPUS_DIR) + "/" + name; }

}  // namespace

TEST_CASE("parse: declarations and queries") {
  SessionAst ast = parse_session("prop T = base {K};");
  REQUIRE(ast.statements.size() == 1);
  const auto& d = std::get<PropDecl>(ast.statements[0].body);
  CHECK(d.name == "T");
  CHECK(d.value.kind == PropExpr::Kind::Base);
  REQUIRE(d.value.witnesses.size() == 1);
  CHECK(d.value.witnesses[0] == Term::k());

  SessionAst ast2 = parse_session(
      "prop P = base {K};\n"
      "nested NP = (P, P);\n"
      "pred F over {i} = { i: NP };\n"
      "pred G over {i} = { i: NP };\n"
      "check F |- G with \\x. x;\n");
  REQUIRE(ast2.statements.size() == 5);
  const auto& c = std::get<CheckStmt>(ast2.statements[4].body);
  CHECK(c.lhs == "F");
  CHECK(c.rhs == "G");
  CHECK(c.realizer.has_value());
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_session("prop X = base {K");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line >= 1);
    CHECK(!e.expected.empty());
  }

  CHECK_THROWS_AS(parse_session("prop X = base {K}; prop X = full;"), NameClash);
  CHECK_THROWS_AS(parse_session("prop X = Y;"), UnresolvedReference);
  CHECK_THROWS_AS(parse_session("eval #c0;"), UnresolvedReference);  // undeclared oracle
  CHECK_THROWS_AS(parse_session("pred F over {i} = { i: NP };"), UnresolvedReference);
}

TEST_CASE("pretty-print round-trip on the golden corpus") {
  for (const char* name : {"kernel.rzk", "tripos.rzk", "assemblies.rzk", "suites.rzk",
                           "failing.rzk"}) {
    CAPTURE(name);
    SessionAst ast = parse_session(slurp(corpus(name)));
    std::string printed = pretty_print(ast);
    SessionAst again = parse_session(printed);
    CHECK(ast.statements.size() == again.statements.size());
    CHECK(pretty_print(again) == printed);  // fixpoint after one round
  }
}

TEST_CASE("run: corpus sessions produce the pinned verdicts") {
  RunConfig cfg;
  for (const char* name : {"kernel.rzk", "tripos.rzk", "assemblies.rzk"}) {
    CAPTURE(name);
    SessionResult res = run_session(parse_session(slurp(corpus(name))), cfg);
    CHECK(res.exit_code() == 0);
    CHECK(res.no == 0);
    CHECK(res.errors == 0);
  }
  SessionResult fail = run_session(parse_session(slurp(corpus("failing.rzk"))), cfg);
  CHECK(fail.exit_code() == 1);
  CHECK(fail.no == 2);  // the top-to-bottom check and the broken tracker
}

TEST_CASE("run: eval verdicts") {
  RunConfig cfg;
  SessionResult res = run_session(
      parse_session("oracle c0;\neval (K #c0) K -> #c0;\neval S (S K K) (S K K) (S (S K K) (S K K));\n"),
      cfg);
  CHECK(res.yes == 1);
  CHECK(res.unknown == 1);  // fuel exhaustion without expectation
  CHECK(res.exit_code() == 0);
}

TEST_CASE("determinism: identical seed and config give identical reports") {
  RunConfig cfg;
  cfg.seed = 99;
  SessionAst ast = parse_session(slurp(corpus("suites.rzk")));
  SessionResult a = run_session(ast, cfg);
  SessionResult b = run_session(ast, cfg);
  CHECK(a.report.dump() == b.report.dump());
}

TEST_CASE("parser survives garbage and mutated sessions with typed errors") {
  Rng rng(0xF022);
  std::string golden = slurp(corpus("tripos.rzk"));
  const std::string alphabet =
      "abcdefghijKS(){};:,.#\\|->/= \n\t_0123456789";
  int parsed = 0;
  for (int iter = 0; iter < 600; ++iter) {
    std::string input;
    if (rng.coin()) {
      // pure noise
      std::size_t n = rng.below(120);
      for (std::size_t i = 0; i < n; ++i) input += alphabet[rng.below(alphabet.size())];
    } else {
      // mutated golden text
      input = golden;
      for (int m = 0; m < 8; ++m) {
        std::size_t at = rng.below(input.size());
        switch (rng.below(3)) {
          case 0: input[at] = alphabet[rng.below(alphabet.size())]; break;
          case 1: input.erase(at, 1 + rng.below(4)); break;
          default: input.insert(at, 1, alphabet[rng.below(alphabet.size())]); break;
        }
      }
    }
    try {
      SessionAst ast = parse_session(input);
      ++parsed;  // occasionally the mutation is harmless
      (void)pretty_print(ast);
    } catch (const SyntaxError&) {
    } catch (const NameClash&) {
    } catch (const UnresolvedReference&) {
    }
  }
  CHECK(parsed >= 0);  // reaching here at all is the property

  Rng trng(0xF033);
  for (int iter = 0; iter < 400; ++iter) {
    std::string input;
    std::size_t n = rng.below(40);
    for (std::size_t i = 0; i < n; ++i) input += alphabet[trng.below(alphabet.size())];
    try {
      (void)parse_term(input);
    } catch (const SyntaxError&) {
    }
    try {
      (void)parse_lambda(input);
    } catch (const SyntaxError&) {
    }
  }
}

TEST_CASE("worker pool does not change the report") {
  SessionAst ast = parse_session(slurp(corpus("tripos.rzk")));
  RunConfig one;
  RunConfig four;
  four.jobs = 4;
  Json a = run_session(ast, one).report["entries"];
  Json b = run_session(ast, four).report["entries"];
  CHECK(a.dump() == b.dump());
}
