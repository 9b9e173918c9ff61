#include <doctest.h>

#include "ggroup/analysis.hpp"
#include "ggroup/encodings.hpp"
#include "support.hpp"

using namespace ggroup::analysis;
using testsupport::english;

namespace {

ggroup::lexicon::Lexicon often_lexicon(const char* file) {
  return ggroup::encodings::encode_dcg(ggroup::encodings::parse_dcg(testsupport::read_file(file)));
}

}  // namespace

TEST_CASE("the english generation rules decrease in size") {
  auto rules = ggroup::lexicon::gen_rules(english());
  auto r = check_size_decrease(rules, &english());
  CHECK(r.passed());
  CHECK(r.witnesses.empty());
}

TEST_CASE("the english grammar is inherently reversible") {
  auto rep = reversibility_report(english());
  CHECK(rep.reversible());
  CHECK(rep.str().find("generation: PASS") != std::string::npos);
  CHECK(rep.str().find("parsing: PASS") != std::string::npos);
  CHECK(rep.json().find("\"reversible\": true") != std::string::npos);
}

TEST_CASE("empty rule sets pass vacuously") {
  std::vector<ggroup::lexicon::GenRule> none;
  CHECK(check_size_decrease(none).passed());
  CHECK(reversibility_report(ggroup::lexicon::parse_grammar("")).reversible());
}

TEST_CASE("the context-free often rule is a ground cycle") {
  auto lex = often_lexicon("often.dcg");
  auto rep = reversibility_report(lex);
  CHECK_FALSE(rep.generation.passed());
  CHECK_FALSE(rep.reversible());
  bool found = false;
  for (const auto& w : rep.generation.witnesses)
    if (w.relator == "vp vp^-1 often^-1" && w.self_cycle && w.lhs == "vp" && w.rhs_item == "vp") {
      found = true;
      CHECK(w.str().find("ground cycle in the rule itself") != std::string::npos);
    }
  CHECK(found);
}

TEST_CASE("witness wording distinguishes self-cycles from unmet criteria") {
  auto lex = ggroup::lexicon::parse_grammar("mode raw .\nphon w .\nrelator f(A) g(A,A)^-1 w^-1 .\n");
  auto r = check_size_decrease(ggroup::lexicon::gen_rules(lex), &lex);
  REQUIRE_FALSE(r.passed());
  REQUIRE(r.witnesses.size() == 1);
  CHECK_FALSE(r.witnesses[0].self_cycle);
  CHECK(r.witnesses[0].str().find("criterion not met") != std::string::npos);
  CHECK(r.witnesses[0].str().find("cycle found") == std::string::npos);
}

TEST_CASE("meta-variable accounting") {
  // Same size on both sides: not strictly smaller.
  auto same = ggroup::lexicon::parse_grammar("mode raw .\nphon w .\nrelator f(A) g(A)^-1 w^-1 .\n");
  CHECK_FALSE(check_size_decrease(ggroup::lexicon::gen_rules(same)).passed());
  // A variable absent from the left-hand side may be arbitrarily large.
  auto unbounded = ggroup::lexicon::parse_grammar("mode raw .\nphon w .\nrelator f(a,b,c) B^-1 w^-1 .\n");
  CHECK_FALSE(check_size_decrease(ggroup::lexicon::gen_rules(unbounded)).passed());
  // A proper subterm is strictly smaller.
  auto sub = ggroup::lexicon::parse_grammar("mode raw .\nphon w .\nrelator f(A,B) B^-1 A^-1 w^-1 .\n");
  CHECK(check_size_decrease(ggroup::lexicon::gen_rules(sub)).passed());
}

TEST_CASE("parse rules containing words fail the criterion") {
  auto lex = often_lexicon("often.dcg");
  auto r = check_size_decrease(ggroup::lexicon::parse_rules(lex), &lex);
  for (const auto& w : r.witnesses) CHECK_FALSE(w.rhs_item.empty());
  CHECK(check_size_decrease(ggroup::lexicon::parse_rules(english())).passed());
}

TEST_CASE("a terminal counter removes the often self-cycle") {
  auto lex = often_lexicon("often_counted.dcg");
  auto rep = reversibility_report(lex);
  for (const auto& w : rep.generation.witnesses) {
    CHECK_FALSE(w.self_cycle);
    CHECK(w.relator.find("often") == std::string::npos);
  }
}
