#include <doctest.h>

#include <deque>
#include <functional>

#include "ggroup/engine.hpp"
#include "support.hpp"

using namespace ggroup::engine;
using ggroup::freegroup::ReducedWord;
using ggroup::freegroup::SignedAtom;
using testsupport::english;
using testsupport::T;
using testsupport::words;

namespace {

Expr E(const std::string& s) { return parse_expr(s, english().phon_vocab); }

std::set<std::string> generated(const Machine& m, const std::string& lf) {
  std::set<std::string> out;
  for (const auto& g : generate(m, T(lf)).results) out.insert(testsupport::join(g.words));
  return out;
}

std::set<std::string> parsed(const Machine& m, const std::string& sentence) {
  std::set<std::string> out;
  for (const auto& p : parse(m, words(sentence)).results) out.insert(p.semantics.str());
  return out;
}

/// Every block-free word reachable from `e` by Move, Rotate and Dissolve.
std::set<ReducedWord> reachable_arrangements(const Expr& e) {
  std::set<std::string> seen;
  std::set<ReducedWord> out;
  std::deque<Expr> todo{e};
  while (!todo.empty()) {
    Expr cur = todo.front();
    todo.pop_front();
    if (!seen.insert(cur.str()).second) continue;
    if (auto w = to_word(cur)) {
      out.insert(*w);
      continue;
    }
    for (std::size_t i = 0; i < cur.items.size(); ++i) {
      if (!cur.items[i].is_block()) continue;
      const auto& b = cur.items[i].block();
      todo.push_back(step_dissolve(cur, b.id));
      for (std::size_t k = 1; k < b.contents.size(); ++k) todo.push_back(step_rotate(cur, b.id, k));
      for (std::size_t p = 0; p < cur.items.size(); ++p) todo.push_back(step_move(cur, b.id, {p}));
    }
  }
  return out;
}

/// Oracle: the block stands for alpha^-1 u alpha. Enumerates alpha over all
/// words of length <= max_len on the expression's atoms and keeps results
/// that are arrangements (every atom positive, same multiset).
std::set<ReducedWord> conjugator_arrangements(const std::vector<SignedAtom>& prefix, const std::vector<SignedAtom>& u,
                                              const std::vector<SignedAtom>& suffix, std::size_t max_len) {
  std::vector<SignedAtom> alphabet;
  for (const auto* part : {&prefix, &u, &suffix})
    for (const auto& a : *part) {
      alphabet.push_back(a);
      alphabet.push_back(a.inverse());
    }
  std::multiset<SignedAtom> atoms(prefix.begin(), prefix.end());
  atoms.insert(u.begin(), u.end());
  atoms.insert(suffix.begin(), suffix.end());

  std::set<ReducedWord> out;
  std::vector<SignedAtom> alpha;
  std::function<void()> rec = [&] {
    ReducedWord a = ggroup::freegroup::reduce(alpha);
    std::vector<SignedAtom> raw = prefix;
    auto inv = inverse(a).atoms();
    raw.insert(raw.end(), inv.begin(), inv.end());
    raw.insert(raw.end(), u.begin(), u.end());
    raw.insert(raw.end(), a.atoms().begin(), a.atoms().end());
    raw.insert(raw.end(), suffix.begin(), suffix.end());
    auto w = ggroup::freegroup::reduce(raw);
    std::multiset<SignedAtom> got(w.atoms().begin(), w.atoms().end());
    if (got == atoms) out.insert(w);
    if (alpha.size() == max_len) return;
    for (const auto& x : alphabet) {
      alpha.push_back(x);
      rec();
      alpha.pop_back();
    }
  };
  rec();
  return out;
}

std::vector<SignedAtom> atoms_of(const std::string& s) { return ggroup::freegroup::parse_atoms(s); }

}  // namespace

TEST_CASE("expression parsing and rendering") {
  for (const char* s : {"john saw [3: some woman #x2^-1] #x2", "1", "s(j,l) louise^-1", "[1: [2: a] b] c"})
    CHECK(E(s).str() == s);
  CHECK(E("john [1: a b] c").atom_count() == 4);
}

TEST_CASE("eager cancellation works at every level") {
  Expr e = E("j j^-1 [1: a #x^-1 #x b] c");
  cancel_ground_pairs(e.items);
  CHECK(e.str() == "[1: a b] c");
  Expr nested = E("a b b^-1 a^-1");
  cancel_ground_pairs(nested.items);
  CHECK(nested.empty());
}

TEST_CASE("canonical key ignores names") {
  CHECK(canonical_key(E("A_1^-1 s(A_1,#x3) [4: b]")) == canonical_key(E("A_7^-1 s(A_7,#x9) [2: b]")));
  CHECK(canonical_key(E("A^-1 s(A,B)")) != canonical_key(E("A^-1 s(B,A)")));
}

TEST_CASE("expand steps") {
  Machine m(english());
  State s = State::start(E("s(j,l)"));
  RuleRef saw_rule{RuleRef::Set::Gen, 6};
  auto deltas = expansion_matches(m, s, {0}, saw_rule);
  REQUIRE(deltas.size() == 1);
  apply_step(m, s, Step{StepKind::Expand, {0}, saw_rule, deltas[0], -1, 0});
  CHECK(s.expr.str() == "j saw l");

  // A non-matching rule is inapplicable.
  State t = State::start(E("s(j,l)"));
  CHECK(expansion_matches(m, t, {0}, RuleRef{RuleRef::Set::Gen, 5}).empty());
  CHECK_THROWS_AS(apply_step(m, t, Step{StepKind::Expand, {0}, RuleRef{RuleRef::Set::Gen, 5}, {}, -1, 0}), StepError);

  State p = State::start(E("saw"));
  RuleRef parse_saw{RuleRef::Set::Parse, 6};
  auto pd = expansion_matches(m, p, {0}, parse_saw);
  REQUIRE(pd.size() == 1);
  apply_step(m, p, Step{StepKind::Expand, {0}, parse_saw, pd[0], -1, 0});
  CHECK(p.expr.str() == "A_1^-1 s(A_1,B_1) B_1^-1");
}

TEST_CASE("expansion of a quantifier creates a block") {
  Machine m(english());
  State s = State::start(E("ev(m,#x,r(#x))"));
  RuleRef every{RuleRef::Set::Gen, 9};
  auto deltas = expansion_matches(m, s, {0}, every);
  REQUIRE(deltas.size() == 1);
  apply_step(m, s, Step{StepKind::Expand, {0}, every, deltas[0], -1, 0});
  REQUIRE(s.expr.items.size() == 2);
  CHECK(s.expr.items[0].is_block());
  CHECK(s.expr.str().ends_with("] r(#x)"));
}

TEST_CASE("cancel steps unify and respect the occurs check") {
  Machine m(english());
  State s = State::start(E("s(j,B)^-1 s(j,l) B"));
  ggroup::term::Binding b;
  b.terms["B"] = T("l");
  apply_step(m, s, Step{StepKind::Cancel, {0}, std::nullopt, b, -1, 0});
  CHECK(s.expr.str() == "l");

  State bad = State::start(E("E^-1 i(E,p)"));
  ggroup::term::Binding any;
  any.terms["E"] = T("i(E,p)");
  CHECK_THROWS_AS(apply_step(m, bad, Step{StepKind::Cancel, {0}, std::nullopt, any, -1, 0}), StepError);
  CHECK_THROWS_AS(apply_step(m, bad, Step{StepKind::Cancel, {0}, std::nullopt, {}, -1, 0}), StepError);

  // A wrong recorded delta is rejected.
  State wrong = State::start(E("B^-1 l"));
  ggroup::term::Binding j;
  j.terms["B"] = T("j");
  CHECK_THROWS_AS(apply_step(m, wrong, Step{StepKind::Cancel, {0}, std::nullopt, j, -1, 0}), StepError);
}

TEST_CASE("block operations") {
  Expr e = E("john saw [3: some woman #y^-1] #y");
  CHECK(step_move(e, 3, {2}).str() == e.str());
  Expr moved = step_move(e, 3, {3});
  CHECK(moved.str() == "john saw #y [3: some woman #y^-1]");
  Expr rot = step_rotate(E("[1: every man #x^-1] a"), 1, 2);
  CHECK(rot.str() == "[1: #x^-1 every man] a");
  CHECK(step_rotate(E("[1: a b] c"), 1, 0).str() == "[1: a b] c");
  CHECK(step_rotate(E("[1: a b] c"), 1, 2).str() == "[1: a b] c");
  CHECK(step_dissolve(E("x [1: every man] y"), 1).str() == "x every man y");
  CHECK(step_dissolve(E("x [1: ] y"), 1).str() == "x y");
  CHECK_THROWS_AS(step_dissolve(E("x"), 4), std::invalid_argument);
  CHECK_THROWS_AS(step_move(E("[1: a] b"), 1, {7}), std::invalid_argument);
  // A block may move to an enclosing level.
  CHECK(step_move(E("[1: a [2: b]] c"), 2, {2}).str() == "[1: a] c [2: b]");
}

TEST_CASE("block operations reach exactly the conjugator arrangements") {
  struct Case {
    std::string expr, prefix, block, suffix;
    std::size_t alpha_len;
  };
  for (const auto& c : std::vector<Case>{{"a [1: b c] d", "a", "b c", "d", 3},
                                         {"[1: a b c] d e", "", "a b c", "d e", 4},
                                         {"a b [1: c]", "a b", "c", "", 2},
                                         {"a [1: b c d] e f", "a", "b c d", "e f", 4}}) {
    CAPTURE(c.expr);
    auto engine_side = reachable_arrangements(E(c.expr));
    auto oracle = conjugator_arrangements(atoms_of(c.prefix), atoms_of(c.block), atoms_of(c.suffix), c.alpha_len);
    CHECK(engine_side == oracle);
  }
}

TEST_CASE("replay") {
  Machine m(english());
  Derivation empty{E("s(j,l)"), {}, E("s(j,l)")};
  CHECK(replay(m, empty).str() == "s(j,l)");
  Derivation mismatch{E("s(j,l)"), {}, E("j")};
  CHECK_THROWS_AS(replay(m, mismatch), StepError);

  auto out = generate(m, T("s(j,l)"));
  REQUIRE(out.results.size() == 1);
  CHECK(replay(m, out.results[0].derivation).str() == "john saw louise");

  // A failing step names its index.
  Derivation d = out.results[0].derivation;
  REQUIRE(d.steps.size() >= 2);
  d.steps[1].rule = RuleRef{RuleRef::Set::Gen, 3};
  d.steps[1].kind = StepKind::Expand;
  try {
    replay(m, d);
    FAIL("tampered derivation replayed");
  } catch (const StepError& e) {
    CHECK(e.index() <= 1);
  }
}

TEST_CASE("public results") {
  auto r = is_public(english(), testsupport::W("s(j,l) louise^-1 saw^-1 john^-1"));
  REQUIRE(r);
  CHECK(r->semantics == T("s(j,l)"));
  CHECK(r->words == words("john saw louise"));
  CHECK_FALSE(is_public(english(), ReducedWord{}));
  CHECK_FALSE(is_public(english(), testsupport::W("s(j,l) louise^-1 saw")));
  CHECK(public_form(T("s(j,l)"), words("john saw louise")).str() == "s(j,l) louise^-1 saw^-1 john^-1");
}

TEST_CASE("generation golden set") {
  Machine m(english());
  CHECK(generated(m, "s(j,l)") == std::set<std::string>{"john saw louise"});
  CHECK(generated(m, "j") == std::set<std::string>{"john"});
  CHECK(generated(m, "i(s(j,l),p)") == std::set<std::string>{"john saw louise in paris"});
  CHECK(generated(m, "ev(m,#x,sm(w,#y,s(#x,#y)))") == std::set<std::string>{"every man saw some woman"});
  CHECK(generated(m, "sm(w,#y,ev(m,#x,s(#x,#y)))") == std::set<std::string>{"every man saw some woman"});
  CHECK(generated(m, "r(t(tt(m,#x,s(l,#x))))") == std::set<std::string>{"the man that louise saw ran"});
  CHECK(generated(m, "r(tt(t(m),#x,s(l,#x)))") == std::set<std::string>{"the man that louise saw ran"});
}

TEST_CASE("generation exhausts without truncation under a very large cap") {
  SearchLimits big;
  big.max_expansions = 1000;
  Machine m(english(), big);
  for (const char* lf : {"s(j,l)", "i(s(j,l),p)", "ev(m,#x,sm(w,#y,s(#x,#y)))", "r(t(tt(m,#x,s(l,#x))))"}) {
    CAPTURE(lf);
    CHECK_FALSE(generate(m, T(lf)).truncated);
  }
}

TEST_CASE("generation input errors") {
  Machine m(english());
  CHECK_THROWS_AS(generate(m, T("s(A,l)")), InputError);
  CHECK_THROWS_AS(generate(m, T("s(j)")), InputError);
  CHECK_THROWS_AS(generate(m, T("q(j)")), InputError);
}

TEST_CASE("parsing golden set") {
  Machine m(english());
  CHECK(parsed(m, "john saw louise") == std::set<std::string>{"s(j,l)"});
  CHECK(parsed(m, "john saw louise in paris") == std::set<std::string>{"i(s(j,l),p)", "s(j,i(l,p))"});
  CHECK(parsed(m, "every man saw some woman") ==
        std::set<std::string>{"ev(m,#x1,sm(w,#x2,s(#x1,#x2)))", "sm(w,#x1,ev(m,#x2,s(#x2,#x1)))"});
  CHECK(parsed(m, "the man that louise saw ran").contains("r(tt(t(m),#x1,s(l,#x1)))"));
  CHECK_THROWS_AS(parse(m, words("colorless ideas")), InputError);
  CHECK(parsed(m, "saw saw").empty());
}

TEST_CASE("every derivation audits") {
  Machine m(english());
  for (const char* lf : {"s(j,l)", "i(s(j,l),p)", "ev(m,#x,sm(w,#y,s(#x,#y)))"})
    for (const auto& g : generate(m, T(lf)).results) CHECK(audit_generation(m, g.derivation).words == g.words);
  for (const char* s : {"john saw louise in paris", "every man saw some woman"})
    for (const auto& p : parse(m, words(s)).results) {
      CHECK(audit_parse(m, p.derivation).semantics == p.semantics);
      CHECK(p.semantics.is_ground());
    }
}

TEST_CASE("search limits truncate") {
  SearchLimits tiny;
  tiny.max_results = 1;
  Machine m(english(), tiny);
  auto out = parse(m, words("every man saw some woman"));
  CHECK(out.results.size() == 1);
  CHECK(out.truncated);

  SearchLimits shallow;
  shallow.max_expansions = 2;
  Machine sm(english(), shallow);
  auto g = generate(sm, T("i(s(j,l),p)"));
  CHECK(g.results.empty());
  CHECK(g.truncated);
}

TEST_CASE("step kind and rule reference names round-trip") {
  for (auto k : {StepKind::Expand, StepKind::Cancel, StepKind::Move, StepKind::Rotate, StepKind::Dissolve, StepKind::Swap,
                 StepKind::Introduce})
    CHECK(step_kind_from_name(step_kind_name(k)) == k);
  for (auto r : {RuleRef{RuleRef::Set::Gen, 3}, RuleRef{RuleRef::Set::Parse, 11}, RuleRef{RuleRef::Set::Relator, 0}})
    CHECK(RuleRef::parse(r.str()) == r);
  CHECK_FALSE(RuleRef::parse("bogus:1"));
}
