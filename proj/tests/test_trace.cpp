#include <doctest.h>

#include "ggroup/trace.hpp"
#include "support.hpp"

using namespace ggroup;
using testsupport::english;
using testsupport::T;
using testsupport::words;

namespace {

std::vector<engine::Derivation> sample_derivations(const engine::Machine& m) {
  std::vector<engine::Derivation> out;
  for (const char* lf : {"s(j,l)", "ev(m,#x,sm(w,#y,s(#x,#y)))", "r(t(tt(m,#x,s(l,#x))))"})
    for (const auto& g : engine::generate(m, T(lf)).results) out.push_back(g.derivation);
  for (const auto& p : engine::parse(m, words("every man saw some woman")).results) out.push_back(p.derivation);
  return out;
}

}  // namespace

TEST_CASE("text traces round-trip through replay") {
  engine::Machine m(english());
  for (const auto& d : sample_derivations(m)) {
    auto text = trace::to_text(d);
    auto back = trace::from_text(text, english().phon_vocab);
    CHECK(back.steps == d.steps);
    CHECK(back.start == d.start);
    CHECK(back.end == d.end);
    CHECK(trace::to_text(back) == text);
    CHECK(engine::replay(m, back) == d.end);
  }
}

TEST_CASE("structured traces round-trip through replay") {
  engine::Machine m(english());
  for (const auto& d : sample_derivations(m)) {
    auto back = trace::from_json(trace::to_json(d), english().phon_vocab);
    CHECK(back.steps == d.steps);
    CHECK(engine::replay(m, back) == d.end);
  }
}

TEST_CASE("text trace format") {
  engine::Machine m(english());
  auto d = engine::generate(m, T("s(j,l)")).results.at(0).derivation;
  auto text = trace::to_text(d);
  CHECK(text.starts_with("start: s(j,l)\nexpand path=0 rule=gen:6 delta={A_1=j,B_1=l}\n"));
  CHECK(text.ends_with("end: john saw louise\n"));
}

TEST_CASE("tampered traces are rejected") {
  engine::Machine m(english());
  auto d = engine::generate(m, T("s(j,l)")).results.at(0).derivation;
  auto text = trace::to_text(d);

  auto wrong_delta = text;
  wrong_delta.replace(wrong_delta.find("B_1=l"), 5, "B_1=j");
  CHECK_THROWS_AS(engine::replay(m, trace::from_text(wrong_delta, english().phon_vocab)), engine::StepError);

  auto wrong_rule = text;
  wrong_rule.replace(wrong_rule.find("rule=gen:6"), 10, "rule=gen:5");
  CHECK_THROWS_AS(engine::replay(m, trace::from_text(wrong_rule, english().phon_vocab)), engine::StepError);

  auto wrong_end = text;
  wrong_end.replace(wrong_end.find("end: john saw louise"), 20, "end: louise saw john");
  CHECK_THROWS_AS(engine::replay(m, trace::from_text(wrong_end, english().phon_vocab)), engine::StepError);

  // A dropped step leaves the derivation short of its end.
  auto dropped = text;
  auto pos = dropped.find("expand path=0 rule=gen:0");
  dropped.erase(pos, dropped.find('\n', pos) - pos + 1);
  CHECK_THROWS_AS(engine::replay(m, trace::from_text(dropped, english().phon_vocab)), engine::StepError);
}

TEST_CASE("malformed traces are trace errors") {
  const auto& v = english().phon_vocab;
  CHECK_THROWS_AS(trace::from_text("expand path=0\n", v), trace::TraceError);
  CHECK_THROWS_AS(trace::from_text("start: j\nfly path=0\nend: john\n", v), trace::TraceError);
  CHECK_THROWS_AS(trace::from_text("start: j\nexpand path=x\nend: john\n", v), trace::TraceError);
  CHECK_THROWS_AS(trace::from_text("start: j\nexpand rule=nope:1\nend: john\n", v), trace::TraceError);
  CHECK_THROWS_AS(trace::from_text("start: j\nexpand delta={A}\nend: john\n", v), trace::TraceError);
  CHECK_THROWS_AS(trace::from_json("{", v), trace::TraceError);
  CHECK_THROWS_AS(trace::from_json("{\"start\": \"j\"}", v), trace::TraceError);
}

TEST_CASE("binding syntax") {
  auto b = trace::parse_binding("{A_1=j,P_2=\\#_.s(#_,#x2),B=f(a,b)}");
  CHECK(b.terms.at("A_1") == T("j"));
  CHECK(b.terms.at("B") == T("f(a,b)"));
  CHECK(b.abstractions.at("P_2").body == T("s(#_,#x2)"));
  CHECK(trace::parse_binding(b.str()) == b);
  CHECK(trace::parse_binding("{}").empty());
  CHECK_THROWS_AS(trace::parse_binding("A=j"), trace::TraceError);
}
