#include <doctest.h>

#include "ggroup/freegroup.hpp"
#include "properties.hpp"

using namespace ggroup::freegroup;
using testsupport::AtomGen;
using testsupport::W;


TEST_CASE("reduce cancels adjacent inverse pairs") {
  CHECK(W("j j^-1 s(j,l) l^-1 l").str() == "s(j,l)");
  CHECK(W("").str() == "1");
  CHECK(W("1").empty());
  CHECK(W("john saw saw^-1 john^-1").empty());
  // Nested cancellation requires the pushdown to look back.
  CHECK(W("a b c c^-1 b^-1 d").str() == "a d");
}

TEST_CASE("the three-relator product reduces to the public result") {
  auto r1 = W("j^-1 s(j,l) l^-1 saw^-1");
  auto r2 = W("l louise^-1");
  auto r3 = W("j john^-1");
  auto r1p = conjugate(r1, W("j"));
  auto r2p = conjugate(r2, W("j saw"));
  auto r3p = r3;
  CHECK(r1p.str() == "s(j,l) l^-1 saw^-1 j^-1");
  CHECK(r2p.str() == "j saw l louise^-1 saw^-1 j^-1");
  CHECK(product(product(r1p, r2p), r3p).str() == "s(j,l) louise^-1 saw^-1 john^-1");
  // The same result from the raw concatenation in one reduction.
  std::vector<SignedAtom> raw;
  for (const auto* w : {&r1p, &r2p, &r3p}) raw.insert(raw.end(), w->atoms().begin(), w->atoms().end());
  CHECK(reduce(raw) == W("s(j,l) louise^-1 saw^-1 john^-1"));
}

TEST_CASE("product, inverse and conjugate examples") {
  CHECK(product(W("j"), W("j^-1")).empty());
  CHECK(product(W("s(j,l) l^-1"), W("l louise^-1")).str() == "s(j,l) louise^-1");
  CHECK(inverse(W("john saw")).str() == "saw^-1 john^-1");
  CHECK(inverse(W("")).empty());
  CHECK(inverse(W("s(j,l) louise^-1 saw^-1 john^-1")).str() == "john saw louise s(j,l)^-1");
  CHECK(conjugate(W("saw"), W("")) == W("saw"));
  CHECK(conjugate(W(""), W("john saw")).empty());
}

TEST_CASE("cyclic rotations") {
  auto rots = cyclic_rotations(W("every man #x^-1"));
  CHECK(rots == std::set<ReducedWord>{W("every man #x^-1"), W("man #x^-1 every"), W("#x^-1 every man")});
  CHECK(cyclic_rotations(W("")) == std::set<ReducedWord>{W("")});
  CHECK(cyclic_rotations(W("a")) == std::set<ReducedWord>{W("a")});
  // A rotation may bring inverse atoms together; they are re-reduced.
  auto r = cyclic_rotations(W("a b a^-1"));
  CHECK(r.contains(W("b")));
  CHECK(r.size() <= 3);
}

TEST_CASE("rendering") {
  CHECK(W("s(j,l) louise^-1").str() == "s(j,l) louise^-1");
  CHECK(W("s(j,l)").atoms()[0].base.sort() == VocabElement::Sort::Log);
  CHECK(W("john").atoms()[0].base.is_phon());
  CHECK_THROWS_AS(VocabElement::log(ggroup::term::parse_term("s(A,l)")), std::invalid_argument);
}

TEST_CASE("property: reduction is confluent (1000 cases)") { CHECK(testsupport::confluence_failures(1234, 1000) == 0); }

TEST_CASE("property: product is associative (1000 cases)") { CHECK(testsupport::associativity_failures(99, 1000) == 0); }

TEST_CASE("property: neutral element (1000 cases)") { CHECK(testsupport::identity_failures(98, 1000) == 0); }

TEST_CASE("property: inverses (1000 cases)") { CHECK(testsupport::inverse_failures(97, 1000) == 0); }

TEST_CASE("property: conjugation preserves the neutral element (1000 cases)") {
  CHECK(testsupport::conjugacy_failures(7, 1000) == 0);
}

TEST_CASE("parse_atoms reads phon words and logical forms") {
  auto raw = parse_atoms("john saw^-1 s(j,l)", {"john", "saw"});
  REQUIRE(raw.size() == 3);
  CHECK(raw[0].base.is_phon());
  CHECK(raw[1].sign == -1);
  CHECK_FALSE(raw[2].base.is_phon());
}
