#pragma once

#include "support.hpp"

namespace testsupport {

/// Independent oracle: eliminates a randomly chosen adjacent inverse pair
/// until none is left.
inline std::vector<ggroup::freegroup::SignedAtom> reduce_randomly(std::vector<ggroup::freegroup::SignedAtom> w,
                                                                  std::mt19937& rng) {
  for (;;) {
    std::vector<std::size_t> pairs;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
      if (w[i].cancels(w[i + 1])) pairs.push_back(i);
    if (pairs.empty()) return w;
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    auto at = w.begin() + static_cast<std::ptrdiff_t>(pairs[pick(rng)]);
    w.erase(at, at + 2);
  }
}

inline bool is_reduced(const ggroup::freegroup::ReducedWord& w) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (w.atoms()[i].cancels(w.atoms()[i + 1])) return false;
  return true;
}

/// Each suite runs `cases` randomized checks and returns the failure count.
inline int confluence_failures(unsigned seed, int cases) {
  using namespace ggroup::freegroup;
  AtomGen gen(seed);
  int failures = 0;
  for (int i = 0; i < cases; ++i) {
    auto raw = gen.raw(16);
    auto pushdown = reduce(raw);
    if (pushdown.atoms() != reduce_randomly(raw, gen.rng()) || !is_reduced(pushdown) || pushdown.size() > raw.size() ||
        reduce(pushdown.atoms()) != pushdown)
      ++failures;
  }
  return failures;
}

inline int associativity_failures(unsigned seed, int cases) {
  using namespace ggroup::freegroup;
  AtomGen gen(seed);
  int failures = 0;
  for (int i = 0; i < cases; ++i) {
    auto a = gen.word(), b = gen.word(), c = gen.word();
    std::vector<SignedAtom> cat(a.atoms());
    cat.insert(cat.end(), b.atoms().begin(), b.atoms().end());
    if (product(product(a, b), c) != product(a, product(b, c)) || product(a, b) != reduce(cat) ||
        product(a, b).size() > a.size() + b.size())
      ++failures;
  }
  return failures;
}

inline int identity_failures(unsigned seed, int cases) {
  using namespace ggroup::freegroup;
  AtomGen gen(seed);
  const ReducedWord one;
  int failures = 0;
  for (int i = 0; i < cases; ++i) {
    auto a = gen.word();
    if (product(a, one) != a || product(one, a) != a) ++failures;
  }
  return failures;
}

inline int inverse_failures(unsigned seed, int cases) {
  using namespace ggroup::freegroup;
  AtomGen gen(seed);
  int failures = 0;
  for (int i = 0; i < cases; ++i) {
    auto a = gen.word();
    if (!product(a, inverse(a)).empty() || !product(inverse(a), a).empty() || inverse(inverse(a)) != a) ++failures;
  }
  return failures;
}

/// If x reduces to the neutral element then so does y x y^-1.
inline int conjugacy_failures(unsigned seed, int cases) {
  using namespace ggroup::freegroup;
  AtomGen gen(seed);
  int failures = 0;
  for (int i = 0; i < cases; ++i) {
    auto u = gen.raw(8);
    std::vector<SignedAtom> x = u;
    for (auto it = u.rbegin(); it != u.rend(); ++it) x.push_back(it->inverse());
    auto y = gen.word();
    if (!reduce(x).empty() || !conjugate(reduce(x), y).empty()) ++failures;
    auto z = gen.word();
    if (conjugate(conjugate(z, y), inverse(y)) != z) ++failures;
  }
  return failures;
}

}  // namespace testsupport
