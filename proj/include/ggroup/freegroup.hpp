#pragma once

#include <compare>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ggroup/term.hpp"

namespace ggroup::freegroup {

/// A generator of F(V): either a word (V_phon) or a ground logical form (V_log).
class VocabElement {
 public:
  enum class Sort { Phon, Log };

  static VocabElement phon(std::string word);
  /// Throws std::invalid_argument unless `t` is ground.
  static VocabElement log(term::Term t);

  Sort sort() const { return sort_; }
  bool is_phon() const { return sort_ == Sort::Phon; }
  const std::string& word() const { return word_; }
  const term::Term& term() const { return term_; }
  std::string str() const { return is_phon() ? word_ : term_.str(); }

  friend bool operator==(const VocabElement&, const VocabElement&) = default;
  friend std::strong_ordering operator<=>(const VocabElement&, const VocabElement&) = default;

 private:
  VocabElement(Sort sort, std::string word, term::Term t) : sort_(sort), word_(std::move(word)), term_(std::move(t)) {}
  Sort sort_;
  std::string word_;
  term::Term term_;
};

struct SignedAtom {
  VocabElement base;
  int sign = 1;  // +1 or -1

  SignedAtom inverse() const { return {base, -sign}; }
  bool cancels(const SignedAtom& o) const { return sign == -o.sign && base == o.base; }
  std::string str() const { return sign > 0 ? base.str() : base.str() + "^-1"; }

  friend bool operator==(const SignedAtom&, const SignedAtom&) = default;
  friend std::strong_ordering operator<=>(const SignedAtom&, const SignedAtom&) = default;
};

/// An element of F(V) in normal form: no adjacent mutually inverse atoms.
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Fully cancels `raw` with a single pushdown pass.
  static ReducedWord reduce(std::span<const SignedAtom> raw);

  const std::vector<SignedAtom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  /// Atoms separated by spaces, `1` for the neutral element.
  std::string str() const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend std::strong_ordering operator<=>(const ReducedWord&, const ReducedWord&) = default;

 private:
  std::vector<SignedAtom> atoms_;
};

inline ReducedWord reduce(std::span<const SignedAtom> raw) { return ReducedWord::reduce(raw); }
ReducedWord product(const ReducedWord& a, const ReducedWord& b);
ReducedWord inverse(const ReducedWord& a);
/// y x y^-1
ReducedWord conjugate(const ReducedWord& x, const ReducedWord& y);
std::set<ReducedWord> cyclic_rotations(const ReducedWord& a);

/// Parses `j j^-1 s(j,l) louise^-1`; bare constants listed in `phon_vocab`
/// are words, everything else is a logical form. `1` denotes the neutral
/// element. The result is the raw (unreduced) atom sequence.
std::vector<SignedAtom> parse_atoms(std::string_view text, const std::set<std::string>& phon_vocab = {});

}  // namespace ggroup::freegroup
