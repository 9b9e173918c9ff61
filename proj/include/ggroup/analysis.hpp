#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ggroup/lexicon.hpp"

namespace ggroup::analysis {

struct Witness {
  std::string rule;      // rendering of the offending rule
  std::string relator;   // the relator the rule derives from
  std::string lhs;       // left-hand side pattern or word
  std::string rhs_item;  // right-hand side item that fails to shrink
  /// The left-hand side literally reappears on the right.
  bool self_cycle = false;

  std::string str() const;
};

struct CycleReport {
  enum class Status { SizeDecreasing, NotSizeDecreasing };

  Status status = Status::SizeDecreasing;
  std::vector<Witness> witnesses;
  std::string notes;

  bool passed() const { return status == Status::SizeDecreasing; }
};

/// Sufficient condition for the absence of ground cycles: every logical
/// form on a rule's right-hand side is strictly smaller than the left-hand
/// side under every instantiation. Meta-variables (and unresolved
/// abstractions, treated as opaque unknowns) count as size >= 1 and must
/// not occur more often on the right than on the left.
CycleReport check_size_decrease(std::span<const lexicon::GenRule> rules, const lexicon::Lexicon* lex = nullptr);

/// Parsing analogue: a word must never rewrite to material containing
/// words, or expansion need not terminate.
CycleReport check_size_decrease(std::span<const lexicon::ParseRule> rules, const lexicon::Lexicon* lex = nullptr);

struct ReversibilityReport {
  CycleReport generation;
  CycleReport parsing;

  bool reversible() const { return generation.passed() && parsing.passed(); }
  std::string str() const;
  std::string json() const;
};

/// Runs both checks on the rule sets derived from `lex`.
ReversibilityReport reversibility_report(const lexicon::Lexicon& lex);

}  // namespace ggroup::analysis
