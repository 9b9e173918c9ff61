#pragma once

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ggroup/lexicon.hpp"
#include "ggroup/term.hpp"

namespace ggroup::encodings {

/// `head :- b1, ..., bn .`; a fact when the body is empty.
struct Clause {
  term::Term head;
  std::vector<term::Term> body;

  std::string str() const;
};

/// One right-hand side element of a grammar rule: a word or a nonterminal.
struct DcgItem {
  bool is_word = false;
  std::string word;
  term::Term nonterminal;

  static DcgItem of_word(std::string w) { return {true, std::move(w), {}}; }
  static DcgItem of_nonterminal(term::Term t) { return {false, {}, std::move(t)}; }
  std::string str() const { return is_word ? word : nonterminal.str(); }
};

/// `lhs ==> item ... item .`
struct DcgRule {
  term::Term lhs;
  std::vector<DcgItem> rhs;

  std::string str() const;
};

struct DcgGrammar {
  std::set<std::string> words;
  std::vector<DcgRule> rules;
};

/// The commutator `@a @b @a^-1 @b^-1`. The engine realises it as the Swap
/// step (SearchLimits::commutative) rather than by instantiation.
lexicon::RelatorScheme commutator_scheme();

/// Each clause `h :- b1, ..., bn` becomes the relator `h bn^-1 ... b1^-1`
/// in a raw lexicon; run it with the commutative option.
lexicon::Lexicon encode_logic_program(std::span<const Clause> clauses);

struct ChainResult {
  std::set<term::Term> facts;
  /// Another round beyond `bound` would still add facts.
  bool truncated = false;
};

/// Bottom-up consequence closure: round 0 collects the ground facts, round
/// k adds heads whose bodies match facts from earlier rounds. Stops after
/// `bound` rounds. Independent of the group engine.
ChainResult forward_chain(std::span<const Clause> clauses, std::size_t bound);

/// Each rule `A0 ==> A1 ... An` becomes the relator `A0 An^-1 ... A1^-1`
/// in a raw lexicon whose words are the grammar's words.
lexicon::Lexicon encode_dcg(const DcgGrammar& g);

/// Threads a difference-list counter of terminal words through every
/// nonterminal: `vp ==> often vp` becomes `vp(s(V1),V) ==> often vp(V1,V)`.
DcgGrammar count_terminals(const DcgGrammar& g);

/// Program files: `#` comments, `phon`-free clause statements ending in `.`.
/// Throws lexicon::GrammarError with positioned diagnostics.
std::vector<Clause> parse_program(std::string_view text);

/// Grammar-rule files: `phon w1 w2 .` declares words; `lhs ==> items .`
/// adds rules. Throws lexicon::GrammarError.
DcgGrammar parse_dcg(std::string_view text);

/// Rendering that parse_dcg reads back.
std::string dcg_str(const DcgGrammar& g);

}  // namespace ggroup::encodings
