#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ggroup/freegroup.hpp"
#include "ggroup/lexicon.hpp"
#include "ggroup/term.hpp"

namespace ggroup::engine {

/// A signed word or (possibly non-ground) logical form inside a working
/// expression.
struct Atom {
  bool phon = false;
  std::string word;
  term::Term term;
  int sign = 1;

  static Atom of_word(std::string w, int sign = 1) { return {true, std::move(w), {}, sign}; }
  static Atom of_term(term::Term t, int sign = 1) { return {false, {}, std::move(t), sign}; }

  bool is_ground() const { return phon || term.is_ground(); }
  /// Same payload, opposite sign, both ground.
  bool cancels(const Atom& o) const;
  std::string str() const;

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.phon == b.phon && a.sign == b.sign && (a.phon ? a.word == b.word : a.term == b.term);
  }
};

struct Item;

/// The conjugate `@a^-1 ... @a`: contents move as one unit, rotate
/// cyclically, or dissolve in place.
struct Block {
  int id = 0;
  std::vector<Item> contents;
};

struct Item {
  std::variant<Atom, Block> value;

  Item(Atom a) : value(std::move(a)) {}    // NOLINT(google-explicit-constructor)
  Item(Block b) : value(std::move(b)) {}   // NOLINT(google-explicit-constructor)

  bool is_atom() const { return std::holds_alternative<Atom>(value); }
  bool is_block() const { return std::holds_alternative<Block>(value); }
  const Atom& atom() const { return std::get<Atom>(value); }
  Atom& atom() { return std::get<Atom>(value); }
  const Block& block() const { return std::get<Block>(value); }
  Block& block() { return std::get<Block>(value); }
};

bool operator==(const Block& a, const Block& b);
bool operator==(const Item& a, const Item& b);

/// Index path: all but the last index descend into blocks.
using Path = std::vector<std::size_t>;
std::string path_str(const Path& p);

struct Expr {
  std::vector<Item> items;

  bool empty() const { return items.empty(); }
  /// Atoms at every nesting level.
  std::size_t atom_count() const;
  /// `john saw [3: some woman #x2^-1] #x2`; `1` when empty.
  std::string str() const;

  friend bool operator==(const Expr&, const Expr&) = default;
};

/// Parses the rendering produced by Expr::str.
Expr parse_expr(std::string_view text, const std::set<std::string>& phon_vocab);

/// Pushdown cancellation of adjacent ground inverse atoms at every level.
void cancel_ground_pairs(std::vector<Item>& items);

/// Key identifying an expression up to renaming of meta-variables,
/// abstraction variables, identifiers and block ids.
std::string canonical_key(const Expr& e);

/// Converts a block-free, ground expression into a free-group word.
std::optional<freegroup::ReducedWord> to_word(const Expr& e);

// ---------------------------------------------------------------------------
// Derivation steps

enum class StepKind { Expand, Cancel, Move, Rotate, Dissolve, Swap, Introduce };
std::string_view step_kind_name(StepKind k);
std::optional<StepKind> step_kind_from_name(std::string_view s);

struct RuleRef {
  enum class Set { Gen, Parse, Relator };
  Set set = Set::Gen;
  std::size_t index = 0;

  std::string str() const;
  static std::optional<RuleRef> parse(std::string_view s);
  friend bool operator==(const RuleRef&, const RuleRef&) = default;
};

/// One auditable rewriting step.
///
///  - Expand:    path names an atom; rule names the rewriting rule; delta is
///               the match of the (renamed) left-hand side.
///  - Cancel:    path names the first of two adjacent atoms; delta unifies them.
///  - Move:      block is relocated to slot `path`, indexed after removal;
///               the slot's level must be the block's level or an ancestor.
///  - Rotate:    block contents rotate left by k.
///  - Dissolve:  block contents are spliced in place.
///  - Swap:      exchanges the items at path and path+1 (commutative mode).
///  - Introduce: inserts a fresh instance of relator `rule` at slot `path`.
struct Step {
  StepKind kind = StepKind::Cancel;
  Path path;
  std::optional<RuleRef> rule;
  term::Binding delta;
  int block = -1;
  std::size_t k = 0;

  friend bool operator==(const Step&, const Step&) = default;
};

struct Derivation {
  Expr start;
  std::vector<Step> steps;
  Expr end;
};

struct SearchLimits {
  std::size_t max_expansions = 64;
  std::size_t max_items = 256;
  std::size_t max_results = 32;
  std::size_t max_states = 500000;
  bool allow_vacuous_abstraction = false;
  /// Enables Swap steps: every pair of atoms may be brought together.
  bool commutative = false;
};

class StepError : public std::runtime_error {
 public:
  StepError(std::size_t index, const std::string& message)
      : std::runtime_error("step " + std::to_string(index) + ": " + message), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Rule sets and options shared by every derivation over one lexicon.
/// Holds a reference: the lexicon must outlive the machine.
class Machine {
 public:
  explicit Machine(const lexicon::Lexicon& lex, SearchLimits limits = {});

  const lexicon::Lexicon& lexicon() const { return *lex_; }
  const std::vector<lexicon::GenRule>& gen_rules() const { return gen_; }
  const std::vector<lexicon::ParseRule>& parse_rules() const { return parse_; }
  const SearchLimits& limits() const { return limits_; }
  term::UnifyOptions unify_options() const { return {limits_.allow_vacuous_abstraction}; }

 private:
  const lexicon::Lexicon* lex_;
  std::vector<lexicon::GenRule> gen_;
  std::vector<lexicon::ParseRule> parse_;
  SearchLimits limits_;
};

/// Mutable derivation context: the expression plus fresh-name counters.
/// Replaying the same steps from the same start reproduces every name.
struct State {
  Expr expr;
  std::size_t rename_counter = 0;
  int block_counter = 0;
  term::IdentifierSource ids;

  static State start(Expr e);
};

/// Applies one step, verifying its preconditions; throws StepError(0, ...)
/// when the step is inapplicable or its recorded delta is not a valid
/// outcome.
void apply_step(const Machine& m, State& s, const Step& step);

/// Candidate deltas for expanding the atom at `path` with `rule`, given the
/// current counters. Empty when the rule does not apply.
std::vector<term::Binding> expansion_matches(const Machine& m, const State& s, const Path& path, const RuleRef& rule);

/// Re-executes a derivation from its start and checks it ends at `d.end`.
/// Throws StepError naming the first failing step.
Expr replay(const Machine& m, const Derivation& d);

// Free-standing block operations; each throws std::invalid_argument when
// the precondition fails.
Expr step_move(const Expr& e, int block_id, const Path& new_pos);
Expr step_rotate(const Expr& e, int block_id, std::size_t k);
Expr step_dissolve(const Expr& e, int block_id);

struct PublicResult {
  term::Term semantics;
  std::vector<std::string> words;

  friend bool operator==(const PublicResult&, const PublicResult&) = default;
};

/// Recognises `S Wn^-1 ... W1^-1` with S a ground logical form and every W
/// a declared word.
std::optional<PublicResult> is_public(const lexicon::Lexicon& lex, const freegroup::ReducedWord& w);
std::optional<PublicResult> is_public(const lexicon::Lexicon& lex, const Expr& e);
/// The acceptor encoding of a logical form paired with a word string.
Expr public_form(const term::Term& semantics, std::span<const std::string> words);

// ---------------------------------------------------------------------------
// Search

struct Generated {
  std::vector<std::string> words;
  Derivation derivation;
};

struct GenerateOutcome {
  std::vector<Generated> results;  // sorted by word string
  bool truncated = false;
  std::size_t states = 0;
};

struct Parsed {
  term::Term semantics;  // identifiers canonically renamed
  Derivation derivation;
};

struct ParseOutcome {
  std::vector<Parsed> results;  // sorted by rendering
  bool truncated = false;
  std::size_t states = 0;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every word string the logical form rewrites to, with a derivation each.
/// Throws InputError when `lf` is not ground.
GenerateOutcome generate(const Machine& m, const term::Term& lf);

/// Every logical form the word string rewrites to. Throws InputError on an
/// undeclared word.
ParseOutcome parse(const Machine& m, std::span<const std::string> words);

/// Replays a derivation produced by generate() and confirms the acceptor
/// shape; returns the public result or throws StepError / InputError.
PublicResult audit_generation(const Machine& m, const Derivation& d);
PublicResult audit_parse(const Machine& m, const Derivation& d);

// ---------------------------------------------------------------------------
// Saturation of raw relator sets (logic programs)

struct Consequence {
  term::Term fact;
  Derivation derivation;
};

struct SaturationOutcome {
  std::vector<Consequence> facts;  // sorted
  bool truncated = false;
  std::size_t rounds = 0;
};

/// Enumerates single ground positive atoms that are results of the relator
/// set, combining earlier results with relator instances round by round.
SaturationOutcome saturate(const Machine& m, std::size_t max_rounds);

/// Rearranges `from` into `to` (a permutation of the same atoms at top
/// level) using Swap steps. Requires the commutative option.
std::optional<Derivation> permute_by_swaps(const Machine& m, const Expr& from, const Expr& to);

}  // namespace ggroup::engine
