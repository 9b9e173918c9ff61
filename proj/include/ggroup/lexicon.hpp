#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ggroup/term.hpp"

namespace ggroup::lexicon {

/// One signed element of a lexical scheme: a word, a logical-form pattern,
/// or an expression meta-variable (`@a`).
struct SchemeItem {
  enum class Kind { Phon, Log, ExprMeta };

  Kind kind = Kind::Log;
  std::string name;  // word or expression meta-variable name
  term::Term term;   // Log only
  int sign = 1;

  static SchemeItem phon(std::string word, int sign = 1) { return {Kind::Phon, std::move(word), {}, sign}; }
  static SchemeItem log(term::Term t, int sign = 1) { return {Kind::Log, {}, std::move(t), sign}; }
  static SchemeItem meta(std::string name, int sign = 1) { return {Kind::ExprMeta, std::move(name), {}, sign}; }

  bool is_phon() const { return kind == Kind::Phon; }
  bool is_log() const { return kind == Kind::Log; }
  bool is_meta() const { return kind == Kind::ExprMeta; }

  SchemeItem inverse() const {
    SchemeItem out = *this;
    out.sign = -sign;
    return out;
  }
  std::string str() const;

  friend bool operator==(const SchemeItem& a, const SchemeItem& b) {
    if (a.kind != b.kind || a.sign != b.sign) return false;
    return a.is_log() ? a.term == b.term : a.name == b.name;
  }
};

std::string render_items(std::span<const SchemeItem> items);
/// Reverses the sequence and flips every sign.
std::vector<SchemeItem> invert_items(std::span<const SchemeItem> items);

struct RelatorScheme {
  std::vector<SchemeItem> items;
  std::string source_line;
  std::size_t line = 0;

  std::string str() const { return render_items(items); }
  std::size_t phon_count() const;
  /// Index of the unique positive Log item with a functor head, if any.
  std::optional<std::size_t> semantic_head() const;
};

struct Lexicon {
  std::set<std::string> phon_vocab;
  std::vector<RelatorScheme> relators;
  /// Raw group-computation mode: relators need not have the one-word shape.
  bool raw = false;
  std::vector<std::string> warnings;

  /// Grammar-file rendering; re-parses to an equal Lexicon.
  std::string str() const;

  friend bool operator==(const Lexicon& a, const Lexicon& b);
};

struct GenRule {
  term::Term lhs;
  std::vector<SchemeItem> rhs;
  std::size_t relator_index = 0;
  std::string str() const { return lhs.str() + " => " + render_items(rhs); }
};

struct ParseRule {
  std::string word;
  std::vector<SchemeItem> rhs;
  std::size_t relator_index = 0;
  std::string str() const { return word + " => " + render_items(rhs); }
};

struct Diagnostic {
  std::size_t line = 0;
  std::size_t column = 0;
  std::string message;
  std::string str() const { return std::to_string(line) + ":" + std::to_string(column) + ": " + message; }
};

class GrammarError : public std::runtime_error {
 public:
  explicit GrammarError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

/// Grammar file syntax:
///
///     # comment
///     phon john saw .
///     relator A^-1 s(A,B) B^-1 saw^-1 .
///     mode raw .
///
/// Throws GrammarError carrying every diagnostic found.
Lexicon parse_grammar(std::string_view text);

/// Parses a bare item sequence (`@a^-1 every N X^-1 @a P[X]`).
std::vector<SchemeItem> parse_items(std::string_view text, const std::set<std::string>& phon_vocab);

/// For each relator `a b c` with semantic head `b`: `b => a^-1 c^-1`.
std::vector<GenRule> gen_rules(const Lexicon& lex);

/// For each relator `a w^-1 c` with single word `w`: `w => c a`.
std::vector<ParseRule> parse_rules(const Lexicon& lex);

/// Meta-variables that occur as the argument of an abstraction (`X` in
/// `P[X]`); these range over identifiers.
std::set<std::string> identifier_metavars(std::span<const SchemeItem> items);

}  // namespace ggroup::lexicon
