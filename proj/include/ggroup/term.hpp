#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ggroup::term {

enum class Kind { Const, Compound, Identifier, MetaVar, App };

/// Immutable logical-form tree. Copies share structure.
///
/// `App` nodes model `P[X]`: `name()` is the abstraction variable and
/// `args()[0]` its single argument.
class Term {
 public:
  Term();  // the constant `nil`; only useful as a placeholder

  static Term constant(std::string name);
  static Term compound(std::string functor, std::vector<Term> args);
  static Term identifier(std::string name);
  static Term metavar(std::string name);
  static Term app(std::string abs_var, Term arg);

  Kind kind() const;
  const std::string& name() const;
  const std::vector<Term>& args() const;
  std::size_t arity() const { return args().size(); }

  bool is_const() const { return kind() == Kind::Const; }
  bool is_compound() const { return kind() == Kind::Compound; }
  bool is_identifier() const { return kind() == Kind::Identifier; }
  bool is_metavar() const { return kind() == Kind::MetaVar; }
  bool is_app() const { return kind() == Kind::App; }
  /// Const or Compound: something with a functor symbol.
  bool is_functional() const { return is_const() || is_compound(); }

  /// No MetaVar and no App anywhere in the tree.
  bool is_ground() const;

  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

/// Name of the lambda-bound hole inside an abstraction body (`#_`).
inline constexpr std::string_view kHole = "_";

/// `λz.body`, with the bound variable represented by `Identifier(kHole)`.
struct Lambda {
  Term body;
  std::string str() const;
  friend bool operator==(const Lambda&, const Lambda&) = default;
};

/// Triangular substitution: bound terms may mention other bound variables;
/// `substitute` chases them.
struct Binding {
  std::map<std::string, Term> terms;
  std::map<std::string, Lambda> abstractions;

  bool empty() const { return terms.empty() && abstractions.empty(); }
  /// `{A=j,P=\#_.s(j,#_)}`
  std::string str() const;
  /// Adds every entry of `other`; entries already present are kept.
  void merge(const Binding& other);

  friend bool operator==(const Binding&, const Binding&) = default;
};

struct UnifyOptions {
  /// Let `P[#x]` match a term that does not mention `#x`.
  bool allow_vacuous = false;
};

class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(std::string message, std::size_t offset)
      : std::runtime_error(std::move(message)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

Term parse_term(std::string_view text);

/// Parses one term starting at `pos`; advances `pos` past it.
Term parse_term_at(std::string_view text, std::size_t& pos);

Term substitute(const Term& t, const Binding& b);
Term substitute_identifier(const Term& t, std::string_view id, const Term& replacement);

std::vector<Binding> unify(const Term& t1, const Term& t2, const Binding& b = {},
                           const UnifyOptions& opts = {});

/// Higher-order pattern match of `P[X]` against `t`. Abstracts every
/// occurrence of the identifier; never produces the projection `λz.z`.
std::vector<Binding> match_app(const Term& pattern, const Term& t, const Binding& b = {},
                               const UnifyOptions& opts = {});

std::size_t term_size(const Term& t);

bool occurs_metavar(std::string_view var, const Term& t);
bool occurs_absvar(std::string_view var, const Term& t);
bool contains_identifier(const Term& t, std::string_view id);

/// Distinct names, in left-to-right preorder of first occurrence.
std::vector<std::string> identifiers_of(const Term& t);
std::vector<std::string> metavars_of(const Term& t);
std::vector<std::string> absvars_of(const Term& t);

/// Renames identifiers to #x1, #x2, ... by first occurrence.
Term canonicalize_identifiers(const Term& t);

/// Hands out identifiers #x1, #x2, ... that avoid a reserved set.
class IdentifierSource {
 public:
  IdentifierSource() = default;
  explicit IdentifierSource(std::set<std::string> reserved) : reserved_(std::move(reserved)) {}

  Term fresh();
  std::size_t counter() const { return counter_; }

 private:
  std::size_t counter_ = 0;
  std::set<std::string> reserved_;
};

/// Scanner used by tests and the engine's self-checks: true when some
/// variable is bound to a term that (after chasing) contains itself.
bool binding_has_cycle(const Binding& b);

}  // namespace ggroup::term
