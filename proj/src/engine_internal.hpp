#pragma once

// Helpers shared by the engine translation units.

#include <optional>
#include <span>
#include <vector>

#include "ggroup/engine.hpp"

namespace ggroup::engine::detail {

/// Suffixes every meta-variable and abstraction variable with `_n`.
term::Term rename_term(const term::Term& t, std::size_t n);

std::vector<Item>& level_at(std::vector<Item>& items, std::span<const std::size_t> prefix);
const std::vector<Item>& level_at(const std::vector<Item>& items, std::span<const std::size_t> prefix);
std::optional<Path> find_block(const std::vector<Item>& items, int id);
const Atom& atom_at(const Expr& e, const Path& path);
void substitute_items(std::vector<Item>& items, const term::Binding& b);

/// A renamed, instantiated rule right-hand side with the counters it
/// consumed.
struct Instance {
  std::vector<Item> items;
  term::Binding delta;
  term::IdentifierSource ids;
  int block_counter = 0;
};

/// Instances of `rhs` (taken from relator `relator`), optionally matching
/// `lhs` against `target`; identifier-ranging meta-variables left unbound
/// receive fresh identifiers.
std::vector<Instance> instances(const Machine& m, const State& s, std::span<const lexicon::SchemeItem> rhs,
                                std::span<const lexicon::SchemeItem> relator, const std::optional<term::Term>& lhs,
                                const std::optional<term::Term>& target);

std::vector<Instance> expansion_instances(const Machine& m, const State& s, const Path& path, const RuleRef& rule);

std::vector<term::Binding> cancel_matches(const Machine& m, const Atom& a, const Atom& b);

}  // namespace ggroup::engine::detail
