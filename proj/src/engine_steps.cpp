#include <algorithm>
#include <map>

#include "engine_internal.hpp"

namespace ggroup::engine {

using lexicon::SchemeItem;

std::string_view step_kind_name(StepKind k) {
  switch (k) {
    case StepKind::Expand: return "expand";
    case StepKind::Cancel: return "cancel";
    case StepKind::Move: return "move";
    case StepKind::Rotate: return "rotate";
    case StepKind::Dissolve: return "dissolve";
    case StepKind::Swap: return "swap";
    case StepKind::Introduce: return "introduce";
  }
  return "?";
}

std::optional<StepKind> step_kind_from_name(std::string_view s) {
  for (auto k : {StepKind::Expand, StepKind::Cancel, StepKind::Move, StepKind::Rotate, StepKind::Dissolve,
                 StepKind::Swap, StepKind::Introduce})
    if (step_kind_name(k) == s) return k;
  return std::nullopt;
}

std::string RuleRef::str() const {
  std::string prefix = set == Set::Gen ? "gen" : set == Set::Parse ? "parse" : "relator";
  return prefix + ":" + std::to_string(index);
}

std::optional<RuleRef> RuleRef::parse(std::string_view s) {
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon + 1 >= s.size()) return std::nullopt;
  RuleRef r;
  auto prefix = s.substr(0, colon);
  if (prefix == "gen")
    r.set = Set::Gen;
  else if (prefix == "parse")
    r.set = Set::Parse;
  else if (prefix == "relator")
    r.set = Set::Relator;
  else
    return std::nullopt;
  r.index = 0;
  for (char c : s.substr(colon + 1)) {
    if (c < '0' || c > '9') return std::nullopt;
    r.index = r.index * 10 + static_cast<std::size_t>(c - '0');
  }
  return r;
}

Machine::Machine(const lexicon::Lexicon& lex, SearchLimits limits)
    : lex_(&lex), gen_(lexicon::gen_rules(lex)), parse_(lexicon::parse_rules(lex)), limits_(limits) {}

namespace {

void collect_ids(const std::vector<Item>& items, std::set<std::string>& ids, int& max_block) {
  for (const auto& it : items) {
    if (it.is_block()) {
      max_block = std::max(max_block, it.block().id);
      collect_ids(it.block().contents, ids, max_block);
    } else if (!it.atom().phon) {
      for (auto& id : term::identifiers_of(it.atom().term)) ids.insert(id);
    }
  }
}

}  // namespace

State State::start(Expr e) {
  std::set<std::string> ids;
  int max_block = 0;
  collect_ids(e.items, ids, max_block);
  State s;
  s.expr = std::move(e);
  s.block_counter = max_block;
  s.ids = term::IdentifierSource(std::move(ids));
  return s;
}

namespace detail {

term::Term rename_term(const term::Term& t, std::size_t n) {
  const std::string suffix = "_" + std::to_string(n);
  switch (t.kind()) {
    case term::Kind::MetaVar: return term::Term::metavar(t.name() + suffix);
    case term::Kind::App: return term::Term::app(t.name() + suffix, rename_term(t.args()[0], n));
    case term::Kind::Compound: {
      std::vector<term::Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(rename_term(a, n));
      return term::Term::compound(t.name(), std::move(args));
    }
    default: return t;
  }
}

std::vector<Item>& level_at(std::vector<Item>& items, std::span<const std::size_t> prefix) {
  std::vector<Item>* cur = &items;
  for (std::size_t i : prefix) {
    if (i >= cur->size() || !(*cur)[i].is_block()) throw std::invalid_argument("path does not name a block");
    cur = &(*cur)[i].block().contents;
  }
  return *cur;
}

const std::vector<Item>& level_at(const std::vector<Item>& items, std::span<const std::size_t> prefix) {
  return level_at(const_cast<std::vector<Item>&>(items), prefix);
}

std::optional<Path> find_block(const std::vector<Item>& items, int id) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].is_block()) continue;
    if (items[i].block().id == id) return Path{i};
    if (auto sub = find_block(items[i].block().contents, id)) {
      sub->insert(sub->begin(), i);
      return sub;
    }
  }
  return std::nullopt;
}

const Atom& atom_at(const Expr& e, const Path& path) {
  if (path.empty()) throw std::invalid_argument("empty path");
  const auto& lvl = level_at(e.items, std::span(path).first(path.size() - 1));
  if (path.back() >= lvl.size() || !lvl[path.back()].is_atom()) throw std::invalid_argument("path does not name an atom");
  return lvl[path.back()].atom();
}

void substitute_items(std::vector<Item>& items, const term::Binding& b) {
  if (b.empty()) return;
  for (auto& it : items) {
    if (it.is_block())
      substitute_items(it.block().contents, b);
    else if (!it.atom().phon && !it.atom().term.is_ground())
      it.atom().term = term::substitute(it.atom().term, b);
  }
}

std::vector<Instance> instances(const Machine& m, const State& s, std::span<const SchemeItem> rhs,
                                std::span<const SchemeItem> relator, const std::optional<term::Term>& lhs,
                                const std::optional<term::Term>& target) {
  const std::size_t n = s.rename_counter + 1;
  std::vector<term::Binding> bases;
  if (lhs)
    bases = term::unify(rename_term(*lhs, n), *target, {}, m.unify_options());
  else
    bases.emplace_back();

  std::vector<std::string> id_metas;
  for (const auto& v : lexicon::identifier_metavars(relator)) id_metas.push_back(v + "_" + std::to_string(n));

  std::vector<Instance> out;
  for (auto& b : bases) {
    Instance inst;
    inst.ids = s.ids;
    for (const auto& v : id_metas) {
      if (term::substitute(term::Term::metavar(v), b).is_metavar()) b.terms[v] = inst.ids.fresh();
    }
    if (std::any_of(out.begin(), out.end(), [&](const Instance& o) { return o.delta == b; })) continue;
    inst.delta = std::move(b);

    // Expression meta-variable pairs delimit (possibly nested) blocks.
    inst.block_counter = s.block_counter;
    std::vector<std::pair<std::string, std::vector<Item>>> stack;
    std::vector<Item> top;
    std::vector<int> block_ids;
    for (const auto& item : rhs) {
      std::vector<Item>& dest = stack.empty() ? top : stack.back().second;
      if (item.is_phon()) {
        dest.emplace_back(Atom::of_word(item.name, item.sign));
      } else if (item.is_log()) {
        dest.emplace_back(Atom::of_term(term::substitute(rename_term(item.term, n), inst.delta), item.sign));
      } else if (!stack.empty() && stack.back().first == item.name) {
        Block blk{block_ids.back(), std::move(stack.back().second)};
        block_ids.pop_back();
        stack.pop_back();
        (stack.empty() ? top : stack.back().second).emplace_back(std::move(blk));
      } else {
        for (const auto& [name, _] : stack)
          if (name == item.name) throw InputError("crossing expression meta-variable pairs in rule");
        stack.emplace_back(item.name, std::vector<Item>{});
        block_ids.push_back(++inst.block_counter);
      }
    }
    if (!stack.empty()) throw InputError("unpaired expression meta-variable in rule");
    inst.items = std::move(top);
    out.push_back(std::move(inst));
  }
  return out;
}

std::vector<Instance> expansion_instances(const Machine& m, const State& s, const Path& path, const RuleRef& rule) {
  const Atom& a = atom_at(s.expr, path);
  if (a.sign < 0) return {};
  const auto& rels = m.lexicon().relators;
  if (rule.set == RuleRef::Set::Gen) {
    if (rule.index >= m.gen_rules().size() || a.phon) return {};
    const auto& r = m.gen_rules()[rule.index];
    return instances(m, s, r.rhs, rels[r.relator_index].items, r.lhs, a.term);
  }
  if (rule.set == RuleRef::Set::Parse) {
    if (rule.index >= m.parse_rules().size() || !a.phon) return {};
    const auto& r = m.parse_rules()[rule.index];
    if (r.word != a.word) return {};
    return instances(m, s, r.rhs, rels[r.relator_index].items, std::nullopt, std::nullopt);
  }
  return {};
}

std::vector<term::Binding> cancel_matches(const Machine& m, const Atom& a, const Atom& b) {
  if (a.sign != -b.sign || a.phon != b.phon) return {};
  if (a.phon) return a.word == b.word ? std::vector<term::Binding>{term::Binding{}} : std::vector<term::Binding>{};
  return term::unify(a.term, b.term, {}, m.unify_options());
}

}  // namespace detail

using namespace detail;

std::vector<term::Binding> expansion_matches(const Machine& m, const State& s, const Path& path, const RuleRef& rule) {
  std::vector<term::Binding> out;
  for (auto& inst : expansion_instances(m, s, path, rule)) out.push_back(std::move(inst.delta));
  return out;
}

Expr step_move(const Expr& e, int block_id, const Path& new_pos) {
  auto at = find_block(e.items, block_id);
  if (!at) throw std::invalid_argument("no block " + std::to_string(block_id));
  if (new_pos.empty()) throw std::invalid_argument("empty target path");
  Path parent(at->begin(), at->end() - 1);
  Path target_level(new_pos.begin(), new_pos.end() - 1);
  if (target_level.size() > parent.size() || !std::equal(target_level.begin(), target_level.end(), parent.begin()))
    throw std::invalid_argument("target must be the block's level or an ancestor");
  Expr out = e;
  auto& from = level_at(out.items, parent);
  Item blk = std::move(from[at->back()]);
  from.erase(from.begin() + static_cast<std::ptrdiff_t>(at->back()));
  auto& to = level_at(out.items, target_level);
  if (new_pos.back() > to.size()) throw std::invalid_argument("target slot out of range");
  to.insert(to.begin() + static_cast<std::ptrdiff_t>(new_pos.back()), std::move(blk));
  return out;
}

Expr step_rotate(const Expr& e, int block_id, std::size_t k) {
  auto at = find_block(e.items, block_id);
  if (!at) throw std::invalid_argument("no block " + std::to_string(block_id));
  Expr out = e;
  auto& contents = level_at(out.items, *at);
  // Rotating by the block length (or by 0) is the identity.
  if (contents.empty()) return out;
  std::rotate(contents.begin(), contents.begin() + static_cast<std::ptrdiff_t>(k % contents.size()), contents.end());
  return out;
}

Expr step_dissolve(const Expr& e, int block_id) {
  auto at = find_block(e.items, block_id);
  if (!at) throw std::invalid_argument("no block " + std::to_string(block_id));
  Expr out = e;
  auto& lvl = level_at(out.items, std::span(*at).first(at->size() - 1));
  auto pos = lvl.begin() + static_cast<std::ptrdiff_t>(at->back());
  std::vector<Item> contents = std::move(pos->block().contents);
  pos = lvl.erase(pos);
  lvl.insert(pos, std::make_move_iterator(contents.begin()), std::make_move_iterator(contents.end()));
  return out;
}

void apply_step(const Machine& m, State& s, const Step& step) {
  try {
    switch (step.kind) {
      case StepKind::Expand: {
        if (!step.rule) throw StepError(0, "expand without a rule");
        auto insts = expansion_instances(m, s, step.path, *step.rule);
        auto it = std::find_if(insts.begin(), insts.end(), [&](const Instance& i) { return i.delta == step.delta; });
        if (it == insts.end())
          throw StepError(0, insts.empty() ? "rule " + step.rule->str() + " does not apply at " + path_str(step.path)
                                           : "recorded delta is not a match of " + step.rule->str());
        auto& lvl = level_at(s.expr.items, std::span(step.path).first(step.path.size() - 1));
        auto pos = lvl.erase(lvl.begin() + static_cast<std::ptrdiff_t>(step.path.back()));
        lvl.insert(pos, std::make_move_iterator(it->items.begin()), std::make_move_iterator(it->items.end()));
        s.rename_counter += 1;
        s.block_counter = it->block_counter;
        s.ids = it->ids;
        break;
      }
      case StepKind::Introduce: {
        if (!step.rule || step.rule->set != RuleRef::Set::Relator) throw StepError(0, "introduce needs a relator");
        if (step.rule->index >= m.lexicon().relators.size()) throw StepError(0, "no relator " + step.rule->str());
        if (step.path.empty()) throw StepError(0, "empty path");
        const auto& items = m.lexicon().relators[step.rule->index].items;
        auto insts = instances(m, s, items, items, std::nullopt, std::nullopt);
        auto it = std::find_if(insts.begin(), insts.end(), [&](const Instance& i) { return i.delta == step.delta; });
        if (it == insts.end()) throw StepError(0, "recorded delta is not an instance of " + step.rule->str());
        auto& lvl = level_at(s.expr.items, std::span(step.path).first(step.path.size() - 1));
        if (step.path.back() > lvl.size()) throw StepError(0, "slot out of range");
        lvl.insert(lvl.begin() + static_cast<std::ptrdiff_t>(step.path.back()),
                   std::make_move_iterator(it->items.begin()), std::make_move_iterator(it->items.end()));
        s.rename_counter += 1;
        s.block_counter = it->block_counter;
        s.ids = it->ids;
        break;
      }
      case StepKind::Cancel: {
        const Atom& a = atom_at(s.expr, step.path);
        Path next = step.path;
        next.back() += 1;
        const Atom& b = atom_at(s.expr, next);
        auto matches = cancel_matches(m, a, b);
        if (matches.empty()) throw StepError(0, "atoms at " + path_str(step.path) + " do not cancel");
        if (std::find(matches.begin(), matches.end(), step.delta) == matches.end())
          throw StepError(0, "recorded delta is not a unifier of the cancelled atoms");
        auto& lvl = level_at(s.expr.items, std::span(step.path).first(step.path.size() - 1));
        auto pos = lvl.begin() + static_cast<std::ptrdiff_t>(step.path.back());
        lvl.erase(pos, pos + 2);
        substitute_items(s.expr.items, step.delta);
        break;
      }
      case StepKind::Swap: {
        if (!m.limits().commutative) throw StepError(0, "swap requires the commutative option");
        if (step.path.empty()) throw StepError(0, "empty path");
        auto& lvl = level_at(s.expr.items, std::span(step.path).first(step.path.size() - 1));
        if (step.path.back() + 1 >= lvl.size()) throw StepError(0, "swap position out of range");
        std::swap(lvl[step.path.back()], lvl[step.path.back() + 1]);
        break;
      }
      case StepKind::Move: s.expr = step_move(s.expr, step.block, step.path); break;
      case StepKind::Rotate: s.expr = step_rotate(s.expr, step.block, step.k); break;
      case StepKind::Dissolve: s.expr = step_dissolve(s.expr, step.block); break;
    }
  } catch (const std::invalid_argument& e) {
    throw StepError(0, std::string(step_kind_name(step.kind)) + ": " + e.what());
  }
  cancel_ground_pairs(s.expr.items);
}

Expr replay(const Machine& m, const Derivation& d) {
  State s = State::start(d.start);
  for (std::size_t i = 0; i < d.steps.size(); ++i) {
    try {
      apply_step(m, s, d.steps[i]);
    } catch (const StepError& e) {
      std::string msg = e.what();
      throw StepError(i, msg.substr(msg.find(": ") + 2));
    }
  }
  if (!(s.expr == d.end))
    throw StepError(d.steps.size(), "derivation ends at " + s.expr.str() + ", not " + d.end.str());
  return s.expr;
}

// ---------------------------------------------------------------------------
// Public forms

std::optional<PublicResult> is_public(const lexicon::Lexicon& lex, const freegroup::ReducedWord& w) {
  const auto& atoms = w.atoms();
  if (atoms.empty() || atoms[0].sign < 0 || atoms[0].base.is_phon()) return std::nullopt;
  PublicResult r{atoms[0].base.term(), {}};
  for (std::size_t i = atoms.size(); i-- > 1;) {
    const auto& a = atoms[i];
    if (a.sign > 0 || !a.base.is_phon() || !lex.phon_vocab.contains(a.base.word())) return std::nullopt;
    r.words.push_back(a.base.word());
  }
  return r;
}

std::optional<PublicResult> is_public(const lexicon::Lexicon& lex, const Expr& e) {
  auto w = to_word(e);
  if (!w || w->size() != e.items.size()) return std::nullopt;
  return is_public(lex, *w);
}

Expr public_form(const term::Term& semantics, std::span<const std::string> words) {
  Expr e;
  e.items.emplace_back(Atom::of_term(semantics));
  for (auto it = words.rbegin(); it != words.rend(); ++it) e.items.emplace_back(Atom::of_word(*it, -1));
  return e;
}

namespace {

bool positive_words_only(const Expr& e, const lexicon::Lexicon& lex, std::vector<std::string>* words) {
  for (const auto& it : e.items) {
    if (!it.is_atom() || !it.atom().phon || it.atom().sign < 0 || !lex.phon_vocab.contains(it.atom().word))
      return false;
    if (words) words->push_back(it.atom().word);
  }
  return true;
}

std::optional<term::Term> single_logical_form(const Expr& e) {
  if (e.items.size() != 1 || !e.items[0].is_atom()) return std::nullopt;
  const Atom& a = e.items[0].atom();
  if (a.phon || a.sign < 0 || !a.term.is_ground()) return std::nullopt;
  return a.term;
}

}  // namespace

PublicResult audit_generation(const Machine& m, const Derivation& d) {
  auto lf = single_logical_form(d.start);
  if (!lf) throw InputError("generation must start from one ground logical form");
  Expr end = replay(m, d);
  std::vector<std::string> words;
  if (!positive_words_only(end, m.lexicon(), &words)) throw InputError("generation does not end in a word string");
  return {*lf, std::move(words)};
}

PublicResult audit_parse(const Machine& m, const Derivation& d) {
  std::vector<std::string> words;
  if (!positive_words_only(d.start, m.lexicon(), &words)) throw InputError("parsing must start from a word string");
  Expr end = replay(m, d);
  auto lf = single_logical_form(end);
  if (!lf) throw InputError("parsing does not end in one ground logical form");
  return {term::canonicalize_identifiers(*lf), std::move(words)};
}

}  // namespace ggroup::engine
