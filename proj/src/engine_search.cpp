#include <algorithm>
#include <map>
#include <unordered_map>

#include "engine_internal.hpp"

namespace ggroup::engine {

using namespace detail;

namespace {

enum class Mode { Generate, Parse };

struct Candidate {
  std::vector<Step> steps;
  State state;
  std::size_t expansions = 0;
};

Path extend(const Path& p, std::size_t i) {
  Path out = p;
  out.push_back(i);
  return out;
}

/// The next step restoring the normal form: empty blocks dissolve, and
/// blocks float after every atom of their level.
std::optional<Step> next_normalization(const std::vector<Item>& items, const Path& prefix) {
  for (const auto& it : items)
    if (it.is_block() && it.block().contents.empty()) return Step{StepKind::Dissolve, {}, {}, {}, it.block().id, 0};
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!items[i].is_block()) continue;
    bool atom_after = std::any_of(items.begin() + static_cast<std::ptrdiff_t>(i) + 1, items.end(),
                                  [](const Item& x) { return x.is_atom(); });
    if (atom_after) return Step{StepKind::Move, extend(prefix, items.size() - 1), {}, {}, items[i].block().id, 0};
  }
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].is_block())
      if (auto st = next_normalization(items[i].block().contents, extend(prefix, i))) return st;
  return std::nullopt;
}

void normalize(const Machine& m, State& s, std::vector<Step>& steps) {
  while (auto st = next_normalization(s.expr.items, {})) {
    apply_step(m, s, *st);
    steps.push_back(std::move(*st));
  }
}

/// Applies `steps` then normalizes; nullopt when a step fails.
std::optional<Candidate> run(const Machine& m, const State& s, std::vector<Step> steps, std::size_t expansions) {
  Candidate c{{}, s, expansions};
  try {
    for (auto& st : steps) {
      apply_step(m, c.state, st);
      c.steps.push_back(std::move(st));
    }
    normalize(m, c.state, c.steps);
  } catch (const StepError&) {
    return std::nullopt;
  }
  return c;
}

template <typename F>
void for_each_atom(const std::vector<Item>& items, const Path& prefix, F&& f) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].is_atom())
      f(items[i].atom(), extend(prefix, i));
    else
      for_each_atom(items[i].block().contents, extend(prefix, i), f);
  }
}

template <typename F>
void for_each_level(const std::vector<Item>& items, const Path& prefix, F&& f) {
  f(items, prefix);
  for (std::size_t i = 0; i < items.size(); ++i)
    if (items[i].is_block()) for_each_level(items[i].block().contents, extend(prefix, i), f);
}

struct Search {
  const Machine& m;
  Mode mode;
  std::size_t budget = 0;
  bool hit_budget = false;
  bool truncated = false;
  bool stop = false;
  std::size_t states = 0;
  std::unordered_map<std::string, std::size_t> memo;
  std::vector<Step> trail;
  Expr start;
  std::map<std::string, std::pair<Derivation, term::Term>> parsed;
  std::map<std::string, std::pair<Derivation, std::vector<std::string>>> generated;

  std::vector<Candidate> expansions_of(const State& s, std::size_t expansions) {
    std::vector<Candidate> out;
    bool found = false;
    for_each_atom(s.expr.items, {}, [&](const Atom& a, const Path& path) {
      if (found || a.sign < 0) return;
      if (mode == Mode::Parse && !a.phon) return;
      if (mode == Mode::Generate && (a.phon || !a.term.is_ground())) return;
      std::size_t nrules = mode == Mode::Parse ? m.parse_rules().size() : m.gen_rules().size();
      for (std::size_t r = 0; r < nrules; ++r) {
        RuleRef ref{mode == Mode::Parse ? RuleRef::Set::Parse : RuleRef::Set::Gen, r};
        if (mode == Mode::Generate) {
          const auto& lhs = m.gen_rules()[r].lhs;
          if (lhs.name() != a.term.name() || lhs.arity() != a.term.arity()) continue;
        } else if (m.parse_rules()[r].word != a.word) {
          continue;
        }
        for (auto& inst : expansion_instances(m, s, path, ref)) {
          found = true;
          Step st{StepKind::Expand, path, ref, std::move(inst.delta), -1, 0};
          if (auto c = run(m, s, {std::move(st)}, expansions + 1)) out.push_back(std::move(*c));
        }
      }
    });
    return out;
  }

  std::vector<Candidate> rearrangements(const State& s, std::size_t expansions) {
    std::vector<Candidate> out;
    const auto& items = s.expr.items;
    // Cancellations.
    for_each_level(items, {}, [&](const std::vector<Item>& lvl, const Path& prefix) {
      for (std::size_t i = 0; i < lvl.size(); ++i) {
        if (!lvl[i].is_atom()) continue;
        std::size_t last = m.limits().commutative ? lvl.size() : std::min(lvl.size(), i + 2);
        for (std::size_t j = i + 1; j < last; ++j) {
          if (!lvl[j].is_atom()) continue;
          const Atom& a = lvl[i].atom();
          const Atom& b = lvl[j].atom();
          if (j == i + 1 && a.is_ground() && b.is_ground()) continue;  // cancelled eagerly
          for (auto& delta : cancel_matches(m, a, b)) {
            std::vector<Step> steps;
            for (std::size_t t = j - 1; t > i; --t) steps.push_back(Step{StepKind::Swap, extend(prefix, t), {}, {}, -1, 0});
            steps.push_back(Step{StepKind::Cancel, extend(prefix, i), {}, std::move(delta), -1, 0});
            if (auto c = run_swaps(s, std::move(steps), expansions)) out.push_back(std::move(*c));
          }
        }
      }
    });
    // Placements and lifts.
    for_each_level(items, {}, [&](const std::vector<Item>& lvl, const Path& prefix) {
      std::size_t natoms = 0;
      while (natoms < lvl.size() && lvl[natoms].is_atom()) ++natoms;
      for (std::size_t i = natoms; i < lvl.size(); ++i) {
        if (!lvl[i].is_block()) continue;
        const Block& b = lvl[i].block();
        std::size_t nrot = std::max<std::size_t>(1, b.contents.size());
        for (std::size_t p = 0; p <= natoms; ++p) {
          for (std::size_t k = 0; k < nrot; ++k) {
            if (k > 0 && !b.contents[k].is_atom()) continue;  // floating blocks never lead
            std::vector<Step> steps;
            if (p != i) steps.push_back(Step{StepKind::Move, extend(prefix, p), {}, {}, b.id, 0});
            if (k > 0) steps.push_back(Step{StepKind::Rotate, {}, {}, {}, b.id, k});
            steps.push_back(Step{StepKind::Dissolve, {}, {}, {}, b.id, 0});
            if (auto c = run(m, s, std::move(steps), expansions)) out.push_back(std::move(*c));
          }
        }
        if (!prefix.empty()) {
          Path up(prefix.begin(), prefix.end() - 1);
          const auto& outer = level_at(items, up);
          Step st{StepKind::Move, extend(up, outer.size()), {}, {}, b.id, 0};
          if (auto c = run(m, s, {std::move(st)}, expansions)) out.push_back(std::move(*c));
        }
      }
    });
    return out;
  }

  /// Like run(), but rejects the candidate when an eager cancellation fires
  /// while atoms are being brought together.
  std::optional<Candidate> run_swaps(const State& s, std::vector<Step> steps, std::size_t expansions) {
    Candidate c{{}, s, expansions};
    try {
      for (auto& st : steps) {
        std::size_t before = c.state.expr.atom_count();
        apply_step(m, c.state, st);
        bool is_swap = st.kind == StepKind::Swap;
        c.steps.push_back(std::move(st));
        if (is_swap && c.state.expr.atom_count() != before) return std::nullopt;
      }
      normalize(m, c.state, c.steps);
    } catch (const StepError&) {
      return std::nullopt;
    }
    return c;
  }

  bool dead(const State& s) const {
    if (mode == Mode::Parse) {
      long balance = 0;
      for_each_atom(s.expr.items, {}, [&](const Atom& a, const Path&) { balance += a.sign; });
      return balance != 1;
    }
    // Generation ends in positive words only: every logical form must meet
    // its inverse.
    std::map<std::string, int> balance;
    bool ground = true;
    for_each_atom(s.expr.items, {}, [&](const Atom& a, const Path&) {
      if (a.phon) {
        if (a.sign < 0) ground = false;  // a negative word can never disappear
        return;
      }
      if (!a.term.is_ground()) ground = false;
      balance[a.term.str()] += a.sign;
    });
    if (!ground) return false;
    return std::any_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second != 0; });
  }

  void record(const State& s) {
    Derivation d{start, trail, s.expr};
    std::string key;
    if (mode == Mode::Generate) {
      std::vector<std::string> words;
      for (const auto& it : s.expr.items) words.push_back(it.atom().word);
      for (const auto& w : words) key += (key.empty() ? "" : " ") + w;
      if (generated.contains(key)) return;
      if (generated.size() >= m.limits().max_results) {
        truncated = stop = true;
        return;
      }
      generated.emplace(key, std::make_pair(std::move(d), std::move(words)));
    } else {
      term::Term sem = term::canonicalize_identifiers(s.expr.items[0].atom().term);
      key = sem.str();
      if (parsed.contains(key)) return;
      if (parsed.size() >= m.limits().max_results) {
        truncated = stop = true;
        return;
      }
      parsed.emplace(key, std::make_pair(std::move(d), std::move(sem)));
    }
  }

  bool goal(const State& s) const {
    const auto& items = s.expr.items;
    if (mode == Mode::Generate)
      return std::all_of(items.begin(), items.end(),
                         [](const Item& it) { return it.is_atom() && it.atom().phon && it.atom().sign > 0; });
    return items.size() == 1 && items[0].is_atom() && !items[0].atom().phon && items[0].atom().sign > 0 &&
           items[0].atom().term.is_ground();
  }

  void dfs(const State& s, std::size_t expansions) {
    if (stop) return;
    if (++states > m.limits().max_states) {
      truncated = stop = true;
      return;
    }
    if (s.expr.atom_count() > m.limits().max_items) {
      hit_budget = true;
      return;
    }
    std::string key = canonical_key(s.expr);
    if (auto it = memo.find(key); it != memo.end() && it->second <= expansions) return;
    memo[key] = expansions;
    if (goal(s)) {
      record(s);
      return;
    }
    auto succ = expansions_of(s, expansions);
    if (succ.empty()) {
      if (dead(s)) return;
      succ = rearrangements(s, expansions);
    }
    for (auto& c : succ) {
      if (stop) return;
      if (c.expansions > budget) {
        hit_budget = true;
        continue;
      }
      std::size_t mark = trail.size();
      trail.insert(trail.end(), c.steps.begin(), c.steps.end());
      dfs(c.state, c.expansions);
      trail.resize(mark);
    }
  }
};

std::set<std::pair<std::string, std::size_t>> signatures(const lexicon::Lexicon& lex) {
  std::set<std::pair<std::string, std::size_t>> out;
  std::function<void(const term::Term&)> visit = [&](const term::Term& t) {
    if (t.is_functional()) out.emplace(t.name(), t.arity());
    for (const auto& a : t.args()) visit(a);
  };
  for (const auto& r : lex.relators)
    for (const auto& it : r.items)
      if (it.is_log()) visit(it.term);
  return out;
}

void check_signature(const term::Term& t, const std::set<std::pair<std::string, std::size_t>>& sigs) {
  if (t.is_functional() && !sigs.contains({t.name(), t.arity()}))
    throw InputError("unknown functor " + t.name() + "/" + std::to_string(t.arity()));
  for (const auto& a : t.args()) check_signature(a, sigs);
}

}  // namespace

GenerateOutcome generate(const Machine& m, const term::Term& lf) {
  if (!lf.is_ground() || !lf.is_functional()) throw InputError("logical form must be ground: " + lf.str());
  check_signature(lf, signatures(m.lexicon()));

  Expr start;
  start.items.emplace_back(Atom::of_term(lf));
  GenerateOutcome out;
  Search search{m, Mode::Generate};
  search.start = start;
  for (std::size_t budget = 1;; ++budget) {
    search.budget = budget;
    search.hit_budget = false;
    search.memo.clear();
    search.generated.clear();
    search.dfs(State::start(start), 0);
    if (search.stop || !search.hit_budget) break;
    if (budget >= m.limits().max_expansions) {
      search.truncated = true;
      break;
    }
  }
  out.truncated = search.truncated;
  out.states = search.states;
  for (auto& [_, v] : search.generated) out.results.push_back({std::move(v.second), std::move(v.first)});
  return out;
}

ParseOutcome parse(const Machine& m, std::span<const std::string> words) {
  Expr start;
  for (const auto& w : words) {
    if (!m.lexicon().phon_vocab.contains(w)) throw InputError("undeclared word: " + w);
    start.items.emplace_back(Atom::of_word(w));
  }
  ParseOutcome out;
  Search search{m, Mode::Parse};
  search.start = start;
  search.budget = std::max(m.limits().max_expansions, words.size());
  search.dfs(State::start(start), 0);
  out.truncated = search.truncated || search.hit_budget;
  out.states = search.states;
  for (auto& [_, v] : search.parsed) out.results.push_back({std::move(v.second), std::move(v.first)});
  return out;
}

}  // namespace ggroup::engine
