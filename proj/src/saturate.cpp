#include <algorithm>
#include <map>

#include "engine_internal.hpp"

namespace ggroup::engine {

using namespace detail;

namespace {

struct Known {
  term::Term fact;
  Derivation derivation;
};

Step shifted(Step st, std::size_t offset) {
  if (!st.path.empty()) st.path[0] += offset;
  return st;
}

/// Splits a relator into its positive head and the body atoms in clause
/// order (`h bn^-1 ... b1^-1`). Nullopt when the relator has another shape.
std::optional<std::pair<term::Term, std::vector<term::Term>>> clause_shape(const lexicon::RelatorScheme& r) {
  if (r.items.empty() || !r.items[0].is_log() || r.items[0].sign < 0) return std::nullopt;
  std::vector<term::Term> body;
  for (std::size_t i = r.items.size(); i-- > 1;) {
    if (!r.items[i].is_log() || r.items[i].sign > 0) return std::nullopt;
    body.push_back(r.items[i].term);
  }
  return std::make_pair(r.items[0].term, std::move(body));
}

/// Executes: sub-proofs of `facts` side by side, then the relator at the
/// front, then cancellations from the boundary outwards.
std::optional<Derivation> combine(const Machine& m, std::size_t relator, const std::vector<const Known*>& facts) {
  State s = State::start({});
  Derivation d;
  try {
    // Sub-proofs are re-executed in the new context: fresh names depend on
    // the counters, so deltas are recomputed rather than copied.
    for (const Known* k : facts) {
      std::size_t offset = s.expr.items.size();
      for (const auto& st : k->derivation.steps) {
        Step sh = shifted(st, offset);
        if (sh.kind == StepKind::Introduce) {
          const auto& rel = m.lexicon().relators.at(sh.rule->index).items;
          sh.delta = instances(m, s, rel, rel, std::nullopt, std::nullopt).at(0).delta;
        } else if (sh.kind == StepKind::Cancel) {
          Path next = sh.path;
          next.back() += 1;
          auto deltas = cancel_matches(m, atom_at(s.expr, sh.path), atom_at(s.expr, next));
          if (deltas.empty()) return std::nullopt;
          sh.delta = deltas.front();
        }
        apply_step(m, s, sh);
        d.steps.push_back(std::move(sh));
      }
    }
    const auto& items = m.lexicon().relators[relator].items;
    auto insts = instances(m, s, items, items, std::nullopt, std::nullopt);
    Step intro{StepKind::Introduce, {0}, RuleRef{RuleRef::Set::Relator, relator}, insts.at(0).delta, -1, 0};
    apply_step(m, s, intro);
    d.steps.push_back(std::move(intro));
    for (;;) {
      const auto& top = s.expr.items;
      std::size_t i = top.size();
      for (std::size_t j = 0; j < top.size(); ++j)
        if (top[j].is_atom() && top[j].atom().sign < 0) i = j;
      if (i == top.size()) break;
      if (i + 1 >= top.size() || !top[i + 1].is_atom()) return std::nullopt;
      auto deltas = cancel_matches(m, top[i].atom(), top[i + 1].atom());
      if (deltas.empty()) return std::nullopt;
      Step c{StepKind::Cancel, {i}, std::nullopt, deltas.front(), -1, 0};
      apply_step(m, s, c);
      d.steps.push_back(std::move(c));
    }
  } catch (const StepError&) {
    return std::nullopt;
  }
  const auto& top = s.expr.items;
  if (top.size() != 1 || !top[0].is_atom() || top[0].atom().phon || top[0].atom().sign < 0 ||
      !top[0].atom().term.is_ground())
    return std::nullopt;
  d.end = s.expr;
  return d;
}

/// Every sequence of known facts matching `body` in order under one
/// consistent binding.
void match_body(const std::vector<term::Term>& body, std::size_t i, const term::Binding& b,
                const std::vector<const Known*>& pool, std::vector<const Known*>& chosen,
                std::vector<std::vector<const Known*>>& out) {
  if (i == body.size()) {
    out.push_back(chosen);
    return;
  }
  for (const Known* k : pool) {
    for (const auto& nb : term::unify(body[i], k->fact, b)) {
      chosen.push_back(k);
      match_body(body, i + 1, nb, pool, chosen, out);
      chosen.pop_back();
    }
  }
}

}  // namespace

SaturationOutcome saturate(const Machine& m, std::size_t max_rounds) {
  const auto& rels = m.lexicon().relators;
  std::map<term::Term, Known> known;
  SaturationOutcome out;

  for (std::size_t round = 0; round <= max_rounds; ++round) {
    std::vector<const Known*> pool;
    for (const auto& [_, k] : known) pool.push_back(&k);
    std::map<term::Term, Known> fresh;
    for (std::size_t r = 0; r < rels.size(); ++r) {
      auto shape = clause_shape(rels[r]);
      if (!shape) continue;
      const auto& [head, body] = *shape;
      std::vector<std::vector<const Known*>> tuples;
      std::vector<const Known*> chosen;
      match_body(body, 0, {}, pool, chosen, tuples);
      for (const auto& tuple : tuples) {
        auto d = combine(m, r, tuple);
        if (!d) continue;
        term::Term fact = d->end.items[0].atom().term;
        if (known.contains(fact) || fresh.contains(fact)) continue;
        fresh.emplace(fact, Known{fact, std::move(*d)});
      }
    }
    if (fresh.empty()) {
      out.rounds = round;
      break;
    }
    if (round == max_rounds) {
      out.truncated = true;
      out.rounds = round;
      break;
    }
    known.merge(fresh);
  }
  for (auto& [fact, k] : known) out.facts.push_back({fact, std::move(k.derivation)});
  return out;
}

std::optional<Derivation> permute_by_swaps(const Machine& m, const Expr& from, const Expr& to) {
  if (!m.limits().commutative || from.items.size() != to.items.size()) return std::nullopt;
  State s = State::start(from);
  Derivation d{from, {}, to};
  for (std::size_t i = 0; i < to.items.size(); ++i) {
    auto& cur = s.expr.items;
    std::size_t j = i;
    while (j < cur.size() && !(cur[j] == to.items[i])) ++j;
    if (j == cur.size()) return std::nullopt;
    for (std::size_t t = j; t-- > i;) {
      Step st{StepKind::Swap, {t}, std::nullopt, {}, -1, 0};
      std::size_t before = s.expr.items.size();
      try {
        apply_step(m, s, st);
      } catch (const StepError&) {
        return std::nullopt;
      }
      if (s.expr.items.size() != before) return std::nullopt;
      d.steps.push_back(std::move(st));
    }
  }
  if (!(s.expr == to)) return std::nullopt;
  return d;
}

}  // namespace ggroup::engine
