#include "ggroup/encodings.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace ggroup::encodings {

using lexicon::Diagnostic;
using lexicon::GrammarError;
using lexicon::SchemeItem;

std::string Clause::str() const {
  std::string out = head.str();
  for (std::size_t i = 0; i < body.size(); ++i) out += (i ? ", " : " :- ") + body[i].str();
  return out + " .";
}

std::string DcgRule::str() const {
  std::string out = lhs.str() + " ==>";
  for (const auto& it : rhs) out += " " + it.str();
  return out + " .";
}

lexicon::RelatorScheme commutator_scheme() {
  lexicon::RelatorScheme r;
  r.items = {SchemeItem::meta("a"), SchemeItem::meta("b"), SchemeItem::meta("a", -1), SchemeItem::meta("b", -1)};
  r.source_line = "relator " + r.str() + " .";
  return r;
}

lexicon::Lexicon encode_logic_program(std::span<const Clause> clauses) {
  lexicon::Lexicon lex;
  lex.raw = true;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    const auto& c = clauses[i];
    lexicon::RelatorScheme r;
    r.items.push_back(SchemeItem::log(c.head));
    for (auto it = c.body.rbegin(); it != c.body.rend(); ++it) r.items.push_back(SchemeItem::log(*it, -1));
    r.source_line = c.str();
    r.line = i + 1;
    lex.relators.push_back(std::move(r));
  }
  return lex;
}

// ---------------------------------------------------------------------------
// Forward chaining (oracle)

namespace {

using Subst = std::map<std::string, term::Term>;

/// First-order matching of a clause pattern against a ground fact.
bool match(const term::Term& pattern, const term::Term& fact, Subst& s) {
  if (pattern.is_metavar()) {
    auto [it, inserted] = s.try_emplace(pattern.name(), fact);
    return inserted || it->second == fact;
  }
  if (pattern.is_app()) return false;
  if (pattern.kind() != fact.kind() || pattern.name() != fact.name() || pattern.arity() != fact.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match(pattern.args()[i], fact.args()[i], s)) return false;
  return true;
}

term::Term instantiate(const term::Term& t, const Subst& s) {
  if (t.is_metavar()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  if (!t.is_compound()) return t;
  std::vector<term::Term> args;
  for (const auto& a : t.args()) args.push_back(instantiate(a, s));
  return term::Term::compound(t.name(), std::move(args));
}

void consequences(const Clause& c, std::size_t i, Subst& s, const std::set<term::Term>& facts,
                  std::set<term::Term>& out) {
  if (i == c.body.size()) {
    term::Term h = instantiate(c.head, s);
    if (h.is_ground()) out.insert(std::move(h));
    return;
  }
  for (const auto& f : facts) {
    Subst next = s;
    if (match(c.body[i], f, next)) consequences(c, i + 1, next, facts, out);
  }
}

std::set<term::Term> one_round(std::span<const Clause> clauses, const std::set<term::Term>& facts) {
  std::set<term::Term> out;
  for (const auto& c : clauses) {
    Subst s;
    consequences(c, 0, s, facts, out);
  }
  return out;
}

}  // namespace

ChainResult forward_chain(std::span<const Clause> clauses, std::size_t bound) {
  ChainResult r;
  for (std::size_t round = 0;; ++round) {
    auto derived = one_round(clauses, r.facts);
    bool grows = std::any_of(derived.begin(), derived.end(), [&](const term::Term& t) { return !r.facts.contains(t); });
    if (!grows) break;
    if (round == bound) {
      r.truncated = true;
      break;
    }
    r.facts.insert(derived.begin(), derived.end());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Grammar rules

lexicon::Lexicon encode_dcg(const DcgGrammar& g) {
  lexicon::Lexicon lex;
  lex.raw = true;
  lex.phon_vocab = g.words;
  for (std::size_t i = 0; i < g.rules.size(); ++i) {
    const auto& rule = g.rules[i];
    lexicon::RelatorScheme r;
    r.items.push_back(SchemeItem::log(rule.lhs));
    for (auto it = rule.rhs.rbegin(); it != rule.rhs.rend(); ++it)
      r.items.push_back(it->is_word ? SchemeItem::phon(it->word, -1) : SchemeItem::log(it->nonterminal, -1));
    r.source_line = rule.str();
    r.line = i + 1;
    lex.relators.push_back(std::move(r));
  }
  return lex;
}

namespace {

term::Term with_counters(const term::Term& nt, term::Term in, term::Term out) {
  std::vector<term::Term> args = nt.args();
  args.push_back(std::move(in));
  args.push_back(std::move(out));
  return term::Term::compound(nt.name(), std::move(args));
}

std::set<std::string> rule_metavars(const DcgRule& r) {
  std::set<std::string> out;
  for (auto& v : term::metavars_of(r.lhs)) out.insert(v);
  for (const auto& it : r.rhs)
    if (!it.is_word)
      for (auto& v : term::metavars_of(it.nonterminal)) out.insert(v);
  return out;
}

}  // namespace

DcgGrammar count_terminals(const DcgGrammar& g) {
  DcgGrammar out;
  out.words = g.words;
  for (const auto& rule : g.rules) {
    auto taken = rule_metavars(rule);
    std::string base = "V";
    auto clashes = [&](const std::string& b) {
      return std::any_of(taken.begin(), taken.end(), [&](const std::string& v) { return v.starts_with(b); });
    };
    while (clashes(base)) base += "V";

    // Right to left: `cur` is the counter value before the current item.
    term::Term cur = term::Term::metavar(base);
    std::size_t fresh = 0;
    DcgRule counted;
    counted.rhs.resize(rule.rhs.size());
    for (std::size_t i = rule.rhs.size(); i-- > 0;) {
      const auto& it = rule.rhs[i];
      if (it.is_word) {
        counted.rhs[i] = it;
        cur = term::Term::compound("s", {cur});
      } else {
        term::Term before = term::Term::metavar(base + std::to_string(++fresh));
        counted.rhs[i] = DcgItem::of_nonterminal(with_counters(it.nonterminal, before, cur));
        cur = before;
      }
    }
    counted.lhs = with_counters(rule.lhs, cur, term::Term::metavar(base));
    out.rules.push_back(std::move(counted));
  }
  return out;
}

// ---------------------------------------------------------------------------
// File formats

namespace {

struct Source {
  std::string text;  // comments blanked out
  std::vector<std::size_t> line_starts{0};

  explicit Source(std::string_view raw) : text(raw) {
    bool comment = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char& c = text[i];
      if (c == '\n') {
        comment = false;
        line_starts.push_back(i + 1);
      } else if (c == '#') {
        comment = true;
      }
      if (comment) c = ' ';
    }
  }

  Diagnostic at(std::size_t offset, std::string msg) const {
    auto it = std::upper_bound(line_starts.begin(), line_starts.end(), offset) - 1;
    return {static_cast<std::size_t>(it - line_starts.begin()) + 1, offset - *it + 1, std::move(msg)};
  }
};

struct Statement {
  std::size_t offset;
  std::string_view body;
};

std::vector<Statement> statements(const Source& src, std::vector<Diagnostic>& diags) {
  std::vector<Statement> out;
  std::string_view text = src.text;
  std::size_t pos = 0;
  for (;;) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t end = text.find('.', pos);
    if (end == std::string_view::npos) {
      diags.push_back(src.at(pos, "statement is missing its terminating '.'"));
      break;
    }
    out.push_back({pos, text.substr(pos, end - pos)});
    pos = end + 1;
  }
  return out;
}

void skip_ws(std::string_view s, std::size_t& pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
}

/// Parses a term at `pos`, recording a positioned diagnostic on failure.
std::optional<term::Term> term_at(const Source& src, const Statement& st, std::size_t& pos,
                                  std::vector<Diagnostic>& diags) {
  try {
    return term::parse_term_at(st.body, pos);
  } catch (const term::SyntaxError& e) {
    diags.push_back(src.at(st.offset + e.offset(), e.what()));
    return std::nullopt;
  }
}

}  // namespace

std::vector<Clause> parse_program(std::string_view text) {
  Source src(text);
  std::vector<Diagnostic> diags;
  std::vector<Clause> out;
  for (const auto& st : statements(src, diags)) {
    std::size_t pos = 0;
    auto head = term_at(src, st, pos, diags);
    if (!head) continue;
    if (!head->is_functional()) {
      diags.push_back(src.at(st.offset, "clause head must be a predicate: " + head->str()));
      continue;
    }
    Clause c{*head, {}};
    skip_ws(st.body, pos);
    bool ok = true;
    if (st.body.substr(pos, 2) == ":-") {
      pos += 2;
      for (;;) {
        auto b = term_at(src, st, pos, diags);
        if (!b) {
          ok = false;
          break;
        }
        c.body.push_back(*b);
        skip_ws(st.body, pos);
        if (pos < st.body.size() && st.body[pos] == ',') {
          ++pos;
          continue;
        }
        break;
      }
    }
    skip_ws(st.body, pos);
    if (ok && pos != st.body.size()) {
      diags.push_back(src.at(st.offset + pos, "unexpected input in clause"));
      ok = false;
    }
    if (ok) out.push_back(std::move(c));
  }
  if (!diags.empty()) throw GrammarError(std::move(diags));
  return out;
}

DcgGrammar parse_dcg(std::string_view text) {
  Source src(text);
  std::vector<Diagnostic> diags;
  DcgGrammar g;
  auto sts = statements(src, diags);
  std::vector<Statement> rules;
  for (const auto& st : sts) {
    if (st.body.starts_with("phon") && (st.body.size() == 4 || std::isspace(static_cast<unsigned char>(st.body[4])))) {
      std::size_t pos = 4;
      for (;;) {
        skip_ws(st.body, pos);
        if (pos >= st.body.size()) break;
        std::size_t start = pos;
        while (pos < st.body.size() && !std::isspace(static_cast<unsigned char>(st.body[pos]))) ++pos;
        std::string w(st.body.substr(start, pos - start));
        bool ok = std::islower(static_cast<unsigned char>(w[0])) &&
                  std::all_of(w.begin(), w.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
        if (ok)
          g.words.insert(std::move(w));
        else
          diags.push_back(src.at(st.offset + start, "invalid word '" + w + "'"));
      }
    } else {
      rules.push_back(st);
    }
  }
  for (const auto& st : rules) {
    std::size_t pos = 0;
    auto lhs = term_at(src, st, pos, diags);
    if (!lhs) continue;
    if (!lhs->is_functional() || (lhs->is_const() && g.words.contains(lhs->name()))) {
      diags.push_back(src.at(st.offset, "rule left-hand side must be a nonterminal: " + lhs->str()));
      continue;
    }
    skip_ws(st.body, pos);
    if (st.body.substr(pos, 3) != "==>") {
      diags.push_back(src.at(st.offset + pos, "expected '==>'"));
      continue;
    }
    pos += 3;
    DcgRule rule{*lhs, {}};
    bool ok = true;
    for (;;) {
      skip_ws(st.body, pos);
      if (pos >= st.body.size()) break;
      auto t = term_at(src, st, pos, diags);
      if (!t) {
        ok = false;
        break;
      }
      if (t->is_const() && g.words.contains(t->name()))
        rule.rhs.push_back(DcgItem::of_word(t->name()));
      else
        rule.rhs.push_back(DcgItem::of_nonterminal(*t));
    }
    if (ok) g.rules.push_back(std::move(rule));
  }
  if (!diags.empty()) throw GrammarError(std::move(diags));
  return g;
}

std::string dcg_str(const DcgGrammar& g) {
  std::string out = "phon";
  for (const auto& w : g.words) out += " " + w;
  out += " .\n";
  for (const auto& r : g.rules) out += r.str() + "\n";
  return out;
}

}  // namespace ggroup::encodings
