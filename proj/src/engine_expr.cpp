#include <cctype>
#include <map>

#include "ggroup/engine.hpp"

namespace ggroup::engine {

bool Atom::cancels(const Atom& o) const {
  if (sign != -o.sign || phon != o.phon) return false;
  if (phon) return word == o.word;
  return term.is_ground() && o.term.is_ground() && term == o.term;
}

std::string Atom::str() const {
  std::string out = phon ? word : term.str();
  return sign < 0 ? out + "^-1" : out;
}

bool operator==(const Block& a, const Block& b) { return a.id == b.id && a.contents == b.contents; }

bool operator==(const Item& a, const Item& b) {
  if (a.is_atom() != b.is_atom()) return false;
  return a.is_atom() ? a.atom() == b.atom() : a.block() == b.block();
}

std::string path_str(const Path& p) {
  if (p.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += '.';
    out += std::to_string(p[i]);
  }
  return out;
}

namespace {

std::size_t count_atoms(const std::vector<Item>& items) {
  std::size_t n = 0;
  for (const auto& it : items) n += it.is_atom() ? 1 : count_atoms(it.block().contents);
  return n;
}

void render(const std::vector<Item>& items, std::string& out) {
  bool first = true;
  for (const auto& it : items) {
    if (!first) out += ' ';
    first = false;
    if (it.is_atom()) {
      out += it.atom().str();
    } else {
      out += '[' + std::to_string(it.block().id) + ':';
      if (!it.block().contents.empty()) {
        out += ' ';
        render(it.block().contents, out);
      }
      out += ']';
    }
  }
}

void skip_ws(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

std::vector<Item> parse_items(std::string_view text, std::size_t& pos, const std::set<std::string>& phon, bool nested) {
  std::vector<Item> out;
  for (;;) {
    skip_ws(text, pos);
    if (pos >= text.size()) {
      if (nested) throw term::SyntaxError("unterminated block", pos);
      return out;
    }
    if (text[pos] == ']') {
      if (!nested) throw term::SyntaxError("unbalanced ']'", pos);
      ++pos;
      return out;
    }
    if (text[pos] == '[') {
      ++pos;
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      if (start == pos || pos >= text.size() || text[pos] != ':') throw term::SyntaxError("expected block id and ':'", pos);
      Block b;
      b.id = std::stoi(std::string(text.substr(start, pos - start)));
      ++pos;
      b.contents = parse_items(text, pos, phon, true);
      out.emplace_back(std::move(b));
      continue;
    }
    std::size_t start = pos;
    term::Term t = term::parse_term_at(text, pos);
    int sign = 1;
    if (text.substr(pos, 3) == "^-1") {
      sign = -1;
      pos += 3;
    }
    if (t.is_const() && t.name() == "1") {
      if (sign < 0) throw term::SyntaxError("the neutral element takes no exponent", start);
      continue;
    }
    if (t.is_const() && phon.contains(t.name()))
      out.emplace_back(Atom::of_word(t.name(), sign));
    else
      out.emplace_back(Atom::of_term(std::move(t), sign));
  }
}

struct KeyRenamer {
  std::map<std::string, std::size_t> metas, abs, ids;

  static std::size_t number(std::map<std::string, std::size_t>& m, const std::string& k) {
    auto [it, inserted] = m.try_emplace(k, m.size() + 1);
    return it->second;
  }

  void term(const term::Term& t, std::string& out) {
    switch (t.kind()) {
      case term::Kind::Const:
        out += t.name();
        break;
      case term::Kind::MetaVar:
        out += "?" + std::to_string(number(metas, t.name()));
        break;
      case term::Kind::Identifier:
        out += "#" + std::to_string(number(ids, t.name()));
        break;
      case term::Kind::App:
        out += "!" + std::to_string(number(abs, t.name())) + "[";
        term(t.args()[0], out);
        out += "]";
        break;
      case term::Kind::Compound:
        out += t.name() + "(";
        for (std::size_t i = 0; i < t.arity(); ++i) {
          if (i) out += ',';
          term(t.args()[i], out);
        }
        out += ")";
        break;
    }
  }

  void items(const std::vector<Item>& xs, std::string& out) {
    for (const auto& it : xs) {
      if (it.is_atom()) {
        const Atom& a = it.atom();
        if (a.phon)
          out += "'" + a.word;
        else
          term(a.term, out);
        if (a.sign < 0) out += "~";
        out += ' ';
      } else {
        out += "[ ";
        items(it.block().contents, out);
        out += "] ";
      }
    }
  }
};

}  // namespace

std::size_t Expr::atom_count() const { return count_atoms(items); }

std::string Expr::str() const {
  if (items.empty()) return "1";
  std::string out;
  render(items, out);
  return out;
}

Expr parse_expr(std::string_view text, const std::set<std::string>& phon_vocab) {
  std::size_t pos = 0;
  Expr e;
  e.items = parse_items(text, pos, phon_vocab, false);
  return e;
}

void cancel_ground_pairs(std::vector<Item>& items) {
  std::vector<Item> out;
  out.reserve(items.size());
  for (auto& it : items) {
    if (it.is_block()) {
      cancel_ground_pairs(it.block().contents);
      out.push_back(std::move(it));
      continue;
    }
    if (!out.empty() && out.back().is_atom() && out.back().atom().cancels(it.atom()))
      out.pop_back();
    else
      out.push_back(std::move(it));
  }
  items = std::move(out);
}

std::string canonical_key(const Expr& e) {
  KeyRenamer r;
  std::string out;
  r.items(e.items, out);
  return out;
}

std::optional<freegroup::ReducedWord> to_word(const Expr& e) {
  std::vector<freegroup::SignedAtom> raw;
  for (const auto& it : e.items) {
    if (!it.is_atom() || !it.atom().is_ground()) return std::nullopt;
    const Atom& a = it.atom();
    raw.push_back({a.phon ? freegroup::VocabElement::phon(a.word) : freegroup::VocabElement::log(a.term), a.sign});
  }
  return freegroup::reduce(raw);
}

}  // namespace ggroup::engine
