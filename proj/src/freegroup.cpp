#include "ggroup/freegroup.hpp"

#include <cctype>
#include <stdexcept>

namespace ggroup::freegroup {

VocabElement VocabElement::phon(std::string word) { return VocabElement(Sort::Phon, std::move(word), term::Term()); }

VocabElement VocabElement::log(term::Term t) {
  if (!t.is_ground()) throw std::invalid_argument("logical vocabulary element must be ground: " + t.str());
  return VocabElement(Sort::Log, {}, std::move(t));
}

ReducedWord ReducedWord::reduce(std::span<const SignedAtom> raw) {
  ReducedWord w;
  w.atoms_.reserve(raw.size());
  for (const auto& a : raw) {
    if (!w.atoms_.empty() && w.atoms_.back().cancels(a))
      w.atoms_.pop_back();
    else
      w.atoms_.push_back(a);
  }
  return w;
}

std::string ReducedWord::str() const {
  if (atoms_.empty()) return "1";
  std::string out;
  for (const auto& a : atoms_) {
    if (!out.empty()) out += ' ';
    out += a.str();
  }
  return out;
}

ReducedWord product(const ReducedWord& a, const ReducedWord& b) {
  std::vector<SignedAtom> raw = a.atoms();
  raw.insert(raw.end(), b.atoms().begin(), b.atoms().end());
  return reduce(raw);
}

ReducedWord inverse(const ReducedWord& a) {
  std::vector<SignedAtom> raw;
  raw.reserve(a.size());
  for (auto it = a.atoms().rbegin(); it != a.atoms().rend(); ++it) raw.push_back(it->inverse());
  return reduce(raw);
}

ReducedWord conjugate(const ReducedWord& x, const ReducedWord& y) { return product(product(y, x), inverse(y)); }

std::set<ReducedWord> cyclic_rotations(const ReducedWord& a) {
  std::set<ReducedWord> out;
  const auto& atoms = a.atoms();
  if (atoms.empty()) {
    out.insert(a);
    return out;
  }
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    std::vector<SignedAtom> raw(atoms.begin() + static_cast<std::ptrdiff_t>(k), atoms.end());
    raw.insert(raw.end(), atoms.begin(), atoms.begin() + static_cast<std::ptrdiff_t>(k));
    out.insert(reduce(raw));
  }
  return out;
}

std::vector<SignedAtom> parse_atoms(std::string_view text, const std::set<std::string>& phon_vocab) {
  std::vector<SignedAtom> out;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  for (;;) {
    skip_ws();
    if (pos >= text.size()) break;
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
    if (!t.is_ground()) throw term::SyntaxError("word atoms must be ground: " + t.str(), start);
    if (t.is_const() && phon_vocab.contains(t.name()))
      out.push_back({VocabElement::phon(t.name()), sign});
    else
      out.push_back({VocabElement::log(t), sign});
  }
  return out;
}

}  // namespace ggroup::freegroup
