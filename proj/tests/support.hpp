#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ggroup/encodings.hpp"
#include "ggroup/engine.hpp"
#include "ggroup/freegroup.hpp"
#include "ggroup/lexicon.hpp"
#include "ggroup/term.hpp"

namespace testsupport {

inline std::string data_path(const std::string& rel) { return std::string(GGROUP_DATA_DIR) + "/" + rel; }

inline std::string read_file(const std::string& rel) {
  std::ifstream in(data_path(rel));
  if (!in) throw std::runtime_error("cannot open " + data_path(rel));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline const ggroup::lexicon::Lexicon& english() {
  static const ggroup::lexicon::Lexicon lex = ggroup::lexicon::parse_grammar(read_file("english.gg"));
  return lex;
}

inline std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

inline std::string join(const std::vector<std::string>& ws) {
  std::string out;
  for (const auto& w : ws) out += (out.empty() ? "" : " ") + w;
  return out;
}

inline ggroup::term::Term T(const std::string& s) { return ggroup::term::parse_term(s); }

/// Reduced word from text such as `j j^-1 s(j,l)`; words of the english
/// vocabulary are read as phonological atoms.
inline ggroup::freegroup::ReducedWord W(const std::string& s) {
  auto raw = ggroup::freegroup::parse_atoms(s, english().phon_vocab);
  return ggroup::freegroup::reduce(raw);
}

/// Random raw sequences over a small alphabet so that cancellations are
/// frequent.
class AtomGen {
 public:
  explicit AtomGen(unsigned seed) : rng_(seed) {}

  ggroup::freegroup::SignedAtom atom() {
    using ggroup::freegroup::VocabElement;
    static const char* kWords[] = {"john", "saw", "louise"};
    static const char* kTerms[] = {"j", "s(j,l)", "#x1"};
    std::uniform_int_distribution<int> pick(0, 5), sign(0, 1);
    int k = pick(rng_);
    VocabElement v = k < 3 ? VocabElement::phon(kWords[k]) : VocabElement::log(ggroup::term::parse_term(kTerms[k - 3]));
    return {v, sign(rng_) ? 1 : -1};
  }

  std::vector<ggroup::freegroup::SignedAtom> raw(std::size_t max_len = 12) {
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::vector<ggroup::freegroup::SignedAtom> out;
    for (std::size_t n = len(rng_); n > 0; --n) out.push_back(atom());
    return out;
  }

  ggroup::freegroup::ReducedWord word(std::size_t max_len = 12) { return ggroup::freegroup::reduce(raw(max_len)); }

  std::mt19937& rng() { return rng_; }

 private:
  std::mt19937 rng_;
};

}  // namespace testsupport
