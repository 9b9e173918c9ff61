#include "ggroup/analysis.hpp"

#include <json.hpp>
#include <map>

namespace ggroup::analysis {

namespace {

/// Size as a linear form: constant part plus a count per unknown.
struct Skeleton {
  long constant = 0;
  std::map<std::string, long> unknowns;
};

void measure(const term::Term& t, Skeleton& s) {
  switch (t.kind()) {
    case term::Kind::MetaVar: s.unknowns["var " + t.name()] += 1; return;
    case term::Kind::App: s.unknowns["abs " + t.str()] += 1; return;
    case term::Kind::Const:
    case term::Kind::Identifier: s.constant += 1; return;
    case term::Kind::Compound:
      s.constant += 1;
      for (const auto& a : t.args()) measure(a, s);
      return;
  }
}

Skeleton skeleton(const term::Term& t) {
  Skeleton s;
  measure(t, s);
  return s;
}

/// True when size(rhs) < size(lhs) for every instantiation with unknowns
/// of size >= 1.
bool strictly_smaller(const Skeleton& rhs, const Skeleton& lhs) {
  long l = lhs.constant, r = rhs.constant;
  for (const auto& [name, n] : rhs.unknowns) {
    auto it = lhs.unknowns.find(name);
    long have = it == lhs.unknowns.end() ? 0 : it->second;
    if (have < n) return false;
  }
  for (const auto& [_, n] : lhs.unknowns) l += n;
  for (const auto& [_, n] : rhs.unknowns) r += n;
  return r < l;
}

std::string relator_text(const lexicon::Lexicon* lex, std::size_t index) {
  if (!lex || index >= lex->relators.size()) return {};
  return lex->relators[index].str();
}

void finish(CycleReport& r, std::size_t nrules, const char* what) {
  r.status = r.witnesses.empty() ? CycleReport::Status::SizeDecreasing : CycleReport::Status::NotSizeDecreasing;
  r.notes = std::to_string(nrules) + " " + what + " rule(s) checked; ";
  r.notes += r.passed() ? "every right-hand side is strictly smaller than its left-hand side"
                        : std::to_string(r.witnesses.size()) + " item(s) do not meet the size-decrease criterion";
}

}  // namespace

std::string Witness::str() const {
  std::string out = "rule " + rule;
  if (!relator.empty()) out += " (relator " + relator + ")";
  if (self_cycle)
    out += ": ground cycle in the rule itself, " + lhs + " reappears on the right-hand side";
  else
    out += ": criterion not met, " + rhs_item + " is not strictly smaller than " + lhs;
  return out;
}

CycleReport check_size_decrease(std::span<const lexicon::GenRule> rules, const lexicon::Lexicon* lex) {
  CycleReport r;
  for (const auto& rule : rules) {
    Skeleton lhs = skeleton(rule.lhs);
    for (const auto& item : rule.rhs) {
      if (!item.is_log()) continue;
      if (strictly_smaller(skeleton(item.term), lhs)) continue;
      r.witnesses.push_back(
          {rule.str(), relator_text(lex, rule.relator_index), rule.lhs.str(), item.str(), item.term == rule.lhs});
    }
  }
  finish(r, rules.size(), "generation");
  return r;
}

CycleReport check_size_decrease(std::span<const lexicon::ParseRule> rules, const lexicon::Lexicon* lex) {
  CycleReport r;
  for (const auto& rule : rules) {
    for (const auto& item : rule.rhs) {
      if (!item.is_phon()) continue;
      r.witnesses.push_back(
          {rule.str(), relator_text(lex, rule.relator_index), rule.word, item.str(), item.name == rule.word});
    }
  }
  finish(r, rules.size(), "parsing");
  return r;
}

ReversibilityReport reversibility_report(const lexicon::Lexicon& lex) {
  auto gen = lexicon::gen_rules(lex);
  auto par = lexicon::parse_rules(lex);
  return {check_size_decrease(gen, &lex), check_size_decrease(par, &lex)};
}

std::string ReversibilityReport::str() const {
  std::string out;
  auto section = [&](const char* name, const CycleReport& r) {
    out += std::string(name) + ": " + (r.passed() ? "PASS" : "FAIL") + " (" + r.notes + ")\n";
    for (const auto& w : r.witnesses) out += "  witness: " + w.str() + "\n";
  };
  section("generation", generation);
  section("parsing", parsing);
  out += reversible() ? "inherently reversible: generation and parsing terminate with finite results\n"
                      : "not shown reversible: the size-decrease criterion is not met in every direction\n";
  return out;
}

std::string ReversibilityReport::json() const {
  auto section = [](const CycleReport& r) {
    nlohmann::json ws = nlohmann::json::array();
    for (const auto& w : r.witnesses)
      ws.push_back({{"rule", w.rule},
                    {"relator", w.relator},
                    {"lhs", w.lhs},
                    {"rhs_item", w.rhs_item},
                    {"self_cycle", w.self_cycle}});
    return nlohmann::json{
        {"status", r.passed() ? "SizeDecreasing" : "NotSizeDecreasing"}, {"witnesses", ws}, {"notes", r.notes}};
  };
  nlohmann::json j{{"generation", section(generation)}, {"parsing", section(parsing)}, {"reversible", reversible()}};
  return j.dump(2);
}

}  // namespace ggroup::analysis
