#include "ggroup/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ggroup/analysis.hpp"
#include "ggroup/encodings.hpp"
#include "ggroup/engine.hpp"
#include "ggroup/freegroup.hpp"
#include "ggroup/lexicon.hpp"
#include "ggroup/trace.hpp"

namespace ggroup::cli {

namespace {

/// Reported with exit status 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool is_dcg(const std::string& path) { return path.ends_with(".dcg"); }

lexicon::Lexicon load_grammar(const std::string& path) {
  std::string text = read_file(path);
  try {
    if (is_dcg(path)) return encodings::encode_dcg(encodings::parse_dcg(text));
    return lexicon::parse_grammar(text);
  } catch (const lexicon::GrammarError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) msg += (msg.empty() ? "" : "\n") + path + ":" + d.str();
    throw UsageError(msg);
  }
}

term::Term parse_input_term(const std::string& text) {
  try {
    return term::parse_term(text);
  } catch (const term::SyntaxError& e) {
    throw UsageError("input:" + std::to_string(e.offset() + 1) + ": " + e.what());
  }
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& ws) {
  std::string out;
  for (const auto& w : ws) out += (out.empty() ? "" : " ") + w;
  return out;
}

struct Options {
  std::size_t max_expansions = engine::SearchLimits{}.max_expansions;
  std::size_t max_results = engine::SearchLimits{}.max_results;
  std::size_t max_items = engine::SearchLimits{}.max_items;
  std::string trace = "off";
  std::string format = "text";
  bool commutative = false;
  bool allow_vacuous = false;

  engine::SearchLimits limits() const {
    engine::SearchLimits l;
    l.max_expansions = max_expansions;
    l.max_results = max_results;
    l.max_items = max_items;
    l.commutative = commutative;
    l.allow_vacuous_abstraction = allow_vacuous;
    return l;
  }
};

void add_search_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--max-expansions", o.max_expansions, "Expansion budget per derivation")->check(CLI::PositiveNumber);
  cmd->add_option("--max-results", o.max_results, "Stop after this many distinct results")->check(CLI::PositiveNumber);
  cmd->add_option("--max-items", o.max_items, "Abandon expressions longer than this")->check(CLI::PositiveNumber);
  cmd->add_option("--trace", o.trace, "Print derivations")->check(CLI::IsMember({"off", "text", "json"}));
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  cmd->add_flag("--commutative", o.commutative, "Let any two atoms be brought together");
  cmd->add_flag("--allow-vacuous", o.allow_vacuous, "Permit abstractions that do not use their variable");
}

nlohmann::json trace_json(const engine::Derivation& d) { return nlohmann::json::parse(trace::to_json(d)); }

void print_trace(std::ostream& out, const Options& o, const engine::Derivation& d) {
  if (o.trace == "text") out << trace::to_text(d) << '\n';
  if (o.trace == "json") out << trace::to_json(d) << "\n\n";
}

int finish(bool truncated, bool any, std::ostream& err) {
  if (truncated) {
    err << "warning: search limit reached; results may be incomplete\n";
    return kTruncated;
  }
  return any ? kOk : kNoResult;
}

int cmd_generate(const std::string& grammar, const std::string& input, const Options& o, std::ostream& out,
                 std::ostream& err) {
  auto lex = load_grammar(grammar);
  engine::Machine m(lex, o.limits());
  auto lf = parse_input_term(input);
  auto res = engine::generate(m, lf);
  nlohmann::json results = nlohmann::json::array();
  for (const auto& g : res.results) {
    engine::audit_generation(m, g.derivation);
    if (o.format == "json") {
      nlohmann::json r{{"words", join(g.words)}};
      if (o.trace != "off") r["derivation"] = trace_json(g.derivation);
      results.push_back(std::move(r));
    } else {
      out << join(g.words) << '\n';
      print_trace(out, o, g.derivation);
    }
  }
  if (o.format == "json")
    out << nlohmann::json{{"results", results}, {"truncated", res.truncated}, {"states", res.states}}.dump(2) << '\n';
  return finish(res.truncated, !res.results.empty(), err);
}

int cmd_parse(const std::string& grammar, const std::string& input, const Options& o, std::ostream& out,
              std::ostream& err) {
  auto lex = load_grammar(grammar);
  engine::Machine m(lex, o.limits());
  auto words = split_words(input);
  auto res = engine::parse(m, words);
  nlohmann::json results = nlohmann::json::array();
  for (const auto& p : res.results) {
    engine::audit_parse(m, p.derivation);
    if (o.format == "json") {
      nlohmann::json r{{"semantics", p.semantics.str()}};
      if (o.trace != "off") r["derivation"] = trace_json(p.derivation);
      results.push_back(std::move(r));
    } else {
      out << p.semantics.str() << '\n';
      print_trace(out, o, p.derivation);
    }
  }
  if (o.format == "json")
    out << nlohmann::json{{"results", results}, {"truncated", res.truncated}, {"states", res.states}}.dump(2) << '\n';
  return finish(res.truncated, !res.results.empty(), err);
}

int cmd_check(const std::string& grammar, const std::string& format, std::ostream& out) {
  auto lex = load_grammar(grammar);
  auto report = analysis::reversibility_report(lex);
  out << (format == "json" ? report.json() + "\n" : report.str());
  return report.reversible() ? kOk : kNoResult;
}

int cmd_reduce(const std::string& input, const std::string& grammar, std::ostream& out) {
  std::set<std::string> phon;
  if (!grammar.empty()) phon = load_grammar(grammar).phon_vocab;
  try {
    out << freegroup::reduce(freegroup::parse_atoms(input, phon)).str() << '\n';
  } catch (const term::SyntaxError& e) {
    throw UsageError("input:" + std::to_string(e.offset() + 1) + ": " + e.what());
  }
  return kOk;
}

int cmd_logic(const std::string& program, std::size_t rounds, const std::string& format, std::ostream& out,
              std::ostream& err) {
  std::vector<encodings::Clause> clauses;
  std::string text = read_file(program);
  try {
    clauses = encodings::parse_program(text);
  } catch (const lexicon::GrammarError& e) {
    std::string msg;
    for (const auto& d : e.diagnostics()) msg += (msg.empty() ? "" : "\n") + program + ":" + d.str();
    throw UsageError(msg);
  }
  auto lex = encodings::encode_logic_program(clauses);
  engine::SearchLimits limits;
  limits.commutative = true;
  engine::Machine m(lex, limits);
  auto sat = engine::saturate(m, rounds);
  std::set<term::Term> engine_facts;
  for (const auto& c : sat.facts) {
    engine::replay(m, c.derivation);
    engine_facts.insert(c.fact);
  }
  auto oracle = encodings::forward_chain(clauses, rounds);
  bool match = engine_facts == oracle.facts;
  bool truncated = sat.truncated || oracle.truncated;

  if (format == "json") {
    nlohmann::json e = nlohmann::json::array(), f = nlohmann::json::array();
    for (const auto& t : engine_facts) e.push_back(t.str());
    for (const auto& t : oracle.facts) f.push_back(t.str());
    out << nlohmann::json{{"engine", e}, {"oracle", f}, {"verdict", match ? "MATCH" : "DIFFER"}, {"truncated", truncated}}
               .dump(2)
        << '\n';
  } else {
    out << "engine:";
    for (const auto& t : engine_facts) out << ' ' << t.str();
    out << "\noracle:";
    for (const auto& t : oracle.facts) out << ' ' << t.str();
    out << '\n' << (match ? "MATCH" : "DIFFER") << ", " << engine_facts.size() << " facts\n";
  }
  if (truncated) {
    err << "warning: closure not reached within " << rounds << " rounds; consequences are partial\n";
    return kTruncated;
  }
  return match ? kOk : kNoResult;
}

int cmd_rules(const std::string& grammar, std::ostream& out, std::ostream& err) {
  auto lex = load_grammar(grammar);
  for (const auto& w : lex.warnings) err << grammar << ":" << w << '\n';
  engine::Machine m(lex);
  out << "generation rules:\n";
  for (std::size_t i = 0; i < m.gen_rules().size(); ++i)
    out << "  gen:" << i << "  " << m.gen_rules()[i].str() << '\n';
  out << "parsing rules:\n";
  for (std::size_t i = 0; i < m.parse_rules().size(); ++i)
    out << "  parse:" << i << "  " << m.parse_rules()[i].str() << '\n';
  return kOk;
}

/// The first derivation in a file holding a bare trace or the output of
/// `generate`/`parse` with `--trace` (text or JSON) or `--format json`.
engine::Derivation first_trace(const std::string& text, const std::set<std::string>& phon) {
  auto start = text.starts_with("start:") ? 0 : text.find("\nstart:");
  if (start != std::string::npos) {
    if (start != 0) ++start;
    auto end = text.find("\nend:", start);
    if (end == std::string::npos) throw trace::TraceError("trace has no end: line");
    end = text.find('\n', end + 1);
    return trace::from_text(text.substr(start, end == std::string::npos ? end : end - start), phon);
  }
  auto brace = text.find('{');
  if (brace == std::string::npos) throw trace::TraceError("no derivation found");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text.substr(brace), nullptr, true, false);
  } catch (const nlohmann::json::parse_error&) {
    // `--trace json` output holds several documents; take the first.
    auto stream = std::istringstream(text.substr(brace));
    try {
      stream >> j;
    } catch (const nlohmann::json::exception& e) {
      throw trace::TraceError(std::string("invalid JSON: ") + e.what());
    }
  }
  if (j.contains("results")) {
    if (j["results"].empty() || !j["results"][0].contains("derivation"))
      throw trace::TraceError("output holds no derivation; rerun with --trace");
    j = j["results"][0]["derivation"];
  }
  return trace::from_json(j.dump(), phon);
}

int cmd_replay(const std::string& grammar, const std::string& trace_path, const Options& o, std::ostream& out) {
  auto lex = load_grammar(grammar);
  engine::Machine m(lex, o.limits());
  std::string text = read_file(trace_path);
  engine::Derivation d;
  try {
    d = first_trace(text, lex.phon_vocab);
  } catch (const trace::TraceError& e) {
    throw UsageError(trace_path + ": " + e.what());
  }
  auto end = engine::replay(m, d);
  out << "verified " << d.steps.size() << " steps: " << d.start.str() << " => " << end.str() << '\n';
  try {
    auto g = engine::audit_generation(m, d);
    out << "public result: " << g.semantics.str() << " / " << join(g.words) << '\n';
  } catch (const engine::InputError&) {
    try {
      auto p = engine::audit_parse(m, d);
      out << "public result: " << p.semantics.str() << " / " << join(p.words) << '\n';
    } catch (const engine::InputError&) {
    }
  }
  return kOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bidirectional grammar engine over free-group computations", "ggroup"};
  app.require_subcommand(1);
  Options o;
  std::string grammar, input, path, reduce_grammar;
  std::size_t rounds = 5;

  auto* gen = app.add_subcommand("generate", "Word strings for a ground logical form");
  gen->add_option("grammar", grammar, "Grammar file (.gg, or .dcg for grammar rules)")->required();
  gen->add_option("term", input, "Ground logical form")->required();
  add_search_options(gen, o);

  auto* par = app.add_subcommand("parse", "Logical forms for a sentence");
  par->add_option("grammar", grammar, "Grammar file")->required();
  par->add_option("sentence", input, "Space-separated words")->required();
  add_search_options(par, o);

  auto* chk = app.add_subcommand("check", "Size-decrease reversibility report");
  chk->add_option("grammar", grammar, "Grammar file (.gg or .dcg)")->required();
  chk->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* red = app.add_subcommand("reduce", "Reduced form of a free-group word");
  red->add_option("word", input, "Atoms separated by spaces; `x^-1` inverts, `1` is neutral")->required();
  red->add_option("--grammar", reduce_grammar, "Treat the grammar's declared tokens as words");

  auto* lg = app.add_subcommand("logic", "Consequences of a logic program, engine versus oracle");
  lg->add_option("program", path, "Program file")->required();
  lg->add_option("--rounds", rounds, "Derivation depth bound")->check(CLI::NonNegativeNumber);
  lg->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  auto* rl = app.add_subcommand("rules", "Derived generation and parsing rules");
  rl->add_option("grammar", grammar, "Grammar file")->required();

  auto* rp = app.add_subcommand("replay", "Verify a saved derivation trace");
  rp->add_option("grammar", grammar, "Grammar file")->required();
  rp->add_option("trace-file", path, "Trace file (text or JSON)")->required();
  add_search_options(rp, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*gen) return cmd_generate(grammar, input, o, out, err);
    if (*par) return cmd_parse(grammar, input, o, out, err);
    if (*chk) return cmd_check(grammar, o.format, out);
    if (*red) return cmd_reduce(input, reduce_grammar, out);
    if (*lg) return cmd_logic(path, rounds, o.format, out, err);
    if (*rl) return cmd_rules(grammar, out, err);
    if (*rp) return cmd_replay(grammar, path, o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const engine::InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const engine::StepError& e) {
    err << "error: verification failed at " << e.what() << '\n';
    return kInputError;
  } catch (const lexicon::GrammarError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}

}  // namespace ggroup::cli
