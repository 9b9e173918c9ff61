#include "ggroup/trace.hpp"

#include <json.hpp>
#include <sstream>

namespace ggroup::trace {

using engine::Derivation;
using engine::Path;
using engine::RuleRef;
using engine::Step;
using engine::StepKind;
using nlohmann::json;

namespace {

constexpr std::string_view kLambdaPrefix = "\\#_.";

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

Path parse_path(std::string_view s) {
  Path p;
  if (s == "-") return p;
  std::size_t start = 0;
  for (;;) {
    auto dot = s.find('.', start);
    auto part = s.substr(start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
    if (part.empty() || part.find_first_not_of("0123456789") != std::string_view::npos)
      throw TraceError("invalid path '" + std::string(s) + "'");
    p.push_back(std::stoul(std::string(part)));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return p;
}

term::Term parse_value(std::string_view s) {
  try {
    return term::parse_term(s);
  } catch (const term::SyntaxError& e) {
    throw TraceError("invalid term '" + std::string(s) + "': " + e.what());
  }
}

void add_entry(term::Binding& b, const std::string& name, std::string_view value) {
  if (name.empty()) throw TraceError("binding entry without a name");
  if (value.starts_with(kLambdaPrefix))
    b.abstractions[name] = term::Lambda{parse_value(value.substr(kLambdaPrefix.size()))};
  else
    b.terms[name] = parse_value(value);
}

engine::Expr parse_expression(std::string_view s, const std::set<std::string>& phon) {
  try {
    return engine::parse_expr(s, phon);
  } catch (const term::SyntaxError& e) {
    throw TraceError("invalid expression '" + std::string(s) + "': " + e.what());
  }
}

StepKind kind_of(std::string_view name) {
  auto k = engine::step_kind_from_name(name);
  if (!k) throw TraceError("unknown step kind '" + std::string(name) + "'");
  return *k;
}

RuleRef rule_of(std::string_view s) {
  auto r = RuleRef::parse(s);
  if (!r) throw TraceError("invalid rule reference '" + std::string(s) + "'");
  return *r;
}

}  // namespace

term::Binding parse_binding(std::string_view text) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') throw TraceError("binding must be enclosed in braces");
  std::string_view body = std::string_view(s).substr(1, s.size() - 2);
  term::Binding b;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    char c = i < body.size() ? body[i] : ',';
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c != ',' || depth != 0) continue;
    auto entry = body.substr(start, i - start);
    start = i + 1;
    if (entry.empty() && i == body.size() && body.empty()) break;
    auto eq = entry.find('=');
    if (eq == std::string_view::npos) throw TraceError("binding entry without '=': " + std::string(entry));
    add_entry(b, trim(entry.substr(0, eq)), trim(entry.substr(eq + 1)));
  }
  return b;
}

std::string to_text(const Derivation& d) {
  std::ostringstream out;
  out << "start: " << d.start.str() << '\n';
  for (const auto& st : d.steps) {
    out << engine::step_kind_name(st.kind);
    if (!st.path.empty()) out << " path=" << engine::path_str(st.path);
    if (st.rule) out << " rule=" << st.rule->str();
    if (st.block >= 0) out << " block=" << st.block;
    if (st.kind == StepKind::Rotate) out << " k=" << st.k;
    if (st.kind == StepKind::Expand || st.kind == StepKind::Cancel || st.kind == StepKind::Introduce)
      out << " delta=" << st.delta.str();
    out << '\n';
  }
  out << "end: " << d.end.str() << '\n';
  return out.str();
}

Derivation from_text(std::string_view text, const std::set<std::string>& phon_vocab) {
  Derivation d;
  bool have_start = false, have_end = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty()) continue;
    try {
      if (t.starts_with("start:")) {
        d.start = parse_expression(t.substr(6), phon_vocab);
        have_start = true;
        continue;
      }
      if (t.starts_with("end:")) {
        d.end = parse_expression(t.substr(4), phon_vocab);
        have_end = true;
        continue;
      }
      if (!have_start || have_end) throw TraceError("step outside start/end");
      Step st;
      std::istringstream fields(t);
      std::string word;
      fields >> word;
      st.kind = kind_of(word);
      while (fields >> word) {
        auto eq = word.find('=');
        if (eq == std::string::npos) throw TraceError("field without '=': " + word);
        std::string key = word.substr(0, eq);
        std::string value = word.substr(eq + 1);
        if (key == "path")
          st.path = parse_path(value);
        else if (key == "rule")
          st.rule = rule_of(value);
        else if (key == "block")
          st.block = std::stoi(value);
        else if (key == "k")
          st.k = std::stoul(value);
        else if (key == "delta")
          st.delta = parse_binding(value);
        else
          throw TraceError("unknown field '" + key + "'");
      }
      d.steps.push_back(std::move(st));
    } catch (const TraceError& e) {
      throw TraceError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::logic_error& e) {
      throw TraceError("line " + std::to_string(lineno) + ": malformed number");
    }
  }
  if (!have_start || !have_end) throw TraceError("trace needs both a start: and an end: line");
  return d;
}

std::string to_json(const Derivation& d) {
  json steps = json::array();
  for (const auto& st : d.steps) {
    json j;
    j["kind"] = engine::step_kind_name(st.kind);
    j["path"] = st.path;
    if (st.rule) j["rule"] = st.rule->str();
    if (st.block >= 0) j["block"] = st.block;
    if (st.kind == StepKind::Rotate) j["k"] = st.k;
    json delta = json::object();
    for (const auto& [k, v] : st.delta.terms) delta[k] = v.str();
    for (const auto& [k, v] : st.delta.abstractions) delta[k] = v.str();
    j["delta"] = std::move(delta);
    steps.push_back(std::move(j));
  }
  json out{{"start", d.start.str()}, {"steps", std::move(steps)}, {"end", d.end.str()}};
  return out.dump(2);
}

Derivation from_json(std::string_view text, const std::set<std::string>& phon_vocab) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw TraceError(std::string("invalid JSON: ") + e.what());
  }
  try {
    Derivation d;
    d.start = parse_expression(j.at("start").get<std::string>(), phon_vocab);
    d.end = parse_expression(j.at("end").get<std::string>(), phon_vocab);
    for (const auto& js : j.at("steps")) {
      Step st;
      st.kind = kind_of(js.at("kind").get<std::string>());
      st.path = js.at("path").get<Path>();
      if (js.contains("rule")) st.rule = rule_of(js["rule"].get<std::string>());
      if (js.contains("block")) st.block = js["block"].get<int>();
      if (js.contains("k")) st.k = js["k"].get<std::size_t>();
      if (js.contains("delta"))
        for (const auto& [k, v] : js["delta"].items()) add_entry(st.delta, k, v.get<std::string>());
      d.steps.push_back(std::move(st));
    }
    return d;
  } catch (const json::exception& e) {
    throw TraceError(std::string("malformed trace: ") + e.what());
  }
}

}  // namespace ggroup::trace
