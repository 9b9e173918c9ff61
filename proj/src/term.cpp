#include "ggroup/term.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <sstream>

namespace ggroup::term {

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Term> args;
  bool ground;
};

namespace {

bool compute_ground(Kind kind, const std::vector<Term>& args) {
  if (kind == Kind::MetaVar || kind == Kind::App) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

}  // namespace

Term::Term() : Term(constant("nil")) {}

Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term Term::constant(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Const, std::move(name), {}, true}));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
  if (args.empty()) return constant(std::move(functor));
  bool ground = compute_ground(Kind::Compound, args);
  return Term(std::make_shared<const Node>(Node{Kind::Compound, std::move(functor), std::move(args), ground}));
}

Term Term::identifier(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Identifier, std::move(name), {}, true}));
}

Term Term::metavar(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::MetaVar, std::move(name), {}, false}));
}

Term Term::app(std::string abs_var, Term arg) {
  return Term(std::make_shared<const Node>(Node{Kind::App, std::move(abs_var), {std::move(arg)}, false}));
}

Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_->args; }
bool Term::is_ground() const { return node_->ground; }

std::string Term::str() const {
  switch (kind()) {
    case Kind::Const:
    case Kind::MetaVar:
      return name();
    case Kind::Identifier:
      return "#" + name();
    case Kind::App:
      return name() + "[" + args()[0].str() + "]";
    case Kind::Compound: {
      std::string out = name() + "(";
      for (std::size_t i = 0; i < args().size(); ++i) {
        if (i) out += ',';
        out += args()[i].str();
      }
      return out + ")";
    }
  }
  return {};
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!(a.args()[i] == b.args()[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (auto c = a.args()[i] <=> b.args()[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

std::string Lambda::str() const { return "\\#" + std::string(kHole) + "." + body.str(); }

std::string Binding::str() const {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : terms) {
    if (!first) out += ',';
    first = false;
    out += k + "=" + v.str();
  }
  for (const auto& [k, v] : abstractions) {
    if (!first) out += ',';
    first = false;
    out += k + "=" + v.str();
  }
  return out + "}";
}

void Binding::merge(const Binding& other) {
  terms.insert(other.terms.begin(), other.terms.end());
  abstractions.insert(other.abstractions.begin(), other.abstractions.end());
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

void skip_ws(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

std::string read_name(std::string_view text, std::size_t& pos) {
  std::size_t start = pos;
  while (pos < text.size() && is_name_char(text[pos])) ++pos;
  return std::string(text.substr(start, pos - start));
}

}  // namespace

Term parse_term_at(std::string_view text, std::size_t& pos) {
  skip_ws(text, pos);
  if (pos >= text.size()) throw SyntaxError("expected a term, found end of input", pos);
  std::size_t start = pos;
  char c = text[pos];
  if (c == '#') {
    ++pos;
    std::string name = read_name(text, pos);
    if (name.empty()) throw SyntaxError("expected identifier name after '#'", pos);
    return Term::identifier(std::move(name));
  }
  if (!is_name_char(c)) throw SyntaxError(std::string("unexpected character '") + c + "'", pos);
  std::string name = read_name(text, pos);
  bool upper = std::isupper(static_cast<unsigned char>(name[0]));
  if (upper) {
    if (pos < text.size() && text[pos] == '[') {
      ++pos;
      Term arg = parse_term_at(text, pos);
      skip_ws(text, pos);
      if (pos >= text.size() || text[pos] != ']') throw SyntaxError("expected ']'", pos);
      ++pos;
      if (!arg.is_identifier() && !arg.is_metavar())
        throw SyntaxError("abstraction argument must be an identifier or meta-variable", start);
      return Term::app(std::move(name), std::move(arg));
    }
    return Term::metavar(std::move(name));
  }
  if (name[0] == '_') throw SyntaxError("names may not start with '_'", start);
  if (pos < text.size() && text[pos] == '(') {
    ++pos;
    std::vector<Term> args;
    for (;;) {
      args.push_back(parse_term_at(text, pos));
      skip_ws(text, pos);
      if (pos < text.size() && text[pos] == ',') {
        ++pos;
        continue;
      }
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        break;
      }
      throw SyntaxError("expected ',' or ')' in argument list of '" + name + "'", pos);
    }
    return Term::compound(std::move(name), std::move(args));
  }
  return Term::constant(std::move(name));
}

Term parse_term(std::string_view text) {
  std::size_t pos = 0;
  Term t = parse_term_at(text, pos);
  skip_ws(text, pos);
  if (pos != text.size()) throw SyntaxError("trailing input after term", pos);
  return t;
}

// ---------------------------------------------------------------------------
// Traversals

namespace {

template <class F>
void preorder(const Term& t, F&& f) {
  f(t);
  for (const auto& a : t.args()) preorder(a, f);
}

Term map_term(const Term& t, const std::function<std::optional<Term>(const Term&)>& f) {
  if (auto r = f(t)) return *r;
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(map_term(a, f));
    changed = changed || !(args.back() == a);
  }
  if (!changed) return t;
  if (t.is_app()) return Term::app(t.name(), std::move(args[0]));
  return Term::compound(t.name(), std::move(args));
}

std::vector<std::string> collect(const Term& t, Kind kind) {
  std::vector<std::string> out;
  preorder(t, [&](const Term& n) {
    if (n.kind() == kind && std::find(out.begin(), out.end(), n.name()) == out.end()) out.push_back(n.name());
  });
  return out;
}

}  // namespace

bool occurs_metavar(std::string_view var, const Term& t) {
  bool found = false;
  preorder(t, [&](const Term& n) { found = found || (n.is_metavar() && n.name() == var); });
  return found;
}

bool occurs_absvar(std::string_view var, const Term& t) {
  bool found = false;
  preorder(t, [&](const Term& n) { found = found || (n.is_app() && n.name() == var); });
  return found;
}

bool contains_identifier(const Term& t, std::string_view id) {
  bool found = false;
  preorder(t, [&](const Term& n) { found = found || (n.is_identifier() && n.name() == id); });
  return found;
}

std::vector<std::string> identifiers_of(const Term& t) { return collect(t, Kind::Identifier); }
std::vector<std::string> metavars_of(const Term& t) { return collect(t, Kind::MetaVar); }
std::vector<std::string> absvars_of(const Term& t) { return collect(t, Kind::App); }

std::size_t term_size(const Term& t) {
  std::size_t n = 0;
  preorder(t, [&](const Term&) { ++n; });
  return n;
}

Term substitute_identifier(const Term& t, std::string_view id, const Term& replacement) {
  return map_term(t, [&](const Term& n) -> std::optional<Term> {
    if (n.is_identifier() && n.name() == id) return replacement;
    return std::nullopt;
  });
}

Term substitute(const Term& t, const Binding& b) {
  if (b.empty() || t.is_ground()) return t;
  switch (t.kind()) {
    case Kind::MetaVar: {
      auto it = b.terms.find(t.name());
      return it == b.terms.end() ? t : substitute(it->second, b);
    }
    case Kind::App: {
      Term arg = substitute(t.args()[0], b);
      auto it = b.abstractions.find(t.name());
      if (it == b.abstractions.end()) return Term::app(t.name(), std::move(arg));
      return substitute(substitute_identifier(it->second.body, kHole, arg), b);
    }
    case Kind::Compound: {
      std::vector<Term> args;
      args.reserve(t.arity());
      for (const auto& a : t.args()) args.push_back(substitute(a, b));
      return Term::compound(t.name(), std::move(args));
    }
    default:
      return t;
  }
}

// ---------------------------------------------------------------------------
// Unification

std::vector<Binding> match_app(const Term& pattern, const Term& t, const Binding& b, const UnifyOptions& opts) {
  Term p = substitute(pattern, b);
  if (!p.is_app()) return unify(p, t, b, opts);
  Term s = substitute(t, b);
  if (occurs_absvar(p.name(), s)) return {};

  auto abstract = [&](const std::string& id, Binding base) -> std::optional<Binding> {
    if (s.is_identifier() && s.name() == id) return std::nullopt;  // no projections
    Term body = s;
    if (contains_identifier(s, id)) {
      body = substitute_identifier(s, id, Term::identifier(std::string(kHole)));
    } else if (!opts.allow_vacuous) {
      return std::nullopt;
    }
    base.abstractions[p.name()] = Lambda{body};
    return base;
  };

  const Term& arg = p.args()[0];
  std::vector<Binding> out;
  if (arg.is_identifier()) {
    if (auto r = abstract(arg.name(), b)) out.push_back(std::move(*r));
  } else if (arg.is_metavar()) {
    for (const auto& id : identifiers_of(s)) {
      if (id == kHole) continue;
      Binding base = b;
      base.terms[arg.name()] = Term::identifier(id);
      if (auto r = abstract(id, std::move(base))) out.push_back(std::move(*r));
    }
  }
  return out;
}

std::vector<Binding> unify(const Term& t1, const Term& t2, const Binding& b, const UnifyOptions& opts) {
  Term s1 = substitute(t1, b);
  Term s2 = substitute(t2, b);
  if (s1 == s2) return {b};
  if (s2.is_metavar() && !s1.is_metavar()) std::swap(s1, s2);
  if (s1.is_metavar()) {
    if (occurs_metavar(s1.name(), s2)) return {};
    Binding out = b;
    out.terms[s1.name()] = s2;
    return {out};
  }
  if (s1.is_app() && s2.is_app()) {
    // Two unresolved abstractions: only the trivial case is decidable here.
    if (s1.name() != s2.name()) return {};
    return unify(s1.args()[0], s2.args()[0], b, opts);
  }
  if (s1.is_app()) return match_app(s1, s2, b, opts);
  if (s2.is_app()) return match_app(s2, s1, b, opts);
  if (!s1.is_functional() || !s2.is_functional()) return {};
  if (s1.name() != s2.name() || s1.arity() != s2.arity()) return {};

  std::vector<Binding> frontier{b};
  for (std::size_t i = 0; i < s1.arity() && !frontier.empty(); ++i) {
    std::vector<Binding> next;
    for (const auto& cur : frontier) {
      auto r = unify(s1.args()[i], s2.args()[i], cur, opts);
      next.insert(next.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    }
    frontier = std::move(next);
  }
  // Different branches can converge on the same binding.
  std::vector<Binding> out;
  for (auto& f : frontier)
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
  return out;
}

Term canonicalize_identifiers(const Term& t) {
  auto ids = identifiers_of(t);
  std::map<std::string, std::string> rename;
  std::size_t n = 0;
  for (const auto& id : ids) {
    if (id == kHole) continue;
    rename[id] = "x" + std::to_string(++n);
  }
  return map_term(t, [&](const Term& node) -> std::optional<Term> {
    if (!node.is_identifier()) return std::nullopt;
    auto it = rename.find(node.name());
    if (it == rename.end()) return std::nullopt;
    return Term::identifier(it->second);
  });
}

Term IdentifierSource::fresh() {
  for (;;) {
    std::string name = "x" + std::to_string(++counter_);
    if (!reserved_.contains(name)) return Term::identifier(std::move(name));
  }
}

bool binding_has_cycle(const Binding& b) {
  // Nodes are "v:NAME" for meta-variables and "a:NAME" for abstractions.
  std::map<std::string, std::vector<std::string>> edges;
  auto deps = [](const Term& t) {
    std::vector<std::string> out;
    for (auto& v : metavars_of(t)) out.push_back("v:" + v);
    for (auto& a : absvars_of(t)) out.push_back("a:" + a);
    return out;
  };
  for (const auto& [k, v] : b.terms) edges["v:" + k] = deps(v);
  for (const auto& [k, v] : b.abstractions) edges["a:" + k] = deps(v.body);

  std::map<std::string, int> state;  // 0 unseen, 1 on stack, 2 done
  std::function<bool(const std::string&)> visit = [&](const std::string& n) {
    int& s = state[n];
    if (s == 1) return true;
    if (s == 2) return false;
    s = 1;
    if (auto it = edges.find(n); it != edges.end())
      for (const auto& m : it->second)
        if (visit(m)) return true;
    state[n] = 2;
    return false;
  };
  for (const auto& [n, _] : edges)
    if (visit(n)) return true;
  return false;
}

}  // namespace ggroup::term
