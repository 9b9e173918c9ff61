#include "ggroup/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

namespace ggroup::lexicon {

std::string SchemeItem::str() const {
  std::string out;
  switch (kind) {
    case Kind::Phon: out = name; break;
    case Kind::Log: out = term.str(); break;
    case Kind::ExprMeta: out = "@" + name; break;
  }
  return sign < 0 ? out + "^-1" : out;
}

std::string render_items(std::span<const SchemeItem> items) {
  if (items.empty()) return "1";
  std::string out;
  for (const auto& it : items) {
    if (!out.empty()) out += ' ';
    out += it.str();
  }
  return out;
}

std::vector<SchemeItem> invert_items(std::span<const SchemeItem> items) {
  std::vector<SchemeItem> out;
  out.reserve(items.size());
  for (auto it = items.rbegin(); it != items.rend(); ++it) out.push_back(it->inverse());
  return out;
}

std::size_t RelatorScheme::phon_count() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const SchemeItem& i) { return i.is_phon(); }));
}

std::optional<std::size_t> RelatorScheme::semantic_head() const {
  std::optional<std::size_t> head;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& it = items[i];
    if (!it.is_log() || it.sign < 0 || !it.term.is_functional()) continue;
    if (head) return std::nullopt;
    head = i;
  }
  return head;
}

std::string Lexicon::str() const {
  std::string out;
  if (raw) out += "mode raw .\n";
  if (!phon_vocab.empty()) {
    out += "phon";
    for (const auto& w : phon_vocab) out += " " + w;
    out += " .\n";
  }
  for (const auto& r : relators) out += "relator " + r.str() + " .\n";
  return out;
}

bool operator==(const Lexicon& a, const Lexicon& b) {
  if (a.raw != b.raw || a.phon_vocab != b.phon_vocab || a.relators.size() != b.relators.size()) return false;
  for (std::size_t i = 0; i < a.relators.size(); ++i)
    if (a.relators[i].items != b.relators[i].items) return false;
  return true;
}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
  std::string out;
  for (const auto& d : ds) {
    if (!out.empty()) out += '\n';
    out += d.str();
  }
  return out;
}

struct Statement {
  std::size_t offset;  // of the keyword
  std::string keyword;
  std::size_t body_offset;
  std::string_view body;
};

class SourceMap {
 public:
  explicit SourceMap(std::string_view text) {
    line_starts_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') line_starts_.push_back(i + 1);
  }
  Diagnostic at(std::size_t offset, std::string message) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    std::size_t line = static_cast<std::size_t>(it - line_starts_.begin());
    return {line, offset - line_starts_[line - 1] + 1, std::move(message)};
  }
  std::size_t line_of(std::size_t offset) const { return at(offset, {}).line; }

 private:
  std::vector<std::size_t> line_starts_;
};

bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::string strip_comments(std::string_view text) {
  std::string out(text);
  bool in_comment = false;
  for (char& c : out) {
    if (c == '\n') in_comment = false;
    else if (c == '#') in_comment = true;
    if (in_comment) c = ' ';
  }
  return out;
}

std::vector<Statement> split_statements(std::string_view text, const SourceMap& map, std::vector<Diagnostic>& diags) {
  std::vector<Statement> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    std::size_t start = pos;
    while (pos < text.size() && is_name_char(text[pos])) ++pos;
    std::string keyword(text.substr(start, pos - start));
    std::size_t end = text.find('.', pos);
    if (end == std::string_view::npos) {
      diags.push_back(map.at(start, "statement is missing its terminating '.'"));
      break;
    }
    out.push_back({start, std::move(keyword), pos, text.substr(pos, end - pos)});
    pos = end + 1;
  }
  return out;
}

std::vector<SchemeItem> parse_items_at(std::string_view body, std::size_t base, const std::set<std::string>& phon,
                                       const SourceMap* map, std::vector<Diagnostic>& diags) {
  std::vector<SchemeItem> items;
  std::size_t pos = 0;
  auto fail = [&](std::size_t at, std::string msg) {
    if (map)
      diags.push_back(map->at(base + at, std::move(msg)));
    else
      diags.push_back({0, base + at + 1, std::move(msg)});
  };
  for (;;) {
    while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) ++pos;
    if (pos >= body.size()) break;
    std::size_t start = pos;
    SchemeItem item;
    if (body[pos] == '@') {
      ++pos;
      std::size_t name_start = pos;
      while (pos < body.size() && is_name_char(body[pos])) ++pos;
      if (pos == name_start) {
        fail(start, "expected expression meta-variable name after '@'");
        return items;
      }
      item = SchemeItem::meta(std::string(body.substr(name_start, pos - name_start)));
    } else {
      try {
        term::Term t = term::parse_term_at(body, pos);
        if (t.is_const() && phon.contains(t.name()))
          item = SchemeItem::phon(t.name());
        else
          item = SchemeItem::log(std::move(t));
      } catch (const term::SyntaxError& e) {
        fail(e.offset(), e.what());
        return items;
      }
    }
    if (body.substr(pos, 3) == "^-1") {
      item.sign = -1;
      pos += 3;
    } else if (pos < body.size() && !std::isspace(static_cast<unsigned char>(body[pos]))) {
      fail(pos, std::string("unexpected character '") + body[pos] + "'");
      return items;
    }
    items.push_back(std::move(item));
  }
  return items;
}

/// Each `@name` must appear exactly twice, once with each sign.
std::optional<std::string> check_meta_pairs(const std::vector<SchemeItem>& items) {
  std::map<std::string, std::pair<int, int>> counts;
  for (const auto& it : items)
    if (it.is_meta()) (it.sign > 0 ? counts[it.name].first : counts[it.name].second)++;
  for (const auto& [name, c] : counts)
    if (c.first != 1 || c.second != 1)
      return "expression meta-variable @" + name + " must occur exactly twice with opposite signs";
  return std::nullopt;
}

}  // namespace

GrammarError::GrammarError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<SchemeItem> parse_items(std::string_view text, const std::set<std::string>& phon_vocab) {
  std::vector<Diagnostic> diags;
  auto items = parse_items_at(text, 0, phon_vocab, nullptr, diags);
  if (!diags.empty()) throw GrammarError(std::move(diags));
  return items;
}

Lexicon parse_grammar(std::string_view source) {
  std::string text = strip_comments(source);
  SourceMap map(text);
  std::vector<Diagnostic> diags;
  auto statements = split_statements(text, map, diags);

  Lexicon lex;
  // Words first, so that relators may precede the declarations they use.
  for (const auto& st : statements) {
    if (st.keyword == "phon") {
      std::size_t pos = 0;
      while (pos < st.body.size()) {
        while (pos < st.body.size() && std::isspace(static_cast<unsigned char>(st.body[pos]))) ++pos;
        std::size_t start = pos;
        while (pos < st.body.size() && !std::isspace(static_cast<unsigned char>(st.body[pos]))) ++pos;
        if (start == pos) break;
        std::string tok(st.body.substr(start, pos - start));
        bool ok = std::islower(static_cast<unsigned char>(tok[0])) &&
                  std::all_of(tok.begin(), tok.end(), is_name_char);
        if (!ok)
          diags.push_back(map.at(st.body_offset + start, "invalid phonological token '" + tok + "'"));
        else
          lex.phon_vocab.insert(std::move(tok));
      }
    } else if (st.keyword == "mode") {
      std::string_view body = st.body;
      while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) body.remove_prefix(1);
      while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) body.remove_suffix(1);
      if (body == "raw")
        lex.raw = true;
      else if (body != "grammar")
        diags.push_back(map.at(st.body_offset, "unknown mode '" + std::string(body) + "'"));
    } else if (st.keyword != "relator") {
      diags.push_back(map.at(st.offset, "unknown statement '" + st.keyword + "'"));
    }
  }

  for (const auto& st : statements) {
    if (st.keyword != "relator") continue;
    std::size_t before = diags.size();
    auto items = parse_items_at(st.body, st.body_offset, lex.phon_vocab, &map, diags);
    if (diags.size() != before) continue;

    RelatorScheme r;
    r.items = std::move(items);
    r.line = map.line_of(st.offset);
    std::string_view raw_line = std::string_view(source).substr(st.offset);
    r.source_line = std::string(raw_line.substr(0, raw_line.find('\n')));

    if (auto err = check_meta_pairs(r.items)) {
      diags.push_back(map.at(st.offset, *err));
      continue;
    }
    std::size_t words = r.phon_count();
    std::string shape_problem;
    if (words == 0) {
      std::string candidates;
      for (const auto& it : r.items)
        if (it.is_log() && it.term.is_const() && it.sign < 0) candidates += " " + it.term.name();
      shape_problem = "relator has no declared phonological token";
      if (!candidates.empty()) shape_problem += " (undeclared phon token?:" + candidates + ")";
    } else if (words > 1) {
      shape_problem = "relator has " + std::to_string(words) + " phonological tokens, expected exactly one";
    } else if (std::find_if(r.items.begin(), r.items.end(), [](const SchemeItem& s) { return s.is_phon(); })->sign > 0) {
      shape_problem = "the relator's word must carry the inverse sign";
    } else if (!r.semantic_head()) {
      shape_problem = "relator has no unique semantic head (positive logical form with a functor)";
    }
    if (!shape_problem.empty()) {
      if (!lex.raw) {
        diags.push_back(map.at(st.offset, shape_problem));
        continue;
      }
      lex.warnings.push_back(map.at(st.offset, shape_problem).str());
    }
    lex.relators.push_back(std::move(r));
  }

  if (!diags.empty()) throw GrammarError(std::move(diags));
  return lex;
}

std::vector<GenRule> gen_rules(const Lexicon& lex) {
  std::vector<GenRule> out;
  for (std::size_t i = 0; i < lex.relators.size(); ++i) {
    const auto& r = lex.relators[i];
    auto head = r.semantic_head();
    if (!head) {
      if (!lex.raw) throw GrammarError({{r.line, 1, "relator has no unique semantic head: " + r.str()}});
      continue;
    }
    std::span<const SchemeItem> items(r.items);
    auto before = invert_items(items.subspan(0, *head));
    auto after = invert_items(items.subspan(*head + 1));
    GenRule rule{r.items[*head].term, std::move(before), i};
    rule.rhs.insert(rule.rhs.end(), after.begin(), after.end());
    out.push_back(std::move(rule));
  }
  return out;
}

std::vector<ParseRule> parse_rules(const Lexicon& lex) {
  std::vector<ParseRule> out;
  for (std::size_t i = 0; i < lex.relators.size(); ++i) {
    const auto& r = lex.relators[i];
    auto it = std::find_if(r.items.begin(), r.items.end(), [](const SchemeItem& s) { return s.is_phon(); });
    bool usable = r.phon_count() == 1 && it->sign < 0;
    if (!usable) {
      if (!lex.raw) throw GrammarError({{r.line, 1, "relator needs exactly one inverted word: " + r.str()}});
      continue;
    }
    auto w = static_cast<std::size_t>(it - r.items.begin());
    ParseRule rule{it->name, {r.items.begin() + static_cast<std::ptrdiff_t>(w) + 1, r.items.end()}, i};
    rule.rhs.insert(rule.rhs.end(), r.items.begin(), it);
    out.push_back(std::move(rule));
  }
  return out;
}

std::set<std::string> identifier_metavars(std::span<const SchemeItem> items) {
  std::set<std::string> out;
  std::function<void(const term::Term&)> walk = [&](const term::Term& t) {
    if (t.is_app() && t.args()[0].is_metavar()) out.insert(t.args()[0].name());
    for (const auto& a : t.args()) walk(a);
  };
  for (const auto& it : items)
    if (it.is_log()) walk(it.term);
  return out;
}

}  // namespace ggroup::lexicon
