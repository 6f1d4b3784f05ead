#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tgr/word.hpp"

namespace tgr {

enum class GrammarKind { regular, kuroda };

inline const char* to_string(GrammarKind k) { return k == GrammarKind::regular ? "regular" : "kuroda"; }

/// A rewriting rule lhs → rhs. An empty rhs is λ.
struct Rule {
  Word lhs;
  Word rhs;

  std::string str() const { return lhs.str() + " -> " + rhs.str(); }

  friend bool operator==(const Rule&, const Rule&) = default;
  friend auto operator<=>(const Rule& a, const Rule& b) {
    if (auto c = a.lhs <=> b.lhs; c != 0) return c;
    return a.rhs <=> b.rhs;
  }
};

/// Declared symbol sets, start symbol and rules shared by both grammar forms.
class GrammarData {
 public:
  const Alphabet& nonterminals() const noexcept { return nonterminals_; }
  const Alphabet& terminals() const noexcept { return terminals_; }
  Symbol start() const noexcept { return start_; }
  const std::vector<Rule>& rules() const noexcept { return rules_; }

  bool is_terminal_word(const Word& w) const { return terminals_.covers(w); }

 protected:
  GrammarData(Alphabet nonterminals, Alphabet terminals, Symbol start, std::vector<Rule> rules)
      : nonterminals_(std::move(nonterminals)), terminals_(std::move(terminals)), start_(start) {
    if (nonterminals_.empty()) throw ValidationError("grammar declares no nonterminals");
    if (!nonterminals_.disjoint(terminals_)) throw ValidationError("nonterminals and terminals overlap");
    if (!nonterminals_.contains(start_)) {
      throw ValidationError("start symbol '" + start_.token() + "' is not a declared nonterminal");
    }
    // Set semantics for rules, file order kept.
    for (auto& r : rules) {
      if (std::find(rules_.begin(), rules_.end(), r) == rules_.end()) rules_.push_back(std::move(r));
    }
  }

  void check_declared(const Rule& r) const {
    for (const Word* side : {&r.lhs, &r.rhs}) {
      for (Symbol s : *side) {
        if (!nonterminals_.contains(s) && !terminals_.contains(s)) {
          throw ValidationError("rule " + r.str() + " uses undeclared symbol '" + s.token() + "'");
        }
      }
    }
  }

  bool nt(Symbol s) const { return nonterminals_.contains(s); }
  bool t(Symbol s) const { return terminals_.contains(s); }

 private:
  Alphabet nonterminals_;
  Alphabet terminals_;
  Symbol start_;
  std::vector<Rule> rules_;
};

/// Right-linear grammar with rules X → aY, X → a, X → λ.
class RegularGrammar : public GrammarData {
 public:
  RegularGrammar(Alphabet nonterminals, Alphabet terminals, Symbol start, std::vector<Rule> rules)
      : GrammarData(std::move(nonterminals), std::move(terminals), start, std::move(rules)) {
    for (const Rule& r : this->rules()) check_shape(r);
  }

  static constexpr GrammarKind kind = GrammarKind::regular;

  // Rule shapes, named by what they produce.
  bool is_chain(const Rule& r) const { return r.rhs.size() == 2; }     // X → aY
  bool is_terminal(const Rule& r) const { return r.rhs.size() == 1; }  // X → a
  bool is_erasing(const Rule& r) const { return r.rhs.empty(); }       // X → λ

  void check_shape(const Rule& r) const {
    check_declared(r);
    const bool ok = r.lhs.size() == 1 && nt(r.lhs[0]) &&
                    (r.rhs.empty() || (r.rhs.size() == 1 && t(r.rhs[0])) ||
                     (r.rhs.size() == 2 && t(r.rhs[0]) && nt(r.rhs[1])));
    if (!ok) throw ValidationError("rule " + r.str() + " is not of the form X -> a Y, X -> a or X -> @");
  }
};

/// Type-0 grammar in Kuroda normal form: A → EC, AE → CD, A → a, A → λ.
class KurodaGrammar : public GrammarData {
 public:
  KurodaGrammar(Alphabet nonterminals, Alphabet terminals, Symbol start, std::vector<Rule> rules)
      : GrammarData(std::move(nonterminals), std::move(terminals), start, std::move(rules)) {
    for (const Rule& r : this->rules()) check_shape(r);
  }

  static constexpr GrammarKind kind = GrammarKind::kuroda;

  void check_shape(const Rule& r) const {
    check_declared(r);
    auto all_nt = [&](const Word& w) { return std::all_of(w.begin(), w.end(), [&](Symbol s) { return nt(s); }); };
    bool ok = false;
    if (r.lhs.size() == 1 && nt(r.lhs[0])) {
      ok = r.rhs.empty() || (r.rhs.size() == 1 && t(r.rhs[0])) || (r.rhs.size() == 2 && all_nt(r.rhs));
    } else if (r.lhs.size() == 2 && all_nt(r.lhs)) {
      ok = r.rhs.size() == 2 && all_nt(r.rhs);
    }
    if (!ok) {
      throw ValidationError("rule " + r.str() + " is not of the form A -> E C, A E -> C D, A -> a or A -> @");
    }
  }

  // No λ-rules: sentential forms never shrink along a derivation.
  bool non_contracting() const {
    return std::none_of(rules().begin(), rules().end(), [](const Rule& r) { return r.rhs.empty(); });
  }
};

using AnyGrammar = std::variant<RegularGrammar, KurodaGrammar>;

inline GrammarKind kind_of(const AnyGrammar& g) {
  return std::holds_alternative<RegularGrammar>(g) ? GrammarKind::regular : GrammarKind::kuroda;
}

/// Parse the line-oriented grammar file format:
///
///     type regular|kuroda
///     nonterminals S X
///     terminals a b
///     start S
///     rule S -> a X
///     rule X -> @
///
/// Lines beginning with "# " are comments.
inline AnyGrammar parse_grammar(std::istream& in) {
  std::optional<GrammarKind> kind;
  std::optional<Alphabet> nonterminals, terminals;
  std::optional<Symbol> start;
  std::vector<std::pair<Rule, std::size_t>> rules;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("# ", 0) == 0) continue;
    auto tokens = detail::split_ws(line);
    if (tokens.empty()) continue;
    const std::string_view head = tokens[0];
    if (!kind && head != "type") throw ParseError("expected 'type regular' or 'type kuroda' first", lineno);
    auto rest = std::vector<std::string_view>(tokens.begin() + 1, tokens.end());
    auto to_alphabet = [&] {
      Alphabet a;
      for (auto t : rest) {
        if (t == kEmptyWordToken) throw ParseError("'@' cannot be declared as a symbol", lineno);
        a.insert(Symbol(t));
      }
      return a;
    };
    if (head == "type") {
      if (kind) throw ParseError("duplicate 'type' line", lineno);
      if (rest.size() != 1 || (rest[0] != "regular" && rest[0] != "kuroda")) {
        throw ParseError("type must be 'regular' or 'kuroda'", lineno);
      }
      kind = rest[0] == "regular" ? GrammarKind::regular : GrammarKind::kuroda;
    } else if (head == "nonterminals") {
      if (nonterminals) throw ParseError("duplicate 'nonterminals' line", lineno);
      nonterminals = to_alphabet();
    } else if (head == "terminals") {
      if (terminals) throw ParseError("duplicate 'terminals' line", lineno);
      terminals = to_alphabet();
    } else if (head == "start") {
      if (start) throw ParseError("duplicate 'start' line", lineno);
      if (rest.size() != 1) throw ParseError("'start' takes exactly one symbol", lineno);
      start = Symbol(rest[0]);
    } else if (head == "rule") {
      auto arrow = std::find(rest.begin(), rest.end(), std::string_view("->"));
      if (arrow == rest.end()) throw ParseError("rule without '->'", lineno);
      if (arrow == rest.begin()) throw ParseError("rule with empty left-hand side", lineno);
      if (arrow + 1 == rest.end()) throw ParseError("rule with empty right-hand side (use '@' for the empty word)", lineno);
      auto side = [&](auto first, auto last) {
        std::string joined;
        for (auto it = first; it != last; ++it) {
          if (!joined.empty()) joined += ' ';
          joined += *it;
        }
        return Word::parse(joined);
      };
      try {
        rules.push_back({Rule{side(rest.begin(), arrow), side(arrow + 1, rest.end())}, lineno});
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
      if (rules.back().first.lhs.empty()) throw ParseError("rule left-hand side cannot be '@'", lineno);
    } else {
      throw ParseError("unknown directive '" + std::string(head) + "'", lineno);
    }
  }
  if (!kind) throw ParseError("missing 'type' line");
  if (!nonterminals) throw ParseError("missing 'nonterminals' line");
  if (!terminals) throw ParseError("missing 'terminals' line");
  if (!start) throw ParseError("missing 'start' line");

  std::vector<Rule> plain;
  for (const auto& [r, ln] : rules) plain.push_back(r);

  // Declarations are validated first; rule errors then carry their line.
  auto build = [&]<class G>() -> AnyGrammar {
    G declared(*nonterminals, *terminals, *start, {});
    for (const auto& [r, ln] : rules) {
      try {
        declared.check_shape(r);
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), ln);
      }
    }
    return G(*nonterminals, *terminals, *start, plain);
  };
  try {
    if (*kind == GrammarKind::regular) return build.template operator()<RegularGrammar>();
    return build.template operator()<KurodaGrammar>();
  } catch (const ValidationError& e) {
    throw ParseError(e.what());
  }
}

inline AnyGrammar parse_grammar(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_grammar(in);
}

inline std::string format_grammar(const GrammarData& g, GrammarKind kind) {
  std::string out = std::string("type ") + to_string(kind) + "\n";
  out += "nonterminals " + g.nonterminals().str() + "\n";
  out += "terminals " + g.terminals().str() + "\n";
  out += "start " + g.start().token() + "\n";
  for (const Rule& r : g.rules()) out += "rule " + r.str() + "\n";
  return out;
}

/// Bounds for derivation searches over sentential forms.
struct SearchCaps {
  // Longest sentential form kept; 0 selects target length + 4.
  std::size_t max_form_length = 0;
  std::size_t max_depth = 64;
  std::size_t max_visited = 500'000;
};

struct Enumeration {
  FiniteLanguage language;
  bool exhaustive = false;
};

struct MembershipVerdict {
  enum class Status { member, non_member, unknown };
  Status status = Status::unknown;
  // From the start symbol to the queried word, when member.
  std::vector<Word> witness;

  bool member() const noexcept { return status == Status::member; }
};

inline const char* to_string(MembershipVerdict::Status s) {
  switch (s) {
    case MembershipVerdict::Status::member: return "member";
    case MembershipVerdict::Status::non_member: return "non_member";
    case MembershipVerdict::Status::unknown: return "unknown";
  }
  return "unknown";
}

/// A single rewrite: rule index into g.rules() applied at offset `position`.
struct RuleApplication {
  std::size_t rule;
  std::size_t position;
};

inline Word apply_at(const Word& form, const Rule& r, std::size_t pos) {
  Word out = form.prefix(pos);
  out.append(r.rhs);
  out.append(form.span().subspan(pos + r.lhs.size()));
  return out;
}

/// Every (rule, position) that rewrites `from` into `to` in one step.
inline std::vector<RuleApplication> one_step_applications(const GrammarData& g, const Word& from, const Word& to) {
  std::vector<RuleApplication> out;
  for (std::size_t i = 0; i < g.rules().size(); ++i) {
    const Rule& r = g.rules()[i];
    if (to.size() + r.lhs.size() != from.size() + r.rhs.size()) continue;
    for (std::size_t pos : from.occurrences(r.lhs)) {
      if (apply_at(from, r, pos) == to) out.push_back({i, pos});
    }
  }
  return out;
}

namespace detail {

// Breadth-first exploration of sentential forms from the start symbol.
struct FormSearch {
  struct Outcome {
    bool drained = false;        // frontier emptied without hitting depth/visited caps
    bool pruned_length = false;  // some form was dropped for exceeding the length cap
  };

  std::vector<Word> forms;
  std::vector<std::size_t> parent;  // index into forms; self for the root
  std::unordered_map<Word, std::size_t, WordHash> index;

  template <class OnForm>
  Outcome run(const GrammarData& g, std::size_t length_cap, std::size_t depth_cap, std::size_t visited_cap,
              OnForm on_form) {
    Outcome out;
    const Word root{g.start()};
    forms.push_back(root);
    parent.push_back(0);
    index.emplace(root, 0);
    if (!on_form(std::size_t{0})) return out;

    std::size_t layer_begin = 0;
    for (std::size_t depth = 0;; ++depth) {
      const std::size_t layer_end = forms.size();
      if (layer_begin == layer_end) {
        out.drained = true;
        return out;
      }
      if (depth >= depth_cap) return out;
      for (std::size_t f = layer_begin; f < layer_end; ++f) {
        for (const Rule& r : g.rules()) {
          for (std::size_t pos : forms[f].occurrences(r.lhs)) {
            Word next = apply_at(forms[f], r, pos);
            if (next.size() > length_cap) {
              out.pruned_length = true;
              continue;
            }
            if (index.count(next)) continue;
            if (forms.size() >= visited_cap) return out;
            index.emplace(next, forms.size());
            forms.push_back(std::move(next));
            parent.push_back(f);
            if (!on_form(forms.size() - 1)) return out;
          }
        }
      }
      layer_begin = layer_end;
    }
  }

  std::vector<Word> path_to(std::size_t i) const {
    std::vector<Word> out{forms[i]};
    while (parent[i] != i) {
      i = parent[i];
      out.push_back(forms[i]);
    }
    std::reverse(out.begin(), out.end());
    return out;
  }
};

inline std::size_t effective_cap(const SearchCaps& caps, std::size_t target) {
  return caps.max_form_length == 0 ? target + 4 : caps.max_form_length;
}

}  // namespace detail

/// L(G) ∩ Σ^{≤k}. Exhaustive for regular grammars (right-linear sentential
/// forms never need more than k+1 symbols).
inline Enumeration enumerate_language(const RegularGrammar& g, std::size_t k, const SearchCaps& = {}) {
  FiniteLanguage out(g.terminals());
  detail::FormSearch search;
  search.run(g, k + 1, std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max(),
             [&](std::size_t i) {
               const Word& f = search.forms[i];
               if (f.size() <= k && g.is_terminal_word(f)) out.insert(f);
               return true;
             });
  return {std::move(out), true};
}

/// A subset of L(G) ∩ Σ^{≤k} found within caps; exhaustive when the bounded
/// search provably saw every derivation of such words.
inline Enumeration enumerate_language(const KurodaGrammar& g, std::size_t k, const SearchCaps& caps = {}) {
  FiniteLanguage out(g.terminals());
  // Without λ-rules no derivation of a word of length ≤ k passes through a
  // longer form, so k itself is an exact length cap.
  std::size_t cap = detail::effective_cap(caps, k);
  if (g.non_contracting()) cap = std::min(cap, k);
  detail::FormSearch search;
  auto outcome = search.run(g, cap, caps.max_depth, caps.max_visited, [&](std::size_t i) {
    const Word& f = search.forms[i];
    if (f.size() <= k && g.is_terminal_word(f)) out.insert(f);
    return true;
  });
  const bool complete = outcome.drained && (!outcome.pruned_length || (g.non_contracting() && cap >= k));
  return {std::move(out), complete};
}

inline Enumeration enumerate_language(const AnyGrammar& g, std::size_t k, const SearchCaps& caps = {}) {
  return std::visit([&](const auto& gg) { return enumerate_language(gg, k, caps); }, g);
}

inline MembershipVerdict membership(const RegularGrammar& g, const Word& w, const SearchCaps& = {}) {
  detail::FormSearch search;
  std::optional<std::size_t> hit;
  search.run(g, w.size() + 1, std::numeric_limits<std::size_t>::max(), std::numeric_limits<std::size_t>::max(),
             [&](std::size_t i) {
               if (search.forms[i] == w) {
                 hit = i;
                 return false;
               }
               return true;
             });
  if (hit) return {MembershipVerdict::Status::member, search.path_to(*hit)};
  return {MembershipVerdict::Status::non_member, {}};
}

inline MembershipVerdict membership(const KurodaGrammar& g, const Word& w, const SearchCaps& caps = {}) {
  std::size_t cap = detail::effective_cap(caps, w.size());
  if (g.non_contracting()) cap = std::min(cap, w.size());
  detail::FormSearch search;
  std::optional<std::size_t> hit;
  auto outcome = search.run(g, cap, caps.max_depth, caps.max_visited, [&](std::size_t i) {
    if (search.forms[i] == w) {
      hit = i;
      return false;
    }
    return true;
  });
  if (hit) return {MembershipVerdict::Status::member, search.path_to(*hit)};
  const bool complete = outcome.drained && (!outcome.pruned_length || (g.non_contracting() && cap >= w.size()));
  return {complete ? MembershipVerdict::Status::non_member : MembershipVerdict::Status::unknown, {}};
}

inline MembershipVerdict membership(const AnyGrammar& g, const Word& w, const SearchCaps& caps = {}) {
  return std::visit([&](const auto& gg) { return membership(gg, w, caps); }, g);
}

}  // namespace tgr
