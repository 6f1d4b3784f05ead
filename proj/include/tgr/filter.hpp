#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgr/word.hpp"

namespace tgr {

/// A regular set of words given as an expression over symbol-class atoms,
/// concatenation, union and Kleene star.
///
/// Text syntax: `{a b}` is the atom matching one of the listed symbols, `@` is
/// the empty word, juxtaposition concatenates, `|` is union, postfix `*` is
/// star, parentheses group. Tokens inside braces are whitespace-separated, so
/// `{#}` is the atom for the symbol `#`.
class FilterPattern {
 public:
  enum class Kind { atom, epsilon, concat, alternation, star };

  struct Node {
    Kind kind;
    std::set<Symbol> atom;                      // kind == atom
    std::vector<std::shared_ptr<const Node>> children;  // concat / alternation / star (one child)
  };
  using NodePtr = std::shared_ptr<const Node>;

  static FilterPattern atom(std::set<Symbol> symbols) {
    return FilterPattern(std::make_shared<const Node>(Node{Kind::atom, std::move(symbols), {}}));
  }
  static FilterPattern atom(const Alphabet& a) { return atom(a.symbols()); }
  static FilterPattern symbol(Symbol s) { return atom(std::set<Symbol>{s}); }
  static FilterPattern epsilon() { return FilterPattern(std::make_shared<const Node>(Node{Kind::epsilon, {}, {}})); }

  static FilterPattern concat(std::vector<FilterPattern> parts) { return combine(Kind::concat, std::move(parts)); }
  static FilterPattern alternation(std::vector<FilterPattern> parts) {
    return combine(Kind::alternation, std::move(parts));
  }
  static FilterPattern star(const FilterPattern& inner) {
    return FilterPattern(std::make_shared<const Node>(Node{Kind::star, {}, {inner.root_}}));
  }

  static FilterPattern parse(std::string_view text);

  bool matches(const Word& w) const;

  const Node& root() const noexcept { return *root_; }

  std::string str() const {
    std::string out;
    print(*root_, 0, out);
    return out;
  }

  friend bool operator==(const FilterPattern& a, const FilterPattern& b) { return a.str() == b.str(); }

 private:
  // Thompson automaton: each state has ε-edges and at most one class edge.
  struct Nfa {
    struct State {
      std::vector<int> eps;
      const std::set<Symbol>* cls = nullptr;
      int next = -1;
    };
    std::vector<State> states;
    int start = 0;
    int accept = 0;
  };

  explicit FilterPattern(NodePtr root) : root_(std::move(root)), nfa_(std::make_shared<const Nfa>(build(*root_))) {}

  static FilterPattern combine(Kind kind, std::vector<FilterPattern> parts) {
    if (parts.size() == 1) return parts.front();
    Node n{kind, {}, {}};
    for (auto& p : parts) n.children.push_back(p.root_);
    if (kind == Kind::concat && n.children.empty()) return epsilon();
    if (kind == Kind::alternation && n.children.empty()) return atom(std::set<Symbol>{});
    return FilterPattern(std::make_shared<const Node>(std::move(n)));
  }

  static Nfa build(const Node& root) {
    Nfa nfa;
    auto fresh = [&nfa] {
      nfa.states.emplace_back();
      return static_cast<int>(nfa.states.size() - 1);
    };
    // Returns (entry, exit) for the fragment.
    auto frag = [&](auto& self, const Node& n) -> std::pair<int, int> {
      switch (n.kind) {
        case Kind::atom: {
          int a = fresh(), b = fresh();
          nfa.states[a].cls = &n.atom;
          nfa.states[a].next = b;
          return {a, b};
        }
        case Kind::epsilon: {
          int a = fresh(), b = fresh();
          nfa.states[a].eps.push_back(b);
          return {a, b};
        }
        case Kind::concat: {
          int entry = fresh(), cur = entry;
          for (const auto& c : n.children) {
            auto [s, e] = self(self, *c);
            nfa.states[cur].eps.push_back(s);
            cur = e;
          }
          return {entry, cur};
        }
        case Kind::alternation: {
          int a = fresh(), b = fresh();
          for (const auto& c : n.children) {
            auto [s, e] = self(self, *c);
            nfa.states[a].eps.push_back(s);
            nfa.states[e].eps.push_back(b);
          }
          return {a, b};
        }
        case Kind::star: {
          int a = fresh(), b = fresh();
          auto [s, e] = self(self, *n.children.front());
          nfa.states[a].eps.push_back(s);
          nfa.states[a].eps.push_back(b);
          nfa.states[e].eps.push_back(s);
          nfa.states[e].eps.push_back(b);
          return {a, b};
        }
      }
      return {0, 0};
    };
    auto [s, e] = frag(frag, root);
    nfa.start = s;
    nfa.accept = e;
    return nfa;
  }

  // Precedence: 0 alternation, 1 concat, 2 star/atom.
  static void print(const Node& n, int ctx, std::string& out) {
    switch (n.kind) {
      case Kind::atom: {
        out += '{';
        bool first = true;
        for (Symbol s : n.atom) {
          if (!first) out += ' ';
          first = false;
          out += s.token();
        }
        out += '}';
        return;
      }
      case Kind::epsilon:
        out += kEmptyWordToken;
        return;
      case Kind::concat:
      case Kind::alternation: {
        const int prec = n.kind == Kind::concat ? 1 : 0;
        if (ctx > prec) out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
          if (i) out += n.kind == Kind::concat ? " " : " | ";
          print(*n.children[i], prec + 1, out);
        }
        if (ctx > prec) out += ')';
        return;
      }
      case Kind::star:
        print(*n.children.front(), 3, out);
        out += '*';
        return;
    }
  }

  NodePtr root_;
  std::shared_ptr<const Nfa> nfa_;
};

inline bool FilterPattern::matches(const Word& w) const {
  const Nfa& nfa = *nfa_;
  const std::size_t n = nfa.states.size();
  std::vector<char> in_set(n, 0);
  std::vector<int> current, stack;

  auto add = [&](std::vector<int>& set, int s) {
    stack.push_back(s);
    while (!stack.empty()) {
      int q = stack.back();
      stack.pop_back();
      if (in_set[q]) continue;
      in_set[q] = 1;
      set.push_back(q);
      for (int e : nfa.states[q].eps) stack.push_back(e);
    }
  };

  add(current, nfa.start);
  for (Symbol sym : w) {
    for (int q : current) in_set[q] = 0;
    std::vector<int> next;
    for (int q : current) {
      const auto& st = nfa.states[q];
      if (st.cls && st.cls->count(sym)) add(next, st.next);
    }
    for (int q : next) in_set[q] = 1;
    current = std::move(next);
    if (current.empty()) return false;
  }
  for (int q : current) {
    if (q == nfa.accept) return true;
  }
  return false;
}

namespace detail {

class FilterParser {
 public:
  explicit FilterParser(std::string_view text) : text_(text) {}

  FilterPattern parse() {
    FilterPattern p = alternation();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return p;
  }

 private:
  void skip() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError("filter pattern: " + msg + " at offset " + std::to_string(pos_));
  }

  FilterPattern alternation() {
    std::vector<FilterPattern> parts{sequence()};
    while (peek('|')) {
      ++pos_;
      parts.push_back(sequence());
    }
    return FilterPattern::alternation(std::move(parts));
  }

  FilterPattern sequence() {
    std::vector<FilterPattern> parts;
    while (true) {
      skip();
      if (pos_ >= text_.size() || text_[pos_] == '|' || text_[pos_] == ')') break;
      parts.push_back(postfix());
    }
    if (parts.empty()) fail("empty sequence");
    return FilterPattern::concat(std::move(parts));
  }

  FilterPattern postfix() {
    FilterPattern p = primary();
    while (peek('*')) {
      ++pos_;
      p = FilterPattern::star(p);
    }
    return p;
  }

  FilterPattern primary() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      FilterPattern p = alternation();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return p;
    }
    if (c == '{') {
      const auto close = text_.find('}', pos_);
      if (close == std::string_view::npos) fail("unterminated '{'");
      std::set<Symbol> symbols;
      for (auto t : split_ws(text_.substr(pos_ + 1, close - pos_ - 1))) symbols.emplace(t);
      pos_ = close + 1;
      return FilterPattern::atom(std::move(symbols));
    }
    if (text_.substr(pos_, kEmptyWordToken.size()) == kEmptyWordToken) {
      pos_ += kEmptyWordToken.size();
      return FilterPattern::epsilon();
    }
    fail("expected '{', '(' or '@'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline FilterPattern FilterPattern::parse(std::string_view text) { return detail::FilterParser(text).parse(); }

inline bool matches(const FilterPattern& p, const Word& w) { return p.matches(w); }

}  // namespace tgr
