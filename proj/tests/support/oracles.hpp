#pragma once

// Brute-force reference implementations. They work on plain token vectors and
// rebuild results from the template parts, so they share no code path with the
// library beyond Word construction.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "tgr/tgr.hpp"

namespace oracle {

using Tokens = std::vector<std::string>;

inline Tokens toks(const tgr::Word& w) {
  Tokens out;
  for (tgr::Symbol s : w) out.push_back(s.token());
  return out;
}

inline tgr::Word word(const Tokens& t) {
  std::vector<tgr::Symbol> s;
  for (const auto& x : t) s.emplace_back(x);
  return tgr::Word(s);
}

inline Tokens cat(std::initializer_list<Tokens> parts) {
  Tokens out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

inline Tokens sub(const Tokens& t, std::size_t from, std::size_t len) {
  return Tokens(t.begin() + static_cast<long>(from), t.begin() + static_cast<long>(from + len));
}

inline bool at(const Tokens& w, std::size_t pos, const Tokens& f) {
  if (pos + f.size() > w.size()) return false;
  return std::equal(f.begin(), f.end(), w.begin() + static_cast<long>(pos));
}

inline bool factor(const Tokens& w, const Tokens& f) {
  for (std::size_t i = 0; i + f.size() <= w.size(); ++i) {
    if (at(w, i, f)) return true;
  }
  return false;
}

/// {w | (x, y) ⊢_t w}: every split α·β·γ of t and every pair of positions,
/// with w assembled as u·α·β·γ·v.
inline std::set<tgr::Word> recombine(const tgr::Word& x, const tgr::Word& y, const tgr::Word& t, std::size_t n1,
                                     std::size_t n2) {
  const Tokens X = toks(x), Y = toks(y), T = toks(t);
  std::set<tgr::Word> out;
  for (std::size_t a = 0; a <= T.size(); ++a) {
    for (std::size_t b = 0; a + b <= T.size(); ++b) {
      const std::size_t g = T.size() - a - b;
      if (a < n1 || g < n1 || b < n2) continue;
      const Tokens alpha = sub(T, 0, a), beta = sub(T, a, b), gamma = sub(T, a + b, g);
      for (std::size_t i = 0; i <= X.size(); ++i) {
        if (!at(X, i, cat({alpha, beta}))) continue;
        const Tokens u = sub(X, 0, i);
        for (std::size_t j = 0; j <= Y.size(); ++j) {
          if (!at(Y, j, cat({beta, gamma}))) continue;
          const std::size_t vstart = j + b + g;
          const Tokens v = sub(Y, vstart, Y.size() - vstart);
          out.insert(word(cat({u, alpha, beta, gamma, v})));
        }
      }
    }
  }
  return out;
}

/// {w | (x, y) ⊢ᶜ_tp w}: x = u·α·β·d1·d, y = e·e1·β·γ·v, contexts checked as factors.
inline std::set<tgr::Word> recombine_pc(const tgr::Word& x, const tgr::Word& y, const tgr::PCTemplate& tp,
                                        std::size_t n1, std::size_t n2) {
  const Tokens X = toks(x), Y = toks(y), T = toks(tp.body), E1 = toks(tp.left_context), D1 = toks(tp.right_context);
  for (const auto& c : tp.x_contexts) {
    if (!factor(X, toks(c))) return {};
  }
  for (const auto& c : tp.y_contexts) {
    if (!factor(Y, toks(c))) return {};
  }
  std::set<tgr::Word> out;
  for (std::size_t a = n1; a <= T.size(); ++a) {
    for (std::size_t b = n2; a + b + n1 <= T.size(); ++b) {
      const Tokens alpha = sub(T, 0, a), beta = sub(T, a, b), gamma = sub(T, a + b, T.size() - a - b);
      for (std::size_t i = 0; i <= X.size(); ++i) {
        if (!at(X, i, cat({alpha, beta, D1}))) continue;
        for (std::size_t j = 0; j <= Y.size(); ++j) {
          if (!at(Y, j, cat({E1, beta, gamma}))) continue;
          const std::size_t vstart = j + E1.size() + beta.size() + gamma.size();
          out.insert(word(cat({sub(X, 0, i), alpha, beta, gamma, sub(Y, vstart, Y.size() - vstart)})));
        }
      }
    }
  }
  return out;
}

inline std::set<tgr::Word> step(const std::set<tgr::Word>& templates, const std::set<tgr::Word>& l, std::size_t n1,
                                std::size_t n2) {
  std::set<tgr::Word> out;
  for (const auto& x : l) {
    for (const auto& y : l) {
      for (const auto& t : templates) {
        auto r = recombine(x, y, t, n1, n2);
        out.insert(r.begin(), r.end());
      }
    }
  }
  return out;
}

inline std::set<tgr::Word> step_pc(const std::vector<tgr::PCTemplate>& templates, const std::set<tgr::Word>& l,
                                   std::size_t n1, std::size_t n2) {
  std::set<tgr::Word> out;
  for (const auto& x : l) {
    for (const auto& y : l) {
      for (const auto& t : templates) {
        auto r = recombine_pc(x, y, t, n1, n2);
        out.insert(r.begin(), r.end());
      }
    }
  }
  return out;
}

/// Iterated naive step with words longer than max_len discarded.
inline std::set<tgr::Word> closure(const std::set<tgr::Word>& templates, std::set<tgr::Word> l, std::size_t n1,
                                   std::size_t n2, std::size_t max_len, std::size_t rounds) {
  for (std::size_t r = 0; r < rounds; ++r) {
    std::set<tgr::Word> next = l;
    for (const auto& w : step(templates, l, n1, n2)) {
      if (w.size() <= max_len) next.insert(w);
    }
    if (next == l) break;
    l = std::move(next);
  }
  return l;
}

/// Backtracking matcher over the pattern tree: the set of end positions reachable
/// from `from` while matching node n.
inline std::set<std::size_t> ends(const tgr::FilterPattern::Node& n, const tgr::Word& w, std::size_t from) {
  using K = tgr::FilterPattern::Kind;
  switch (n.kind) {
    case K::atom:
      if (from < w.size() && n.atom.count(w[from])) return {from + 1};
      return {};
    case K::epsilon: return {from};
    case K::concat: {
      std::set<std::size_t> cur{from};
      for (const auto& c : n.children) {
        std::set<std::size_t> next;
        for (std::size_t p : cur) {
          auto e = ends(*c, w, p);
          next.insert(e.begin(), e.end());
        }
        cur = std::move(next);
      }
      return cur;
    }
    case K::alternation: {
      std::set<std::size_t> out;
      for (const auto& c : n.children) {
        auto e = ends(*c, w, from);
        out.insert(e.begin(), e.end());
      }
      return out;
    }
    case K::star: {
      std::set<std::size_t> seen{from};
      std::vector<std::size_t> todo{from};
      while (!todo.empty()) {
        const std::size_t p = todo.back();
        todo.pop_back();
        for (std::size_t e : ends(*n.children.front(), w, p)) {
          if (seen.insert(e).second) todo.push_back(e);
        }
      }
      return seen;
    }
  }
  return {};
}

inline bool matches(const tgr::FilterPattern& p, const tgr::Word& w) { return ends(p.root(), w, 0).count(w.size()) > 0; }

/// A regular grammar read as a finite automaton: nonterminals are states, plus
/// one final state for X → a.
inline bool accepts(const tgr::RegularGrammar& g, const tgr::Word& w) {
  const std::string final_state = "\x01final";
  std::set<std::string> states{g.start().token()};
  for (tgr::Symbol a : w) {
    std::set<std::string> next;
    for (const auto& r : g.rules()) {
      if (!states.count(r.lhs[0].token()) || r.rhs.empty() || r.rhs[0] != a) continue;
      next.insert(r.rhs.size() == 2 ? r.rhs[1].token() : final_state);
    }
    states = std::move(next);
  }
  if (states.count(final_state)) return true;
  return std::any_of(g.rules().begin(), g.rules().end(),
                     [&](const tgr::Rule& r) { return r.rhs.empty() && states.count(r.lhs[0].token()); });
}

inline std::set<tgr::Word> automaton_language(const tgr::RegularGrammar& g, std::size_t k) {
  std::set<tgr::Word> out;
  for (const auto& w : tgr::words_up_to(g.terminals(), k)) {
    if (accepts(g, w)) out.insert(w);
  }
  return out;
}

}  // namespace oracle
