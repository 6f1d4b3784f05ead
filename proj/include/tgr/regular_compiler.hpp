#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tgr/coding.hpp"
#include "tgr/filter.hpp"
#include "tgr/grammar.hpp"
#include "tgr/tgr_system.hpp"

namespace tgr {

/// A regular grammar encoded as a TGR system over N ∪ Σ ∪ {#} with n1 = n2 = 1,
/// a finite base language, a filter and a weak coding: L(G) = h(ρ*(base) ∩ filter).
struct CompiledRegular {
  TGRSystem system;
  FiniteLanguage base;
  FilterPattern filter;
  WeakCoding coding;
  // Which base group / template group and which rule(s) produced each word.
  std::map<Word, std::vector<std::string>> provenance;
};

// The end marker added to the grammar's symbols. Freshened if the grammar
// already uses "#".
inline Symbol end_marker_for(const GrammarData& g) {
  std::string token = "#";
  while (g.nonterminals().contains(Symbol(token)) || g.terminals().contains(Symbol(token))) token += "#";
  return Symbol(token);
}

/// {S}(ΣN)*(Σ{#} ∪ {##}): exactly the encodings of terminal derivations, ending
/// either in a terminal rule (…a #) or in an erasing rule (…X # #).
inline FilterPattern terminal_encoding_filter(const GrammarData& g, Symbol end) {
  using P = FilterPattern;
  return P::concat({P::symbol(g.start()),
                    P::star(P::concat({P::atom(g.terminals()), P::atom(g.nonterminals())})),
                    P::alternation({P::concat({P::atom(g.terminals()), P::symbol(end)}),
                                    P::concat({P::symbol(end), P::symbol(end)})})});
}

/// {S}(ΣN)*{#, ##}. Rejects every encoding that ends in a terminal rule
/// (S a1 X1 … a_n #); kept to show why terminal_encoding_filter is needed.
inline FilterPattern pairs_only_filter(const GrammarData& g, Symbol end) {
  using P = FilterPattern;
  return P::concat({P::symbol(g.start()),
                    P::star(P::concat({P::atom(g.terminals()), P::atom(g.nonterminals())})),
                    P::alternation({P::symbol(end), P::concat({P::symbol(end), P::symbol(end)})})});
}

inline CompiledRegular compile_regular(const RegularGrammar& g) {
  const Symbol end = end_marker_for(g);
  const Alphabet sigma_prime = g.nonterminals() | g.terminals() | Alphabet{end};

  std::map<Word, std::vector<std::string>> provenance;
  std::set<Word> base, templates;
  auto note = [&](std::set<Word>& into, const Word& w, std::string why) {
    into.insert(w);
    auto& v = provenance[w];
    if (std::find(v.begin(), v.end(), why) == v.end()) v.push_back(std::move(why));
  };

  for (const Rule& r : g.rules()) {
    const Symbol x = r.lhs[0];
    if (g.is_chain(r)) {
      const Symbol a = r.rhs[0], y = r.rhs[1];
      if (x == g.start()) note(base, Word{x, a, y}, "L2 " + r.str());
      if (y == x) note(base, Word{x, a, x}, "L4 " + r.str());
      note(base, Word{x, a, y}, "L3 " + r.str());
    } else if (g.is_terminal(r)) {
      const Symbol a = r.rhs[0];
      if (x == g.start()) note(base, Word{x, a, end}, "L1 " + r.str());
      note(base, Word{x, a, end}, "L5 " + r.str());
    } else {
      note(base, Word{x, end, end}, "L6 " + r.str());
    }
  }

  // Templates are indexed by pairs (Y → aX, rule for X).
  for (const Rule& first : g.rules()) {
    if (!g.is_chain(first)) continue;
    const Symbol a = first.rhs[0], x = first.rhs[1];
    if (first.lhs[0] == x) note(templates, Word{a, x, a}, "T2 " + first.str());
    for (const Rule& second : g.rules()) {
      if (second.lhs[0] != x) continue;
      if (g.is_chain(second) || g.is_terminal(second)) {
        note(templates, Word{a, x, second.rhs[0]}, "T1 " + first.str() + " ; " + second.str());
      } else {
        note(templates, Word{a, x, end}, "T3 " + first.str() + " ; " + second.str());
      }
    }
  }

  WeakCoding coding;
  for (Symbol n : g.nonterminals()) coding.erase(n);
  for (Symbol t : g.terminals()) coding.keep(t);
  coding.erase(end);

  return CompiledRegular{TGRSystem(FiniteLanguage(sigma_prime, templates), sigma_prime, 1, 1),
                         FiniteLanguage(sigma_prime, base), terminal_encoding_filter(g, end), std::move(coding),
                         std::move(provenance)};
}

struct PipelineResult {
  FiniteLanguage language;
  bool exhaustive = false;
  ClosureResult closure;
};

/// h(closure ∩ filter) restricted to words of length ≤ k.
///
/// Exhaustive when the bounded closure reached its fixpoint and either nothing
/// was truncated or max_len covers every encoding of a word of length ≤ k
/// (2k + 3 symbols).
inline PipelineResult pipeline_language(const CompiledRegular& cr, std::size_t k, const ClosureLimits& limits) {
  ClosureResult c = closure(cr.system, cr.base, limits);
  Alphabet terminals;
  for (const auto& [from, to] : cr.coding.images()) {
    if (to) terminals.insert(*to);
  }
  FiniteLanguage out(terminals);
  for (const Word& w : c.language) {
    if (!cr.filter.matches(w)) continue;
    Word decoded = cr.coding.apply(w);
    if (decoded.size() <= k) out.insert(decoded);
  }
  const bool exhaustive = c.reached_fixpoint && (!c.truncated_by_length || limits.max_len >= 2 * k + 3);
  return {std::move(out), exhaustive, std::move(c)};
}

struct ComplexityReport {
  std::size_t rules = 0;           // n = |P|
  std::size_t template_count = 0;  // |T|
  std::size_t alphabet_size = 0;   // |Σ′|
  std::size_t our_bound = 0;       // n²
  std::size_t dm_bound = 0;        // n³, the three-rule-per-template construction
  bool within_bound = false;       // |T| ≤ n²
  bool alphabet_matches = false;   // |Σ′| = |N| + |Σ| + 1
};

inline ComplexityReport complexity_report(const CompiledRegular& cr, const RegularGrammar& g) {
  ComplexityReport r;
  r.rules = g.rules().size();
  r.template_count = cr.system.templates().size();
  r.alphabet_size = cr.system.alphabet().size();
  r.our_bound = r.rules * r.rules;
  r.dm_bound = r.rules * r.rules * r.rules;
  r.within_bound = r.template_count <= r.our_bound;
  r.alphabet_matches = r.alphabet_size == g.nonterminals().size() + g.terminals().size() + 1;
  return r;
}

struct EquivalenceReport {
  std::set<Word> missing;  // in L(G), not produced
  std::set<Word> extra;    // produced, not in L(G)
  bool inconclusive = false;
  FiniteLanguage produced;
  FiniteLanguage expected;

  bool pass() const noexcept { return !inconclusive && missing.empty() && extra.empty(); }
};

/// Compare the pipeline's output against the grammar up to length k.
inline EquivalenceReport equiv_check(const CompiledRegular& cr, const RegularGrammar& g, std::size_t k,
                                     const ClosureLimits& limits) {
  PipelineResult p = pipeline_language(cr, k, limits);
  Enumeration e = enumerate_language(g, k);
  EquivalenceReport r;
  std::set_difference(e.language.begin(), e.language.end(), p.language.begin(), p.language.end(),
                      std::inserter(r.missing, r.missing.end()));
  std::set_difference(p.language.begin(), p.language.end(), e.language.begin(), e.language.end(),
                      std::inserter(r.extra, r.extra.end()));
  r.inconclusive = !p.exhaustive;
  r.produced = std::move(p.language);
  r.expected = std::move(e.language);
  return r;
}

}  // namespace tgr
