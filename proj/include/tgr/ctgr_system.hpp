#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tgr/detail/closure_engine.hpp"
#include "tgr/tgr_system.hpp"
#include "tgr/word.hpp"

namespace tgr {

/// A template with deletion contexts and permitting contexts: (e1#αβγ#d1; C1, C2).
///
/// `left_context` (e1) sits in y just before β and is consumed; `right_context`
/// (d1) sits in x just after β and is consumed. Every word of `x_contexts` must
/// be a factor of x and every word of `y_contexts` a factor of y. λ in a context
/// set constrains nothing, so ∅ and {λ} are the same set after normalization.
struct PCTemplate {
  Word left_context;
  Word body;
  Word right_context;
  std::set<Word> x_contexts;
  std::set<Word> y_contexts;

  PCTemplate normalized() const {
    PCTemplate t = *this;
    t.x_contexts.erase(Word{});
    t.y_contexts.erase(Word{});
    return t;
  }

  friend bool operator==(const PCTemplate&, const PCTemplate&) = default;
  friend std::strong_ordering operator<=>(const PCTemplate& a, const PCTemplate& b) {
    if (auto c = a.left_context <=> b.left_context; c != 0) return c;
    if (auto c = a.body <=> b.body; c != 0) return c;
    if (auto c = a.right_context <=> b.right_context; c != 0) return c;
    if (auto c = std::lexicographical_compare_three_way(a.x_contexts.begin(), a.x_contexts.end(),
                                                        b.x_contexts.begin(), b.x_contexts.end());
        c != 0) {
      return c;
    }
    return std::lexicographical_compare_three_way(a.y_contexts.begin(), a.y_contexts.end(), b.y_contexts.begin(),
                                                  b.y_contexts.end());
  }
};

namespace tau_symbols {
inline Symbol hash() { return Symbol("#"); }
inline Symbol dollar() { return Symbol("$"); }
inline Symbol amp() { return Symbol("&"); }
}  // namespace tau_symbols

/// The word e1 # body # d1 $ a1 & … & ak $ b1 & … & bm with the (normalized)
/// context sets listed shortlex.
inline Word tau(const PCTemplate& tp) {
  const PCTemplate t = tp.normalized();
  Word out = t.left_context;
  out.append(tau_symbols::hash()).append(t.body).append(tau_symbols::hash()).append(t.right_context);
  auto list = [&](const std::set<Word>& contexts) {
    out.append(tau_symbols::dollar());
    bool first = true;
    for (const Word& c : contexts) {
      if (!first) out.append(tau_symbols::amp());
      first = false;
      out.append(c);
    }
  };
  list(t.x_contexts);
  list(t.y_contexts);
  return out;
}

/// Inverse of tau, for templates whose words avoid #, $ and &.
inline PCTemplate parse_tau(const Word& w) {
  std::vector<Word> parts(1);
  std::vector<Symbol> seps;
  for (Symbol s : w) {
    if (s == tau_symbols::hash() || s == tau_symbols::dollar()) {
      seps.push_back(s);
      parts.emplace_back();
    } else {
      parts.back().append(s);
    }
  }
  const std::vector<Symbol> expected{tau_symbols::hash(), tau_symbols::hash(), tau_symbols::dollar(),
                                     tau_symbols::dollar()};
  if (seps != expected) throw ParseError("not a template encoding: '" + w.str() + "'");
  auto contexts = [](const Word& list) {
    std::set<Word> out;
    if (list.empty()) return out;
    Word cur;
    for (Symbol s : list) {
      if (s == tau_symbols::amp()) {
        out.insert(cur);
        cur = Word{};
      } else {
        cur.append(s);
      }
    }
    out.insert(cur);
    return out;
  };
  return PCTemplate{parts[0], parts[1], parts[2], contexts(parts[3]), contexts(parts[4])}.normalized();
}

/// Template line format: `e1 | body | d1 | C1: w1 ; w2 | C2: w1`, "@" for λ.
inline PCTemplate parse_template_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '|') {
      fields.push_back(detail::trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (fields.size() != 5) throw ParseError("template line needs 5 '|'-separated fields");
  auto context_list = [](std::string_view field, std::string_view tag) {
    if (field.substr(0, tag.size()) != tag) throw ParseError("expected '" + std::string(tag) + "'");
    field.remove_prefix(tag.size());
    std::set<Word> out;
    if (detail::trim(field).empty()) return out;
    std::size_t from = 0;
    for (std::size_t i = 0; i <= field.size(); ++i) {
      if (i == field.size() || field[i] == ';') {
        out.insert(Word::parse(field.substr(from, i - from)));
        from = i + 1;
      }
    }
    return out;
  };
  return PCTemplate{Word::parse(fields[0]), Word::parse(fields[1]), Word::parse(fields[2]),
                    context_list(fields[3], "C1:"), context_list(fields[4], "C2:")}
      .normalized();
}

inline std::string format_template_line(const PCTemplate& tp) {
  const PCTemplate t = tp.normalized();
  auto list = [](const std::set<Word>& s) {
    std::string out;
    for (const Word& w : s) out += (out.empty() ? " " : " ; ") + w.str();
    return out;
  };
  return t.left_context.str() + " | " + t.body.str() + " | " + t.right_context.str() + " | C1:" +
         list(t.x_contexts) + " | C2:" + list(t.y_contexts);
}

/// A contextual recombination system (T, Σ, n1, n2) with permitting contexts.
class CTGRSystem {
 public:
  CTGRSystem(std::vector<PCTemplate> templates, Alphabet alphabet, std::size_t n1, std::size_t n2)
      : alphabet_(std::move(alphabet)), n1_(n1), n2_(n2) {
    if (n1_ == 0 || n2_ == 0) throw ValidationError("minimum MDS and pointer lengths must be positive");
    std::set<PCTemplate> unique;
    for (auto& t : templates) {
      PCTemplate n = t.normalized();
      check(n);
      unique.insert(std::move(n));
    }
    templates_.assign(unique.begin(), unique.end());
  }

  const std::vector<PCTemplate>& templates() const noexcept { return templates_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }

  bool has_template(const PCTemplate& t) const {
    return std::binary_search(templates_.begin(), templates_.end(), t.normalized());
  }

  std::vector<Split> splits(const PCTemplate& t) const { return admissible_splits(t.body.size(), n1_, n2_); }

  // Templates whose body cannot be cut into α·β·γ under the minima.
  std::vector<PCTemplate> inert_templates() const {
    std::vector<PCTemplate> out;
    for (const auto& t : templates_) {
      if (t.body.size() < 2 * n1_ + n2_) out.push_back(t);
    }
    return out;
  }

 private:
  void check(const PCTemplate& t) const {
    auto over = [&](const Word& w) {
      if (!alphabet_.covers(w)) {
        throw DomainError("template " + format_template_line(t) + " uses a symbol outside the system alphabet");
      }
    };
    over(t.left_context);
    over(t.body);
    over(t.right_context);
    for (const auto& c : t.x_contexts) over(c);
    for (const auto& c : t.y_contexts) over(c);
  }

  std::vector<PCTemplate> templates_;
  Alphabet alphabet_;
  std::size_t n1_;
  std::size_t n2_;
};

/// One instance of (x, y) ⊢ᶜ w: x = u·α·β·d1·d, y = e·e1·β·γ·v, w = u·α·β·γ·v.
struct PCRecombinationEvent {
  Word x;
  Word y;
  PCTemplate tp;
  Word alpha;
  Word beta;
  Word gamma;
  std::size_t x_offset = 0;  // where α starts in x
  std::size_t y_offset = 0;  // where e1 starts in y
  Word w;

  std::string str() const {
    return "(" + x.str() + ", " + y.str() + ") |-[" + tau(tp).str() + "] " + w.str();
  }
  friend bool operator==(const PCRecombinationEvent&, const PCRecombinationEvent&) = default;
};

inline bool permits(const PCTemplate& tp, const Word& x, const Word& y) {
  return detail::has_all_factors(x, std::vector<Word>(tp.x_contexts.begin(), tp.x_contexts.end())) &&
         detail::has_all_factors(y, std::vector<Word>(tp.y_contexts.begin(), tp.y_contexts.end()));
}

/// Every event (x, y) ⊢ᶜ_tp w. `tp` need not belong to `sys`; the system supplies
/// Σ and the length minima.
inline std::vector<PCRecombinationEvent> recombine_pc(const CTGRSystem& sys, const Word& x, const Word& y,
                                                      const PCTemplate& tp) {
  for (const Word* w : {&x, &y}) {
    if (!sys.alphabet().covers(*w)) throw DomainError("word '" + w->str() + "' is not over the system alphabet");
  }
  std::vector<PCRecombinationEvent> out;
  if (!permits(tp, x, y)) return out;
  const Word& body = tp.body;
  for (const Split& s : sys.splits(tp)) {
    const Word alpha = body.prefix(s.alpha_len);
    const Word beta = body.slice(s.alpha_len, s.beta_len);
    const Word gamma = body.suffix_from(s.alpha_len + s.beta_len);
    const Word x_key = body.prefix(s.alpha_len + s.beta_len) + tp.right_context;
    const Word y_key = tp.left_context + body.suffix_from(s.alpha_len);
    for (std::size_t xo : x.occurrences(x_key)) {
      for (std::size_t yo : y.occurrences(y_key)) {
        Word w = x.prefix(xo + s.alpha_len + s.beta_len);
        w.append(y.span().subspan(yo + tp.left_context.size() + s.beta_len));
        out.push_back({x, y, tp, alpha, beta, gamma, xo, yo, std::move(w)});
      }
    }
  }
  return out;
}

namespace detail {

inline std::vector<SplitRule> split_rules(const CTGRSystem& sys) {
  std::vector<SplitRule> rules;
  for (std::size_t i = 0; i < sys.templates().size(); ++i) {
    const PCTemplate& t = sys.templates()[i];
    for (const Split& s : sys.splits(t)) {
      SplitRule r;
      r.x_key = t.body.prefix(s.alpha_len + s.beta_len) + t.right_context;
      r.x_keep = s.alpha_len + s.beta_len;
      r.y_key = t.left_context + t.body.suffix_from(s.alpha_len);
      r.y_skip = t.left_context.size() + s.beta_len;
      r.source = i;
      r.alpha_len = s.alpha_len;
      r.beta_len = s.beta_len;
      r.x_contexts.assign(t.x_contexts.begin(), t.x_contexts.end());
      r.y_contexts.assign(t.y_contexts.begin(), t.y_contexts.end());
      rules.push_back(std::move(r));
    }
  }
  return rules;
}

}  // namespace detail

/// ρ_p(L).
inline FiniteLanguage step_pc(const CTGRSystem& sys, const FiniteLanguage& l) {
  detail::check_over(sys.alphabet(), l);
  return FiniteLanguage(sys.alphabet(), detail::single_step(detail::split_rules(sys), l.words()));
}

/// Bounded ρ_p*(L0).
inline ClosureResult closure_pc(const CTGRSystem& sys, const FiniteLanguage& base, const ClosureLimits& limits) {
  detail::check_over(sys.alphabet(), base);
  const auto rules = detail::split_rules(sys);
  detail::WordStore store(rules, limits.max_set_size);
  return detail::run_closure(rules, sys.alphabet(), base.words(), limits, store, [](const auto&) { return false; });
}

/// As derivation_trace, for a contextual system.
inline std::optional<std::vector<PCRecombinationEvent>> derivation_trace_pc(const CTGRSystem& sys,
                                                                            const FiniteLanguage& base,
                                                                            const Word& target,
                                                                            const ClosureLimits& limits) {
  detail::check_over(sys.alphabet(), base);
  if (!sys.alphabet().covers(target) || target.size() > limits.max_len) return std::nullopt;
  const auto rules = detail::split_rules(sys);
  detail::WordStore store(rules, limits.max_set_size);
  detail::run_closure(rules, sys.alphabet(), base.words(), limits, store,
                      [&](const detail::WordStore& s) { return s.id_of(target).has_value(); });
  auto id = store.id_of(target);
  if (!id) return std::nullopt;
  return detail::collect_trace(store, *id, [&](std::uint32_t wid, const detail::Provenance& p) {
    const detail::SplitRule& r = rules[p.rule];
    const PCTemplate& t = sys.templates()[r.source];
    return PCRecombinationEvent{store[p.x.word],
                                store[p.y.word],
                                t,
                                t.body.prefix(r.alpha_len),
                                t.body.slice(r.alpha_len, r.beta_len),
                                t.body.suffix_from(r.alpha_len + r.beta_len),
                                p.x.offset,
                                p.y.offset,
                                store[wid]};
  });
}

}  // namespace tgr
