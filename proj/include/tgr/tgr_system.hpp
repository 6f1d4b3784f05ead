#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgr/detail/closure_engine.hpp"
#include "tgr/word.hpp"

namespace tgr {

/// Lengths (|α|, |β|) of one way to cut a template into α·β·γ.
struct Split {
  std::size_t alpha_len;
  std::size_t beta_len;
};

// Every split of a word of length `len` with |α|, |γ| ≥ n1 and |β| ≥ n2,
// ordered by |α| then |β|.
inline std::vector<Split> admissible_splits(std::size_t len, std::size_t n1, std::size_t n2) {
  std::vector<Split> out;
  if (len < 2 * n1 + n2) return out;
  for (std::size_t a = n1; a + n2 + n1 <= len; ++a) {
    for (std::size_t b = n2; a + b + n1 <= len; ++b) out.push_back({a, b});
  }
  return out;
}

/// A template-guided recombination system (T, Σ, n1, n2).
class TGRSystem {
 public:
  TGRSystem(FiniteLanguage templates, Alphabet alphabet, std::size_t n1, std::size_t n2)
      : alphabet_(std::move(alphabet)), n1_(n1), n2_(n2) {
    if (n1_ == 0 || n2_ == 0) throw ValidationError("minimum MDS and pointer lengths must be positive");
    templates_ = FiniteLanguage(alphabet_);
    for (const Word& t : templates) {
      if (!alphabet_.covers(t)) throw DomainError("template '" + t.str() + "' is not over the system alphabet");
      templates_.insert(t);
    }
  }

  const FiniteLanguage& templates() const noexcept { return templates_; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }
  std::size_t n1() const noexcept { return n1_; }
  std::size_t n2() const noexcept { return n2_; }

  std::vector<Split> splits(const Word& t) const { return admissible_splits(t.size(), n1_, n2_); }

  // Templates too short to be cut into α·β·γ; they never take part in a recombination.
  std::vector<Word> inert_templates() const {
    std::vector<Word> out;
    for (const Word& t : templates_) {
      if (t.size() < 2 * n1_ + n2_) out.push_back(t);
    }
    return out;
  }

 private:
  FiniteLanguage templates_;
  Alphabet alphabet_;
  std::size_t n1_;
  std::size_t n2_;
};

/// One instance of (x, y) ⊢_t w: x = u·α·β·d, y = e·β·γ·v, w = u·α·β·γ·v.
struct RecombinationEvent {
  Word x;
  Word y;
  Word t;
  Word alpha;
  Word beta;
  Word gamma;
  std::size_t x_offset = 0;  // where α starts in x
  std::size_t y_offset = 0;  // where β starts in y
  Word w;

  std::string str() const {
    return "(" + x.str() + ", " + y.str() + ") |-[" + t.str() + "] " + w.str();
  }
  friend bool operator==(const RecombinationEvent&, const RecombinationEvent&) = default;
};

enum class TemplateCheck { require_member, allow_any };

/// Every event (x, y) ⊢_t w: all admissible splits of t, all occurrences of αβ
/// in x and of βγ in y.
inline std::vector<RecombinationEvent> recombine(const TGRSystem& sys, const Word& x, const Word& y, const Word& t,
                                                 TemplateCheck check = TemplateCheck::require_member) {
  for (const Word* w : {&x, &y, &t}) {
    if (!sys.alphabet().covers(*w)) throw DomainError("word '" + w->str() + "' is not over the system alphabet");
  }
  if (check == TemplateCheck::require_member && !sys.templates().contains(t)) {
    throw DomainError("'" + t.str() + "' is not a template of the system");
  }
  std::vector<RecombinationEvent> out;
  for (const Split& s : sys.splits(t)) {
    const Word alpha = t.prefix(s.alpha_len);
    const Word beta = t.slice(s.alpha_len, s.beta_len);
    const Word gamma = t.suffix_from(s.alpha_len + s.beta_len);
    const Word alpha_beta = t.prefix(s.alpha_len + s.beta_len);
    const Word beta_gamma = t.suffix_from(s.alpha_len);
    for (std::size_t xo : x.occurrences(alpha_beta)) {
      for (std::size_t yo : y.occurrences(beta_gamma)) {
        Word w = x.prefix(xo + alpha_beta.size());
        w.append(y.span().subspan(yo + beta.size()));
        out.push_back({x, y, t, alpha, beta, gamma, xo, yo, std::move(w)});
      }
    }
  }
  return out;
}

namespace detail {

inline std::vector<SplitRule> split_rules(const TGRSystem& sys) {
  std::vector<SplitRule> rules;
  std::size_t index = 0;
  for (const Word& t : sys.templates()) {
    for (const Split& s : sys.splits(t)) {
      SplitRule r;
      r.x_key = t.prefix(s.alpha_len + s.beta_len);
      r.x_keep = s.alpha_len + s.beta_len;
      r.y_key = t.suffix_from(s.alpha_len);
      r.y_skip = s.beta_len;
      r.source = index;
      r.alpha_len = s.alpha_len;
      r.beta_len = s.beta_len;
      rules.push_back(std::move(r));
    }
    ++index;
  }
  return rules;
}

inline void check_over(const Alphabet& a, const FiniteLanguage& l) {
  for (const Word& w : l) {
    if (!a.covers(w)) throw DomainError("word '" + w.str() + "' is not over the system alphabet");
  }
}

}  // namespace detail

/// ρ(L): every w with (x, y) ⊢_t w for ordered x, y ∈ L and t ∈ T.
inline FiniteLanguage step(const TGRSystem& sys, const FiniteLanguage& l) {
  detail::check_over(sys.alphabet(), l);
  return FiniteLanguage(sys.alphabet(), detail::single_step(detail::split_rules(sys), l.words()));
}

/// Bounded ρ*(L0): words longer than max_len are dropped as they appear.
inline ClosureResult closure(const TGRSystem& sys, const FiniteLanguage& base, const ClosureLimits& limits) {
  detail::check_over(sys.alphabet(), base);
  const auto rules = detail::split_rules(sys);
  detail::WordStore store(rules, limits.max_set_size);
  return detail::run_closure(rules, sys.alphabet(), base.words(), limits, store, [](const auto&) { return false; });
}

namespace detail {

// Events leading from the base to store[target], earliest first.
template <class MakeEvent>
auto collect_trace(const WordStore& store, std::uint32_t target, MakeEvent&& make_event) {
  using Event = decltype(make_event(std::uint32_t{}, Provenance{}));
  std::vector<std::uint32_t> order;
  std::set<std::uint32_t> visited;
  auto visit = [&](auto& self, std::uint32_t id) -> void {
    if (visited.count(id)) return;
    visited.insert(id);
    const auto& p = store.provenance(id);
    if (!p) return;
    self(self, p->x.word);
    self(self, p->y.word);
    order.push_back(id);
  };
  visit(visit, target);
  // Ids grow with the round a word was found in, so id order is round order.
  std::sort(order.begin(), order.end());
  std::vector<Event> out;
  for (std::uint32_t id : order) out.push_back(make_event(id, *store.provenance(id)));
  return out;
}

}  // namespace detail

/// How `target` arises from `base` within the limits: the events producing it and
/// (recursively) its non-base participants, in round order. Empty when target is
/// in the base; std::nullopt when it is not reached.
inline std::optional<std::vector<RecombinationEvent>> derivation_trace(const TGRSystem& sys, const FiniteLanguage& base,
                                                                       const Word& target, const ClosureLimits& limits) {
  detail::check_over(sys.alphabet(), base);
  if (!sys.alphabet().covers(target)) return std::nullopt;
  const auto rules = detail::split_rules(sys);
  std::vector<Word> templates(sys.templates().begin(), sys.templates().end());
  detail::WordStore store(rules, limits.max_set_size);
  if (target.size() > limits.max_len) return std::nullopt;
  detail::run_closure(rules, sys.alphabet(), base.words(), limits, store,
                      [&](const detail::WordStore& s) { return s.id_of(target).has_value(); });
  auto id = store.id_of(target);
  if (!id) return std::nullopt;
  return detail::collect_trace(store, *id, [&](std::uint32_t wid, const detail::Provenance& p) {
    const detail::SplitRule& r = rules[p.rule];
    const Word& t = templates[r.source];
    return RecombinationEvent{store[p.x.word],
                              store[p.y.word],
                              t,
                              t.prefix(r.alpha_len),
                              t.slice(r.alpha_len, r.beta_len),
                              t.suffix_from(r.alpha_len + r.beta_len),
                              p.x.offset,
                              p.y.offset,
                              store[wid]};
  });
}

}  // namespace tgr
