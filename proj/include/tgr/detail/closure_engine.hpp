#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tgr/word.hpp"

namespace tgr {

/// Bounds for an iterated closure computation.
struct ClosureLimits {
  std::size_t max_len = 16;
  std::size_t max_rounds = 16;
  // Resource guard on the number of words held.
  std::size_t max_set_size = 2'000'000;
};

/// A bounded approximation of ρ*(L0).
struct ClosureResult {
  FiniteLanguage language;
  std::size_t rounds_used = 0;
  bool reached_fixpoint = false;
  bool truncated_by_length = false;
};

namespace detail {

struct Occurrence {
  std::uint32_t word;
  std::uint32_t offset;
};

// One template under one admissible split, flattened to what the closure needs:
// x must contain x_key at offset ox, y must contain y_key at offset oy, and the
// result is x[0, ox + x_keep) followed by y[oy + y_skip, end).
struct SplitRule {
  Word x_key;
  std::size_t x_keep = 0;
  Word y_key;
  std::size_t y_skip = 0;
  std::size_t source = 0;  // index of the originating template
  std::size_t alpha_len = 0;
  std::size_t beta_len = 0;
  std::vector<Word> x_contexts;  // factors required in x
  std::vector<Word> y_contexts;  // factors required in y
};

// Word ids by factor, for the factor lengths the rules ask about.
class FactorIndex {
 public:
  explicit FactorIndex(const std::vector<SplitRule>& rules) {
    std::set<std::size_t> lengths;
    for (const auto& r : rules) {
      lengths.insert(r.x_key.size());
      lengths.insert(r.y_key.size());
    }
    lengths_.assign(lengths.begin(), lengths.end());
  }

  void add(std::uint32_t id, const Word& w) {
    for (std::size_t len : lengths_) {
      if (len > w.size()) break;
      for (std::size_t i = 0; i + len <= w.size(); ++i) {
        map_[w.slice(i, len)].push_back({id, static_cast<std::uint32_t>(i)});
      }
    }
  }

  const std::vector<Occurrence>& find(const Word& key) const {
    static const std::vector<Occurrence> none;
    auto it = map_.find(key);
    return it == map_.end() ? none : it->second;
  }

 private:
  std::vector<std::size_t> lengths_;
  std::unordered_map<Word, std::vector<Occurrence>, WordHash> map_;
};

// Where a produced word came from.
struct Provenance {
  std::uint32_t rule;
  Occurrence x;
  Occurrence y;
};

// Words held during a closure, in insertion order, with their factor index.
class WordStore {
 public:
  WordStore(const std::vector<SplitRule>& rules, std::size_t max_size) : index_(rules), max_size_(max_size) {}

  std::optional<std::uint32_t> id_of(const Word& w) const {
    auto it = ids_.find(w);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }

  bool insert(const Word& w, std::optional<Provenance> prov = std::nullopt) {
    if (ids_.count(w)) return false;
    if (words_.size() >= max_size_) {
      throw ResourceLimitError("closure holds more than " + std::to_string(max_size_) +
                               " words (the configured maximum set size)");
    }
    const auto id = static_cast<std::uint32_t>(words_.size());
    ids_.emplace(w, id);
    words_.push_back(w);
    provenance_.push_back(prov);
    index_.add(id, w);
    return true;
  }

  const Word& operator[](std::uint32_t id) const { return words_[id]; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<Word>& words() const noexcept { return words_; }
  const std::optional<Provenance>& provenance(std::uint32_t id) const { return provenance_[id]; }
  const FactorIndex& index() const noexcept { return index_; }

 private:
  FactorIndex index_;
  std::size_t max_size_;
  std::vector<Word> words_;
  std::vector<std::optional<Provenance>> provenance_;
  std::unordered_map<Word, std::uint32_t, WordHash> ids_;
};

inline bool has_all_factors(const Word& w, const std::vector<Word>& factors) {
  return std::all_of(factors.begin(), factors.end(), [&](const Word& f) { return w.contains(f); });
}

inline Word combine(const Word& x, Occurrence xo, std::size_t keep, const Word& y, Occurrence yo, std::size_t skip) {
  Word w = x.prefix(xo.offset + keep);
  w.append(y.span().subspan(yo.offset + skip));
  return w;
}

// All results of rules over pairs (x, y) of stored words in which at least one
// of x, y has id ≥ frontier. emit(rule_index, x_occ, y_occ, w).
template <class Emit>
void apply_rules(const std::vector<SplitRule>& rules, const WordStore& store, std::uint32_t frontier, Emit&& emit) {
  auto first_new = [frontier](const std::vector<Occurrence>& occ) {
    return std::partition_point(occ.begin(), occ.end(), [frontier](const Occurrence& o) { return o.word < frontier; });
  };
  for (std::size_t ri = 0; ri < rules.size(); ++ri) {
    const SplitRule& r = rules[ri];
    const auto& xs = store.index().find(r.x_key);
    if (xs.empty()) continue;
    const auto& ys = store.index().find(r.y_key);
    if (ys.empty()) continue;
    const auto x_new = first_new(xs);
    const auto y_new = first_new(ys);

    auto pair_up = [&](auto xb, auto xe, auto yb, auto ye) {
      for (auto xi = xb; xi != xe; ++xi) {
        const Word& x = store[xi->word];
        if (!has_all_factors(x, r.x_contexts)) continue;
        for (auto yi = yb; yi != ye; ++yi) {
          const Word& y = store[yi->word];
          if (!has_all_factors(y, r.y_contexts)) continue;
          emit(ri, *xi, *yi, combine(x, *xi, r.x_keep, y, *yi, r.y_skip));
        }
      }
    };
    // new x with any y, then old x with new y
    pair_up(x_new, xs.end(), ys.begin(), ys.end());
    pair_up(xs.begin(), x_new, y_new, ys.end());
  }
}

// One application of the rules to every ordered pair of `words`.
inline std::set<Word> single_step(const std::vector<SplitRule>& rules, const std::set<Word>& words) {
  WordStore store(rules, words.size() + 1);
  for (const Word& w : words) store.insert(w);
  std::set<Word> out;
  apply_rules(rules, store, 0, [&](std::size_t, Occurrence, Occurrence, Word w) { out.insert(std::move(w)); });
  return out;
}

// Least fixpoint of M ↦ (M ∪ step(M)) ∩ Σ^{≤max_len} from `base`, or the
// max_rounds-th iterate. Stops early once `stop(store)` returns true after a round.
template <class Stop>
ClosureResult run_closure(const std::vector<SplitRule>& rules, const Alphabet& alphabet, const std::set<Word>& base,
                          const ClosureLimits& limits, WordStore& store, Stop&& stop) {
  for (const Word& w : base) {
    if (w.size() > limits.max_len) {
      throw ValidationError("closure: max_len " + std::to_string(limits.max_len) + " is shorter than base word '" +
                            w.str() + "'");
    }
    store.insert(w);
  }
  ClosureResult result;
  std::uint32_t frontier = 0;
  while (result.rounds_used < limits.max_rounds) {
    ++result.rounds_used;
    std::vector<std::pair<Word, Provenance>> fresh;
    std::unordered_map<Word, char, WordHash> seen;
    apply_rules(rules, store, frontier, [&](std::size_t ri, Occurrence xo, Occurrence yo, Word w) {
      if (w.size() > limits.max_len) {
        result.truncated_by_length = true;
        return;
      }
      if (store.id_of(w) || seen.count(w)) return;
      seen.emplace(w, 0);
      fresh.emplace_back(std::move(w), Provenance{static_cast<std::uint32_t>(ri), xo, yo});
    });
    if (fresh.empty()) {
      result.reached_fixpoint = true;
      break;
    }
    frontier = static_cast<std::uint32_t>(store.size());
    for (auto& [w, prov] : fresh) store.insert(w, prov);
    if (stop(store)) break;
  }
  result.language = FiniteLanguage(alphabet, std::set<Word>(store.words().begin(), store.words().end()));
  return result;
}

}  // namespace detail
}  // namespace tgr
