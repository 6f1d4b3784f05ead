#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "tgr/error.hpp"

namespace tgr {

namespace detail {

inline bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

// Split on runs of whitespace.
inline std::vector<std::string_view> split_ws(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

// Process-wide, append-only token pool. Node addresses are stable, so a Symbol
// can hold a pointer and compare by address.
inline const std::string* intern(std::string_view token) {
  static std::mutex mu;
  static std::unordered_set<std::string> pool;
  std::lock_guard<std::mutex> lock(mu);
  return &*pool.emplace(token).first;
}

}  // namespace detail

// The spelling of the empty word in every text format.
inline constexpr std::string_view kEmptyWordToken = "@";

/// An alphabet symbol: a nonempty whitespace-free token.
///
/// Equality is token equality; ordering is lexicographic on the token text.
class Symbol {
 public:
  explicit Symbol(std::string_view token) {
    if (token.empty()) throw ValidationError("symbol token must be nonempty");
    for (char c : token) {
      if (detail::is_space(c)) {
        throw ValidationError("symbol token contains whitespace: '" + std::string(token) + "'");
      }
    }
    token_ = detail::intern(token);
  }

  const std::string& token() const noexcept { return *token_; }

  friend bool operator==(Symbol a, Symbol b) noexcept { return a.token_ == b.token_; }
  friend std::strong_ordering operator<=>(Symbol a, Symbol b) noexcept {
    if (a.token_ == b.token_) return std::strong_ordering::equal;
    const int c = a.token_->compare(*b.token_);
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  }

  std::size_t hash() const noexcept { return std::hash<const void*>{}(token_); }

  friend std::ostream& operator<<(std::ostream& os, Symbol s) { return os << s.token(); }

 private:
  const std::string* token_;
};

/// A finite sequence of symbols. Ordered shortlex: shorter words first, then
/// lexicographically by symbol token.
class Word {
 public:
  using value_type = Symbol;
  using const_iterator = std::vector<Symbol>::const_iterator;

  Word() = default;
  Word(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}
  explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}
  explicit Word(std::span<const Symbol> symbols) : symbols_(symbols.begin(), symbols.end()) {}
  explicit Word(Symbol s) : symbols_{s} {}

  // Parse the space-separated text form. "@" (alone) is the empty word.
  static Word parse(std::string_view text) {
    auto tokens = detail::split_ws(text);
    if (tokens.size() == 1 && tokens[0] == kEmptyWordToken) return Word{};
    if (tokens.empty()) throw ParseError("empty word must be spelled '@'");
    Word w;
    w.symbols_.reserve(tokens.size());
    for (auto t : tokens) {
      if (t == kEmptyWordToken) throw ParseError("'@' may only appear alone");
      w.symbols_.emplace_back(t);
    }
    return w;
  }

  std::string str() const {
    if (symbols_.empty()) return std::string(kEmptyWordToken);
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (i) out += ' ';
      out += symbols_[i].token();
    }
    return out;
  }

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  Symbol operator[](std::size_t i) const { return symbols_[i]; }
  Symbol front() const { return symbols_.front(); }
  Symbol back() const { return symbols_.back(); }
  const_iterator begin() const noexcept { return symbols_.begin(); }
  const_iterator end() const noexcept { return symbols_.end(); }
  std::span<const Symbol> span() const noexcept { return symbols_; }
  const std::vector<Symbol>& symbols() const noexcept { return symbols_; }

  Word slice(std::size_t pos, std::size_t len) const {
    return Word(span().subspan(pos, len));
  }
  Word prefix(std::size_t len) const { return slice(0, len); }
  Word suffix_from(std::size_t pos) const { return Word(span().subspan(pos)); }

  Word& append(const Word& other) {
    symbols_.insert(symbols_.end(), other.symbols_.begin(), other.symbols_.end());
    return *this;
  }
  Word& append(Symbol s) {
    symbols_.push_back(s);
    return *this;
  }
  Word& append(std::span<const Symbol> s) {
    symbols_.insert(symbols_.end(), s.begin(), s.end());
    return *this;
  }

  friend Word operator+(Word a, const Word& b) { return std::move(a.append(b)); }
  friend Word operator+(Word a, Symbol b) { return std::move(a.append(b)); }

  // True iff `factor` occurs at offset `pos`.
  bool has_at(std::size_t pos, std::span<const Symbol> factor) const noexcept {
    if (pos > size() || factor.size() > size() - pos) return false;
    return std::equal(factor.begin(), factor.end(), symbols_.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  bool has_at(std::size_t pos, const Word& factor) const noexcept { return has_at(pos, factor.span()); }

  // All offsets at which `factor` occurs, ascending. λ occurs at every offset.
  std::vector<std::size_t> occurrences(const Word& factor) const {
    std::vector<std::size_t> out;
    if (factor.size() > size()) return out;
    for (std::size_t i = 0; i + factor.size() <= size(); ++i) {
      if (has_at(i, factor)) out.push_back(i);
    }
    return out;
  }

  bool contains(const Word& factor) const {
    if (factor.size() > size()) return false;
    return std::search(symbols_.begin(), symbols_.end(), factor.begin(), factor.end()) != symbols_.end();
  }
  bool contains(Symbol s) const { return std::find(symbols_.begin(), symbols_.end(), s) != symbols_.end(); }

  friend bool operator==(const Word& a, const Word& b) noexcept { return a.symbols_ == b.symbols_; }
  friend std::strong_ordering operator<=>(const Word& a, const Word& b) noexcept {
    if (auto c = a.size() <=> b.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
  }

  friend std::ostream& operator<<(std::ostream& os, const Word& w) { return os << w.str(); }

 private:
  std::vector<Symbol> symbols_;
};

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept { return (*this)(w.span()); }
  std::size_t operator()(std::span<const Symbol> s) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL ^ s.size();
    for (Symbol sym : s) {
      h ^= sym.hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

namespace literals {
inline Symbol operator""_s(const char* s, std::size_t n) { return Symbol(std::string_view(s, n)); }
inline Word operator""_w(const char* s, std::size_t n) { return Word::parse(std::string_view(s, n)); }
}  // namespace literals

/// A finite set of symbols.
class Alphabet {
 public:
  using const_iterator = std::set<Symbol>::const_iterator;

  Alphabet() = default;
  Alphabet(std::initializer_list<Symbol> symbols) : symbols_(symbols) {}
  explicit Alphabet(std::set<Symbol> symbols) : symbols_(std::move(symbols)) {}
  template <class It>
  Alphabet(It first, It last) : symbols_(first, last) {}

  // Space-separated tokens.
  static Alphabet parse(std::string_view text) {
    Alphabet a;
    for (auto t : detail::split_ws(text)) a.symbols_.emplace(t);
    return a;
  }

  bool contains(Symbol s) const { return symbols_.count(s) != 0; }
  bool covers(const Word& w) const {
    return std::all_of(w.begin(), w.end(), [&](Symbol s) { return contains(s); });
  }
  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  const_iterator begin() const noexcept { return symbols_.begin(); }
  const_iterator end() const noexcept { return symbols_.end(); }
  const std::set<Symbol>& symbols() const noexcept { return symbols_; }

  Alphabet& insert(Symbol s) {
    symbols_.insert(s);
    return *this;
  }
  friend Alphabet operator|(Alphabet a, const Alphabet& b) {
    a.symbols_.insert(b.begin(), b.end());
    return a;
  }
  bool disjoint(const Alphabet& other) const {
    return std::none_of(begin(), end(), [&](Symbol s) { return other.contains(s); });
  }

  std::string str() const {
    std::string out;
    for (Symbol s : symbols_) {
      if (!out.empty()) out += ' ';
      out += s.token();
    }
    return out;
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::set<Symbol> symbols_;
};

/// A finite set of words over a declared alphabet, iterated in shortlex order.
class FiniteLanguage {
 public:
  using const_iterator = std::set<Word>::const_iterator;

  FiniteLanguage() = default;
  explicit FiniteLanguage(Alphabet alphabet) : alphabet_(std::move(alphabet)) {}
  FiniteLanguage(Alphabet alphabet, std::set<Word> words)
      : alphabet_(std::move(alphabet)), words_(std::move(words)) {
    for (const Word& w : words_) check(w);
  }
  template <class Range>
  static FiniteLanguage from(Alphabet alphabet, const Range& words) {
    FiniteLanguage l(std::move(alphabet));
    for (const Word& w : words) l.insert(w);
    return l;
  }

  const Alphabet& alphabet() const noexcept { return alphabet_; }
  const std::set<Word>& words() const noexcept { return words_; }
  bool contains(const Word& w) const { return words_.count(w) != 0; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }
  const_iterator begin() const noexcept { return words_.begin(); }
  const_iterator end() const noexcept { return words_.end(); }

  bool insert(const Word& w) {
    check(w);
    return words_.insert(w).second;
  }

  bool subset_of(const FiniteLanguage& other) const {
    return std::includes(other.words_.begin(), other.words_.end(), words_.begin(), words_.end());
  }

  // Words of length ≤ k.
  FiniteLanguage up_to(std::size_t k) const {
    FiniteLanguage out(alphabet_);
    for (const Word& w : words_) {
      if (w.size() <= k) out.words_.insert(w);
    }
    return out;
  }

  // One word per line, shortlex order.
  std::string serialize() const {
    std::string out;
    for (const Word& w : words_) {
      out += w.str();
      out += '\n';
    }
    return out;
  }

  friend bool operator==(const FiniteLanguage& a, const FiniteLanguage& b) { return a.words_ == b.words_; }

 private:
  void check(const Word& w) const {
    for (Symbol s : w) {
      if (!alphabet_.contains(s)) {
        throw DomainError("word '" + w.str() + "' uses symbol '" + s.token() + "' outside the alphabet");
      }
    }
  }

  Alphabet alphabet_;
  std::set<Word> words_;
};

// Parse a language file: one word per line. A line starting with "# " is a
// comment; blank lines are skipped.
// A bare "#" token inside a word is an ordinary symbol.
inline std::vector<Word> parse_word_lines(std::istream& in) {
  std::vector<Word> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.rfind("# ", 0) == 0) continue;
    auto body = detail::trim(line);
    if (body.empty()) continue;
    try {
      out.push_back(Word::parse(body));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

inline std::vector<Word> parse_word_lines(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_word_lines(in);
}

// Default cap for words_up_to.
inline constexpr std::size_t kDefaultEnumerationCap = 2'000'000;

/// All words over `a` of length ≤ k (λ included), shortlex.
inline FiniteLanguage words_up_to(const Alphabet& a, std::size_t k,
                                  std::size_t cap = kDefaultEnumerationCap) {
  // Required budget Σ_{i≤k} |a|^i, computed with saturation at cap + 1.
  const std::size_t limit = cap + 1;
  std::size_t required = 0;
  std::size_t layer = 1;
  for (std::size_t i = 0; i <= k && required < limit; ++i) {
    required = std::min(limit, required + layer);
    layer = (a.size() != 0 && layer > limit / a.size()) ? limit : layer * a.size();
  }
  if (required > cap) {
    throw ResourceLimitError("words_up_to: " + std::to_string(a.size()) + " symbols up to length " +
                             std::to_string(k) + " needs more than " + std::to_string(cap) +
                             " words (the configured cap)");
  }
  FiniteLanguage out(a);
  std::vector<Word> frontier{Word{}};
  out.insert(Word{});
  for (std::size_t len = 1; len <= k; ++len) {
    std::vector<Word> next;
    next.reserve(frontier.size() * a.size());
    for (const Word& w : frontier) {
      for (Symbol s : a) next.push_back(w + s);
    }
    for (const Word& w : next) out.insert(w);
    frontier = std::move(next);
  }
  return out;
}

}  // namespace tgr

template <>
struct std::hash<tgr::Symbol> {
  std::size_t operator()(tgr::Symbol s) const noexcept { return s.hash(); }
};

template <>
struct std::hash<tgr::Word> {
  std::size_t operator()(const tgr::Word& w) const noexcept { return tgr::WordHash{}(w); }
};
