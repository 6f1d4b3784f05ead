#pragma once

#include <map>
#include <optional>
#include <string>

#include "tgr/word.hpp"

namespace tgr {

/// A letter-to-letter-or-erase homomorphism over a declared domain alphabet.
class WeakCoding {
 public:
  WeakCoding() = default;

  // Map `from` to `to`; std::nullopt erases.
  WeakCoding& set(Symbol from, std::optional<Symbol> to) {
    images_.insert_or_assign(from, to);
    return *this;
  }
  WeakCoding& keep(Symbol s) { return set(s, s); }
  WeakCoding& erase(Symbol s) { return set(s, std::nullopt); }

  bool defined_on(Symbol s) const { return images_.count(s) != 0; }

  Alphabet domain() const {
    Alphabet a;
    for (const auto& [from, to] : images_) a.insert(from);
    return a;
  }

  std::optional<Symbol> image(Symbol s) const {
    auto it = images_.find(s);
    if (it == images_.end()) throw DomainError("weak coding is not defined on symbol '" + s.token() + "'");
    return it->second;
  }

  Word apply(const Word& w) const {
    Word out;
    for (Symbol s : w) {
      if (auto img = image(s)) out.append(*img);
    }
    return out;
  }

  const std::map<Symbol, std::optional<Symbol>>& images() const noexcept { return images_; }

  friend bool operator==(const WeakCoding&, const WeakCoding&) = default;

 private:
  std::map<Symbol, std::optional<Symbol>> images_;
};

inline Word apply_coding(const WeakCoding& h, const Word& w) { return h.apply(w); }

}  // namespace tgr
