#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tgr/coding.hpp"
#include "tgr/ctgr_system.hpp"
#include "tgr/filter.hpp"
#include "tgr/grammar.hpp"

namespace tgr {

/// Which template rules the compiler emits.
///
/// `as_stated` instantiates the six template groups exactly as written:
///   1. (Z # c a v Y # u Y; {X}, {λ})        2. (Z # c a Y_b # b Y; {X}, {λ})
///   3. (X # X' b d e # Z; {λ}, {Y_b})        4. (Z # c a Y # Y_b; {X'}, {λ})
///   5. (X' # X a c # Z; {λ}, {Y})            6. (X B B1 B2 # a b c # Z'; {λ}, {Y})
///
/// `repaired` (the default) gives every body length 3, so that n1 = n2 = 1
/// admits exactly one split, and makes termination keep the content intact:
///   1. (Z # c a g # u Y; {X}, {Z a v Y}) with g the first symbol of v·Y
///   3. (X # b d e # Z; {λ}, {Y_b})
///   6. (X B B1 B2 a # a b c # Z'; {λ}, {Y}) with c ∈ U ∪ {Y}
/// Groups 2, 4, 5 and the base language are the same in both.
///
/// Under `as_stated`, group 1 also splits as (c, a v, Y) and (c a, v, Y), which
/// deletes u from …c a v u Y; group 3 also splits as (X', b d, e), which drops
/// the rotated symbol; and group 6 yields a·b·c·w for content b·c·w.
enum class ReConstruction { repaired, as_stated };

inline const char* to_string(ReConstruction v) { return v == ReConstruction::repaired ? "repaired" : "as-stated"; }

/// The fixed marker symbols of the construction.
struct Markers {
  Symbol x, x_prime, y, z, z_prime, b, b1, b2;
  std::map<Symbol, Symbol> y_index;  // b ∈ U ↦ Y_b

  Symbol y_of(Symbol s) const { return y_index.at(s); }
  bool is_y_index(Symbol s) const {
    return std::any_of(y_index.begin(), y_index.end(), [&](const auto& kv) { return kv.second == s; });
  }
  Word block() const { return Word{b, b1, b2}; }
};

struct CompiledRE {
  KurodaGrammar grammar;
  ReConstruction variant;
  CTGRSystem system;
  FiniteLanguage base;
  FilterPattern filter;  // Σ*Y
  WeakCoding coding;     // a ↦ a on Σ, Y ↦ λ
  Alphabet u;            // N ∪ Σ ∪ {B, B1, B2}
  Alphabet v;            // U ∪ {X, X', Y, Z, Z'} ∪ {Y_b}
  Markers markers;
  std::map<Word, std::vector<std::string>> base_provenance;
  std::map<PCTemplate, std::string> template_group;

  // Base word that starts every simulation: X B B1 B2 S Y.
  Word start_word() const {
    return Word{markers.x} + markers.block() + Word{grammar.start(), markers.y};
  }
};

namespace detail {

inline Symbol fresh_symbol(std::string token, const Alphabet& taken) {
  while (taken.contains(Symbol(token))) token += "~";
  return Symbol(token);
}

inline Markers make_markers(const KurodaGrammar& g) {
  Alphabet taken = g.nonterminals() | g.terminals();
  auto take = [&](const char* name) {
    Symbol s = fresh_symbol(name, taken);
    taken.insert(s);
    return s;
  };
  Symbol x = take("X"), xp = take("X'"), y = take("Y"), z = take("Z"), zp = take("Z'");
  Symbol b = take("B"), b1 = take("B1"), b2 = take("B2");
  Markers m{x, xp, y, z, zp, b, b1, b2, {}};
  const Alphabet u = g.nonterminals() | g.terminals() | Alphabet{b, b1, b2};
  for (Symbol s : u) m.y_index.emplace(s, take(("Y_" + s.token()).c_str()));
  return m;
}

// Template constructors per group, shared by the compiler and the tracer.
struct TemplateRules {
  const Markers& m;
  ReConstruction variant;

  PCTemplate simulate(Symbol c, Symbol a, const Rule& r) const {
    if (variant == ReConstruction::as_stated) {
      return {Word{m.z}, Word{c, a} + r.rhs + m.y, r.lhs + m.y, {Word{m.x}}, {}};
    }
    const Word tail = r.rhs + m.y;
    return {Word{m.z}, Word{c, a, tail[0]}, r.lhs + m.y, {Word{m.x}}, {Word{m.z, a} + tail}};
  }
  PCTemplate rotate1(Symbol c, Symbol a, Symbol b) const {
    return {Word{m.z}, Word{c, a, m.y_of(b)}, Word{b, m.y}, {Word{m.x}}, {}};
  }
  PCTemplate rotate2(Symbol b, Symbol d, Symbol e) const {
    if (variant == ReConstruction::as_stated) {
      return {Word{m.x}, Word{m.x_prime, b, d, e}, Word{m.z}, {}, {Word{m.y_of(b)}}};
    }
    return {Word{m.x}, Word{b, d, e}, Word{m.z}, {}, {Word{m.y_of(b)}}};
  }
  PCTemplate rotate3(Symbol c, Symbol a, Symbol b) const {
    return {Word{m.z}, Word{c, a, m.y}, Word{m.y_of(b)}, {Word{m.x_prime}}, {}};
  }
  PCTemplate rotate4(Symbol a, Symbol c) const {
    return {Word{m.x_prime}, Word{m.x, a, c}, Word{m.z}, {}, {Word{m.y}}};
  }
  PCTemplate terminate(Symbol a, Symbol b, Symbol c) const {
    if (variant == ReConstruction::as_stated) {
      return {Word{m.x} + m.block(), Word{a, b, c}, Word{m.z_prime}, {}, {Word{m.y}}};
    }
    return {Word{m.x} + m.block() + a, Word{a, b, c}, Word{m.z_prime}, {}, {Word{m.y}}};
  }
};

}  // namespace detail

/// Compile a Kuroda grammar into a CTGR system with permitting contexts, base
/// language L1 ∪ … ∪ L7, filter Σ*Y and coding erasing Y.
inline CompiledRE compile_kuroda(const KurodaGrammar& g, ReConstruction variant = ReConstruction::repaired) {
  const Markers m = detail::make_markers(g);
  const Alphabet u = g.nonterminals() | g.terminals() | Alphabet{m.b, m.b1, m.b2};
  Alphabet v = u | Alphabet{m.x, m.x_prime, m.y, m.z, m.z_prime};
  for (const auto& [b, yb] : m.y_index) v.insert(yb);

  const detail::TemplateRules make{m, variant};
  std::map<PCTemplate, std::string> groups;
  auto add = [&](PCTemplate t, const char* group) { groups.emplace(t.normalized(), group); };

  for (Symbol c : u) {
    for (Symbol a : u) {
      for (const Rule& r : g.rules()) add(make.simulate(c, a, r), "1");
      for (Symbol b : u) {
        add(make.rotate1(c, a, b), "2");
        add(make.rotate2(c, a, b), "3");
        add(make.rotate3(c, a, b), "4");
        add(make.terminate(c, a, b), "6");
      }
      add(make.rotate4(c, a), "5");
      if (variant == ReConstruction::repaired) add(make.terminate(c, a, m.y), "6");
    }
  }

  std::map<Word, std::vector<std::string>> prov;
  std::set<Word> base;
  auto note = [&](const Word& w, std::string why) {
    base.insert(w);
    prov[w].push_back(std::move(why));
  };
  note(Word{m.x} + m.block() + Word{g.start(), m.y}, "L1");
  for (Symbol a : u) {
    for (const Rule& r : g.rules()) note(Word{m.z, a} + r.rhs + m.y, "L2 " + r.str());
    for (Symbol b : u) {
      note(Word{m.z, a, m.y_of(b)}, "L3");
      note(Word{m.x_prime, b, a, m.z}, "L4");
      note(Word{a, b, m.z_prime}, "L7");
    }
    note(Word{m.z, a, m.y}, "L5");
    note(Word{m.x, a, m.z}, "L6");
  }

  std::vector<PCTemplate> templates;
  templates.reserve(groups.size());
  for (const auto& [t, grp] : groups) templates.push_back(t);

  using P = FilterPattern;
  FilterPattern filter = P::concat({P::star(P::atom(g.terminals())), P::symbol(m.y)});
  WeakCoding coding;
  for (Symbol t : g.terminals()) coding.keep(t);
  coding.erase(m.y);

  CTGRSystem sys(std::move(templates), v, 1, 1);
  return CompiledRE{g,       variant, std::move(sys), FiniteLanguage(v, base), std::move(filter), std::move(coding), u,
                    v,       m,       std::move(prov), std::move(groups)};
}

/// Marker discipline for words derived from the start word: α1·w·α2 with
/// (α1, α2) ∈ {(X,Y), (X,Y_b), (X',Y_b), (X',Y)}, no other marker inside and no Z, Z'.
inline bool well_formed_intermediate(const CompiledRE& cr, const Word& w) {
  const Markers& m = cr.markers;
  if (w.size() < 2) return false;
  const Symbol first = w.front(), last = w.back();
  if (first != m.x && first != m.x_prime) return false;
  if (last != m.y && !m.is_y_index(last)) return false;
  for (std::size_t i = 1; i + 1 < w.size(); ++i) {
    if (!cr.u.contains(w[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Rotate-and-simulate tracing

enum class TracePhase { simulate, rotate1, rotate2, rotate3, rotate4, terminate };

inline const char* to_string(TracePhase p) {
  switch (p) {
    case TracePhase::simulate: return "simulate";
    case TracePhase::rotate1: return "rotate-1";
    case TracePhase::rotate2: return "rotate-2";
    case TracePhase::rotate3: return "rotate-3";
    case TracePhase::rotate4: return "rotate-4";
    case TracePhase::terminate: return "terminate";
  }
  return "?";
}

struct TraceStep {
  TracePhase phase;
  PCRecombinationEvent event;

  // `phase | x | y | tau(tp) | w`
  std::string str() const {
    return std::string(to_string(phase)) + " | " + event.x.str() + " | " + event.y.str() + " | " +
           tau(event.tp).str() + " | " + event.w.str();
  }
};

struct SimulationTrace {
  std::vector<Word> grammar_derivation;
  std::vector<TraceStep> events;
  Word final_word;
};

class TraceError : public Error {
 public:
  enum class Reason { invalid_derivation, unsupported_termination, event_rejected };

  TraceError(Reason reason, const std::string& what) : Error(what), reason_(reason) {}
  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

namespace detail {

class Tracer {
 public:
  explicit Tracer(const CompiledRE& cr) : cr_(cr), make_{cr.markers, cr.variant} {}

  // Append one validated event; returns its result word.
  Word record(std::vector<TraceStep>& out, TracePhase phase, const Word& x, const Word& y, const PCTemplate& tp,
              const Word& expected) const {
    auto reject = [&](const std::string& why) {
      throw TraceError(TraceError::Reason::event_rejected, std::string(to_string(phase)) + " event (" + x.str() +
                                                               ", " + y.str() + ") with " + tau(tp).str() + ": " + why);
    };
    if (!cr_.system.has_template(tp)) reject("template is not in the compiled system");
    const bool x_base = cr_.base.contains(x), y_base = cr_.base.contains(y);
    if (!x_base && !y_base) reject("neither participant is a base word");
    for (const auto& e : recombine_pc(cr_.system, x, y, tp)) {
      if (e.w == expected) {
        out.push_back({phase, e});
        return e.w;
      }
    }
    reject("no recombination yields " + expected.str());
    return expected;  // not reached
  }

  // X·w·b·Y → X·b·w·Y through the four rotation templates.
  Word rotate(std::vector<TraceStep>& out, const Word& word) const {
    const Markers& m = cr_.markers;
    const Word content = inner(word, m.x, m.y);
    if (content.size() < 3) {
      throw TraceError(TraceError::Reason::event_rejected, "rotation needs at least 3 symbols between X and Y");
    }
    const std::size_t n = content.size();
    const Symbol b = content[n - 1];
    const Word w = content.prefix(n - 1);

    // 1: (X w1 c a b Y, Z a Y_b) → X w1 c a Y_b
    Word cur = record(out, TracePhase::rotate1, word, Word{m.z, w[n - 2], m.y_of(b)},
                      make_.rotate1(w[n - 3], w[n - 2], b), Word{m.x} + w + m.y_of(b));
    // 2: (X' b d Z, X d e w2 Y_b) → X' b d e w2 Y_b
    cur = record(out, TracePhase::rotate2, Word{m.x_prime, b, w[0], m.z}, cur, make_.rotate2(b, w[0], w[1]),
                 Word{m.x_prime, b} + w + m.y_of(b));
    // 3: (X' w3 c a Y_b, Z a Y) → X' w3 c a Y
    const Word bw = Word{b} + w;
    cur = record(out, TracePhase::rotate3, cur, Word{m.z, bw[n - 1], m.y}, make_.rotate3(bw[n - 2], bw[n - 1], b),
                 Word{m.x_prime} + bw + m.y);
    // 4: (X a Z, X' a c w4 Y) → X a c w4 Y
    return record(out, TracePhase::rotate4, Word{m.x, bw[0], m.z}, cur, make_.rotate4(bw[0], bw[1]),
                  Word{m.x} + bw + m.y);
  }

  // X·w·u·Y → X·w·v·Y for rule u → v.
  Word simulate(std::vector<TraceStep>& out, const Word& word, const Rule& r) const {
    const Markers& m = cr_.markers;
    const Word content = inner(word, m.x, m.y);
    const std::size_t n = content.size();
    if (n < r.lhs.size() + 2 || !content.has_at(n - r.lhs.size(), r.lhs)) {
      throw TraceError(TraceError::Reason::event_rejected, "rule " + r.str() + " does not apply at the right end of " +
                                                               word.str());
    }
    const Symbol c = content[n - r.lhs.size() - 2], a = content[n - r.lhs.size() - 1];
    const Word kept = content.prefix(n - r.lhs.size());
    return record(out, TracePhase::simulate, word, Word{m.z, a} + r.rhs + m.y, make_.simulate(c, a, r),
                  Word{m.x} + kept + r.rhs + m.y);
  }

  // X B B1 B2 s Y → s Y.
  Word terminate(std::vector<TraceStep>& out, const Word& word) const {
    const Markers& m = cr_.markers;
    const Word content = inner(word, m.x, m.y);
    const Word s = content.suffix_from(3);
    const Word expected = s + m.y;
    if (s.size() < 2) {
      throw TraceError(TraceError::Reason::unsupported_termination,
                       "terminal word '" + s.str() + "' has fewer than 2 symbols; the termination templates need " +
                           "two content symbols before Y and cannot produce it");
    }
    if (cr_.variant == ReConstruction::as_stated) {
      // Every group-6 template yields a·s·Y; report what the candidates produce.
      std::string produced;
      for (Symbol a : cr_.u) {
        const PCTemplate tp = make_.terminate(a, s[0], s[1]);
        if (s.size() < 2 + 1) continue;
        for (const auto& e : recombine_pc(cr_.system, Word{a, s[0], m.z_prime}, word, tp)) {
          if (e.w == expected) {
            out.push_back({TracePhase::terminate, e});
            return e.w;
          }
          if (produced.size() < 200) produced += (produced.empty() ? "" : ", ") + e.w.str();
        }
      }
      throw TraceError(TraceError::Reason::unsupported_termination,
                       "no termination event yields " + expected.str() +
                           (produced.empty() ? std::string(" (no event applies)") : "; candidates yield " + produced));
    }
    const Symbol c = s.size() >= 3 ? s[2] : m.y;
    return record(out, TracePhase::terminate, Word{s[0], s[1], m.z_prime}, word, make_.terminate(s[0], s[1], c),
                  expected);
  }

 private:
  static Word inner(const Word& w, Symbol left, Symbol right) {
    if (w.size() < 2 || w.front() != left || w.back() != right) {
      throw TraceError(TraceError::Reason::event_rejected,
                       "expected a word of the form " + left.token() + " … " + right.token() + ", got " + w.str());
    }
    return w.slice(1, w.size() - 2);
  }

  const CompiledRE& cr_;
  TemplateRules make_;
};

}  // namespace detail

/// One full rotation of X·w·b·Y into X·b·w·Y, as four validated events.
inline std::vector<TraceStep> rotate_once(const CompiledRE& cr, const Word& word) {
  std::vector<TraceStep> out;
  detail::Tracer(cr).rotate(out, word);
  return out;
}

/// Replay a derivation S ⇒ … ⇒ w of the grammar as recombination events: each
/// rule application is preceded by the rotations that bring its redex next to
/// Y, and the final rotations bring B B1 B2 back next to X before termination.
/// Every event is checked against the compiled system with recombine_pc.
inline SimulationTrace simulate_derivation(const CompiledRE& cr, const std::vector<Word>& derivation) {
  const KurodaGrammar& g = cr.grammar;
  auto invalid = [](const std::string& why) { throw TraceError(TraceError::Reason::invalid_derivation, why); };
  if (derivation.empty() || derivation.front() != Word{g.start()}) {
    invalid("derivation must start with the start symbol " + g.start().token());
  }
  if (!g.is_terminal_word(derivation.back())) {
    invalid("derivation must end in a terminal word, got '" + derivation.back().str() + "'");
  }

  const detail::Tracer tracer(cr);
  SimulationTrace trace;
  trace.grammar_derivation = derivation;

  // The content between the end markers is a rotation of B B1 B2·form; `shift`
  // counts how many symbols have moved from its right end to its left end.
  Word cyc = cr.markers.block() + derivation.front();
  std::size_t shift = 0;
  Word current = cr.start_word();

  auto rotate_until = [&](std::size_t target_shift) {
    while (shift % cyc.size() != target_shift % cyc.size()) {
      current = tracer.rotate(trace.events, current);
      ++shift;
    }
  };

  for (std::size_t i = 0; i + 1 < derivation.size(); ++i) {
    const auto apps = one_step_applications(g, derivation[i], derivation[i + 1]);
    if (apps.empty()) {
      invalid("step " + std::to_string(i + 1) + ": '" + derivation[i].str() + "' does not rewrite to '" +
              derivation[i + 1].str() + "' by one rule");
    }
    const Rule& r = g.rules()[apps.front().rule];
    const std::size_t q = 3 + apps.front().position;  // redex start in cyc
    const std::size_t n = cyc.size();
    // The redex ends at the right end when n - shift ≡ q + |u|.
    rotate_until(n - (q + r.lhs.size()));
    current = tracer.simulate(trace.events, current, r);
    cyc = apply_at(cyc, r, q);
    shift = cyc.size() - (q + r.rhs.size());
  }
  rotate_until(0);
  trace.final_word = tracer.terminate(trace.events, current);
  return trace;
}

// ---------------------------------------------------------------------------
// Bounded evaluation

struct PipelineResultPC {
  FiniteLanguage language;
  bool exhaustive = false;  // the bounded closure reached its fixpoint
  ClosureResult closure;
};

/// h(closure_pc(base) ∩ Σ*Y), words of length ≤ k.
inline PipelineResultPC pipeline_language_pc(const CompiledRE& cr, std::size_t k, const ClosureLimits& limits) {
  ClosureResult c = closure_pc(cr.system, cr.base, limits);
  FiniteLanguage out(cr.grammar.terminals());
  for (const Word& w : c.language) {
    if (!cr.filter.matches(w)) continue;
    Word decoded = cr.coding.apply(w);
    if (!cr.grammar.terminals().covers(decoded)) {
      throw DomainError("filtered word '" + w.str() + "' decodes outside the terminal alphabet");
    }
    if (decoded.size() <= k) out.insert(decoded);
  }
  const bool fix = c.reached_fixpoint;
  return {std::move(out), fix, std::move(c)};
}

struct SoundnessReport {
  FiniteLanguage produced;
  std::set<Word> non_members;  // construction defects
  std::set<Word> unknown;      // membership search hit its caps
  bool closure_fixpoint = false;
  std::size_t closure_size = 0;

  bool sound() const noexcept { return non_members.empty(); }
  bool conclusive() const noexcept { return unknown.empty(); }
};

/// Every word the bounded pipeline produces, checked against the grammar.
inline SoundnessReport soundness_check(const CompiledRE& cr, std::size_t k, const ClosureLimits& limits,
                                       const SearchCaps& caps = {}) {
  PipelineResultPC p = pipeline_language_pc(cr, k, limits);
  SoundnessReport r;
  for (const Word& w : p.language) {
    switch (membership(cr.grammar, w, caps).status) {
      case MembershipVerdict::Status::member: break;
      case MembershipVerdict::Status::non_member: r.non_members.insert(w); break;
      case MembershipVerdict::Status::unknown: r.unknown.insert(w); break;
    }
  }
  r.produced = std::move(p.language);
  r.closure_fixpoint = p.closure.reached_fixpoint;
  r.closure_size = p.closure.language.size();
  return r;
}

}  // namespace tgr
