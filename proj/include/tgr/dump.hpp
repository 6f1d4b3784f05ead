#pragma once

#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "tgr/ctgr_system.hpp"
#include "tgr/re_compiler.hpp"
#include "tgr/regular_compiler.hpp"
#include "tgr/tgr_system.hpp"

namespace tgr {

// Compiled-system dump:
//
//   SYSTEM
//   kind tgr|ctgr
//   alphabet <tokens>
//   n1 <int>
//   n2 <int>
//   BASE
//   <word per line>
//   TEMPLATES
//   <word per line; tau words for ctgr>
//   FILTER
//   <pattern>
//   CODING
//   <symbol> -> <symbol or @>
//   PROVENANCE
//   <word> <= <label> ; <label>
//
// "# " comment lines are only recognised before SYSTEM: inside a section every
// nonblank line is data, since base words and tau words may start with "#".

struct SystemDump {
  std::variant<TGRSystem, CTGRSystem> system;
  FiniteLanguage base;
  std::optional<FilterPattern> filter;
  WeakCoding coding;
  std::map<Word, std::vector<std::string>> provenance;

  bool contextual() const noexcept { return std::holds_alternative<CTGRSystem>(system); }
  const Alphabet& alphabet() const {
    return std::visit([](const auto& s) -> const Alphabet& { return s.alphabet(); }, system);
  }
};

namespace detail {

inline void write_header(std::ostream& out, const char* kind, const Alphabet& a, std::size_t n1, std::size_t n2) {
  out << "SYSTEM\nkind " << kind << "\nalphabet " << a.str() << "\nn1 " << n1 << "\nn2 " << n2 << "\n";
}

inline void write_words(std::ostream& out, const char* section, const FiniteLanguage& l) {
  out << section << "\n";
  for (const Word& w : l) out << w.str() << "\n";
}

inline void write_tail(std::ostream& out, const FilterPattern* filter, const WeakCoding& h,
                       const std::map<Word, std::vector<std::string>>& prov) {
  out << "FILTER\n";
  if (filter) out << filter->str() << "\n";
  out << "CODING\n";
  for (const auto& [from, to] : h.images()) out << from.token() << " -> " << (to ? to->token() : kEmptyWordToken) << "\n";
  out << "PROVENANCE\n";
  for (const auto& [w, labels] : prov) {
    out << w.str() << " <=";
    for (std::size_t i = 0; i < labels.size(); ++i) out << (i ? " ; " : " ") << labels[i];
    out << "\n";
  }
}

}  // namespace detail

inline void write_dump(std::ostream& out, const CompiledRegular& cr) {
  const TGRSystem& s = cr.system;
  detail::write_header(out, "tgr", s.alphabet(), s.n1(), s.n2());
  detail::write_words(out, "BASE", cr.base);
  detail::write_words(out, "TEMPLATES", s.templates());
  detail::write_tail(out, &cr.filter, cr.coding, cr.provenance);
}

inline void write_dump(std::ostream& out, const CompiledRE& cr) {
  const CTGRSystem& s = cr.system;
  detail::write_header(out, "ctgr", s.alphabet(), s.n1(), s.n2());
  detail::write_words(out, "BASE", cr.base);
  out << "TEMPLATES\n";
  for (const PCTemplate& t : s.templates()) out << tau(t).str() << "\n";
  std::map<Word, std::vector<std::string>> prov = cr.base_provenance;
  for (const auto& [t, group] : cr.template_group) prov[tau(t)].push_back("group " + group);
  detail::write_tail(out, &cr.filter, cr.coding, prov);
}

inline void write_dump(std::ostream& out, const SystemDump& d) {
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        detail::write_header(out, std::is_same_v<S, TGRSystem> ? "tgr" : "ctgr", s.alphabet(), s.n1(), s.n2());
        detail::write_words(out, "BASE", d.base);
        out << "TEMPLATES\n";
        if constexpr (std::is_same_v<S, TGRSystem>) {
          for (const Word& t : s.templates()) out << t.str() << "\n";
        } else {
          for (const PCTemplate& t : s.templates()) out << tau(t).str() << "\n";
        }
      },
      d.system);
  detail::write_tail(out, d.filter ? &*d.filter : nullptr, d.coding, d.provenance);
}

template <class Compiled>
std::string dump_string(const Compiled& c) {
  std::ostringstream out;
  write_dump(out, c);
  return out.str();
}

inline SystemDump parse_dump(std::istream& in) {
  static const std::vector<std::string> order = {"SYSTEM", "BASE", "TEMPLATES", "FILTER", "CODING", "PROVENANCE"};
  std::map<std::string, std::vector<std::pair<std::size_t, std::string>>> sections;
  std::string current, line;
  std::size_t lineno = 0, next = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t(detail::trim(line));
    if (t.empty()) continue;
    if (current.empty() && (t == "#" || t.rfind("# ", 0) == 0)) continue;
    if (next < order.size() && std::find(order.begin() + next, order.end(), t) != order.end()) {
      auto it = std::find(order.begin() + next, order.end(), t);
      current = t;
      next = static_cast<std::size_t>(it - order.begin()) + 1;
      sections[current];
      continue;
    }
    if (current.empty()) throw ParseError("expected SYSTEM section header", lineno);
    sections[current].emplace_back(lineno, t);
  }
  for (const char* required : {"SYSTEM", "BASE", "TEMPLATES"}) {
    if (!sections.count(required)) throw ParseError(std::string("dump has no ") + required + " section");
  }

  std::string kind;
  std::optional<Alphabet> alphabet;
  std::size_t n1 = 1, n2 = 1;
  for (const auto& [no, text] : sections["SYSTEM"]) {
    const auto parts = detail::split_ws(text);
    const std::string key(parts[0]);
    auto number = [&]() -> std::size_t {
      if (parts.size() != 2) throw ParseError("'" + key + "' takes one number", no);
      try {
        std::size_t pos = 0;
        const std::string digits(parts[1]);
        const unsigned long v = std::stoul(digits, &pos);
        if (pos != parts[1].size()) throw std::invalid_argument("trailing");
        return v;
      } catch (const std::exception&) {
        throw ParseError("'" + key + "' takes one number", no);
      }
    };
    if (key == "kind") {
      if (parts.size() != 2 || (parts[1] != "tgr" && parts[1] != "ctgr")) throw ParseError("kind must be tgr or ctgr", no);
      kind = parts[1];
    } else if (key == "alphabet") {
      alphabet = Alphabet::parse(text.substr(key.size()));
    } else if (key == "n1") {
      n1 = number();
    } else if (key == "n2") {
      n2 = number();
    } else {
      throw ParseError("unknown SYSTEM field '" + key + "'", no);
    }
  }
  if (kind.empty()) throw ParseError("SYSTEM section has no kind");
  if (!alphabet) throw ParseError("SYSTEM section has no alphabet");

  auto words_of = [&](const std::string& section) {
    std::vector<std::pair<std::size_t, Word>> out;
    for (const auto& [no, text] : sections[section]) {
      try {
        out.emplace_back(no, Word::parse(text));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), no);
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), no);
      }
    }
    return out;
  };

  FiniteLanguage base(*alphabet);
  for (const auto& [no, w] : words_of("BASE")) {
    if (!alphabet->covers(w)) throw ParseError("base word '" + w.str() + "' is not over the alphabet", no);
    base.insert(w);
  }

  auto with_line = [](std::size_t no, auto&& f) {
    try {
      return f();
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), no);
    } catch (const Error& e) {
      throw ParseError(e.what(), no);
    }
  };

  std::optional<std::variant<TGRSystem, CTGRSystem>> system;
  if (kind == "tgr") {
    FiniteLanguage templates(*alphabet);
    for (const auto& [no, w] : words_of("TEMPLATES")) with_line(no, [&] { templates.insert(w); return 0; });
    system.emplace(std::in_place_type<TGRSystem>, std::move(templates), *alphabet, n1, n2);
  } else {
    std::vector<PCTemplate> templates;
    for (const auto& [no, w] : words_of("TEMPLATES")) {
      templates.push_back(with_line(no, [&] { return parse_tau(w); }));
    }
    system.emplace(std::in_place_type<CTGRSystem>, std::move(templates), *alphabet, n1, n2);
  }

  std::optional<FilterPattern> filter;
  if (const auto& f = sections["FILTER"]; !f.empty()) {
    if (f.size() > 1) throw ParseError("FILTER section holds one pattern", f[1].first);
    filter = with_line(f[0].first, [&] { return FilterPattern::parse(f[0].second); });
  }

  WeakCoding coding;
  for (const auto& [no, text] : sections["CODING"]) {
    const auto parts = detail::split_ws(text);
    if (parts.size() != 3 || parts[1] != "->") throw ParseError("coding line must read '<symbol> -> <symbol or @>'", no);
    with_line(no, [&] {
      if (parts[2] == kEmptyWordToken) {
        coding.erase(Symbol(parts[0]));
      } else {
        coding.set(Symbol(parts[0]), Symbol(parts[2]));
      }
      return 0;
    });
  }

  std::map<Word, std::vector<std::string>> provenance;
  for (const auto& [no, text] : sections["PROVENANCE"]) {
    const auto cut = text.find(" <=");
    if (cut == std::string::npos) throw ParseError("provenance line must read '<word> <= <labels>'", no);
    const Word w = with_line(no, [&] { return Word::parse(text.substr(0, cut)); });
    std::string rest = text.substr(cut + 3);
    std::size_t start = 0;
    while (start <= rest.size()) {
      const auto end = rest.find(" ; ", start);
      const std::string label(detail::trim(rest.substr(start, end == std::string::npos ? std::string::npos : end - start)));
      if (!label.empty()) provenance[w].push_back(label);
      if (end == std::string::npos) break;
      start = end + 3;
    }
  }

  return SystemDump{std::move(*system), std::move(base), std::move(filter), std::move(coding), std::move(provenance)};
}

inline SystemDump parse_dump(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_dump(in);
}

/// The regular pipeline over a dumped TGR system; fails if the dump is contextual
/// or lacks a filter.
inline CompiledRegular as_compiled_regular(const SystemDump& d) {
  if (d.contextual()) throw ValidationError("dump holds a contextual system, expected a plain TGR system");
  if (!d.filter) throw ValidationError("dump has no filter");
  return CompiledRegular{std::get<TGRSystem>(d.system), d.base, *d.filter, d.coding, d.provenance};
}

}  // namespace tgr
