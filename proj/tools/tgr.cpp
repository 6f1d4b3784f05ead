// tgr: compile grammars into recombination systems, run closures, check and trace.
//
// Exit codes: 0 ok/pass, 1 fail/not found, 2 usage or I/O, 3 inconclusive.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tgr/tgr.hpp"

namespace {

enum Exit { kOk = 0, kFail = 1, kUsage = 2, kInconclusive = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  if (!std::filesystem::exists(path)) throw IoError(path + ": file not found");
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

tgr::AnyGrammar load_grammar(const std::string& path) {
  try {
    return tgr::parse_grammar(read_file(path));
  } catch (const tgr::ParseError& e) {
    throw tgr::ParseError(path + ": " + e.what());
  } catch (const tgr::ValidationError& e) {
    throw tgr::ValidationError(path + ": " + e.what());
  }
}

template <class G>
G load_as(const std::string& path, const char* expected) {
  auto any = load_grammar(path);
  if (!std::holds_alternative<G>(any)) {
    throw tgr::ValidationError(path + ": expected a " + std::string(expected) + " grammar");
  }
  return std::get<G>(std::move(any));
}

// Output sink: --out PATH or standard output.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw IoError(path + ": cannot write");
    }
  }
  std::ostream& get() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

 private:
  std::ofstream file_;
};

struct Caps {
  std::size_t k = 8;
  std::optional<std::size_t> max_len;
  std::optional<std::size_t> max_rounds;
  std::size_t max_set_size = tgr::ClosureLimits{}.max_set_size;
  std::size_t max_depth = tgr::SearchCaps{}.max_depth;
  std::size_t max_visited = tgr::SearchCaps{}.max_visited;

  tgr::ClosureLimits limits(std::size_t default_len, std::size_t default_rounds) const {
    return {max_len.value_or(default_len), max_rounds.value_or(default_rounds), max_set_size};
  }
  tgr::SearchCaps search() const {
    tgr::SearchCaps c;
    c.max_depth = max_depth;
    c.max_visited = max_visited;
    return c;
  }
};

std::string caps_line(const tgr::ClosureLimits& l) {
  return "max_len=" + std::to_string(l.max_len) + " max_rounds=" + std::to_string(l.max_rounds) +
         " max_set_size=" + std::to_string(l.max_set_size);
}

void add_closure_caps(CLI::App* cmd, Caps& caps) {
  cmd->add_option("--max-len", caps.max_len, "Longest word kept in the closure")->check(CLI::PositiveNumber);
  cmd->add_option("--max-rounds", caps.max_rounds, "Closure rounds")->check(CLI::PositiveNumber);
  cmd->add_option("--max-set-size", caps.max_set_size, "Abort when the closure holds more words")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void print_words(std::ostream& out, const std::set<tgr::Word>& words, const char* indent = "") {
  for (const auto& w : words) out << indent << w.str() << "\n";
}

tgr::ReConstruction parse_variant(const std::string& v) {
  return v == "as-stated" ? tgr::ReConstruction::as_stated : tgr::ReConstruction::repaired;
}

// ---------------------------------------------------------------------------

int cmd_compile(const std::string& kind, const std::string& path, const std::string& variant, const std::string& out) {
  std::string text;
  if (kind == "reg") {
    text = tgr::dump_string(tgr::compile_regular(load_as<tgr::RegularGrammar>(path, "regular")));
  } else {
    text = tgr::dump_string(tgr::compile_kuroda(load_as<tgr::KurodaGrammar>(path, "kuroda"), parse_variant(variant)));
  }
  Sink sink(out);
  sink.get() << text;
  return kOk;
}

int cmd_closure(const std::string& dump_path, const std::string& base_path, const Caps& caps, bool lines,
                const std::string& out) {
  const tgr::SystemDump dump = tgr::parse_dump(read_file(dump_path));
  tgr::FiniteLanguage base = dump.base;
  if (!base_path.empty()) {
    base = tgr::FiniteLanguage(dump.alphabet());
    for (const auto& w : tgr::parse_word_lines(read_file(base_path))) base.insert(w);
  }
  const tgr::ClosureLimits limits = caps.limits(tgr::ClosureLimits{}.max_len, tgr::ClosureLimits{}.max_rounds);
  const tgr::ClosureResult r = std::visit(
      [&](const auto& sys) {
        if constexpr (std::is_same_v<std::decay_t<decltype(sys)>, tgr::TGRSystem>) {
          return tgr::closure(sys, base, limits);
        } else {
          return tgr::closure_pc(sys, base, limits);
        }
      },
      dump.system);

  Sink sink(out);
  std::ostream& o = sink.get();
  const auto flag = [](bool b) { return b ? "true" : "false"; };
  if (lines) {
    o << "# caps " << caps_line(limits) << "\n";
    o << "# fixpoint " << flag(r.reached_fixpoint) << " truncated " << flag(r.truncated_by_length) << " rounds "
      << r.rounds_used << " words " << r.language.size() << "\n";
    print_words(o, r.language.words());
  } else {
    o << "fixpoint: " << flag(r.reached_fixpoint) << ", truncated: " << flag(r.truncated_by_length) << "\n";
    o << "rounds: " << r.rounds_used << ", words: " << r.language.size() << " (" << caps_line(limits) << ")\n";
    print_words(o, r.language.words(), "  ");
  }
  return kOk;
}

int cmd_check_reg(const std::string& grammar_path, const std::string& system_path, const Caps& caps, bool lines,
                  const std::string& out) {
  const auto g = load_as<tgr::RegularGrammar>(grammar_path, "regular");
  const tgr::CompiledRegular cr = system_path.empty() ? tgr::compile_regular(g)
                                                      : tgr::as_compiled_regular(tgr::parse_dump(read_file(system_path)));
  const tgr::ClosureLimits limits = caps.limits(2 * caps.k + 3, 64);
  const tgr::EquivalenceReport r = tgr::equiv_check(cr, g, caps.k, limits);

  const bool differ = !r.missing.empty() || !r.extra.empty();
  const char* verdict = differ ? "FAIL" : r.inconclusive ? "INCONCLUSIVE" : "PASS";
  Sink sink(out);
  std::ostream& o = sink.get();
  if (lines) {
    o << "# caps k=" << caps.k << " " << caps_line(limits) << "\n";
    o << "verdict " << verdict << "\n";
    for (const auto& w : r.missing) o << "missing " << w.str() << "\n";
    for (const auto& w : r.extra) o << "extra " << w.str() << "\n";
  } else {
    o << verdict << ": " << r.produced.size() << " produced, " << r.expected.size() << " expected up to length "
      << caps.k << " (" << caps_line(limits) << ")\n";
    if (!r.missing.empty()) {
      o << "missing:\n";
      print_words(o, r.missing, "  ");
    }
    if (!r.extra.empty()) {
      o << "extra:\n";
      print_words(o, r.extra, "  ");
    }
    if (r.inconclusive) o << "the bounded closure did not cover every encoding of length <= " << 2 * caps.k + 3 << "\n";
  }
  return differ ? kFail : r.inconclusive ? kInconclusive : kOk;
}

int cmd_check_re(const std::string& grammar_path, const std::string& variant, const Caps& caps, bool lines,
                 const std::string& out) {
  const auto g = load_as<tgr::KurodaGrammar>(grammar_path, "kuroda");
  const tgr::CompiledRE cr = tgr::compile_kuroda(g, parse_variant(variant));
  const tgr::ClosureLimits limits = caps.limits(16, 200);
  const tgr::SoundnessReport r = tgr::soundness_check(cr, caps.k, limits, caps.search());

  const char* verdict = !r.sound() ? "UNSOUND" : !r.conclusive() ? "INCONCLUSIVE" : "SOUND";
  Sink sink(out);
  std::ostream& o = sink.get();
  if (lines) {
    o << "# caps k=" << caps.k << " " << caps_line(limits) << " max_depth=" << caps.max_depth
      << " max_visited=" << caps.max_visited << "\n";
    o << "verdict " << verdict << "\n";
    o << "fixpoint " << (r.closure_fixpoint ? "true" : "false") << "\n";
    for (const auto& w : r.produced) {
      o << (r.non_members.count(w) ? "non-member " : r.unknown.count(w) ? "unknown " : "member ") << w.str() << "\n";
    }
  } else {
    o << verdict << ": " << r.produced.size() << " words of length <= " << caps.k << " produced, closure of "
      << r.closure_size << " words" << (r.closure_fixpoint ? " at fixpoint" : " (no fixpoint)") << " ("
      << caps_line(limits) << ", " << tgr::to_string(cr.variant) << ")\n";
    print_words(o, r.produced.words(), "  ");
    if (!r.non_members.empty()) {
      o << "not in the grammar's language:\n";
      print_words(o, r.non_members, "  ");
    }
    if (!r.unknown.empty()) {
      o << "membership undecided within search caps:\n";
      print_words(o, r.unknown, "  ");
    }
  }
  return !r.sound() ? kFail : !r.conclusive() ? kInconclusive : kOk;
}

int cmd_trace_reg(const std::string& grammar_path, const std::string& target, const Caps& caps, bool lines,
                  const std::string& out) {
  const auto g = load_as<tgr::RegularGrammar>(grammar_path, "regular");
  const tgr::CompiledRegular cr = tgr::compile_regular(g);
  const tgr::ClosureLimits limits = caps.limits(2 * caps.k + 3, 64);
  const auto trace = tgr::derivation_trace(cr.system, cr.base, tgr::Word::parse(target), limits);
  if (!trace) {
    std::cerr << "no trace within caps (" << caps_line(limits) << ")\n";
    return kFail;
  }
  Sink sink(out);
  std::ostream& o = sink.get();
  if (!lines) o << trace->size() << " event(s) to " << target << "\n";
  for (const auto& e : *trace) {
    o << e.x.str() << " | " << e.y.str() << " | " << e.t.str() << " | " << e.w.str() << "\n";
  }
  return kOk;
}

int cmd_trace_re(const std::string& grammar_path, const std::string& derivation_path, const std::string& variant,
                 bool lines, const std::string& out) {
  const auto g = load_as<tgr::KurodaGrammar>(grammar_path, "kuroda");
  const auto derivation = tgr::parse_word_lines(read_file(derivation_path));
  const tgr::CompiledRE cr = tgr::compile_kuroda(g, parse_variant(variant));
  tgr::SimulationTrace trace;
  try {
    trace = tgr::simulate_derivation(cr, derivation);
  } catch (const tgr::TraceError& e) {
    std::cerr << "trace failed: " << e.what() << "\n";
    return kFail;
  }
  Sink sink(out);
  std::ostream& o = sink.get();
  if (!lines) o << trace.events.size() << " event(s), phase | x | y | tau | w\n";
  for (const auto& step : trace.events) o << step.str() << "\n";
  if (!lines) o << "final word: " << trace.final_word.str() << "\n";
  return kOk;
}

int cmd_report(const std::string& grammar_path, bool lines, const std::string& out) {
  const auto g = load_as<tgr::RegularGrammar>(grammar_path, "regular");
  const tgr::CompiledRegular cr = tgr::compile_regular(g);
  const tgr::ComplexityReport r = tgr::complexity_report(cr, g);
  Sink sink(out);
  std::ostream& o = sink.get();
  if (lines) {
    o << "rules " << r.rules << "\ntemplates " << r.template_count << "\nbound " << r.our_bound << "\ndm-bound "
      << r.dm_bound << "\nalphabet " << r.alphabet_size << "\n";
  } else {
    o << "rules " << r.rules << " / templates " << r.template_count << " / bound " << r.our_bound << " / dm-bound "
      << r.dm_bound << " / alphabet " << r.alphabet_size << "\n";
  }
  if (!r.within_bound || !r.alphabet_matches) {
    std::cerr << "complexity bound violated: " << (r.within_bound ? "" : "|T| > n^2 ")
              << (r.alphabet_matches ? "" : "|alphabet| != |N| + |terminals| + 1") << "\n";
    return kFail;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Template-guided recombination: grammar compilers, closures and traces"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string kind, grammar, system, base, target, derivation, out, format = "human", variant = "repaired";
  Caps caps;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "lines"}))->capture_default_str();
    cmd->add_option("--out", out, "Write output to PATH instead of standard output");
  };
  auto add_kind = [&](CLI::App* cmd) {
    cmd->add_option("kind", kind, "reg or re")->required()->check(CLI::IsMember({"reg", "re"}));
    cmd->add_option("grammar", grammar, "Grammar file")->required();
  };
  auto add_variant = [&](CLI::App* cmd) {
    cmd->add_option("--variant", variant, "Template rules for re: repaired or as-stated")
        ->check(CLI::IsMember({"repaired", "as-stated"}))
        ->capture_default_str();
  };

  CLI::App* compile = app.add_subcommand("compile", "Compile a grammar and write the system dump");
  add_kind(compile);
  add_variant(compile);
  compile->add_option("--out", out, "Write the dump to PATH instead of standard output");

  CLI::App* closure = app.add_subcommand("closure", "Bounded closure of a dumped system");
  closure->add_option("system", system, "System dump")->required();
  closure->add_option("--base", base, "Language file replacing the dump's base");
  add_closure_caps(closure, caps);
  add_common(closure);

  CLI::App* check = app.add_subcommand("check", "reg: equality with the grammar up to k; re: soundness up to k");
  add_kind(check);
  check->add_option("--system", system, "reg only: check this dump instead of compiling the grammar");
  check->add_option("--k", caps.k, "Longest terminal word compared")->capture_default_str();
  add_closure_caps(check, caps);
  check->add_option("--max-depth", caps.max_depth, "re only: membership search depth")->capture_default_str();
  check->add_option("--max-visited", caps.max_visited, "re only: membership search size")->capture_default_str();
  add_variant(check);
  add_common(check);

  CLI::App* trace = app.add_subcommand("trace", "reg: events reaching --target; re: replay of --derivation");
  add_kind(trace);
  trace->add_option("--target", target, "reg: encoded word to reach, e.g. \"S a S b #\"");
  trace->add_option("--derivation", derivation, "re: file with one sentential form per line");
  trace->add_option("--k", caps.k, "reg: default max-len is 2k+3")->capture_default_str();
  add_closure_caps(trace, caps);
  add_variant(trace);
  add_common(trace);

  CLI::App* report = app.add_subcommand("report", "Template count and alphabet size of a compiled regular grammar");
  report->add_option("grammar", grammar, "Regular grammar file")->required();
  add_common(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const bool lines = format == "lines";
  try {
    if (*compile) return cmd_compile(kind, grammar, variant, out);
    if (*closure) return cmd_closure(system, base, caps, lines, out);
    if (*check) {
      if (kind == "re" && !system.empty()) throw CLI::ValidationError("--system", "only supported for reg");
      return kind == "reg" ? cmd_check_reg(grammar, system, caps, lines, out)
                           : cmd_check_re(grammar, variant, caps, lines, out);
    }
    if (*trace) {
      if (kind == "reg") {
        if (target.empty()) throw CLI::ValidationError("--target", "required for reg traces");
        return cmd_trace_reg(grammar, target, caps, lines, out);
      }
      if (derivation.empty()) throw CLI::ValidationError("--derivation", "required for re traces");
      return cmd_trace_re(grammar, derivation, variant, lines, out);
    }
    if (*report) return cmd_report(grammar, lines, out);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const tgr::ResourceLimitError& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return kInconclusive;
  } catch (const tgr::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
