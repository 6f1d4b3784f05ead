#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "tgr/tgr.hpp"

using namespace tgr;
using namespace tgr::literals;

namespace {

std::string corpus(const std::string& name) {
  std::ifstream in(std::string(TGR_GRAMMAR_DIR) + "/" + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class G>
G grammar(const std::string& name) {
  return std::get<G>(parse_grammar(corpus(name)));
}

}  // namespace

TEST(Dump, RegularLayout) {
  const std::string text = dump_string(compile_regular(grammar<RegularGrammar>("astar_b.grammar")));
  EXPECT_EQ(text,
            "SYSTEM\nkind tgr\nalphabet # S a b\nn1 1\nn2 1\n"
            "BASE\nS a S\nS b #\n"
            "TEMPLATES\na S a\na S b\n"
            "FILTER\n{S} ({a b} {S})* ({a b} {#} | {#} {#})\n"
            "CODING\n# -> @\nS -> @\na -> a\nb -> b\n"
            "PROVENANCE\n"
            "S a S <= L2 S -> a S ; L4 S -> a S ; L3 S -> a S\n"
            "S b # <= L1 S -> b ; L5 S -> b\n"
            "a S a <= T2 S -> a S ; T1 S -> a S ; S -> a S\n"
            "a S b <= T1 S -> a S ; S -> b\n");
}

TEST(Dump, RegularRoundTripIsByteIdentical) {
  for (const char* name : {"astar_b.grammar", "ab_star.grammar", "finite.grammar", "astar.grammar", "ends_ab.grammar",
                           "unreachable.grammar"}) {
    const std::string text = dump_string(compile_regular(grammar<RegularGrammar>(name)));
    const SystemDump d = parse_dump(text);
    EXPECT_FALSE(d.contextual());
    EXPECT_EQ(dump_string(d), text) << name;
  }
}

TEST(Dump, ContextualRoundTripIsByteIdentical) {
  for (const char* name : {"swap.kuroda", "erasing.kuroda"}) {
    const CompiledRE cr = compile_kuroda(grammar<KurodaGrammar>(name));
    const std::string text = dump_string(cr);
    const SystemDump d = parse_dump(text);
    ASSERT_TRUE(d.contextual()) << name;
    EXPECT_EQ(dump_string(d), text) << name;
    EXPECT_EQ(std::get<CTGRSystem>(d.system).templates(), cr.system.templates());
    EXPECT_EQ(d.base, cr.base);
  }
}

TEST(Dump, ClosureOverParsedDumpMatchesCompiledSystem) {
  const CompiledRegular cr = compile_regular(grammar<RegularGrammar>("ends_ab.grammar"));
  const CompiledRegular back = as_compiled_regular(parse_dump(dump_string(cr)));
  const ClosureLimits limits{11, 64, 1'000'000};
  EXPECT_EQ(closure(back.system, back.base, limits).language, closure(cr.system, cr.base, limits).language);

  const CompiledRE re = compile_kuroda(grammar<KurodaGrammar>("swap.kuroda"));
  const SystemDump d = parse_dump(dump_string(re));
  const ClosureLimits small{12, 24, 1'000'000};
  EXPECT_EQ(closure_pc(std::get<CTGRSystem>(d.system), d.base, small).language,
            closure_pc(re.system, re.base, small).language);
}

TEST(Dump, CommentsOnlyBeforeSystem) {
  const std::string text = dump_string(compile_regular(grammar<RegularGrammar>("astar_b.grammar")));
  EXPECT_NO_THROW(parse_dump("# compiled from a*b\n\n" + text));
  // Inside BASE a line starting with '#' is a word.
  const std::string hashed = "SYSTEM\nkind tgr\nalphabet # a\nn1 1\nn2 1\nBASE\n# a\nTEMPLATES\n";
  const SystemDump d = parse_dump(hashed);
  EXPECT_TRUE(d.base.contains("# a"_w));
  EXPECT_FALSE(d.filter.has_value());
  EXPECT_THROW(as_compiled_regular(d), ValidationError);
}

TEST(Dump, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_dump(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("SYSTEM\nkind tgr\nalphabet a\nn1 x\nn2 1\nBASE\nTEMPLATES\n"), 4u);
  EXPECT_EQ(line_of("SYSTEM\nkind tgr\nalphabet a\nn1 1\nn2 1\nBASE\na q\nTEMPLATES\n"), 7u);
  EXPECT_EQ(line_of("SYSTEM\nkind ctgr\nalphabet a b c\nn1 1\nn2 1\nBASE\nTEMPLATES\na b c\n"), 8u);
  EXPECT_EQ(line_of("SYSTEM\nkind tgr\nalphabet a\nn1 1\nn2 1\nBASE\nTEMPLATES\nCODING\na => a\n"), 9u);
  EXPECT_THROW(parse_dump("SYSTEM\nkind tgr\nalphabet a\nn1 1\nn2 1\n"), ParseError);
}

TEST(Dump, CorruptedTemplateFailsTheCheck) {
  const RegularGrammar g = grammar<RegularGrammar>("astar_b.grammar");
  std::string text = dump_string(compile_regular(g));
  const auto at = text.find("a S b\nFILTER");
  ASSERT_NE(at, std::string::npos);
  text.replace(at, 5, "b S b");
  const EquivalenceReport r = equiv_check(as_compiled_regular(parse_dump(text)), g, 8, {19, 64, 1'000'000});
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.missing.empty());
}
