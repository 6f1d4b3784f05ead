#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "oracles.hpp"
#include "tgr/tgr.hpp"

using namespace tgr;
using namespace tgr::literals;

TEST(Symbol, TokensAreCheckedAndCompared) {
  EXPECT_THROW(Symbol(""), ValidationError);
  EXPECT_THROW(Symbol("a b"), ValidationError);
  EXPECT_THROW(Symbol("a\tb"), ValidationError);
  EXPECT_EQ(Symbol("#"), "#"_s);
  EXPECT_EQ(Symbol("$").token(), "$");
  EXPECT_EQ(Symbol("&").token(), "&");
  EXPECT_NE("Y_a"_s, "Y_b"_s);
  EXPECT_LT("A"_s, "B"_s);
}

TEST(Word, ParseAndPrint) {
  EXPECT_TRUE(Word::parse("@").empty());
  EXPECT_EQ(Word::parse("@").str(), "@");
  EXPECT_EQ(Word::parse("  S  a  #  ").str(), "S a #");
  EXPECT_EQ(Word::parse("S a #").size(), 3u);
  EXPECT_THROW(Word::parse("a @"), ParseError);
  EXPECT_THROW(Word::parse("   "), ParseError);
}

TEST(Word, ShortlexOrder) {
  std::vector<Word> ws = {"b a"_w, "a"_w, "@"_w, "a b"_w, "b"_w, "a a a"_w};
  std::sort(ws.begin(), ws.end());
  std::vector<std::string> printed;
  for (const auto& w : ws) printed.push_back(w.str());
  EXPECT_EQ(printed, (std::vector<std::string>{"@", "a", "b", "a b", "b a", "a a a"}));
}

TEST(Word, FactorsAndOccurrences) {
  const Word x = "S a X a X"_w;
  EXPECT_EQ(x.occurrences("a X"_w), (std::vector<std::size_t>{1, 3}));
  EXPECT_EQ(x.occurrences(Word{}).size(), 6u);
  EXPECT_TRUE(x.contains("X a"_w));
  EXPECT_FALSE(x.contains("X X"_w));
  EXPECT_EQ(x.slice(1, 2), "a X"_w);
  EXPECT_EQ(x.suffix_from(5), Word{});
}

TEST(ApplyCoding, ErasesNonterminalsAndMarker) {
  WeakCoding h;
  h.erase("S"_s).keep("a"_s).erase("#"_s);
  EXPECT_EQ(apply_coding(h, "S a #"_w), "a"_w);
}

TEST(ApplyCoding, EmptyWordMapsToEmptyWord) {
  WeakCoding h;
  h.keep("a"_s);
  EXPECT_EQ(apply_coding(h, Word{}), Word{});
  EXPECT_EQ(apply_coding(WeakCoding{}, Word{}), Word{});
}

TEST(ApplyCoding, ErasesEndMarkerY) {
  WeakCoding h;
  h.erase("Y"_s).keep("a"_s).keep("b"_s);
  EXPECT_EQ(apply_coding(h, "a b Y"_w), "a b"_w);
}

TEST(ApplyCoding, OutsideDomainNamesSymbol) {
  WeakCoding h;
  h.keep("a"_s);
  try {
    apply_coding(h, "a Q"_w);
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("'Q'"), std::string::npos);
  }
}

TEST(ApplyCoding, RenamingImage) {
  WeakCoding h;
  h.set("x"_s, "a"_s).erase("y"_s);
  EXPECT_EQ(h.apply("x y x"_w), "a a"_w);
}

TEST(ApplyCoding, HomomorphicOnRandomWords) {
  gen::Rng rng(11);
  const Alphabet a = gen::alphabet(4);
  for (int i = 0; i < 200; ++i) {
    WeakCoding h;
    for (Symbol s : a) {
      if (gen::uniform(rng, 0, 2) == 0) {
        h.erase(s);
      } else {
        h.set(s, *std::next(a.begin(), static_cast<long>(gen::uniform(rng, 0, a.size() - 1))));
      }
    }
    const Word u = gen::word(rng, a, 0, 6), v = gen::word(rng, a, 0, 6);
    EXPECT_EQ(h.apply(u + v), h.apply(u) + h.apply(v));
  }
}

// Filter patterns

namespace {

FilterPattern regular_filter_one_terminal_end() {
  using P = FilterPattern;
  const Alphabet sigma{"a"_s, "b"_s}, n{"S"_s, "X"_s};
  return P::concat({P::symbol("S"_s), P::star(P::concat({P::atom(sigma), P::atom(n)})), P::atom(sigma),
                    P::symbol("#"_s)});
}

}  // namespace

TEST(Matches, SpecExamples) {
  using P = FilterPattern;
  EXPECT_TRUE(matches(regular_filter_one_terminal_end(), "S a X b #"_w));
  EXPECT_TRUE(matches(P::concat({P::star(P::atom(Alphabet{"a"_s, "b"_s})), P::symbol("Y"_s)}), "Y"_w));
  const auto double_end = P::concat({P::symbol("S"_s),
                                     P::star(P::concat({P::atom(Alphabet{"a"_s, "b"_s}), P::atom(Alphabet{"S"_s, "X"_s})})),
                                     P::symbol("#"_s), P::symbol("#"_s)});
  EXPECT_TRUE(matches(double_end, "S a X # #"_w));
  EXPECT_FALSE(matches(double_end, "S a X #"_w));
  EXPECT_FALSE(matches(regular_filter_one_terminal_end(), "S a X #"_w));
}

TEST(Matches, EpsilonAndEmptyAtom) {
  using P = FilterPattern;
  EXPECT_TRUE(P::epsilon().matches(Word{}));
  EXPECT_FALSE(P::epsilon().matches("a"_w));
  EXPECT_FALSE(P::atom(std::set<Symbol>{}).matches(Word{}));
  EXPECT_TRUE(P::star(P::atom(std::set<Symbol>{})).matches(Word{}));
}

TEST(FilterPattern, ParseAndPrintRoundTrip) {
  for (const char* text : {"{S} ({a b} {S X})* ({a b} {#} | {#} {#})", "{a b}* {Y}", "@", "({a} | @) {b}*",
                           "({a} {b})*"}) {
    const FilterPattern p = FilterPattern::parse(text);
    EXPECT_EQ(FilterPattern::parse(p.str()).str(), p.str()) << text;
  }
  EXPECT_EQ(FilterPattern::parse("{a b}* {Y}").str(), "{a b}* {Y}");
  EXPECT_TRUE(FilterPattern::parse("{#} {#}").matches("# #"_w));
  EXPECT_THROW(FilterPattern::parse("({a}"), ParseError);
  EXPECT_THROW(FilterPattern::parse("{a"), ParseError);
  EXPECT_THROW(FilterPattern::parse("a"), ParseError);
}

namespace {

FilterPattern random_pattern(gen::Rng& rng, const Alphabet& a, int depth) {
  using P = FilterPattern;
  const std::size_t choice = depth <= 0 ? gen::uniform(rng, 0, 1) : gen::uniform(rng, 0, 5);
  switch (choice) {
    case 0: {
      std::set<Symbol> s;
      for (Symbol x : a) {
        if (gen::uniform(rng, 0, 1)) s.insert(x);
      }
      return P::atom(s);
    }
    case 1: return gen::uniform(rng, 0, 3) == 0 ? P::epsilon() : P::symbol(*a.begin());
    case 2:
    case 3: return P::concat({random_pattern(rng, a, depth - 1), random_pattern(rng, a, depth - 1)});
    case 4: return P::alternation({random_pattern(rng, a, depth - 1), random_pattern(rng, a, depth - 1)});
    default: return P::star(random_pattern(rng, a, depth - 1));
  }
}

}  // namespace

TEST(Matches, AgreesWithBacktrackingOracle) {
  gen::Rng rng(7);
  for (int i = 0; i < 60; ++i) {
    const Alphabet a = gen::alphabet(gen::uniform(rng, 1, 3));
    const FilterPattern p = random_pattern(rng, a, 4);
    const FilterPattern reparsed = FilterPattern::parse(p.str());
    for (const Word& w : words_up_to(a, 6)) {
      const bool expected = oracle::matches(p, w);
      ASSERT_EQ(p.matches(w), expected) << p.str() << " on " << w.str();
      ASSERT_EQ(reparsed.matches(w), expected) << p.str() << " reparsed, on " << w.str();
    }
  }
}

// Enumeration

TEST(WordsUpTo, SpecExamples) {
  const auto unary = words_up_to(Alphabet{"a"_s}, 2);
  EXPECT_EQ(unary.serialize(), "@\na\na a\n");
  EXPECT_EQ(words_up_to(Alphabet{"a"_s, "b"_s}, 1).size(), 3u);
  EXPECT_EQ(words_up_to(Alphabet{"a"_s, "b"_s}, 3).size(), 15u);
  EXPECT_EQ(words_up_to(Alphabet{"a"_s}, 0).size(), 1u);
}

TEST(WordsUpTo, CountIsGeometricSum) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (std::size_t k = 0; k <= 5; ++k) {
      std::size_t expected = 0, power = 1;
      for (std::size_t i = 0; i <= k; ++i, power *= n) expected += power;
      EXPECT_EQ(words_up_to(gen::alphabet(n), k).size(), expected) << n << "^" << k;
    }
  }
}

TEST(WordsUpTo, RefusesOverBudget) {
  try {
    words_up_to(gen::alphabet(5), 20, 1000);
    FAIL() << "expected ResourceLimitError";
  } catch (const ResourceLimitError& e) {
    EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos);
  }
  EXPECT_NO_THROW(words_up_to(gen::alphabet(2), 3, 15));
  EXPECT_THROW(words_up_to(gen::alphabet(2), 3, 14), ResourceLimitError);
}

// Finite languages

TEST(FiniteLanguage, SetSemanticsAndAlphabetCheck) {
  FiniteLanguage l(Alphabet{"a"_s, "b"_s});
  EXPECT_TRUE(l.insert("a b"_w));
  EXPECT_FALSE(l.insert("a b"_w));
  EXPECT_THROW(l.insert("a c"_w), DomainError);
  EXPECT_THROW(FiniteLanguage(Alphabet{"a"_s}, std::set<Word>{"b"_w}), DomainError);
}

TEST(FiniteLanguage, SerializationIndependentOfInsertionOrder) {
  gen::Rng rng(3);
  const Alphabet a = gen::alphabet(3);
  for (int i = 0; i < 100; ++i) {
    auto ws = gen::words(rng, a, 12, 0, 5);
    std::vector<Word> order(ws.begin(), ws.end());
    std::shuffle(order.begin(), order.end(), rng);
    FiniteLanguage l1 = FiniteLanguage::from(a, ws), l2 = FiniteLanguage::from(a, order);
    EXPECT_EQ(l1.serialize(), l2.serialize());
  }
}

TEST(LanguageFile, CommentsAndHashTokens) {
  const auto ws = parse_word_lines("# a comment\nS a #\n\n# \n#\n# # still a comment\n@\n");
  ASSERT_EQ(ws.size(), 3u);
  EXPECT_EQ(ws[0], "S a #"_w);
  EXPECT_EQ(ws[1], "#"_w);
  EXPECT_EQ(ws[2], Word{});
}

TEST(LanguageFile, ParseErrorsCarryLineNumber) {
  try {
    parse_word_lines("a\nb @\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}
