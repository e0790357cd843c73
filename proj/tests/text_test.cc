#include "mteval/text.h"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "mteval/error.h"
#include "test_util.h"

namespace mteval::text {
namespace {

using ::mteval::testing::TempDir;

TEST(NormalizeTest, CollapsesAndTrimsWhitespace) {
  EXPECT_EQ(Normalize("  नमस्ते   दुनिया "), "नमस्ते दुनिया");
  EXPECT_EQ(Normalize("a\t\tb\n c"), "a b c");
  EXPECT_EQ(Normalize(" x y　"), "x y");
}

TEST(NormalizeTest, EmptyStaysEmpty) {
  EXPECT_EQ(Normalize(""), "");
  EXPECT_EQ(Normalize("   \t "), "");
}

// Expected sequences taken from Python's unicodedata (Unicode 13) NFC.
TEST(NormalizeTest, NuktaFormsShareOneCanonicalSequence) {
  const std::string decomposed = "क़";  // KA + NUKTA
  const std::string precomposed = "क़";       // QA, a composition exclusion
  EXPECT_EQ(Normalize(decomposed), "क़");
  EXPECT_EQ(Normalize(precomposed), Normalize(decomposed));
}

TEST(NormalizeTest, ComposesWhereUnicodeComposes) {
  EXPECT_EQ(Normalize("ऩ"), "ऩ");  // NA + NUKTA -> NNNA
  EXPECT_EQ(Normalize("é"), "é");
}

TEST(NormalizeTest, Idempotent) {
  std::mt19937 rng(7);
  const std::vector<std::string> pieces = {"क", "़", " ", "  ", "\t", "ा",
                                           "e", "́", "।", "ड", "A", "क़"};
  for (int iter = 0; iter < 300; ++iter) {
    std::string s;
    const int len = static_cast<int>(rng() % 12);
    for (int i = 0; i < len; ++i) s += pieces[rng() % pieces.size()];
    const std::string once = Normalize(s);
    EXPECT_EQ(Normalize(once), once) << s;
  }
}

TEST(TokenizeTest, SplitsDanda) {
  EXPECT_EQ(Tokenize("वह घर गया।").tokens(),
            (std::vector<std::string>{"वह", "घर", "गया", "।"}));
  EXPECT_EQ(Tokenize("ठीक॥").tokens(), (std::vector<std::string>{"ठीक", "॥"}));
}

TEST(TokenizeTest, SplitsLatinPunctuation) {
  EXPECT_EQ(Tokenize("a,b").tokens(), (std::vector<std::string>{"a", ",", "b"}));
  EXPECT_EQ(Tokenize("(hi)!").tokens(),
            (std::vector<std::string>{"(", "hi", ")", "!"}));
}

TEST(TokenizeTest, DigitRunsStayWhole) {
  EXPECT_EQ(Tokenize("सन 2012 में").tokens(),
            (std::vector<std::string>{"सन", "2012", "में"}));
}

TEST(TokenizeTest, Empty) { EXPECT_TRUE(Tokenize("").empty()); }

TEST(TokenizeTest, RejoinIsFixedPoint) {
  std::mt19937 rng(11);
  const std::vector<std::string> pieces = {"घर", "।", ",", " ", "a", "B", "12",
                                           "!", "॥", "ka", "क़", "."};
  for (int iter = 0; iter < 300; ++iter) {
    std::string s;
    const int len = static_cast<int>(rng() % 10);
    for (int i = 0; i < len; ++i) s += pieces[rng() % pieces.size()];
    const TokenSequence seq = Tokenize(Normalize(s));
    EXPECT_EQ(Tokenize(Normalize(seq.Join())), seq) << s;
  }
}

TEST(TokenSequenceTest, RejectsBadTokens) {
  EXPECT_THROW(TokenSequence({"a", ""}), EvalError);
  EXPECT_THROW(TokenSequence({"a b"}), EvalError);
}

TEST(PrepareTest, FoldsLatinOnlyAndCanDropPunctuation) {
  EXPECT_EQ(Prepare("Taj MAHAL घर।").tokens(),
            (std::vector<std::string>{"taj", "mahal", "घर", "।"}));
  TextOptions opts;
  opts.keep_punctuation = false;
  opts.fold_latin_case = false;
  EXPECT_EQ(Prepare("Taj, घर।", opts).tokens(),
            (std::vector<std::string>{"Taj", "घर"}));
}

TEST(StemTest, DefaultInventoryStripsLongestSuffix) {
  const auto inv = SuffixInventory::LoadDefault();
  EXPECT_EQ(Stem("लड़के", inv), "लड़क");
  EXPECT_EQ(Stem("लड़का", inv), "लड़क");
  EXPECT_EQ(Stem("लड़कियों", inv), "लड़क");
}

TEST(StemTest, NoSuffixIsIdentity) {
  const auto inv = SuffixInventory::LoadDefault();
  EXPECT_EQ(Stem("घर", inv), "घर");
  EXPECT_EQ(Stem("hello", inv), "hello");
}

TEST(StemTest, TokenEqualToSuffixIsUnchanged) {
  SuffixInventory inv({"ने", "े"});
  EXPECT_EQ(Stem("े", inv), "े");
  EXPECT_EQ(Stem("ने", SuffixInventory({"ने"})), "ने");
  // a shorter suffix that leaves a stem still applies
  EXPECT_EQ(Stem("ने", inv), "न");
}

TEST(StemTest, MinStemLengthFallsBackToShorterSuffix) {
  SuffixInventory inv({"ab", "b"}, 2);
  EXPECT_EQ(Stem("xab", inv), "xa");  // "ab" would leave 1 char
  EXPECT_EQ(Stem("xyab", inv), "xy");
}

TEST(StemTest, PrefixAndLengthProperty) {
  const auto inv = SuffixInventory::LoadDefault();
  std::mt19937 rng(3);
  const std::vector<std::string> pieces = {"क", "ल", "ड़", "ा", "े", "ों", "ि",
                                           "या", "ने", "ता", "ओं", "ी", "ग"};
  for (int iter = 0; iter < 500; ++iter) {
    std::string tok;
    const int len = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < len; ++i) tok += pieces[rng() % pieces.size()];
    tok = Normalize(tok);
    const std::string s = Stem(tok, inv);
    EXPECT_TRUE(tok.starts_with(s)) << tok;
    EXPECT_GE(CodePointLength(s),
              std::min(inv.min_stem_len(), CodePointLength(tok)));
  }
}

TEST(SuffixInventoryTest, SortedByLengthWithoutDuplicates) {
  std::istringstream in("# comment\nा\nाएंगी\n\nने\nा\n");
  const auto inv = SuffixInventory::Parse(in);
  EXPECT_EQ(inv.suffixes(), (std::vector<std::string>{"ाएंगी", "ने", "ा"}));

  const auto def = SuffixInventory::LoadDefault();
  for (std::size_t i = 1; i < def.suffixes().size(); ++i) {
    EXPECT_GE(CodePointLength(def.suffixes()[i - 1]),
              CodePointLength(def.suffixes()[i]));
  }
}

TEST(SynonymLexiconTest, ParsesSynsets) {
  std::istringstream in("17\tघर\tमकान\n18\tमकान\tभवन\n");
  const auto lex = SynonymLexicon::Parse(in);
  EXPECT_TRUE(SynonymsMatch("घर", "मकान", lex));
  EXPECT_TRUE(SynonymsMatch("मकान", "भवन", lex));
  EXPECT_FALSE(SynonymsMatch("घर", "भवन", lex));  // no shared synset id
}

TEST(SynonymLexiconTest, IdenticalTokensAreNotSynonyms) {
  std::istringstream in("17\tघर\tमकान\n");
  const auto lex = SynonymLexicon::Parse(in);
  EXPECT_FALSE(SynonymsMatch("घर", "घर", lex));
}

TEST(SynonymLexiconTest, AbsentTokenNeverMatches) {
  std::istringstream in("17\tघर\tमकान\n");
  const auto lex = SynonymLexicon::Parse(in);
  EXPECT_FALSE(SynonymsMatch("पानी", "घर", lex));
  EXPECT_FALSE(SynonymsMatch("घर", "पानी", lex));
}

TEST(SynonymLexiconTest, EmptyFile) {
  TempDir dir;
  const auto lex = SynonymLexicon::Load(dir.Write("empty.tsv", ""));
  EXPECT_EQ(lex.size(), 0u);
  EXPECT_FALSE(SynonymsMatch("a", "b", lex));
}

TEST(SynonymLexiconTest, MalformedLineReportsLineNumber) {
  std::istringstream in("1\ta\tb\n17 घर\n");
  try {
    SynonymLexicon::Parse(in);
    FAIL() << "expected ParseError";
  } catch (const EvalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParseError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(SynonymLexiconTest, MissingFileIsIoError) {
  try {
    SynonymLexicon::Load("/nonexistent/lexicon.tsv");
    FAIL();
  } catch (const EvalError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

TEST(SynonymLexiconTest, MatchIsSymmetric) {
  std::mt19937 rng(5);
  SynonymLexicon lex;
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g"};
  for (int i = 0; i < 12; ++i) {
    lex.Add(std::to_string(rng() % 4), vocab[rng() % vocab.size()]);
  }
  for (const auto& x : vocab) {
    for (const auto& y : vocab) {
      EXPECT_EQ(SynonymsMatch(x, y, lex), SynonymsMatch(y, x, lex));
    }
  }
}

TEST(ParaphraseTableTest, LookupIsSymmetric) {
  std::istringstream in("बहुत अच्छा\tउत्तम\nघर जाना\tघर जाना\nबहुत अच्छा\tउत्तम\n");
  const auto table = ParaphraseTable::Parse(in);
  const std::vector<std::string> a = {"बहुत", "अच्छा"};
  const std::vector<std::string> b = {"उत्तम"};
  EXPECT_TRUE(table.Matches(a, b));
  EXPECT_TRUE(table.Matches(b, a));
  EXPECT_EQ(table.max_phrase_len(), 2u);
  EXPECT_EQ(table.Equivalents(a)->size(), 1u);  // duplicate pair absorbed
}

TEST(ParaphraseTableTest, RejectsMalformedLines) {
  std::istringstream no_tab("बहुत अच्छा उत्तम\n");
  EXPECT_THROW(ParaphraseTable::Parse(no_tab), EvalError);
  std::istringstream empty_side("बहुत\t \n");
  EXPECT_THROW(ParaphraseTable::Parse(empty_side), EvalError);
}

TEST(FoldLatinCaseTest, LeavesOtherScriptsAlone) {
  EXPECT_EQ(FoldLatinCase("ÀBC घर ΣΑ"), "àbc घर ΣΑ");
}

}  // namespace
}  // namespace mteval::text
