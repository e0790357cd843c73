#include "mteval/corpus.h"

#include <gtest/gtest.h>

#include <numeric>
#include <sstream>

#include "mteval/error.h"
#include "test_util.h"

namespace mteval {
namespace {

using ::mteval::testing::TempDir;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const EvalError& e) {
    return e.code();
  }
  ADD_FAILURE() << "no EvalError thrown";
  return ErrorCode::kIo;
}

std::vector<std::string> Numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + " " + std::to_string(i));
  return out;
}

TEST(LoadCorpusTest, MinimalCorpus) {
  TempDir dir;
  const auto manifest = dir.Write("manifest.tsv", "doc1\t1\t1\n");
  const auto src = dir.WriteLines("source.txt", {"hello"});
  const auto ref = dir.WriteLines("ref1.txt", {"नमस्ते"});
  const Corpus c = LoadCorpus(manifest, src, {ref});
  ASSERT_EQ(c.documents().size(), 1u);
  EXPECT_EQ(c.segment_count(), 1u);
  EXPECT_EQ(c.SegmentAt(0).references, std::vector<std::string>{"नमस्ते"});
  EXPECT_EQ(c.SegmentAt(0).source, "hello");
}

TEST(LoadCorpusTest, TenDocumentsOfHundredSegments) {
  TempDir dir;
  std::string manifest;
  for (int d = 0; d < 10; ++d) {
    manifest += "doc" + std::to_string(d) + "\t" + std::to_string(d * 100 + 1) +
                "\t" + std::to_string(d * 100 + 100) + "\n";
  }
  const auto mpath = dir.Write("manifest.tsv", manifest);
  const auto src = dir.WriteLines("source.txt", Numbered("sentence", 1000));
  std::vector<std::filesystem::path> refs;
  for (int k = 1; k <= 4; ++k) {
    refs.push_back(dir.WriteLines("ref" + std::to_string(k) + ".txt",
                                  Numbered("वाक्य" + std::to_string(k), 1000)));
  }
  const Corpus c = LoadCorpus(mpath, src, refs);
  EXPECT_EQ(c.documents().size(), 10u);
  EXPECT_EQ(c.segment_count(), 1000u);
  std::size_t total = 0;
  for (const auto& doc : c.documents()) {
    EXPECT_EQ(doc.segments.size(), 100u);
    total += doc.segments.size();
    for (const auto& seg : doc.segments) EXPECT_EQ(seg.references.size(), 4u);
  }
  EXPECT_EQ(total, 1000u);
  // references[k] is line i of file k
  EXPECT_EQ(c.SegmentAt(437).references[2], "वाक्य3 438");
  EXPECT_EQ(c.SegmentAt(437).key(), (SegmentKey{"doc4", 38}));
}

TEST(LoadCorpusTest, LineCountMismatch) {
  EXPECT_EQ(CodeOf([] {
              BuildCorpus({{"d", 1, 3}}, {"a", "b", "c"}, {{"x", "y"}});
            }),
            ErrorCode::kLineCountMismatch);
}

TEST(LoadCorpusTest, EmptySource) {
  EXPECT_EQ(CodeOf([] { BuildCorpus({{"d", 1, 2}}, {"a", "  "}, {{"x", "y"}}); }),
            ErrorCode::kEmptySource);
}

TEST(LoadCorpusTest, ManifestGapAndOverlap) {
  EXPECT_EQ(CodeOf([] {
              BuildCorpus({{"d", 1, 1}, {"e", 3, 3}}, {"a", "b", "c"},
                          {{"x", "y", "z"}});
            }),
            ErrorCode::kManifestGap);
  EXPECT_EQ(CodeOf([] {
              BuildCorpus({{"d", 1, 2}}, {"a", "b", "c"}, {{"x", "y", "z"}});
            }),
            ErrorCode::kManifestGap);
  EXPECT_EQ(CodeOf([] {
              BuildCorpus({{"d", 1, 2}, {"e", 2, 3}}, {"a", "b", "c"},
                          {{"x", "y", "z"}});
            }),
            ErrorCode::kManifestOverlap);
}

TEST(LoadCorpusTest, BlankReferenceAllowedWhenAnotherExists) {
  const Corpus c = BuildCorpus({{"d", 1, 1}}, {"a"}, {{""}, {"y"}});
  EXPECT_EQ(c.SegmentAt(0).UsableReferences(4), std::vector<std::string>{"y"});
  EXPECT_TRUE(c.SegmentAt(0).UsableReferences(1).empty());
  EXPECT_EQ(CodeOf([] { BuildCorpus({{"d", 1, 1}}, {"a"}, {{""}, {" "}}); }),
            ErrorCode::kInsufficientReferences);
}

TEST(LoadCorpusTest, LinesKeepInternalWhitespace) {
  const Corpus c = BuildCorpus({{"d", 1, 1}}, {"  a   b "}, {{"x\ty"}});
  EXPECT_EQ(c.SegmentAt(0).source, "  a   b ");
  EXPECT_EQ(c.SegmentAt(0).references[0], "x\ty");
}

TEST(LoadCorpusTest, CrlfStripped) {
  TempDir dir;
  const auto p = dir.Write("f.txt", "a\r\nb\r\n");
  EXPECT_EQ(ReadLines(p), (std::vector<std::string>{"a", "b"}));
}

TEST(LoadCorpusTest, MissingFileIsIo) {
  TempDir dir;
  const auto manifest = dir.Write("manifest.tsv", "doc1\t1\t1\n");
  EXPECT_EQ(CodeOf([&] { LoadCorpus(manifest, dir / "nope.txt", {dir / "r"}); }),
            ErrorCode::kIo);
}

TEST(ParseManifestTest, RejectsMalformed) {
  std::istringstream bad("doc1\t1\n");
  EXPECT_THROW(ParseManifest(bad), EvalError);
  std::istringstream nonnum("doc1\tx\t3\n");
  EXPECT_THROW(ParseManifest(nonnum), EvalError);
}

class AttachTest : public ::testing::Test {
 protected:
  Corpus base_ = BuildCorpus({{"d1", 1, 2}, {"d2", 3, 3}}, {"a", "b", "c"},
                             {{"x", "y", "z"}});
};

TEST_F(AttachTest, AddsSystem) {
  const Corpus c = AttachSystem(base_, "google", std::vector<std::string>{"p", "q", "r"});
  ASSERT_NE(c.FindSystem("google"), nullptr);
  EXPECT_EQ(c.FindSystem("google")->hypotheses.at(SegmentKey{"d2", 1}), "r");
  EXPECT_EQ(c.keys(), base_.keys());
}

TEST_F(AttachTest, WrongLineCount) {
  EXPECT_EQ(CodeOf([&] {
              AttachSystem(base_, "google", std::vector<std::string>{"p", "q"});
            }),
            ErrorCode::kLineCountMismatch);
}

TEST_F(AttachTest, IdenticalReattachIsNoOp) {
  TempDir dir;
  const auto hyp = dir.WriteLines("google.txt", {"p", "q", "r"});
  const Corpus once = AttachSystem(base_, "google", hyp);
  const Corpus twice = AttachSystem(once, "google", hyp);
  EXPECT_EQ(twice.systems().size(), 1u);
  EXPECT_EQ(once, twice);
}

TEST_F(AttachTest, DifferentReattachRejected) {
  const Corpus once = AttachSystem(base_, "google", std::vector<std::string>{"p", "q", "r"});
  EXPECT_EQ(CodeOf([&] {
              AttachSystem(once, "google", std::vector<std::string>{"p", "q", "s"});
            }),
            ErrorCode::kDuplicateSystemId);
}

TEST_F(AttachTest, OrphanKeysRejectedByConstructor) {
  SystemOutput sys{"s", {{{"d1", 1}, "p"}, {{"d1", 2}, "q"}, {{"d9", 1}, "r"}}};
  EXPECT_THROW(Corpus(base_.documents(), {sys}), EvalError);
}

TEST(SerializeTest, RoundTrip) {
  Corpus c = BuildCorpus({{"यात्रा", 1, 2}, {"d2", 3, 4}},
                         {"Taj Mahal", "a \"quoted\" line", "tab\there", "x"},
                         {{"ताज महल", "", "r", "s"}, {"ताज", "b", "", "t"}});
  c = AttachSystem(c, "गूगल अनुवादक", std::vector<std::string>{"h1", "", "h3", "h4"});
  c = AttachSystem(c, "bing", std::vector<std::string>{"b1", "b2", "b3", "b4"});
  std::stringstream buf;
  SerializeCorpus(c, buf);
  const Corpus back = DeserializeCorpus(buf);
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.keys(), c.keys());
  std::stringstream again;
  SerializeCorpus(back, again);
  EXPECT_EQ(again.str(), buf.str());
}

TEST(SegmentKeyTest, OrdersByDocThenSegment) {
  EXPECT_LT((SegmentKey{"a", 10}), (SegmentKey{"b", 1}));
  EXPECT_LT((SegmentKey{"a", 2}), (SegmentKey{"a", 10}));
  EXPECT_EQ((SegmentKey{"a", 2}).ToString(), "a:2");
}

}  // namespace
}  // namespace mteval
