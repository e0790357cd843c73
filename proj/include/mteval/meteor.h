#ifndef MTEVAL_METEOR_H_
#define MTEVAL_METEOR_H_

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mteval/score.h"
#include "mteval/text.h"

namespace mteval::meteor {

using text::TokenSequence;

// Declaration order is cascade order.
enum class MatcherStage { kExact = 0, kStem = 1, kSynonym = 2, kParaphrase = 3 };

std::string_view StageName(MatcherStage stage);

class StageSet {
 public:
  StageSet() = default;
  StageSet(std::initializer_list<MatcherStage> stages);

  bool contains(MatcherStage s) const { return bits_ & Bit(s); }
  bool empty() const { return bits_ == 0; }
  StageSet With(MatcherStage s) const;
  // Enabled stages in cascade order.
  std::vector<MatcherStage> ordered() const;
  // "es", "ey", "esy", "esyp", ...
  std::string Code() const;

  friend bool operator==(const StageSet&, const StageSet&) = default;

 private:
  static unsigned Bit(MatcherStage s) { return 1u << static_cast<unsigned>(s); }
  unsigned bits_ = 0;
};

struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const { return end - begin; }
  friend bool operator==(const Span&, const Span&) = default;
};

struct Match {
  Span hyp;
  Span ref;
  MatcherStage stage = MatcherStage::kExact;

  friend bool operator==(const Match&, const Match&) = default;
};

struct Alignment {
  std::vector<Match> matches;  // sorted by hyp position

  std::size_t matched_hyp_tokens() const;
  std::size_t matched_ref_tokens() const;
};

// Spans in range and non-empty, hyp spans pairwise disjoint, ref spans
// pairwise disjoint, unigram spans for every stage but paraphrase.
bool IsValidAlignment(const Alignment& alignment, std::size_t hyp_len,
                      std::size_t ref_len);

struct Resources {
  const text::SuffixInventory* suffixes = nullptr;
  const text::SynonymLexicon* synonyms = nullptr;
  const text::ParaphraseTable* paraphrases = nullptr;
};

// Runs the enabled stages in cascade order. Each stage only sees tokens left
// unmatched by earlier stages. Unigram stages walk the hypothesis left to
// right and take the leftmost compatible unmatched reference token. The
// paraphrase stage prefers longer phrase pairs, then leftmost positions.
// Requires `exact` to be enabled and the resources of every enabled stage.
Alignment Align(const TokenSequence& hyp, const TokenSequence& ref,
                const StageSet& stages, const Resources& resources);

// Number of maximal runs of matches adjacent and in the same order on both
// sides.
std::size_t CountChunks(const Alignment& alignment);

struct MeteorParams {
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;

  void Validate() const;
};

struct MeteorDetail {
  double precision = 0.0;
  double recall = 0.0;
  double fmean = 0.0;
  double penalty = 0.0;
  double score = 0.0;
  std::size_t matched = 0;
  std::size_t chunks = 0;
};

// Scores a hypothesis against one reference.
MeteorDetail ScoreAgainst(const TokenSequence& hyp, const TokenSequence& ref,
                          const StageSet& stages, const Resources& resources,
                          const MeteorParams& params);

// Best score over references; 0 for an empty hypothesis.
MetricScore MeteorSegment(const TokenSequence& hyp,
                          std::span<const TokenSequence> refs,
                          const StageSet& stages, const Resources& resources,
                          const MeteorParams& params,
                          const std::string& config_id = "meteor");

// The four matcher combinations evaluated side by side: exact+stem,
// exact+synonym, exact+stem+synonym, and all four stages.
std::array<StageSet, 4> Table1Configs();

}  // namespace mteval::meteor

#endif  // MTEVAL_METEOR_H_
