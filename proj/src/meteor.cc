#include "mteval/meteor.h"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "mteval/error.h"

namespace mteval::meteor {
namespace {

constexpr std::array<MatcherStage, 4> kCascade = {
    MatcherStage::kExact, MatcherStage::kStem, MatcherStage::kSynonym,
    MatcherStage::kParaphrase};

class Matcher {
 public:
  Matcher(const TokenSequence& hyp, const TokenSequence& ref)
      : hyp_(hyp), ref_(ref), hyp_used_(hyp.size()), ref_used_(ref.size()) {}

  template <typename Compatible>
  void MatchUnigrams(MatcherStage stage, Compatible compatible) {
    for (std::size_t i = 0; i < hyp_.size(); ++i) {
      if (hyp_used_[i]) continue;
      for (std::size_t j = 0; j < ref_.size(); ++j) {
        if (ref_used_[j] || !compatible(i, j)) continue;
        Take({i, i + 1}, {j, j + 1}, stage);
        break;
      }
    }
  }

  void MatchParaphrases(const text::ParaphraseTable& table) {
    struct Candidate {
      Span hyp;
      Span ref;
    };
    std::vector<Candidate> candidates;
    const std::size_t max_len = table.max_phrase_len();
    const auto& h = hyp_.tokens();
    const auto& r = ref_.tokens();
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (std::size_t a = 1; a <= max_len && i + a <= h.size(); ++a) {
        if (hyp_used_[i + a - 1]) break;
        const auto* equivalents =
            table.Equivalents(std::span<const std::string>(h).subspan(i, a));
        if (equivalents == nullptr) continue;
        for (const auto& phrase : *equivalents) {
          const std::size_t b = phrase.size();
          for (std::size_t j = 0; j + b <= r.size(); ++j) {
            if (std::equal(phrase.begin(), phrase.end(), r.begin() + j) &&
                Free(ref_used_, {j, j + b})) {
              candidates.push_back({{i, i + a}, {j, j + b}});
            }
          }
        }
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& x, const Candidate& y) {
                       const std::size_t lx = x.hyp.size() + x.ref.size();
                       const std::size_t ly = y.hyp.size() + y.ref.size();
                       return std::make_tuple(ly, x.hyp.begin, x.ref.begin,
                                              y.hyp.size()) <
                              std::make_tuple(lx, y.hyp.begin, y.ref.begin,
                                              x.hyp.size());
                     });
    for (const auto& c : candidates) {
      if (Free(hyp_used_, c.hyp) && Free(ref_used_, c.ref)) {
        Take(c.hyp, c.ref, MatcherStage::kParaphrase);
      }
    }
  }

  bool hyp_used(std::size_t i) const { return hyp_used_[i]; }

  Alignment Finish() {
    std::sort(alignment_.matches.begin(), alignment_.matches.end(),
              [](const Match& a, const Match& b) {
                return a.hyp.begin < b.hyp.begin;
              });
    return std::move(alignment_);
  }

 private:
  static bool Free(const std::vector<bool>& used, Span span) {
    for (std::size_t k = span.begin; k < span.end; ++k) {
      if (used[k]) return false;
    }
    return true;
  }

  void Take(Span hyp, Span ref, MatcherStage stage) {
    for (std::size_t k = hyp.begin; k < hyp.end; ++k) hyp_used_[k] = true;
    for (std::size_t k = ref.begin; k < ref.end; ++k) ref_used_[k] = true;
    alignment_.matches.push_back({hyp, ref, stage});
  }

  const TokenSequence& hyp_;
  const TokenSequence& ref_;
  std::vector<bool> hyp_used_;
  std::vector<bool> ref_used_;
  Alignment alignment_;
};

}  // namespace

std::string_view StageName(MatcherStage stage) {
  switch (stage) {
    case MatcherStage::kExact: return "exact";
    case MatcherStage::kStem: return "stem";
    case MatcherStage::kSynonym: return "synonym";
    case MatcherStage::kParaphrase: return "paraphrase";
  }
  return "exact";
}

StageSet::StageSet(std::initializer_list<MatcherStage> stages) {
  for (auto s : stages) bits_ |= Bit(s);
}

StageSet StageSet::With(MatcherStage s) const {
  StageSet out = *this;
  out.bits_ |= Bit(s);
  return out;
}

std::vector<MatcherStage> StageSet::ordered() const {
  std::vector<MatcherStage> out;
  for (auto s : kCascade) {
    if (contains(s)) out.push_back(s);
  }
  return out;
}

std::string StageSet::Code() const {
  static constexpr char kLetters[] = {'e', 's', 'y', 'p'};
  std::string code;
  for (auto s : ordered()) code.push_back(kLetters[static_cast<int>(s)]);
  return code;
}

std::size_t Alignment::matched_hyp_tokens() const {
  std::size_t n = 0;
  for (const auto& m : matches) n += m.hyp.size();
  return n;
}

std::size_t Alignment::matched_ref_tokens() const {
  std::size_t n = 0;
  for (const auto& m : matches) n += m.ref.size();
  return n;
}

bool IsValidAlignment(const Alignment& alignment, std::size_t hyp_len,
                      std::size_t ref_len) {
  std::vector<bool> hyp_used(hyp_len);
  std::vector<bool> ref_used(ref_len);
  for (const auto& m : alignment.matches) {
    if (m.hyp.size() == 0 || m.ref.size() == 0) return false;
    if (m.hyp.end > hyp_len || m.ref.end > ref_len) return false;
    if (m.stage != MatcherStage::kParaphrase &&
        (m.hyp.size() != 1 || m.ref.size() != 1)) {
      return false;
    }
    for (std::size_t k = m.hyp.begin; k < m.hyp.end; ++k) {
      if (hyp_used[k]) return false;
      hyp_used[k] = true;
    }
    for (std::size_t k = m.ref.begin; k < m.ref.end; ++k) {
      if (ref_used[k]) return false;
      ref_used[k] = true;
    }
  }
  return true;
}

Alignment Align(const TokenSequence& hyp, const TokenSequence& ref,
                const StageSet& stages, const Resources& resources) {
  if (!stages.contains(MatcherStage::kExact)) {
    throw EvalError(ErrorCode::kInvalidArgument,
                    "the exact stage must be enabled");
  }
  Matcher matcher(hyp, ref);
  for (auto stage : stages.ordered()) {
    switch (stage) {
      case MatcherStage::kExact:
        matcher.MatchUnigrams(stage, [&](std::size_t i, std::size_t j) {
          return hyp[i] == ref[j];
        });
        break;
      case MatcherStage::kStem: {
        if (resources.suffixes == nullptr) {
          throw EvalError(ErrorCode::kInvalidArgument,
                          "stem stage needs a suffix inventory");
        }
        std::vector<std::string> hyp_stems;
        std::vector<std::string> ref_stems;
        for (const auto& t : hyp) hyp_stems.push_back(text::Stem(t, *resources.suffixes));
        for (const auto& t : ref) ref_stems.push_back(text::Stem(t, *resources.suffixes));
        matcher.MatchUnigrams(stage, [&](std::size_t i, std::size_t j) {
          return hyp_stems[i] == ref_stems[j];
        });
        break;
      }
      case MatcherStage::kSynonym:
        if (resources.synonyms == nullptr) {
          throw EvalError(ErrorCode::kInvalidArgument,
                          "synonym stage needs a lexicon");
        }
        matcher.MatchUnigrams(stage, [&](std::size_t i, std::size_t j) {
          return text::SynonymsMatch(hyp[i], ref[j], *resources.synonyms);
        });
        break;
      case MatcherStage::kParaphrase:
        if (resources.paraphrases == nullptr) {
          throw EvalError(ErrorCode::kInvalidArgument,
                          "paraphrase stage needs a paraphrase table");
        }
        matcher.MatchParaphrases(*resources.paraphrases);
        break;
    }
  }
  return matcher.Finish();
}

std::size_t CountChunks(const Alignment& alignment) {
  std::vector<Match> matches = alignment.matches;
  std::sort(matches.begin(), matches.end(), [](const Match& a, const Match& b) {
    return a.hyp.begin < b.hyp.begin;
  });
  std::size_t chunks = 0;
  for (std::size_t k = 0; k < matches.size(); ++k) {
    const bool continues = k > 0 &&
                           matches[k].hyp.begin == matches[k - 1].hyp.end &&
                           matches[k].ref.begin == matches[k - 1].ref.end;
    if (!continues) ++chunks;
  }
  return chunks;
}

void MeteorParams::Validate() const {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw EvalError(ErrorCode::kInvalidArgument, "alpha must be in [0, 1]");
  }
  if (!(beta >= 0.0)) {
    throw EvalError(ErrorCode::kInvalidArgument, "beta must be >= 0");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw EvalError(ErrorCode::kInvalidArgument, "gamma must be in [0, 1]");
  }
}

MeteorDetail ScoreAgainst(const TokenSequence& hyp, const TokenSequence& ref,
                          const StageSet& stages, const Resources& resources,
                          const MeteorParams& params) {
  MeteorDetail d;
  if (hyp.empty() || ref.empty()) return d;
  const Alignment alignment = Align(hyp, ref, stages, resources);
  d.matched = alignment.matched_hyp_tokens();
  if (d.matched == 0) return d;
  d.chunks = CountChunks(alignment);
  d.precision = static_cast<double>(d.matched) / static_cast<double>(hyp.size());
  d.recall = static_cast<double>(alignment.matched_ref_tokens()) /
             static_cast<double>(ref.size());
  d.fmean = d.precision * d.recall /
            (params.alpha * d.precision + (1.0 - params.alpha) * d.recall);
  const double frag =
      static_cast<double>(d.chunks) / static_cast<double>(d.matched);
  d.penalty = params.gamma * std::pow(frag, params.beta);
  d.score = std::clamp((1.0 - d.penalty) * d.fmean, 0.0, 1.0);
  return d;
}

MetricScore MeteorSegment(const TokenSequence& hyp,
                          std::span<const TokenSequence> refs,
                          const StageSet& stages, const Resources& resources,
                          const MeteorParams& params,
                          const std::string& config_id) {
  params.Validate();
  if (refs.empty()) {
    throw EvalError(ErrorCode::kInsufficientReferences,
                    "at least one reference is required");
  }
  double best = 0.0;
  for (const auto& ref : refs) {
    best = std::max(best,
                    ScoreAgainst(hyp, ref, stages, resources, params).score);
  }
  return {best, config_id, Level::kSegment};
}

std::array<StageSet, 4> Table1Configs() {
  using S = MatcherStage;
  return {StageSet{S::kExact, S::kStem}, StageSet{S::kExact, S::kSynonym},
          StageSet{S::kExact, S::kStem, S::kSynonym},
          StageSet{S::kExact, S::kStem, S::kSynonym, S::kParaphrase}};
}

}  // namespace mteval::meteor
