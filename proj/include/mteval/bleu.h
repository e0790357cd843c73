#ifndef MTEVAL_BLEU_H_
#define MTEVAL_BLEU_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "mteval/score.h"
#include "mteval/text.h"

namespace mteval::bleu {

using text::TokenSequence;
using Ngram = std::vector<std::string>;
using NgramCounts = std::map<Ngram, int>;

enum class BrevityMode {
  kPaperLinear,         // min(1, c / r)
  kClassicExponential,  // 1 if c >= r else exp(1 - r / c)
};

struct Smoothing {
  enum class Kind { kNone, kAddEpsilon };
  Kind kind = Kind::kNone;
  double epsilon = 0.0;

  static Smoothing None() { return {}; }
  static Smoothing AddEpsilon(double eps) { return {Kind::kAddEpsilon, eps}; }
};

struct BleuConfig {
  int max_n = 4;
  std::vector<double> weights{0.25, 0.25, 0.25, 0.25};
  BrevityMode bp_mode = BrevityMode::kPaperLinear;
  Smoothing smoothing;

  // Uniform weights 1/n over orders 1..n.
  static BleuConfig Uniform(int n, BrevityMode mode = BrevityMode::kPaperLinear,
                            Smoothing smoothing = Smoothing::None());
  // Throws EvalError(kInvalidArgument) unless 1 <= max_n <= 4,
  // |weights| = max_n, weights >= 0 and sum to 1 within 1e-9.
  void Validate() const;
};

struct OrderStats {
  long matched_clipped = 0;
  long total_hyp = 0;

  friend bool operator==(const OrderStats&, const OrderStats&) = default;
};

// Sufficient statistics for one segment, or a pooled sum of segments.
struct NgramStats {
  std::vector<OrderStats> orders;  // orders[n - 1] for n-grams
  long hyp_len = 0;
  long ref_len = 0;  // effective reference length

  NgramStats& operator+=(const NgramStats& other);
  friend bool operator==(const NgramStats&, const NgramStats&) = default;
};

NgramCounts CountNgrams(const TokenSequence& seq, int n);

// Sum over hypothesis n-grams g of min(count_hyp(g), max_ref count_ref(g)).
OrderStats ClippedMatches(const TokenSequence& hyp,
                          std::span<const TokenSequence> refs, int n);

// Length of the reference closest to hyp_len; ties go to the shorter one.
long EffectiveReferenceLength(long hyp_len, std::span<const TokenSequence> refs);

// Throws EvalError(kEmptyHypothesis) when hyp_len == 0.
double BrevityFactor(long hyp_len, long ref_len, BrevityMode mode);

NgramStats CollectStats(const TokenSequence& hyp,
                        std::span<const TokenSequence> refs, int max_n);

// Orders whose hypothesis has no n-grams (hyp shorter than n) carry no
// evidence and are dropped; remaining weights are renormalized. A zero
// hypothesis length scores 0.
double BleuFromStats(const NgramStats& stats, const BleuConfig& config);

// Brevity factor times the arithmetic mean of p_1..p_N over the orders that
// have hypothesis n-grams. No smoothing.
double NistFromStats(const NgramStats& stats, int max_n, BrevityMode mode);

MetricScore BleuSegment(const TokenSequence& hyp,
                        std::span<const TokenSequence> refs,
                        const BleuConfig& config,
                        const std::string& config_id = "bleu");

// Corpus-style pooling: sums the statistics, then applies the formula once.
MetricScore BleuAggregate(std::span<const NgramStats> segments, Level level,
                          const BleuConfig& config,
                          const std::string& config_id = "bleu");

MetricScore NistVariantSegment(const TokenSequence& hyp,
                               std::span<const TokenSequence> refs, int max_n,
                               BrevityMode mode = BrevityMode::kPaperLinear,
                               const std::string& config_id = "nist");

MetricScore NistAggregate(std::span<const NgramStats> segments, Level level,
                          int max_n,
                          BrevityMode mode = BrevityMode::kPaperLinear,
                          const std::string& config_id = "nist");

}  // namespace mteval::bleu

#endif  // MTEVAL_BLEU_H_
