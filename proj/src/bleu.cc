#include "mteval/bleu.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "mteval/error.h"

namespace mteval {

std::string_view LevelName(Level level) {
  switch (level) {
    case Level::kSegment: return "segment";
    case Level::kDocument: return "document";
    case Level::kSystem: return "system";
  }
  return "segment";
}

namespace bleu {
namespace {

void RequireRefs(std::span<const TokenSequence> refs) {
  if (refs.empty()) {
    throw EvalError(ErrorCode::kInsufficientReferences,
                    "at least one reference is required");
  }
}

double Clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

BleuConfig BleuConfig::Uniform(int n, BrevityMode mode, Smoothing smoothing) {
  BleuConfig config;
  config.max_n = n;
  config.weights.assign(n > 0 ? static_cast<std::size_t>(n) : 0,
                        n > 0 ? 1.0 / n : 0.0);
  config.bp_mode = mode;
  config.smoothing = smoothing;
  config.Validate();
  return config;
}

void BleuConfig::Validate() const {
  if (max_n < 1 || max_n > 4) {
    throw EvalError(ErrorCode::kInvalidArgument, "max_n must be in 1..4");
  }
  if (weights.size() != static_cast<std::size_t>(max_n)) {
    throw EvalError(ErrorCode::kInvalidArgument, "need one weight per order");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) {
      throw EvalError(ErrorCode::kInvalidArgument, "negative weight");
    }
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw EvalError(ErrorCode::kInvalidArgument, "weights must sum to 1");
  }
  if (smoothing.kind == Smoothing::Kind::kAddEpsilon &&
      !(smoothing.epsilon > 0.0 && smoothing.epsilon <= 1.0)) {
    throw EvalError(ErrorCode::kInvalidArgument, "epsilon must be in (0, 1]");
  }
}

NgramStats& NgramStats::operator+=(const NgramStats& other) {
  if (orders.size() < other.orders.size()) orders.resize(other.orders.size());
  for (std::size_t i = 0; i < other.orders.size(); ++i) {
    orders[i].matched_clipped += other.orders[i].matched_clipped;
    orders[i].total_hyp += other.orders[i].total_hyp;
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

NgramCounts CountNgrams(const TokenSequence& seq, int n) {
  NgramCounts counts;
  if (n < 1) throw EvalError(ErrorCode::kInvalidArgument, "n must be >= 1");
  const auto& toks = seq.tokens();
  const std::size_t order = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + order <= toks.size(); ++i) {
    ++counts[Ngram(toks.begin() + i, toks.begin() + i + order)];
  }
  return counts;
}

OrderStats ClippedMatches(const TokenSequence& hyp,
                          std::span<const TokenSequence> refs, int n) {
  RequireRefs(refs);
  const NgramCounts hyp_counts = CountNgrams(hyp, n);
  NgramCounts max_ref;
  for (const auto& ref : refs) {
    for (const auto& [gram, count] : CountNgrams(ref, n)) {
      int& slot = max_ref[gram];
      slot = std::max(slot, count);
    }
  }
  OrderStats stats;
  stats.total_hyp = std::max<long>(0, static_cast<long>(hyp.size()) - n + 1);
  for (const auto& [gram, count] : hyp_counts) {
    auto it = max_ref.find(gram);
    if (it != max_ref.end()) stats.matched_clipped += std::min(count, it->second);
  }
  return stats;
}

long EffectiveReferenceLength(long hyp_len,
                              std::span<const TokenSequence> refs) {
  RequireRefs(refs);
  long best = static_cast<long>(refs[0].size());
  for (const auto& ref : refs.subspan(1)) {
    const long len = static_cast<long>(ref.size());
    const long d = std::labs(len - hyp_len);
    const long best_d = std::labs(best - hyp_len);
    if (d < best_d || (d == best_d && len < best)) best = len;
  }
  return best;
}

double BrevityFactor(long hyp_len, long ref_len, BrevityMode mode) {
  if (hyp_len < 0 || ref_len < 1) {
    throw EvalError(ErrorCode::kInvalidArgument,
                    "brevity factor needs hyp_len >= 0 and ref_len >= 1");
  }
  if (hyp_len == 0) {
    throw EvalError(ErrorCode::kEmptyHypothesis, "empty hypothesis");
  }
  if (hyp_len >= ref_len) return 1.0;
  const double c = static_cast<double>(hyp_len);
  const double r = static_cast<double>(ref_len);
  switch (mode) {
    case BrevityMode::kPaperLinear:
      return c / r;
    case BrevityMode::kClassicExponential:
      return std::exp(1.0 - r / c);
  }
  return 1.0;
}

NgramStats CollectStats(const TokenSequence& hyp,
                        std::span<const TokenSequence> refs, int max_n) {
  RequireRefs(refs);
  NgramStats stats;
  for (int n = 1; n <= max_n; ++n) {
    stats.orders.push_back(ClippedMatches(hyp, refs, n));
  }
  stats.hyp_len = static_cast<long>(hyp.size());
  stats.ref_len = EffectiveReferenceLength(stats.hyp_len, refs);
  return stats;
}

double BleuFromStats(const NgramStats& stats, const BleuConfig& config) {
  config.Validate();
  if (stats.orders.size() < static_cast<std::size_t>(config.max_n)) {
    throw EvalError(ErrorCode::kInvalidArgument,
                    "statistics collected for fewer orders than max_n");
  }
  if (stats.hyp_len == 0) return 0.0;
  const double factor = BrevityFactor(stats.hyp_len, stats.ref_len,
                                      config.bp_mode);

  double weight_sum = 0.0;
  for (int n = 1; n <= config.max_n; ++n) {
    if (stats.orders[n - 1].total_hyp > 0) weight_sum += config.weights[n - 1];
  }
  if (weight_sum <= 0.0) return Clamp01(factor);

  double log_sum = 0.0;
  for (int n = 1; n <= config.max_n; ++n) {
    const OrderStats& o = stats.orders[n - 1];
    const double w = config.weights[n - 1] / weight_sum;
    if (o.total_hyp == 0 || w == 0.0) continue;
    double matched = static_cast<double>(o.matched_clipped);
    if (matched == 0.0) {
      if (config.smoothing.kind == Smoothing::Kind::kNone) return 0.0;
      matched = config.smoothing.epsilon;
    }
    log_sum += w * std::log(matched / static_cast<double>(o.total_hyp));
  }
  return Clamp01(factor * std::exp(log_sum));
}

double NistFromStats(const NgramStats& stats, int max_n, BrevityMode mode) {
  if (max_n < 1) throw EvalError(ErrorCode::kInvalidArgument, "max_n < 1");
  if (stats.orders.size() < static_cast<std::size_t>(max_n)) {
    throw EvalError(ErrorCode::kInvalidArgument,
                    "statistics collected for fewer orders than max_n");
  }
  if (stats.hyp_len == 0) return 0.0;
  const double factor = BrevityFactor(stats.hyp_len, stats.ref_len, mode);
  double sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= max_n; ++n) {
    const OrderStats& o = stats.orders[n - 1];
    if (o.total_hyp == 0) continue;
    sum += static_cast<double>(o.matched_clipped) /
           static_cast<double>(o.total_hyp);
    ++orders;
  }
  if (orders == 0) return 0.0;
  return Clamp01(factor * sum / orders);
}

MetricScore BleuSegment(const TokenSequence& hyp,
                        std::span<const TokenSequence> refs,
                        const BleuConfig& config,
                        const std::string& config_id) {
  config.Validate();
  const NgramStats stats = CollectStats(hyp, refs, config.max_n);
  return {BleuFromStats(stats, config), config_id, Level::kSegment};
}

MetricScore BleuAggregate(std::span<const NgramStats> segments, Level level,
                          const BleuConfig& config,
                          const std::string& config_id) {
  if (segments.empty()) {
    throw EvalError(ErrorCode::kInvalidArgument, "nothing to aggregate");
  }
  NgramStats pooled;
  for (const auto& s : segments) pooled += s;
  return {BleuFromStats(pooled, config), config_id, level};
}

MetricScore NistVariantSegment(const TokenSequence& hyp,
                               std::span<const TokenSequence> refs, int max_n,
                               BrevityMode mode, const std::string& config_id) {
  const NgramStats stats = CollectStats(hyp, refs, max_n);
  return {NistFromStats(stats, max_n, mode), config_id, Level::kSegment};
}

MetricScore NistAggregate(std::span<const NgramStats> segments, Level level,
                          int max_n, BrevityMode mode,
                          const std::string& config_id) {
  if (segments.empty()) {
    throw EvalError(ErrorCode::kInvalidArgument, "nothing to aggregate");
  }
  NgramStats pooled;
  for (const auto& s : segments) pooled += s;
  return {NistFromStats(pooled, max_n, mode), config_id, level};
}

}  // namespace bleu
}  // namespace mteval
