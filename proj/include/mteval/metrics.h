#ifndef MTEVAL_METRICS_H_
#define MTEVAL_METRICS_H_

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mteval/bleu.h"
#include "mteval/corpus.h"
#include "mteval/meteor.h"
#include "mteval/text.h"

namespace mteval {

enum class MetricKind { kBleu, kNist, kMeteor };

// One scorable metric variant, identified by a fixed config id:
// bleu-1..bleu-4, nist-1..nist-4, meteor-es, meteor-ey, meteor-esy,
// meteor-esyp.
struct MetricConfig {
  std::string id;
  MetricKind kind = MetricKind::kBleu;
  int max_n = 4;
  meteor::StageSet stages;

  // Throws EvalError(kUnknownConfig).
  static MetricConfig Parse(const std::string& id);
};

// The eight rows of the correlation table, in display order.
std::vector<MetricConfig> Table1MetricConfigs();
// Hindi row label as printed in the correlation table, or the id itself.
std::string Table1RowLabel(const std::string& config_id);

struct MetricResources {
  text::TextOptions text;
  text::SuffixInventory suffixes;
  text::SynonymLexicon synonyms;
  text::ParaphraseTable paraphrases;
  meteor::MeteorParams meteor;
  bleu::BrevityMode bp_mode = bleu::BrevityMode::kPaperLinear;
  bleu::Smoothing smoothing;
};

// Tokenized view of a corpus. Reference slots keep their file position;
// blank or token-less references are empty optionals.
class PreparedCorpus {
 public:
  PreparedCorpus(const Corpus& corpus, const text::TextOptions& options);

  const Corpus& corpus() const { return *corpus_; }
  std::size_t system_index(const std::string& system_id) const;
  const text::TokenSequence& hypothesis(std::size_t system,
                                        std::size_t segment) const {
    return hyps_[system][segment];
  }
  // Usable references among the first `ref_count` positions. Throws
  // InsufficientReferences when none remain.
  std::vector<text::TokenSequence> references(std::size_t segment,
                                              std::size_t ref_count) const;

 private:
  const Corpus* corpus_;
  std::vector<std::vector<text::TokenSequence>> hyps_;
  std::vector<std::vector<std::optional<text::TokenSequence>>> refs_;
};

struct SystemScores {
  std::string system_id;
  std::string config_id;
  std::vector<double> segments;  // corpus key order
  std::vector<std::pair<std::string, double>> documents;  // document order
  double system = 0.0;
};

class MetricSuite {
 public:
  explicit MetricSuite(MetricResources resources);

  const MetricResources& resources() const { return resources_; }

  double ScoreSegment(const MetricConfig& config,
                      const text::TokenSequence& hyp,
                      std::span<const text::TokenSequence> refs) const;

  // Scores every segment (in parallel across `workers` threads), then rolls
  // up per document and per system. BLEU/NIST pool n-gram statistics;
  // METEOR averages segment scores.
  SystemScores ScoreSystem(const PreparedCorpus& prepared,
                           const std::string& system_id,
                           const MetricConfig& config, std::size_t ref_count,
                           unsigned workers = 0) const;

 private:
  bleu::BleuConfig BleuConfigFor(const MetricConfig& config) const;
  meteor::Resources MeteorResources() const;

  MetricResources resources_;
};

// Calls fn(i) for i in [0, n) across worker threads (0 = hardware threads).
void ParallelFor(std::size_t n, unsigned workers,
                 const std::function<void(std::size_t)>& fn);

// Fixed-point decimal rendering used by every output file.
std::string FormatValue(double value, int decimals);

// Score records: header plus `system_id<TAB>config_id<TAB>doc_id<TAB>seg_id
// <TAB>value`. Document roll-ups use seg_id "-"; system roll-ups use "-" for
// both doc_id and seg_id.
void WriteSegmentScores(const Corpus& corpus,
                        const std::vector<SystemScores>& scores,
                        std::ostream& out);
void WriteDocumentScores(const std::vector<SystemScores>& scores,
                         std::ostream& out);
void WriteSystemScores(const std::vector<SystemScores>& scores,
                       std::ostream& out);

}  // namespace mteval

#endif  // MTEVAL_METRICS_H_
