#ifndef MTEVAL_CORRELATION_H_
#define MTEVAL_CORRELATION_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mteval/corpus.h"
#include "mteval/human.h"
#include "mteval/metrics.h"

namespace mteval::correlation {

enum class Method { kPearson, kSpearman };
enum class Granularity { kSegment, kDocument, kSystem };

std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);
std::string_view GranularityName(Granularity granularity);
Granularity ParseGranularity(std::string_view name);

// nullopt means undefined: one of the vectors has zero variance.
using Coefficient = std::optional<double>;

// Throws LengthMismatch when |x| != |y| or fewer than two points.
Coefficient Pearson(std::span<const double> x, std::span<const double> y);
// Pearson over average-tied ranks.
Coefficient Spearman(std::span<const double> x, std::span<const double> y);
Coefficient Correlate(Method method, std::span<const double> x,
                      std::span<const double> y);

// 1-based ranks; tied values share the mean of their positions.
std::vector<double> AverageRanks(std::span<const double> values);

struct ScoreVectorPair {
  std::vector<std::string> keys;
  std::vector<double> human;
  std::vector<double> metric;
};

struct ReportColumn {
  std::string system_id;  // "*" pools all systems (system granularity)
  std::size_t ref_count = 1;

  std::string Label() const;  // "<system_id>/<k>ref"
  friend bool operator==(const ReportColumn&, const ReportColumn&) = default;
};

struct CorrelationReport {
  Method method = Method::kPearson;
  Granularity granularity = Granularity::kSegment;
  std::vector<std::string> rows;  // metric config ids
  std::vector<ReportColumn> columns;
  std::vector<std::vector<Coefficient>> cells;  // [row][column]
};

struct ReportRequest {
  std::vector<MetricConfig> configs = Table1MetricConfigs();
  std::vector<std::size_t> ref_counts{1, 4};
  Method method = Method::kPearson;
  Granularity granularity = Granularity::kSegment;
  unsigned workers = 0;
};

// Pairs human and metric scores for one (config, system, ref_count) at the
// requested granularity. `system_id` "*" pools systems (system granularity).
ScoreVectorPair PairScores(const PreparedCorpus& prepared,
                           std::span<const human::RatingRecord> snapshot,
                           const MetricSuite& suite, const MetricConfig& config,
                           const std::string& system_id, std::size_t ref_count,
                           Granularity granularity, unsigned workers = 0);

// Throws InsufficientReferences (a ref count exceeds what the corpus has) and
// MissingRatings (listing the offending system/segment keys).
CorrelationReport BuildReport(const Corpus& corpus,
                              std::span<const human::RatingRecord> snapshot,
                              const MetricSuite& suite,
                              const ReportRequest& request);

// Delimited form: a `#method` line, a header row of column labels, then one
// row per config with 3-decimal cells ("NA" when undefined).
void WriteReportTsv(const CorrelationReport& report, std::ostream& out);
CorrelationReport ReadReportTsv(std::istream& in);
// Aligned text table with the two-level system / reference-count header.
void WriteReportText(const CorrelationReport& report, std::ostream& out);

}  // namespace mteval::correlation

#endif  // MTEVAL_CORRELATION_H_
