#ifndef MTEVAL_HUMAN_H_
#define MTEVAL_HUMAN_H_

#include <array>
#include <compare>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mteval/corpus.h"
#include "mteval/score.h"

namespace mteval::human {

inline constexpr std::size_t kCriteriaCount = 10;
inline constexpr int kMinRating = 0;
inline constexpr int kMaxRating = 4;

struct Criterion {
  int index = 0;  // 1..10
  std::string short_name;
  std::string description_hi;
  std::string description_en;

  friend bool operator==(const Criterion&, const Criterion&) = default;
};

// Built-in ten-point adequacy rubric.
const std::array<Criterion, kCriteriaCount>& Rubric();
// Reads a rubric file (`index<TAB>short<TAB>hindi<TAB>english`, '#' comments).
// Throws ParseError unless it lists exactly the indices 1..10.
std::vector<Criterion> LoadRubric(const std::filesystem::path& path);
std::filesystem::path DefaultRubricPath();

struct RatingKey {
  std::string judge_id;
  std::string system_id;
  std::string doc_id;
  int seg_id = 0;

  friend auto operator<=>(const RatingKey&, const RatingKey&) = default;
};

struct RatingRecord {
  std::string judge_id;
  std::string system_id;
  std::string doc_id;
  int seg_id = 0;
  std::vector<int> ratings;  // one per criterion, in rubric order
  std::string timestamp;

  RatingKey key() const { return {judge_id, system_id, doc_id, seg_id}; }
  SegmentKey segment() const { return {doc_id, seg_id}; }
  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

// Single-line JSON with fields in declaration order.
std::string SerializeRecord(const RatingRecord& record);
// Throws ParseError on malformed JSON, missing fields or wrong field types.
// Range and arity are checked by ValidateRecord, not here.
RatingRecord ParseRecord(std::string_view line);

// Throws MissingCriterion (wrong number of ratings) or OutOfRangeRating.
void ValidateRecord(const RatingRecord& record);

// Append-only rating log. The effective state keeps the latest record per
// (judge, system, doc, seg). Writes are serialized; reads take a snapshot.
class RatingStore {
 public:
  // In-memory store (no log file) validating against `corpus`.
  explicit RatingStore(const Corpus& corpus);
  // Replays `log_path` if it exists, then appends to it.
  RatingStore(const Corpus& corpus, const std::filesystem::path& log_path);

  RatingStore(const RatingStore&) = delete;
  RatingStore& operator=(const RatingStore&) = delete;

  // Validates, appends, and returns the record's sequence number in the log.
  // Throws OutOfRangeRating, MissingCriterion, UnknownSegment.
  std::size_t ValidateAndStore(const RatingRecord& record);

  // Effective records ordered by key.
  std::vector<RatingRecord> Snapshot() const;
  // Every appended record in submission order.
  std::vector<RatingRecord> History() const;
  bool Contains(const RatingKey& key) const;
  std::size_t history_size() const;

 private:
  void CheckKnown(const RatingRecord& record) const;
  void Apply(const RatingRecord& record);

  const Corpus* corpus_;
  mutable std::mutex mu_;
  std::optional<std::ofstream> log_;
  std::vector<RatingRecord> history_;
  std::map<RatingKey, RatingRecord> effective_;
};

// Read-only replay of a rating log into its effective (last-wins) records.
std::vector<RatingRecord> LoadLogSnapshot(const Corpus& corpus,
                                          const std::filesystem::path& log_path);

struct HumanScore {
  double value = 0.0;       // [0, 4]
  double normalized = 0.0;  // value / 4
  Level level = Level::kSegment;

  static HumanScore Of(double value, Level level);
};

// Flat mean over every criterion rating of every record. Throws NoRatings.
HumanScore SegmentHumanScore(std::span<const RatingRecord> records);

// Unweighted mean of segment scores. Throws NoRatings when empty.
HumanScore AggregateHuman(Level level, std::span<const HumanScore> scores);

// Segment human scores of one system, keyed by segment, from a snapshot.
std::map<SegmentKey, HumanScore> SegmentScoresForSystem(
    std::span<const RatingRecord> snapshot, const std::string& system_id);

}  // namespace mteval::human

#endif  // MTEVAL_HUMAN_H_
