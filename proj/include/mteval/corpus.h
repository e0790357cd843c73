#ifndef MTEVAL_CORPUS_H_
#define MTEVAL_CORPUS_H_

#include <compare>
#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mteval {

inline constexpr std::size_t kMaxReferences = 4;

struct SegmentKey {
  std::string doc_id;
  int seg_id = 0;

  friend auto operator<=>(const SegmentKey&, const SegmentKey&) = default;
  std::string ToString() const;
};

struct Segment {
  std::string doc_id;
  int seg_id = 0;  // 1-based within the document
  std::string source;
  // Raw reference lines by reference-file position. Individual entries may be
  // blank; at least one is not.
  std::vector<std::string> references;

  SegmentKey key() const { return {doc_id, seg_id}; }
  // Non-blank references among the first `limit` positions.
  std::vector<std::string> UsableReferences(std::size_t limit) const;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct Document {
  std::string doc_id;
  std::vector<Segment> segments;

  friend bool operator==(const Document&, const Document&) = default;
};

struct SystemOutput {
  std::string system_id;
  std::map<SegmentKey, std::string> hypotheses;

  friend bool operator==(const SystemOutput&, const SystemOutput&) = default;
};

struct ManifestEntry {
  std::string doc_id;
  std::size_t start_line = 0;  // 1-based, inclusive
  std::size_t end_line = 0;    // 1-based, inclusive
};

// Immutable after construction. The constructor validates every structural
// invariant and throws EvalError on violation.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Document> documents,
                  std::vector<SystemOutput> systems = {});

  const std::vector<Document>& documents() const { return documents_; }
  const std::vector<SystemOutput>& systems() const { return systems_; }
  std::size_t segment_count() const { return keys_.size(); }
  // Segment keys in corpus (line) order.
  const std::vector<SegmentKey>& keys() const { return keys_; }
  // Smallest reference count over all segments.
  std::size_t min_reference_count() const;

  const Segment* FindSegment(const SegmentKey& key) const;
  const Segment& SegmentAt(std::size_t index) const;
  const SystemOutput* FindSystem(const std::string& system_id) const;

  friend bool operator==(const Corpus& a, const Corpus& b) {
    return a.documents_ == b.documents_ && a.systems_ == b.systems_;
  }

 private:
  std::vector<Document> documents_;
  std::vector<SystemOutput> systems_;
  std::vector<SegmentKey> keys_;
  std::vector<std::pair<std::size_t, std::size_t>> positions_;
  std::map<SegmentKey, std::size_t> index_;
};

// Reads a UTF-8 file into lines, stripping only the line terminator.
std::vector<std::string> ReadLines(const std::filesystem::path& path);

// `doc_id<TAB>start_line<TAB>end_line` per line, sorted by start line.
std::vector<ManifestEntry> ParseManifest(std::istream& in);

// Builds a corpus from parallel line-aligned files. Throws LineCountMismatch,
// EmptySource, ManifestGap, ManifestOverlap.
Corpus LoadCorpus(const std::filesystem::path& manifest_path,
                  const std::filesystem::path& source_path,
                  const std::vector<std::filesystem::path>& reference_paths);

Corpus BuildCorpus(const std::vector<ManifestEntry>& manifest,
                   const std::vector<std::string>& source_lines,
                   const std::vector<std::vector<std::string>>& reference_lines);

// Returns a copy of `corpus` with the system added. Re-attaching identical
// content is a no-op; different content raises DuplicateSystemId.
Corpus AttachSystem(const Corpus& corpus, const std::string& system_id,
                    const std::filesystem::path& hypothesis_path);
Corpus AttachSystem(const Corpus& corpus, const std::string& system_id,
                    const std::vector<std::string>& hypothesis_lines);

// One JSON record per segment: doc_id, seg_id, source, references[],
// hypotheses{system_id: text}.
void SerializeCorpus(const Corpus& corpus, std::ostream& out);
Corpus DeserializeCorpus(std::istream& in);

}  // namespace mteval

#endif  // MTEVAL_CORPUS_H_
