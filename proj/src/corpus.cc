#include "mteval/corpus.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mteval/error.h"

namespace mteval {
namespace {

using ordered_json = nlohmann::ordered_json;

bool IsBlank(const std::string& s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

std::size_t ParseLineNumber(const std::string& field, std::size_t line_no) {
  std::size_t value = 0;
  std::size_t used = 0;
  try {
    value = std::stoul(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || value == 0) {
    throw EvalError(ErrorCode::kParseError,
                    "manifest line " + std::to_string(line_no) +
                        ": bad line number '" + field + "'");
  }
  return value;
}

}  // namespace

std::string SegmentKey::ToString() const {
  return doc_id + ":" + std::to_string(seg_id);
}

std::vector<std::string> Segment::UsableReferences(std::size_t limit) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < references.size() && i < limit; ++i) {
    if (!IsBlank(references[i])) out.push_back(references[i]);
  }
  return out;
}

Corpus::Corpus(std::vector<Document> documents,
               std::vector<SystemOutput> systems)
    : documents_(std::move(documents)), systems_(std::move(systems)) {
  std::set<std::string> doc_ids;
  for (std::size_t d = 0; d < documents_.size(); ++d) {
    const Document& doc = documents_[d];
    if (!doc_ids.insert(doc.doc_id).second) {
      throw EvalError(ErrorCode::kDuplicateSegment,
                      "duplicate document id " + doc.doc_id);
    }
    for (std::size_t s = 0; s < doc.segments.size(); ++s) {
      const Segment& seg = doc.segments[s];
      if (seg.doc_id != doc.doc_id ||
          seg.seg_id != static_cast<int>(s) + 1) {
        throw EvalError(ErrorCode::kInvalidArgument,
                        "segment ids of document " + doc.doc_id +
                            " are not contiguous from 1");
      }
      if (IsBlank(seg.source)) {
        throw EvalError(ErrorCode::kEmptySource,
                        "blank source for " + seg.key().ToString());
      }
      if (seg.references.empty() || seg.references.size() > kMaxReferences) {
        throw EvalError(ErrorCode::kInvalidArgument,
                        "segment " + seg.key().ToString() + " has " +
                            std::to_string(seg.references.size()) +
                            " references (1..4 allowed)");
      }
      if (seg.UsableReferences(kMaxReferences).empty()) {
        throw EvalError(ErrorCode::kInsufficientReferences,
                        "no non-blank reference for " + seg.key().ToString());
      }
      index_.emplace(seg.key(), keys_.size());
      keys_.push_back(seg.key());
      positions_.emplace_back(d, s);
    }
  }

  std::set<std::string> system_ids;
  for (const SystemOutput& sys : systems_) {
    if (!system_ids.insert(sys.system_id).second) {
      throw EvalError(ErrorCode::kDuplicateSystemId,
                      "system listed twice: " + sys.system_id);
    }
    if (sys.hypotheses.size() != keys_.size()) {
      throw EvalError(ErrorCode::kLineCountMismatch,
                      "system " + sys.system_id + " has " +
                          std::to_string(sys.hypotheses.size()) +
                          " hypotheses for " + std::to_string(keys_.size()) +
                          " segments");
    }
    for (const auto& [key, text] : sys.hypotheses) {
      if (!index_.contains(key)) {
        throw EvalError(ErrorCode::kUnknownSegment,
                        "system " + sys.system_id + " has orphan key " +
                            key.ToString());
      }
    }
  }
}

std::size_t Corpus::min_reference_count() const {
  std::size_t result = kMaxReferences;
  for (const auto& doc : documents_) {
    for (const auto& seg : doc.segments) {
      result = std::min(result, seg.references.size());
    }
  }
  return keys_.empty() ? 0 : result;
}

const Segment* Corpus::FindSegment(const SegmentKey& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? nullptr : &SegmentAt(it->second);
}

const Segment& Corpus::SegmentAt(std::size_t index) const {
  const auto [d, s] = positions_.at(index);
  return documents_[d].segments[s];
}

const SystemOutput* Corpus::FindSystem(const std::string& system_id) const {
  for (const auto& sys : systems_) {
    if (sys.system_id == system_id) return &sys;
  }
  return nullptr;
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw EvalError(ErrorCode::kIo, "cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  if (in.bad()) throw EvalError(ErrorCode::kIo, "read failed: " + path.string());
  return lines;
}

std::vector<ManifestEntry> ParseManifest(std::istream& in) {
  std::vector<ManifestEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (IsBlank(line)) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) fields.push_back(field);
    if (fields.size() != 3 || fields[0].empty()) {
      throw EvalError(ErrorCode::kParseError,
                      "manifest line " + std::to_string(line_no) +
                          ": expected doc_id<TAB>start<TAB>end");
    }
    ManifestEntry e{fields[0], ParseLineNumber(fields[1], line_no),
                    ParseLineNumber(fields[2], line_no)};
    if (e.end_line < e.start_line) {
      throw EvalError(ErrorCode::kParseError,
                      "manifest line " + std::to_string(line_no) +
                          ": end before start");
    }
    entries.push_back(std::move(e));
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const ManifestEntry& a, const ManifestEntry& b) {
                     return a.start_line < b.start_line;
                   });
  return entries;
}

Corpus BuildCorpus(const std::vector<ManifestEntry>& manifest,
                   const std::vector<std::string>& source_lines,
                   const std::vector<std::vector<std::string>>& reference_lines) {
  if (reference_lines.empty() || reference_lines.size() > kMaxReferences) {
    throw EvalError(ErrorCode::kInvalidArgument,
                    "between 1 and 4 reference files are required");
  }
  for (std::size_t k = 0; k < reference_lines.size(); ++k) {
    if (reference_lines[k].size() != source_lines.size()) {
      throw EvalError(ErrorCode::kLineCountMismatch,
                      "reference " + std::to_string(k + 1) + " has " +
                          std::to_string(reference_lines[k].size()) +
                          " lines, source has " +
                          std::to_string(source_lines.size()));
    }
  }

  std::size_t next_line = 1;
  for (const auto& e : manifest) {
    if (e.start_line > next_line) {
      throw EvalError(ErrorCode::kManifestGap,
                      "lines " + std::to_string(next_line) + ".." +
                          std::to_string(e.start_line - 1) +
                          " belong to no document");
    }
    if (e.start_line < next_line) {
      throw EvalError(ErrorCode::kManifestOverlap,
                      "document " + e.doc_id + " overlaps line " +
                          std::to_string(e.start_line));
    }
    next_line = e.end_line + 1;
  }
  if (next_line - 1 != source_lines.size()) {
    throw EvalError(ErrorCode::kManifestGap,
                    "manifest covers " + std::to_string(next_line - 1) +
                        " lines, files have " +
                        std::to_string(source_lines.size()));
  }

  std::vector<Document> documents;
  for (const auto& e : manifest) {
    Document doc{e.doc_id, {}};
    for (std::size_t line = e.start_line; line <= e.end_line; ++line) {
      Segment seg;
      seg.doc_id = e.doc_id;
      seg.seg_id = static_cast<int>(line - e.start_line + 1);
      seg.source = source_lines[line - 1];
      if (IsBlank(seg.source)) {
        throw EvalError(ErrorCode::kEmptySource,
                        "blank source on line " + std::to_string(line));
      }
      for (const auto& ref : reference_lines) {
        seg.references.push_back(ref[line - 1]);
      }
      doc.segments.push_back(std::move(seg));
    }
    documents.push_back(std::move(doc));
  }
  return Corpus(std::move(documents));
}

Corpus LoadCorpus(const std::filesystem::path& manifest_path,
                  const std::filesystem::path& source_path,
                  const std::vector<std::filesystem::path>& reference_paths) {
  std::ifstream manifest_in(manifest_path);
  if (!manifest_in) {
    throw EvalError(ErrorCode::kIo, "cannot open " + manifest_path.string());
  }
  const auto manifest = ParseManifest(manifest_in);
  const auto source = ReadLines(source_path);
  std::vector<std::vector<std::string>> refs;
  for (const auto& p : reference_paths) refs.push_back(ReadLines(p));
  return BuildCorpus(manifest, source, refs);
}

Corpus AttachSystem(const Corpus& corpus, const std::string& system_id,
                    const std::vector<std::string>& hypothesis_lines) {
  if (system_id.empty()) {
    throw EvalError(ErrorCode::kInvalidArgument, "empty system id");
  }
  if (hypothesis_lines.size() != corpus.segment_count()) {
    throw EvalError(ErrorCode::kLineCountMismatch,
                    "system " + system_id + " has " +
                        std::to_string(hypothesis_lines.size()) +
                        " lines, corpus has " +
                        std::to_string(corpus.segment_count()) + " segments");
  }
  SystemOutput output{system_id, {}};
  for (std::size_t i = 0; i < hypothesis_lines.size(); ++i) {
    output.hypotheses.emplace(corpus.keys()[i], hypothesis_lines[i]);
  }

  std::vector<SystemOutput> systems = corpus.systems();
  for (const auto& existing : systems) {
    if (existing.system_id == system_id) {
      if (existing == output) return corpus;
      throw EvalError(ErrorCode::kDuplicateSystemId,
                      "system " + system_id +
                          " already attached with different content");
    }
  }
  systems.push_back(std::move(output));
  return Corpus(corpus.documents(), std::move(systems));
}

Corpus AttachSystem(const Corpus& corpus, const std::string& system_id,
                    const std::filesystem::path& hypothesis_path) {
  return AttachSystem(corpus, system_id, ReadLines(hypothesis_path));
}

void SerializeCorpus(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus.documents()) {
    for (const auto& seg : doc.segments) {
      ordered_json rec;
      rec["doc_id"] = seg.doc_id;
      rec["seg_id"] = seg.seg_id;
      rec["source"] = seg.source;
      rec["references"] = seg.references;
      ordered_json hyps = ordered_json::object();
      for (const auto& sys : corpus.systems()) {
        hyps[sys.system_id] = sys.hypotheses.at(seg.key());
      }
      rec["hypotheses"] = std::move(hyps);
      out << rec.dump(-1, ' ', false, ordered_json::error_handler_t::replace)
          << '\n';
    }
  }
}

Corpus DeserializeCorpus(std::istream& in) {
  std::vector<Document> documents;
  std::vector<SystemOutput> systems;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsBlank(line)) continue;
    try {
      const auto rec = ordered_json::parse(line);
      Segment seg;
      seg.doc_id = rec.at("doc_id").get<std::string>();
      seg.seg_id = rec.at("seg_id").get<int>();
      seg.source = rec.at("source").get<std::string>();
      seg.references = rec.at("references").get<std::vector<std::string>>();
      if (documents.empty() || documents.back().doc_id != seg.doc_id) {
        documents.push_back(Document{seg.doc_id, {}});
      }
      const auto& hyps = rec.at("hypotheses");
      if (systems.empty()) {
        for (const auto& [id, text] : hyps.items()) {
          systems.push_back(SystemOutput{id, {}});
        }
      }
      if (hyps.size() != systems.size()) {
        throw EvalError(ErrorCode::kParseError,
                        "record " + std::to_string(line_no) +
                            ": system set differs from first record");
      }
      for (auto& sys : systems) {
        sys.hypotheses.emplace(seg.key(),
                               hyps.at(sys.system_id).get<std::string>());
      }
      documents.back().segments.push_back(std::move(seg));
    } catch (const nlohmann::json::exception& e) {
      throw EvalError(ErrorCode::kParseError,
                      "record " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return Corpus(std::move(documents), std::move(systems));
}

}  // namespace mteval
