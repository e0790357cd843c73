#include "mteval/human.h"

#include <set>
#include <sstream>

#include "json.hpp"
#include "mteval/error.h"

namespace mteval::human {
namespace {

using ordered_json = nlohmann::ordered_json;

template <typename T>
T Field(const ordered_json& obj, const char* name) {
  if (!obj.contains(name)) {
    throw EvalError(ErrorCode::kParseError, std::string("missing field ") + name);
  }
  try {
    return obj.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw EvalError(ErrorCode::kParseError, std::string("bad field ") + name);
  }
}

}  // namespace

const std::array<Criterion, kCriteriaCount>& Rubric() {
  static const std::array<Criterion, kCriteriaCount> kRubric = {{
      {1, "gender_number", "संज्ञाओं के लिंग व वचन का अनुवाद में प्रयोग",
       "Gender and number of nouns carried into the translation"},
      {2, "tense", "मूल वाक्य में प्रयुक्त काल का अनुवाद में प्रयोग",
       "Tense of the source sentence carried into the translation"},
      {3, "voice", "मूल वाक्य में प्रयुक्त वाच्य का अनुवाद में प्रयोग",
       "Voice of the source sentence carried into the translation"},
      {4, "proper_nouns", "व्यक्तिवाचक संज्ञा की पहचान",
       "Identification of proper nouns"},
      {5, "modifier_agreement",
       "विशेषण व क्रिया विशेषण का मूल वाक्य में संज्ञा व क्रिया के अनुकूल प्रयोग",
       "Adjectives and adverbs agree with the nouns and verbs they modify"},
      {6, "word_choice", "अनुवाद में सही शब्दों/पर्याय का चयन",
       "Choice of correct words and synonyms"},
      {7, "constituent_order", "अनुवाद में संज्ञा, क्रिया एवं सहायक क्रिया का क्रम",
       "Order of nouns, verbs and auxiliary verbs"},
      {8, "punctuation", "अनुवाद में विराम चिन्हों का प्रयोग",
       "Use of punctuation"},
      {9, "emphasis", "अनुवाद में मूल वाक्य में प्रयुक्त महत्वपूर्ण भाग पर बल",
       "Emphasis on the important parts of the source sentence"},
      {10, "overall_meaning",
       "अनूदित वाक्य में मूल वाक्य में निहित अर्थ का सही समागम",
       "Overall meaning of the source conveyed in the translation"},
  }};
  return kRubric;
}

std::filesystem::path DefaultRubricPath() {
  return std::filesystem::path(MTEVAL_DATA_DIR) / "rubric.tsv";
}

std::vector<Criterion> LoadRubric(const std::filesystem::path& path) {
  const auto lines = ReadLines(path);
  std::vector<Criterion> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string& line = lines[i];
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
    if (fields.size() != 4) {
      throw EvalError(ErrorCode::kParseError,
                      "rubric line " + std::to_string(i + 1) +
                          ": expected 4 tab-separated fields");
    }
    Criterion c;
    try {
      c.index = std::stoi(fields[0]);
    } catch (const std::exception&) {
      throw EvalError(ErrorCode::kParseError,
                      "rubric line " + std::to_string(i + 1) + ": bad index");
    }
    c.short_name = fields[1];
    c.description_hi = fields[2];
    c.description_en = fields[3];
    out.push_back(std::move(c));
  }
  if (out.size() != kCriteriaCount) {
    throw EvalError(ErrorCode::kParseError, "rubric must list 10 criteria");
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].index != static_cast<int>(i) + 1) {
      throw EvalError(ErrorCode::kParseError,
                      "rubric indices must run 1..10 in order");
    }
  }
  return out;
}

std::string SerializeRecord(const RatingRecord& record) {
  ordered_json j;
  j["judge_id"] = record.judge_id;
  j["system_id"] = record.system_id;
  j["doc_id"] = record.doc_id;
  j["seg_id"] = record.seg_id;
  j["ratings"] = record.ratings;
  j["timestamp"] = record.timestamp;
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

RatingRecord ParseRecord(std::string_view line) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw EvalError(ErrorCode::kParseError, e.what());
  }
  if (!j.is_object()) {
    throw EvalError(ErrorCode::kParseError, "rating record must be an object");
  }
  RatingRecord r;
  r.judge_id = Field<std::string>(j, "judge_id");
  r.system_id = Field<std::string>(j, "system_id");
  r.doc_id = Field<std::string>(j, "doc_id");
  if (!j.contains("seg_id") || !j["seg_id"].is_number_integer()) {
    throw EvalError(ErrorCode::kParseError, "seg_id must be an integer");
  }
  r.seg_id = j["seg_id"].get<int>();
  if (!j.contains("ratings") || !j["ratings"].is_array()) {
    throw EvalError(ErrorCode::kParseError, "ratings must be an array");
  }
  for (const auto& v : j["ratings"]) {
    if (!v.is_number_integer()) {
      throw EvalError(ErrorCode::kParseError, "ratings must be integers");
    }
    const auto value = v.get<long long>();
    r.ratings.push_back(value < -1000 ? -1000
                                      : value > 1000 ? 1000
                                                     : static_cast<int>(value));
  }
  r.timestamp = Field<std::string>(j, "timestamp");
  return r;
}

void ValidateRecord(const RatingRecord& record) {
  if (record.ratings.size() != kCriteriaCount) {
    throw EvalError(ErrorCode::kMissingCriterion,
                    "expected 10 ratings, got " +
                        std::to_string(record.ratings.size()));
  }
  for (std::size_t i = 0; i < record.ratings.size(); ++i) {
    const int r = record.ratings[i];
    if (r < kMinRating || r > kMaxRating) {
      throw EvalError(ErrorCode::kOutOfRangeRating,
                      "criterion " + std::to_string(i + 1) + " rated " +
                          std::to_string(r) + " (0..4 allowed)");
    }
  }
  if (record.judge_id.empty() || record.system_id.empty()) {
    throw EvalError(ErrorCode::kInvalidArgument, "judge_id and system_id required");
  }
}

RatingStore::RatingStore(const Corpus& corpus) : corpus_(&corpus) {}

RatingStore::RatingStore(const Corpus& corpus,
                         const std::filesystem::path& log_path)
    : corpus_(&corpus) {
  if (std::filesystem::exists(log_path)) {
    const auto lines = ReadLines(log_path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].empty()) continue;
      try {
        RatingRecord r = ParseRecord(lines[i]);
        ValidateRecord(r);
        CheckKnown(r);
        Apply(r);
      } catch (const EvalError& e) {
        throw EvalError(e.code(), "rating log line " + std::to_string(i + 1) +
                                      ": " + e.what());
      }
    }
  }
  log_.emplace(log_path, std::ios::app | std::ios::binary);
  if (!*log_) {
    throw EvalError(ErrorCode::kIo, "cannot open rating log " + log_path.string());
  }
}

void RatingStore::CheckKnown(const RatingRecord& record) const {
  if (corpus_->FindSegment(record.segment()) == nullptr) {
    throw EvalError(ErrorCode::kUnknownSegment,
                    "no segment " + record.segment().ToString());
  }
  if (!corpus_->systems().empty() &&
      corpus_->FindSystem(record.system_id) == nullptr) {
    throw EvalError(ErrorCode::kUnknownSegment,
                    "no system " + record.system_id);
  }
}

void RatingStore::Apply(const RatingRecord& record) {
  history_.push_back(record);
  effective_.insert_or_assign(record.key(), record);
}

std::size_t RatingStore::ValidateAndStore(const RatingRecord& record) {
  ValidateRecord(record);
  CheckKnown(record);
  std::lock_guard lock(mu_);
  if (log_) {
    *log_ << SerializeRecord(record) << '\n';
    log_->flush();
    if (!*log_) throw EvalError(ErrorCode::kIo, "rating log write failed");
  }
  Apply(record);
  return history_.size() - 1;
}

std::vector<RatingRecord> RatingStore::Snapshot() const {
  std::lock_guard lock(mu_);
  std::vector<RatingRecord> out;
  out.reserve(effective_.size());
  for (const auto& [key, rec] : effective_) out.push_back(rec);
  return out;
}

std::vector<RatingRecord> RatingStore::History() const {
  std::lock_guard lock(mu_);
  return history_;
}

bool RatingStore::Contains(const RatingKey& key) const {
  std::lock_guard lock(mu_);
  return effective_.contains(key);
}

std::size_t RatingStore::history_size() const {
  std::lock_guard lock(mu_);
  return history_.size();
}

std::vector<RatingRecord> LoadLogSnapshot(const Corpus& corpus,
                                          const std::filesystem::path& log_path) {
  const auto lines = ReadLines(log_path);
  RatingStore store(corpus);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      store.ValidateAndStore(ParseRecord(lines[i]));
    } catch (const EvalError& e) {
      throw EvalError(e.code(), "rating log line " + std::to_string(i + 1) +
                                    ": " + e.what());
    }
  }
  return store.Snapshot();
}

HumanScore HumanScore::Of(double value, Level level) {
  return {value, value / 4.0, level};
}

HumanScore SegmentHumanScore(std::span<const RatingRecord> records) {
  if (records.empty()) {
    throw EvalError(ErrorCode::kNoRatings, "no ratings for segment");
  }
  long sum = 0;
  std::size_t count = 0;
  for (const auto& r : records) {
    ValidateRecord(r);
    for (int v : r.ratings) sum += v;
    count += r.ratings.size();
  }
  return HumanScore::Of(static_cast<double>(sum) / static_cast<double>(count),
                        Level::kSegment);
}

HumanScore AggregateHuman(Level level, std::span<const HumanScore> scores) {
  if (scores.empty()) {
    throw EvalError(ErrorCode::kNoRatings, "no segment scores to aggregate");
  }
  double sum = 0.0;
  for (const auto& s : scores) sum += s.value;
  return HumanScore::Of(sum / static_cast<double>(scores.size()), level);
}

std::map<SegmentKey, HumanScore> SegmentScoresForSystem(
    std::span<const RatingRecord> snapshot, const std::string& system_id) {
  std::map<SegmentKey, std::vector<RatingRecord>> grouped;
  for (const auto& r : snapshot) {
    if (r.system_id == system_id) grouped[r.segment()].push_back(r);
  }
  std::map<SegmentKey, HumanScore> out;
  for (const auto& [key, records] : grouped) {
    out.emplace(key, SegmentHumanScore(records));
  }
  return out;
}

}  // namespace mteval::human
