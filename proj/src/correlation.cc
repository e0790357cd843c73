#include "mteval/correlation.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "mteval/error.h"

namespace mteval::correlation {
namespace {

void CheckLengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw EvalError(ErrorCode::kLengthMismatch,
                    "vectors of length " + std::to_string(x.size()) + " and " +
                        std::to_string(y.size()));
  }
  if (x.size() < 2) {
    throw EvalError(ErrorCode::kLengthMismatch,
                    "correlation needs at least two points");
  }
}

bool Constant(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [&](double d) { return d == v[0]; });
}

std::string FormatCell(const Coefficient& c) {
  return c ? FormatValue(*c, 3) : "NA";
}

// Terminal columns occupied by a UTF-8 string; combining marks take none.
std::size_t DisplayWidth(std::string_view s) {
  std::size_t width = 0;
  int32_t i = 0;
  const auto len = static_cast<int32_t>(s.size());
  while (i < len) {
    UChar32 c;
    U8_NEXT(s.data(), i, len, c);
    if (c < 0) {
      ++width;
      continue;
    }
    const auto cat = u_charType(c);
    if (cat == U_NON_SPACING_MARK || cat == U_ENCLOSING_MARK ||
        cat == U_COMBINING_SPACING_MARK || c == 0x200C || c == 0x200D) {
      continue;
    }
    ++width;
  }
  return width;
}

std::string PadRight(const std::string& s, std::size_t width) {
  const std::size_t w = DisplayWidth(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::string PadLeft(const std::string& s, std::size_t width) {
  const std::size_t w = DisplayWidth(s);
  return w >= width ? s : std::string(width - w, ' ') + s;
}

std::string RefCountLabel(std::size_t k) {
  if (k == 1) return "एक संधर्भ वाक्य";
  if (k == 4) return "चार संधर्भ वाक्य";
  return std::to_string(k) + " संधर्भ वाक्य";
}

std::vector<std::string> SplitTabs(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string f;
  while (std::getline(ss, f, '\t')) fields.push_back(f);
  if (!line.empty() && line.back() == '\t') fields.emplace_back();
  return fields;
}

}  // namespace

std::string_view MethodName(Method method) {
  return method == Method::kPearson ? "pearson" : "spearman";
}

Method ParseMethod(std::string_view name) {
  if (name == "pearson") return Method::kPearson;
  if (name == "spearman") return Method::kSpearman;
  throw EvalError(ErrorCode::kInvalidArgument,
                  "unknown correlation method '" + std::string(name) + "'");
}

std::string_view GranularityName(Granularity granularity) {
  switch (granularity) {
    case Granularity::kSegment: return "segment";
    case Granularity::kDocument: return "document";
    case Granularity::kSystem: return "system";
  }
  return "segment";
}

Granularity ParseGranularity(std::string_view name) {
  if (name == "segment") return Granularity::kSegment;
  if (name == "document") return Granularity::kDocument;
  if (name == "system") return Granularity::kSystem;
  throw EvalError(ErrorCode::kInvalidArgument,
                  "unknown granularity '" + std::string(name) + "'");
}

Coefficient Pearson(std::span<const double> x, std::span<const double> y) {
  CheckLengths(x, y);
  if (Constant(x) || Constant(y)) return std::nullopt;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

Coefficient Spearman(std::span<const double> x, std::span<const double> y) {
  CheckLengths(x, y);
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  return Pearson(rx, ry);
}

Coefficient Correlate(Method method, std::span<const double> x,
                      std::span<const double> y) {
  return method == Method::kPearson ? Pearson(x, y) : Spearman(x, y);
}

std::string ReportColumn::Label() const {
  return system_id + "/" + std::to_string(ref_count) + "ref";
}

ScoreVectorPair PairScores(const PreparedCorpus& prepared,
                           std::span<const human::RatingRecord> snapshot,
                           const MetricSuite& suite, const MetricConfig& config,
                           const std::string& system_id, std::size_t ref_count,
                           Granularity granularity, unsigned workers) {
  const Corpus& corpus = prepared.corpus();
  ScoreVectorPair pair;

  auto human_segments = [&](const std::string& sys) {
    const auto by_key = human::SegmentScoresForSystem(snapshot, sys);
    std::vector<human::HumanScore> out;
    for (const auto& key : corpus.keys()) {
      auto it = by_key.find(key);
      if (it == by_key.end()) {
        throw EvalError(ErrorCode::kMissingRatings,
                        sys + " " + key.ToString());
      }
      out.push_back(it->second);
    }
    return out;
  };

  if (granularity == Granularity::kSystem) {
    for (const auto& sys : corpus.systems()) {
      const auto segs = human_segments(sys.system_id);
      pair.keys.push_back(sys.system_id);
      pair.human.push_back(human::AggregateHuman(Level::kSystem, segs).value);
      pair.metric.push_back(
          suite.ScoreSystem(prepared, sys.system_id, config, ref_count, workers)
              .system);
    }
    return pair;
  }

  const auto segs = human_segments(system_id);
  const SystemScores scores =
      suite.ScoreSystem(prepared, system_id, config, ref_count, workers);
  if (granularity == Granularity::kSegment) {
    for (std::size_t i = 0; i < corpus.segment_count(); ++i) {
      pair.keys.push_back(corpus.keys()[i].ToString());
      pair.human.push_back(segs[i].value);
      pair.metric.push_back(scores.segments[i]);
    }
    return pair;
  }

  std::size_t offset = 0;
  std::size_t doc_index = 0;
  for (const auto& doc : corpus.documents()) {
    const std::size_t len = doc.segments.size();
    if (len == 0) continue;
    std::span<const human::HumanScore> doc_scores(segs.data() + offset, len);
    pair.keys.push_back(doc.doc_id);
    pair.human.push_back(human::AggregateHuman(Level::kDocument, doc_scores).value);
    pair.metric.push_back(scores.documents.at(doc_index).second);
    offset += len;
    ++doc_index;
  }
  return pair;
}

CorrelationReport BuildReport(const Corpus& corpus,
                              std::span<const human::RatingRecord> snapshot,
                              const MetricSuite& suite,
                              const ReportRequest& request) {
  if (corpus.systems().empty()) {
    throw EvalError(ErrorCode::kInvalidArgument, "corpus has no systems attached");
  }
  for (std::size_t k : request.ref_counts) {
    if (k < 1 || k > corpus.min_reference_count()) {
      throw EvalError(ErrorCode::kInsufficientReferences,
                      "requested " + std::to_string(k) +
                          " references, corpus provides " +
                          std::to_string(corpus.min_reference_count()));
    }
  }

  std::vector<std::string> missing;
  std::size_t missing_count = 0;
  for (const auto& sys : corpus.systems()) {
    const auto rated = human::SegmentScoresForSystem(snapshot, sys.system_id);
    for (const auto& key : corpus.keys()) {
      if (rated.contains(key)) continue;
      if (missing.size() < 20) missing.push_back(sys.system_id + ":" + key.ToString());
      ++missing_count;
    }
  }
  if (missing_count > 0) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    if (missing_count > missing.size()) {
      list += ", ... (" + std::to_string(missing_count) + " total)";
    }
    throw EvalError(ErrorCode::kMissingRatings, list);
  }

  const PreparedCorpus prepared(corpus, suite.resources().text);
  CorrelationReport report;
  report.method = request.method;
  report.granularity = request.granularity;

  if (request.granularity == Granularity::kSystem) {
    for (std::size_t k : request.ref_counts) report.columns.push_back({"*", k});
  } else {
    for (const auto& sys : corpus.systems()) {
      for (std::size_t k : request.ref_counts) {
        report.columns.push_back({sys.system_id, k});
      }
    }
  }

  for (const auto& config : request.configs) {
    report.rows.push_back(config.id);
    std::vector<Coefficient> row;
    for (const auto& col : report.columns) {
      const ScoreVectorPair pair =
          PairScores(prepared, snapshot, suite, config, col.system_id,
                     col.ref_count, request.granularity, request.workers);
      if (pair.human.size() < 2) {
        row.push_back(std::nullopt);
      } else {
        row.push_back(Correlate(request.method, pair.human, pair.metric));
      }
    }
    report.cells.push_back(std::move(row));
  }
  return report;
}

void WriteReportTsv(const CorrelationReport& report, std::ostream& out) {
  out << "#method\t" << MethodName(report.method) << "\tgranularity\t"
      << GranularityName(report.granularity) << '\n';
  out << "config_id\tmetric";
  for (const auto& col : report.columns) out << '\t' << col.Label();
  out << '\n';
  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    out << report.rows[r] << '\t' << Table1RowLabel(report.rows[r]);
    for (const auto& cell : report.cells[r]) out << '\t' << FormatCell(cell);
    out << '\n';
  }
}

CorrelationReport ReadReportTsv(std::istream& in) {
  CorrelationReport report;
  std::string line;
  auto fail = [](const std::string& what) {
    return EvalError(ErrorCode::kParseError, "report: " + what);
  };
  if (!std::getline(in, line)) throw fail("empty input");
  auto meta = SplitTabs(line);
  if (meta.size() != 4 || meta[0] != "#method" || meta[2] != "granularity") {
    throw fail("bad #method line");
  }
  report.method = ParseMethod(meta[1]);
  report.granularity = ParseGranularity(meta[3]);

  if (!std::getline(in, line)) throw fail("missing header");
  auto header = SplitTabs(line);
  if (header.size() < 2 || header[0] != "config_id" || header[1] != "metric") {
    throw fail("bad header");
  }
  for (std::size_t i = 2; i < header.size(); ++i) {
    const auto& label = header[i];
    const auto slash = label.rfind('/');
    if (slash == std::string::npos || !label.ends_with("ref")) {
      throw fail("bad column label '" + label + "'");
    }
    ReportColumn col;
    col.system_id = label.substr(0, slash);
    try {
      col.ref_count = std::stoul(label.substr(slash + 1, label.size() - slash - 4));
    } catch (const std::exception&) {
      throw fail("bad column label '" + label + "'");
    }
    report.columns.push_back(std::move(col));
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = SplitTabs(line);
    if (fields.size() != header.size()) throw fail("ragged row");
    report.rows.push_back(fields[0]);
    std::vector<Coefficient> row;
    for (std::size_t i = 2; i < fields.size(); ++i) {
      if (fields[i] == "NA") {
        row.push_back(std::nullopt);
        continue;
      }
      try {
        row.push_back(std::stod(fields[i]));
      } catch (const std::exception&) {
        throw fail("bad cell '" + fields[i] + "'");
      }
    }
    report.cells.push_back(std::move(row));
  }
  return report;
}

void WriteReportText(const CorrelationReport& report, std::ostream& out) {
  std::size_t label_width = DisplayWidth("metric");
  for (const auto& row : report.rows) {
    label_width = std::max(label_width, DisplayWidth(Table1RowLabel(row)));
  }
  std::size_t cell_width = 6;
  for (const auto& col : report.columns) {
    cell_width = std::max(cell_width, DisplayWidth(RefCountLabel(col.ref_count)));
  }

  // System header groups adjacent columns of the same system.
  std::string top = PadRight("", label_width);
  for (std::size_t c = 0; c < report.columns.size();) {
    std::size_t span = 1;
    while (c + span < report.columns.size() &&
           report.columns[c + span].system_id == report.columns[c].system_id) {
      ++span;
    }
    const std::size_t width = span * (cell_width + 2);
    top += PadRight("  " + report.columns[c].system_id, width);
    c += span;
  }
  out << top << '\n';

  std::string second = PadRight("metric", label_width);
  for (const auto& col : report.columns) {
    second += "  " + PadLeft(RefCountLabel(col.ref_count), cell_width);
  }
  out << second << '\n';
  out << std::string(DisplayWidth(second), '-') << '\n';

  for (std::size_t r = 0; r < report.rows.size(); ++r) {
    std::string line = PadRight(Table1RowLabel(report.rows[r]), label_width);
    for (const auto& cell : report.cells[r]) {
      line += "  " + PadLeft(FormatCell(cell), cell_width);
    }
    out << line << '\n';
  }
  out << "(" << MethodName(report.method) << " correlation, "
      << GranularityName(report.granularity) << " level)\n";
}

}  // namespace mteval::correlation
