#include "mteval/metrics.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>

#include "mteval/error.h"

namespace mteval {
namespace {

struct RowSpec {
  const char* id;
  const char* label;
};

constexpr RowSpec kTable1Rows[] = {
    {"bleu-1", "ब्लू 1-ग्राम"},
    {"bleu-2", "ब्लू 2-ग्राम"},
    {"bleu-3", "ब्लू 3-ग्राम"},
    {"bleu-4", "ब्लू 4-ग्राम"},
    {"meteor-es", "मेटियोर शाब्दिक व मूल-शब्द मिलान"},
    {"meteor-ey", "मेटियोर शाब्दिक व पर्यायवाची मिलान"},
    {"meteor-esy", "मेटियोर शाब्दिक, मूल-शब्द व पर्यायवाची मिलान"},
    {"meteor-esyp", "मेटियोर शाब्दिक, मूल-शब्द, पर्यायवाची व पैराफ्रेज़ मिलान"},
};

}  // namespace

MetricConfig MetricConfig::Parse(const std::string& id) {
  MetricConfig config;
  config.id = id;
  auto order_suffix = [&](std::string_view prefix) -> int {
    if (id.size() != prefix.size() + 1 || !id.starts_with(prefix)) return 0;
    const char c = id.back();
    return (c >= '1' && c <= '4') ? c - '0' : 0;
  };
  if (int n = order_suffix("bleu-"); n > 0) {
    config.kind = MetricKind::kBleu;
    config.max_n = n;
    return config;
  }
  if (int n = order_suffix("nist-"); n > 0) {
    config.kind = MetricKind::kNist;
    config.max_n = n;
    return config;
  }
  if (id.starts_with("meteor-")) {
    for (const auto& stages : meteor::Table1Configs()) {
      if (id == "meteor-" + stages.Code()) {
        config.kind = MetricKind::kMeteor;
        config.stages = stages;
        return config;
      }
    }
  }
  throw EvalError(ErrorCode::kUnknownConfig, "unknown metric config '" + id + "'");
}

std::vector<MetricConfig> Table1MetricConfigs() {
  std::vector<MetricConfig> out;
  for (const auto& row : kTable1Rows) out.push_back(MetricConfig::Parse(row.id));
  return out;
}

std::string Table1RowLabel(const std::string& config_id) {
  for (const auto& row : kTable1Rows) {
    if (config_id == row.id) return row.label;
  }
  return config_id;
}

PreparedCorpus::PreparedCorpus(const Corpus& corpus,
                               const text::TextOptions& options)
    : corpus_(&corpus) {
  const std::size_t n = corpus.segment_count();
  refs_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& raw : corpus.SegmentAt(i).references) {
      text::TokenSequence seq = text::Prepare(raw, options);
      refs_[i].push_back(seq.empty() ? std::nullopt
                                     : std::optional(std::move(seq)));
    }
  }
  for (const auto& sys : corpus.systems()) {
    std::vector<text::TokenSequence> hyps;
    hyps.reserve(n);
    for (const auto& key : corpus.keys()) {
      hyps.push_back(text::Prepare(sys.hypotheses.at(key), options));
    }
    hyps_.push_back(std::move(hyps));
  }
}

std::size_t PreparedCorpus::system_index(const std::string& system_id) const {
  const auto& systems = corpus_->systems();
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].system_id == system_id) return i;
  }
  throw EvalError(ErrorCode::kUnknownSystem, "no system '" + system_id + "'");
}

std::vector<text::TokenSequence> PreparedCorpus::references(
    std::size_t segment, std::size_t ref_count) const {
  std::vector<text::TokenSequence> out;
  const auto& slots = refs_.at(segment);
  for (std::size_t k = 0; k < slots.size() && k < ref_count; ++k) {
    if (slots[k]) out.push_back(*slots[k]);
  }
  if (out.empty()) {
    throw EvalError(ErrorCode::kInsufficientReferences,
                    "no usable reference among the first " +
                        std::to_string(ref_count) + " for segment " +
                        corpus_->keys()[segment].ToString());
  }
  return out;
}

MetricSuite::MetricSuite(MetricResources resources)
    : resources_(std::move(resources)) {
  resources_.meteor.Validate();
}

bleu::BleuConfig MetricSuite::BleuConfigFor(const MetricConfig& config) const {
  return bleu::BleuConfig::Uniform(config.max_n, resources_.bp_mode,
                                   resources_.smoothing);
}

meteor::Resources MetricSuite::MeteorResources() const {
  return {&resources_.suffixes, &resources_.synonyms, &resources_.paraphrases};
}

double MetricSuite::ScoreSegment(const MetricConfig& config,
                                 const text::TokenSequence& hyp,
                                 std::span<const text::TokenSequence> refs) const {
  switch (config.kind) {
    case MetricKind::kBleu:
      return bleu::BleuSegment(hyp, refs, BleuConfigFor(config), config.id).value;
    case MetricKind::kNist:
      return bleu::NistVariantSegment(hyp, refs, config.max_n,
                                      resources_.bp_mode, config.id)
          .value;
    case MetricKind::kMeteor:
      return meteor::MeteorSegment(hyp, refs, config.stages, MeteorResources(),
                                   resources_.meteor, config.id)
          .value;
  }
  return 0.0;
}

SystemScores MetricSuite::ScoreSystem(const PreparedCorpus& prepared,
                                      const std::string& system_id,
                                      const MetricConfig& config,
                                      std::size_t ref_count,
                                      unsigned workers) const {
  const Corpus& corpus = prepared.corpus();
  const std::size_t sys = prepared.system_index(system_id);
  const std::size_t n = corpus.segment_count();
  const bool ngram_metric = config.kind != MetricKind::kMeteor;

  SystemScores out;
  out.system_id = system_id;
  out.config_id = config.id;
  out.segments.assign(n, 0.0);
  std::vector<bleu::NgramStats> stats(ngram_metric ? n : 0);

  ParallelFor(n, workers, [&](std::size_t i) {
    const auto refs = prepared.references(i, ref_count);
    const auto& hyp = prepared.hypothesis(sys, i);
    if (ngram_metric) {
      stats[i] = bleu::CollectStats(hyp, refs, config.max_n);
      out.segments[i] =
          config.kind == MetricKind::kBleu
              ? bleu::BleuFromStats(stats[i], BleuConfigFor(config))
              : bleu::NistFromStats(stats[i], config.max_n, resources_.bp_mode);
    } else {
      out.segments[i] = ScoreSegment(config, hyp, refs);
    }
  });

  auto rollup = [&](std::size_t begin, std::size_t end, Level level) {
    if (ngram_metric) {
      std::span<const bleu::NgramStats> pooled(stats.data() + begin, end - begin);
      return config.kind == MetricKind::kBleu
                 ? bleu::BleuAggregate(pooled, level, BleuConfigFor(config)).value
                 : bleu::NistAggregate(pooled, level, config.max_n,
                                       resources_.bp_mode)
                       .value;
    }
    double sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) sum += out.segments[i];
    return sum / static_cast<double>(end - begin);
  };

  std::size_t offset = 0;
  for (const auto& doc : corpus.documents()) {
    const std::size_t len = doc.segments.size();
    if (len > 0) {
      out.documents.emplace_back(doc.doc_id,
                                 rollup(offset, offset + len, Level::kDocument));
    }
    offset += len;
  }
  if (n > 0) out.system = rollup(0, n, Level::kSystem);
  return out;
}

void ParallelFor(std::size_t n, unsigned workers,
                 const std::function<void(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, std::max<std::size_t>(n / 16, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::jthread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  threads.clear();
  if (error) std::rethrow_exception(error);
}

std::string FormatValue(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s(buf);
  // "-0.000" reads as a sign where there is none
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, 1);
  }
  return s;
}

namespace {

constexpr const char* kScoreHeader = "system_id\tconfig_id\tdoc_id\tseg_id\tvalue\n";

}  // namespace

void WriteSegmentScores(const Corpus& corpus,
                        const std::vector<SystemScores>& scores,
                        std::ostream& out) {
  out << kScoreHeader;
  for (const auto& s : scores) {
    for (std::size_t i = 0; i < s.segments.size(); ++i) {
      const auto& key = corpus.keys()[i];
      out << s.system_id << '\t' << s.config_id << '\t' << key.doc_id << '\t'
          << key.seg_id << '\t' << FormatValue(s.segments[i], 6) << '\n';
    }
  }
}

void WriteDocumentScores(const std::vector<SystemScores>& scores,
                         std::ostream& out) {
  out << kScoreHeader;
  for (const auto& s : scores) {
    for (const auto& [doc_id, value] : s.documents) {
      out << s.system_id << '\t' << s.config_id << '\t' << doc_id << "\t-\t"
          << FormatValue(value, 6) << '\n';
    }
  }
}

void WriteSystemScores(const std::vector<SystemScores>& scores,
                       std::ostream& out) {
  out << kScoreHeader;
  for (const auto& s : scores) {
    out << s.system_id << '\t' << s.config_id << "\t-\t-\t"
        << FormatValue(s.system, 6) << '\n';
  }
}

}  // namespace mteval
