#include "mteval/cli.h"

#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "mteval/correlation.h"
#include "mteval/corpus.h"
#include "mteval/error.h"
#include "mteval/human.h"
#include "mteval/metrics.h"
#include "mteval/service.h"
#include "mteval/text.h"

namespace mteval::cli {
namespace fs = std::filesystem;
namespace {

struct CorpusFlags {
  std::string manifest;
  std::string source;
  std::vector<std::string> refs;
  std::vector<std::string> systems;  // id=path
};

struct ResourceFlags {
  std::string suffixes;
  std::string synonyms;
  std::string paraphrases;
  bool no_case_fold = false;
  bool drop_punct = false;
  std::string bp = "linear";
  double alpha = 0.9;
  double beta = 3.0;
  double gamma = 0.5;
};

void AddCorpusFlags(CLI::App* app, CorpusFlags& f) {
  app->add_option("--corpus", f.manifest,
                  "Document manifest (doc_id<TAB>start<TAB>end); source.txt and "
                  "ref1.txt..ref4.txt are read from the same directory unless "
                  "--source/--ref are given")
      ->required();
  app->add_option("--source", f.source, "Source-language file");
  app->add_option("--ref", f.refs, "Reference file (repeatable, 1..4)");
  app->add_option("--system", f.systems, "System hypotheses as <id>=<path> (repeatable)");
}

void AddResourceFlags(CLI::App* app, ResourceFlags& f) {
  app->add_option("--suffixes", f.suffixes, "Stemmer suffix inventory file");
  app->add_option("--synonyms", f.synonyms, "Synonym lexicon (id<TAB>token...)");
  app->add_option("--paraphrases", f.paraphrases, "Paraphrase table (phrase<TAB>phrase)");
  app->add_flag("--no-case-fold", f.no_case_fold, "Keep Latin-script case");
  app->add_flag("--drop-punct", f.drop_punct, "Drop punctuation tokens before matching");
  app->add_option("--bp", f.bp, "Brevity factor: linear (min(1,c/r)) or exponential")
      ->check(CLI::IsMember({"linear", "exponential"}));
  app->add_option("--alpha", f.alpha, "METEOR precision/recall balance");
  app->add_option("--beta", f.beta, "METEOR fragmentation exponent");
  app->add_option("--gamma", f.gamma, "METEOR fragmentation weight");
}

Corpus LoadFromFlags(const CorpusFlags& f) {
  const fs::path manifest(f.manifest);
  const fs::path dir = manifest.parent_path();
  const fs::path source = f.source.empty() ? dir / "source.txt" : fs::path(f.source);
  std::vector<fs::path> refs(f.refs.begin(), f.refs.end());
  if (refs.empty()) {
    for (int k = 1; k <= static_cast<int>(kMaxReferences); ++k) {
      fs::path p = dir / ("ref" + std::to_string(k) + ".txt");
      if (!fs::exists(p)) break;
      refs.push_back(std::move(p));
    }
  }
  if (refs.empty()) {
    throw EvalError(ErrorCode::kIo, "no reference files found next to " + manifest.string());
  }
  Corpus corpus = LoadCorpus(manifest, source, refs);
  for (const auto& spec : f.systems) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw EvalError(ErrorCode::kInvalidArgument,
                      "--system expects <id>=<path>, got '" + spec + "'");
    }
    corpus = AttachSystem(corpus, spec.substr(0, eq), fs::path(spec.substr(eq + 1)));
  }
  return corpus;
}

MetricResources ResourcesFromFlags(const ResourceFlags& f, bleu::Smoothing smoothing) {
  MetricResources r;
  r.text.fold_latin_case = !f.no_case_fold;
  r.text.keep_punctuation = !f.drop_punct;
  r.suffixes = f.suffixes.empty() ? text::SuffixInventory::LoadDefault()
                                  : text::SuffixInventory::Load(f.suffixes);
  if (!f.synonyms.empty()) r.synonyms = text::SynonymLexicon::Load(f.synonyms, r.text);
  if (!f.paraphrases.empty()) {
    r.paraphrases = text::ParaphraseTable::Load(f.paraphrases, r.text);
  }
  r.meteor = {f.alpha, f.beta, f.gamma};
  r.meteor.Validate();
  r.bp_mode = f.bp == "exponential" ? bleu::BrevityMode::kClassicExponential
                                    : bleu::BrevityMode::kPaperLinear;
  r.smoothing = smoothing;
  return r;
}

std::vector<MetricConfig> ConfigsFromCsv(const std::string& csv) {
  if (csv.empty()) return Table1MetricConfigs();
  std::vector<MetricConfig> out;
  std::stringstream ss(csv);
  std::string id;
  while (std::getline(ss, id, ',')) {
    if (!id.empty()) out.push_back(MetricConfig::Parse(id));
  }
  if (out.empty()) throw EvalError(ErrorCode::kInvalidArgument, "no configs given");
  return out;
}

std::vector<std::size_t> RefCountsFromCsv(const std::string& csv) {
  std::vector<std::size_t> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "1" || item == "4") {
      out.push_back(item == "1" ? 1 : 4);
    } else {
      throw EvalError(ErrorCode::kInvalidArgument, "--refs takes 1 and/or 4");
    }
  }
  if (out.empty()) throw EvalError(ErrorCode::kInvalidArgument, "--refs is empty");
  return out;
}

bleu::Smoothing SmoothingFrom(double epsilon) {
  return epsilon > 0.0 ? bleu::Smoothing::AddEpsilon(epsilon) : bleu::Smoothing::None();
}

std::ofstream OpenOut(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw EvalError(ErrorCode::kIo, "cannot write " + path.string());
  return out;
}

void EnsureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw EvalError(ErrorCode::kIo, "cannot create " + dir + ": " + ec.message());
}

std::atomic<service::HttpServer*> g_server{nullptr};

extern "C" void StopServer(int) {
  if (auto* s = g_server.load()) s->Stop();
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"English-Hindi MT evaluation: BLEU, NIST-style mean, staged METEOR, "
               "human ratings and correlation reports",
               "mteval"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  CorpusFlags corpus_flags;
  ResourceFlags resource_flags;
  std::string configs_csv;
  std::string refs_csv;
  std::string out_dir = ".";
  std::string ratings_path;
  std::string method = "pearson";
  std::string granularity = "segment";
  double epsilon = -1.0;
  unsigned workers = 0;

  auto* score = app.add_subcommand("score", "Score systems and write score records");
  AddCorpusFlags(score, corpus_flags);
  AddResourceFlags(score, resource_flags);
  score->add_option("--configs", configs_csv, "Comma-separated config ids (default: all eight)");
  score->add_option("--refs", refs_csv, "Number of references to use: 1 or 4");
  score->add_option("--out", out_dir, "Output directory");
  score->add_option("--smoothing", epsilon, "Add-epsilon smoothing for BLEU (default off)");
  score->add_option("--workers", workers, "Scoring threads (0 = all cores)");

  auto* correlate = app.add_subcommand("correlate", "Correlate human and automatic scores");
  AddCorpusFlags(correlate, corpus_flags);
  AddResourceFlags(correlate, resource_flags);
  correlate->add_option("--ratings", ratings_path, "Rating log (one JSON record per line)")
      ->required();
  correlate->add_option("--configs", configs_csv, "Comma-separated config ids (default: all eight)");
  correlate->add_option("--refs", refs_csv, "Reference counts, e.g. 1,4 (default)");
  correlate->add_option("--method", method, "pearson or spearman")
      ->check(CLI::IsMember({"pearson", "spearman"}));
  correlate->add_option("--granularity", granularity, "segment, document or system")
      ->check(CLI::IsMember({"segment", "document", "system"}));
  correlate->add_option("--out", out_dir, "Output directory");
  correlate->add_option("--smoothing", epsilon, "Add-epsilon smoothing for BLEU (default 1e-9)");
  correlate->add_option("--workers", workers, "Scoring threads (0 = all cores)");

  std::vector<std::string> words;
  bool fold = false;
  auto* tokenize = app.add_subcommand("tokenize", "Normalize and tokenize text (stdin if no args)");
  tokenize->add_option("text", words, "Text to tokenize");
  tokenize->add_flag("--fold-case", fold, "Lowercase Latin-script tokens");

  std::string suffix_path;
  auto* stem = app.add_subcommand("stem", "Stem tokens with the suffix inventory");
  stem->add_option("tokens", words, "Tokens to stem")->required();
  stem->add_option("--suffixes", suffix_path, "Suffix inventory file");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> judges;
  auto* serve = app.add_subcommand("serve", "Run the annotation HTTP service");
  AddCorpusFlags(serve, corpus_flags);
  serve->add_option("--ratings", ratings_path, "Rating log to replay and append to")->required();
  serve->add_option("--port", port, "Port to listen on");
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--judge", judges, "Pre-open a session for this judge (repeatable)");

  std::string report_in;
  std::string report_out;
  std::string format = "text";
  auto* export_report = app.add_subcommand("export-report", "Render a report file");
  export_report->add_option("--in", report_in, "Report in delimited form")->required();
  export_report->add_option("--format", format, "text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
  export_report->add_option("--out", report_out, "Output file (default stdout)");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("mteval");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (score->parsed()) {
      const Corpus corpus = LoadFromFlags(corpus_flags);
      if (corpus.systems().empty()) {
        throw EvalError(ErrorCode::kInvalidArgument, "no --system given");
      }
      const auto configs = ConfigsFromCsv(configs_csv);
      const std::size_t refs =
          refs_csv.empty() ? corpus.min_reference_count() : RefCountsFromCsv(refs_csv).at(0);
      if (refs > corpus.min_reference_count()) {
        throw EvalError(ErrorCode::kInsufficientReferences,
                        "--refs " + std::to_string(refs) + " but corpus has " +
                            std::to_string(corpus.min_reference_count()));
      }
      const MetricSuite suite(
          ResourcesFromFlags(resource_flags, SmoothingFrom(epsilon < 0 ? 0.0 : epsilon)));
      const PreparedCorpus prepared(corpus, suite.resources().text);
      std::vector<SystemScores> all;
      for (const auto& config : configs) {
        for (const auto& sys : corpus.systems()) {
          all.push_back(suite.ScoreSystem(prepared, sys.system_id, config, refs, workers));
        }
      }
      EnsureDir(out_dir);
      auto seg_out = OpenOut(fs::path(out_dir) / "scores.segment.tsv");
      WriteSegmentScores(corpus, all, seg_out);
      auto doc_out = OpenOut(fs::path(out_dir) / "scores.document.tsv");
      WriteDocumentScores(all, doc_out);
      auto sys_out = OpenOut(fs::path(out_dir) / "scores.system.tsv");
      WriteSystemScores(all, sys_out);
      out << "wrote " << all.size() * corpus.segment_count() << " segment records to "
          << (fs::path(out_dir) / "scores.segment.tsv").string() << '\n';
      return kExitOk;
    }

    if (correlate->parsed()) {
      const Corpus corpus = LoadFromFlags(corpus_flags);
      if (!fs::exists(ratings_path)) {
        throw EvalError(ErrorCode::kIo, "rating log not found: " + ratings_path);
      }
      const auto snapshot = human::LoadLogSnapshot(corpus, ratings_path);
      correlation::ReportRequest request;
      request.configs = ConfigsFromCsv(configs_csv);
      request.ref_counts = RefCountsFromCsv(refs_csv.empty() ? "1,4" : refs_csv);
      request.method = correlation::ParseMethod(method);
      request.granularity = correlation::ParseGranularity(granularity);
      request.workers = workers;
      const MetricSuite suite(
          ResourcesFromFlags(resource_flags, SmoothingFrom(epsilon < 0 ? 1e-9 : epsilon)));
      const auto report = correlation::BuildReport(corpus, snapshot, suite, request);
      EnsureDir(out_dir);
      auto tsv = OpenOut(fs::path(out_dir) / "report.tsv");
      correlation::WriteReportTsv(report, tsv);
      auto txt = OpenOut(fs::path(out_dir) / "report.txt");
      correlation::WriteReportText(report, txt);
      correlation::WriteReportText(report, out);
      return kExitOk;
    }

    if (tokenize->parsed()) {
      std::vector<std::string> lines;
      if (words.empty()) {
        std::string line;
        while (std::getline(std::cin, line)) lines.push_back(line);
      } else {
        std::string joined;
        for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
        lines.push_back(joined);
      }
      text::TextOptions options;
      options.fold_latin_case = fold;
      for (const auto& line : lines) out << text::Prepare(line, options).Join() << '\n';
      return kExitOk;
    }

    if (stem->parsed()) {
      const auto inventory = suffix_path.empty() ? text::SuffixInventory::LoadDefault()
                                                 : text::SuffixInventory::Load(suffix_path);
      for (const auto& w : words) {
        const std::string token = text::Normalize(w);
        if (token.empty()) continue;
        out << text::Stem(token, inventory) << '\n';
      }
      return kExitOk;
    }

    if (serve->parsed()) {
      const Corpus corpus = LoadFromFlags(corpus_flags);
      if (corpus.systems().empty()) {
        throw EvalError(ErrorCode::kInvalidArgument, "no --system given");
      }
      human::RatingStore store(corpus, ratings_path);
      service::AnnotationService svc(corpus, store);
      for (const auto& j : judges) svc.OpenSession(j);
      service::HttpServer server(svc);
      if (server.Bind(host, port) < 0) {
        throw EvalError(ErrorCode::kIo, "cannot bind " + host + ":" + std::to_string(port));
      }
      g_server = &server;
      std::signal(SIGINT, StopServer);
      std::signal(SIGTERM, StopServer);
      err << "annotation service on http://" << host << ":" << port << " ("
          << store.history_size() << " ratings replayed)\n";
      server.Listen();
      g_server = nullptr;
      return kExitOk;
    }

    if (export_report->parsed()) {
      std::ifstream in(report_in);
      if (!in) throw EvalError(ErrorCode::kIo, "cannot open " + report_in);
      const auto report = correlation::ReadReportTsv(in);
      std::optional<std::ofstream> file;
      if (!report_out.empty()) file = OpenOut(report_out);
      std::ostream& dest = file ? *file : out;
      if (format == "tsv") {
        correlation::WriteReportTsv(report, dest);
      } else {
        correlation::WriteReportText(report, dest);
      }
      return kExitOk;
    }
  } catch (const EvalError& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kIo ? kExitIo : kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace mteval::cli
