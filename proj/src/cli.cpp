#include "sadele/cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "sadele/cwi.h"
#include "sadele/http_backend.h"
#include "sadele/lexres.h"
#include "sadele/metrics.h"
#include "sadele/mlm.h"
#include "sadele/simplify.h"
#include "sadele/textproc.h"
#include "sadele/trace_io.h"

namespace sadele::cli {

namespace {

struct ResourceFlags {
  std::string freq;
  std::string embeddings;
  std::string pos_lexicon;
  std::string mlm_table;
  std::string mlm_url;
};

struct ConfigFlags {
  std::optional<double> threshold;
  std::optional<int> top_k;
  std::optional<int> window;
  std::string features;
  bool keep_nonalpha = false;
};

struct IoFlags {
  std::string input;
  std::string output;
  std::string trace;
  std::string text;
  bool strict = false;
  unsigned jobs = 1;
  std::optional<unsigned long> seed;
};

void add_resource_flags(CLI::App* app, ResourceFlags& r, bool freq_required) {
  auto* freq = app->add_option("--freq", r.freq, "Zipf frequency table (word<TAB>zipf)");
  if (freq_required) freq->required();
  app->add_option("--embeddings", r.embeddings, "Static word vectors (word v1 ... vd)");
  app->add_option("--pos-lexicon", r.pos_lexicon, "POS lexicon (surface<TAB>TAG)");
  app->add_option("--mlm-table", r.mlm_table, "Offline masked-LM table");
  app->add_option("--mlm-url", r.mlm_url,
                  std::string("Model server base URL (falls back to $") + kMlmUrlEnv + ")");
}

void add_config_flags(CLI::App* app, ConfigFlags& c) {
  app->add_option("--threshold", c.threshold, "Zipf threshold for complex words (default 4.0)");
  app->add_option("--top-k", c.top_k, "Candidates requested per complex word (default 10)");
  app->add_option("--window", c.window, "LM loss window, tokens per side (default 5)");
  app->add_option("--features", c.features,
                  "Comma-separated ranking features: prob,freq,sim,lm (default all)");
  app->add_flag("--keep-nonalpha", c.keep_nonalpha,
                "Do not require complex words to be alphabetic");
}

void add_run_flags(CLI::App* app, IoFlags& io) {
  app->add_option("--input", io.input, "Input file, one sentence per line (default stdin)");
  app->add_option("--output", io.output, "Output file (default stdout)");
  app->add_option("--trace", io.trace, "Write one JSON trace record per input line");
  app->add_flag("--strict", io.strict, "Fail (exit 2) when the model backend is unavailable");
  app->add_option("--jobs", io.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app->add_option("--seed", io.seed,
                  "Accepted for reproducible invocations; the pipeline has no randomness");
}

PipelineConfig make_config(const ConfigFlags& c) {
  PipelineConfig cfg;
  if (c.threshold) cfg.zipf_threshold = *c.threshold;
  if (c.top_k) cfg.top_k = *c.top_k;
  if (c.window) cfg.lm_window = *c.window;
  cfg.require_alphabetic = !c.keep_nonalpha;
  if (!c.features.empty()) {
    cfg.enabled_features.clear();
    std::stringstream ss(c.features);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto kind = parse_feature(name);
      if (!kind) throw Error(ErrorCode::ConfigError, "unknown feature '" + name + "'");
      cfg.enabled_features.insert(*kind);
    }
  }
  cfg.validate();
  return cfg;
}

/// Owns whatever the engine borrows through Resources.
struct LoadedResources {
  PosLexicon tagger;
  FrequencyTable frequencies;
  EmbeddingStore embeddings;
  std::unique_ptr<MlmBackend> backend;

  Resources view() const { return {tagger, frequencies, embeddings, *backend}; }
};

std::unique_ptr<MlmBackend> make_backend(const ResourceFlags& r) {
  std::string url = r.mlm_url;
  if (!r.mlm_table.empty() && !url.empty()) {
    throw Error(ErrorCode::ConfigError, "give exactly one of --mlm-table and --mlm-url");
  }
  if (r.mlm_table.empty() && url.empty()) {
    if (const char* env = std::getenv(kMlmUrlEnv); env && *env) url = env;
  }
  if (!r.mlm_table.empty()) {
    return std::make_unique<TableBackend>(TableBackend::load(r.mlm_table));
  }
  if (!url.empty()) return std::make_unique<HttpBackend>(url);
  throw Error(ErrorCode::ConfigError,
              std::string("no model backend: pass --mlm-table or --mlm-url, or set ") + kMlmUrlEnv);
}

LoadedResources load_resources(const ResourceFlags& r) {
  LoadedResources out;
  out.backend = make_backend(r);
  if (r.freq.empty()) throw Error(ErrorCode::ConfigError, "--freq is required");
  out.frequencies = FrequencyTable::load(r.freq);
  if (!r.embeddings.empty()) out.embeddings = EmbeddingStore::load(r.embeddings);
  if (!r.pos_lexicon.empty()) out.tagger = PosLexicon::load(r.pos_lexicon);
  return out;
}

std::vector<std::string> read_input(const IoFlags& io, std::istream& in) {
  if (!io.text.empty()) return {io.text};
  if (!io.input.empty()) return read_lines(io.input);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

/// Writes to --output when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorCode::IoError, "cannot write " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

int cmd_simplify(const ResourceFlags& rf, const ConfigFlags& cf, const IoFlags& io,
                 std::istream& in, std::ostream& out) {
  const auto cfg = make_config(cf);
  const auto loaded = load_resources(rf);
  const auto lines = read_input(io, in);
  const auto results = simplify_corpus(lines, loaded.view(), cfg, io.jobs, io.strict);

  Sink sink(io.output, out);
  for (const auto& r : results) *sink << r.text << '\n';
  if (!io.trace.empty()) {
    Sink trace(io.trace, out);
    for (const auto& r : results) *trace << trace_to_json_line(r.trace) << '\n';
  }
  return kExitOk;
}

/// Left-justifies to `width` code points.
std::string pad_right(const std::string& s, std::size_t width) {
  std::size_t cps = 0;
  for (const unsigned char ch : s) cps += (ch & 0xC0) != 0x80;
  return cps >= width ? s : s + std::string(width - cps, ' ');
}

std::string fmt(const char* pattern, double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, pattern, value);
  return buf;
}

int cmd_inspect(const ResourceFlags& rf, const ConfigFlags& cf, const IoFlags& io,
                std::istream& in, std::ostream& out) {
  const auto cfg = make_config(cf);
  const auto loaded = load_resources(rf);
  const auto lines = read_input(io, in);
  const auto results = simplify_corpus(lines, loaded.view(), cfg, io.jobs, io.strict);

  Sink sink(io.output, out);
  auto& os = *sink;
  for (const auto& r : results) {
    const auto& trace = r.trace;
    os << "sentence: " << trace.sentence.text << '\n';
    if (!trace.error.empty()) {
      os << "  error: " << trace.error << "\n\n";
      continue;
    }
    os << "output:   " << r.text << '\n';
    if (trace.decisions.empty()) os << "  no complex words\n";
    for (const auto& d : trace.decisions) {
      os << "  [" << d.token_index << "] " << trace.sentence.tokens[d.token_index].surface
         << "  zipf=" << fmt("%.2f", d.orig_zipf) << " loss=" << fmt("%.4f", d.orig_loss)
         << "  -> " << to_string(d.reason);
      if (d.chosen) os << " (" << d.chosen->surface << ")";
      if (!d.error.empty()) os << "  " << d.error;
      os << '\n';
      if (d.candidates.empty()) continue;
      os << "      #  candidate          log_prob   zipf    sim     loss    r_prob r_freq r_sim  r_lm   fused\n";
      std::size_t n = 0;
      for (const auto& c : d.candidates) {
        char row[256];
        const auto rank = [&](FeatureKind k) {
          const auto v = c.rank(k);
          return v ? fmt("%6.2f", *v) : std::string("     -");
        };
        std::snprintf(row, sizeof row, "  %5zu  %s %8.4f %6.2f %6s %8.4f ", ++n,
                      pad_right(c.surface, 18).c_str(), c.mlm_log_prob, c.zipf,
                      c.has_vector ? fmt("%6.3f", c.similarity).c_str() : "  n/a", c.lm_loss);
        os << row << rank(FeatureKind::MlmProb) << ' ' << rank(FeatureKind::Freq) << ' '
           << rank(FeatureKind::Similarity) << ' ' << rank(FeatureKind::LmLoss) << ' '
           << fmt("%6.3f", c.fused_score) << '\n';
      }
    }
    os << '\n';
  }
  return kExitOk;
}

int cmd_evaluate(const ResourceFlags& rf, const ConfigFlags& cf, const IoFlags& io,
                 const std::string& pairs, const std::string& system, bool ablation, bool json,
                 std::ostream& out, std::ostream& err) {
  const auto corpus = load_parallel(pairs);
  EvalReport report;
  if (ablation) {
    if (!system.empty()) err << "note: --system is ignored with --ablation\n";
    const auto cfg = make_config(cf);
    const auto loaded = load_resources(rf);
    report = ablation_report(corpus, loaded.view(), cfg, io.jobs);
  } else {
    if (system.empty()) {
      throw Error(ErrorCode::ConfigError, "evaluate needs --system or --ablation");
    }
    const auto outputs = read_lines(system);
    auto row = evaluate_outputs(corpus, outputs, "System");
    report.bleu = row.bleu;
    report.sari = row.sari;
    report.rows.push_back(std::move(row));
  }
  Sink sink(io.output, out);
  *sink << (json ? format_report_json(report) : format_report_table(report));
  return kExitOk;
}

int cmd_cwi(const ResourceFlags& rf, const ConfigFlags& cf, const std::string& dataset_path,
            const std::string& compare_path, bool json, std::ostream& out) {
  const auto cfg = make_config(cf);
  const auto dataset = load_cwi_dataset(dataset_path);
  const auto table = FrequencyTable::load(rf.freq);
  PosLexicon tagger;
  if (!rf.pos_lexicon.empty()) tagger = PosLexicon::load(rf.pos_lexicon);

  const auto gold = flatten_labels(dataset);
  const auto pred = label_dataset(dataset, FrequencyLabeler(table, cfg), tagger);
  const auto report = score_labels(pred, gold);

  std::vector<int> other = gold;
  if (!compare_path.empty()) {
    other = label_dataset(dataset, DatasetLabeler(load_cwi_dataset(compare_path)), tagger);
  }
  const double agreement = overlap(pred, other);

  if (json) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "{\"precision\":%.6f,\"recall\":%.6f,\"f1\":%.6f,\"support\":%zu,"
                  "\"overlap\":%.6f}\n",
                  report.precision, report.recall, report.f1, report.support, agreement);
    out << buf;
  } else {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "precision=%.4f recall=%.4f f1=%.4f support=%zu overlap=%.4f\n",
                  report.precision, report.recall, report.f1, report.support, agreement);
    out << buf;
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Lexical simplification for Turkish", "sadele"};
  app.require_subcommand(1);

  ResourceFlags rf;
  ConfigFlags cf;
  IoFlags io;
  std::string pairs, system, dataset, compare;
  bool ablation = false;
  bool json = false;

  auto* simplify = app.add_subcommand("simplify", "Simplify sentences, one per line");
  add_resource_flags(simplify, rf, true);
  add_config_flags(simplify, cf);
  add_run_flags(simplify, io);

  auto* inspect = app.add_subcommand("inspect", "Show candidate tables for complex words");
  add_resource_flags(inspect, rf, true);
  add_config_flags(inspect, cf);
  add_run_flags(inspect, io);
  inspect->add_option("--text", io.text, "Sentence to inspect instead of --input");

  auto* evaluate = app.add_subcommand("evaluate", "BLEU/SARI against a parallel corpus");
  evaluate->add_option("--pairs", pairs, "Parallel corpus (complex<TAB>simple)")->required();
  evaluate->add_option("--system", system, "System output, one line per pair");
  evaluate->add_flag("--ablation", ablation,
                     "Run the engine with the three feature configurations");
  evaluate->add_flag("--json", json, "Machine-readable report");
  add_resource_flags(evaluate, rf, false);
  add_config_flags(evaluate, cf);
  add_run_flags(evaluate, io);

  auto* cwi = app.add_subcommand("cwi", "Score frequency-based complex word identification");
  cwi->add_option("--dataset", dataset, "Gold CWI dataset (surface<TAB>label blocks)")->required();
  cwi->add_option("--freq", rf.freq, "Zipf frequency table")->required();
  cwi->add_option("--pos-lexicon", rf.pos_lexicon, "POS lexicon");
  cwi->add_option("--compare", compare,
                  "Labels from another labeler, same format; overlap is computed against them");
  cwi->add_flag("--json", json, "Machine-readable report");
  add_config_flags(cwi, cf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitInput;
  }

  try {
    if (*simplify) return cmd_simplify(rf, cf, io, in, out);
    if (*inspect) return cmd_inspect(rf, cf, io, in, out);
    if (*evaluate) return cmd_evaluate(rf, cf, io, pairs, system, ablation, json, out, err);
    if (*cwi) return cmd_cwi(rf, cf, dataset, compare, json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::BackendUnavailable || e.code() == ErrorCode::BackendProtocol) {
      return kExitBackend;
    }
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace sadele::cli
