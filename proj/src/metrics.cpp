#include "sadele/metrics.h"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "sadele/textproc.h"

namespace sadele {

namespace {

constexpr int kMaxOrder = 4;

using NgramCounts = std::unordered_map<std::string, long>;

TokenList fold_all(const TokenList& tokens) {
  TokenList out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(casefold_tr(t));
  return out;
}

NgramCounts ngrams(const TokenList& tokens, int n) {
  NgramCounts out;
  const auto len = static_cast<std::size_t>(n);
  if (tokens.size() < len) return out;
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    std::string key;
    for (std::size_t k = 0; k < len; ++k) {
      if (k) key += '\x1f';
      key += tokens[i + k];
    }
    ++out[key];
  }
  return out;
}

long total(const NgramCounts& c) {
  long sum = 0;
  for (const auto& [_, n] : c) sum += n;
  return sum;
}

NgramCounts intersect(const NgramCounts& a, const NgramCounts& b) {
  NgramCounts out;
  for (const auto& [key, n] : a) {
    const auto it = b.find(key);
    if (it != b.end()) out[key] = std::min(n, it->second);
  }
  return out;
}

NgramCounts subtract(const NgramCounts& a, const NgramCounts& b) {
  NgramCounts out;
  for (const auto& [key, n] : a) {
    const auto it = b.find(key);
    const long rest = n - (it == b.end() ? 0 : it->second);
    if (rest > 0) out[key] = rest;
  }
  return out;
}

struct PairScore {
  double precision;
  double recall;
};

/// Precision/recall of a candidate multiset against a reference multiset
/// under the both-empty -> 1, one-empty -> 0 convention.
PairScore compare(const NgramCounts& candidate, const NgramCounts& reference) {
  const long nc = total(candidate);
  const long nr = total(reference);
  if (nc == 0 && nr == 0) return {1.0, 1.0};
  if (nc == 0 || nr == 0) return {0.0, 0.0};
  const auto common = static_cast<double>(total(intersect(candidate, reference)));
  return {common / static_cast<double>(nc), common / static_cast<double>(nr)};
}

double f1(PairScore s) {
  const double sum = s.precision + s.recall;
  return sum == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / sum;
}

}  // namespace

double bleu_corpus(std::span<const TokenList> hyps, std::span<const TokenList> refs) {
  if (hyps.size() != refs.size()) {
    throw Error(ErrorCode::LengthMismatch, "hypothesis and reference counts differ");
  }
  if (hyps.empty()) throw Error(ErrorCode::EmptyInput, "empty corpus");

  std::array<long, kMaxOrder> matched{};
  std::array<long, kMaxOrder> possible{};
  long hyp_len = 0;
  long ref_len = 0;
  for (std::size_t s = 0; s < hyps.size(); ++s) {
    const auto hyp = fold_all(hyps[s]);
    const auto ref = fold_all(refs[s]);
    hyp_len += static_cast<long>(hyp.size());
    ref_len += static_cast<long>(ref.size());
    for (int n = 1; n <= kMaxOrder; ++n) {
      const auto h = ngrams(hyp, n);
      matched[n - 1] += total(intersect(h, ngrams(ref, n)));
      possible[n - 1] += total(h);
    }
  }

  // Orders the hypotheses are too short to contain are left out of the mean.
  double log_sum = 0.0;
  int orders = 0;
  for (int n = 0; n < kMaxOrder; ++n) {
    if (possible[n] == 0) continue;
    if (matched[n] == 0) return 0.0;
    log_sum += std::log(static_cast<double>(matched[n]) / static_cast<double>(possible[n]));
    ++orders;
  }
  if (orders == 0) return 0.0;
  const double c = static_cast<double>(hyp_len);
  const double r = static_cast<double>(ref_len);
  const double brevity = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * brevity * std::exp(log_sum / orders);
}

double sari_sentence(const TokenList& source, const TokenList& hyp, const TokenList& ref) {
  if (source.empty() || ref.empty()) {
    throw Error(ErrorCode::EmptyInput, "SARI needs a non-empty source and reference");
  }
  const auto src = fold_all(source);
  const auto sys = fold_all(hyp);
  const auto gold = fold_all(ref);

  double sum = 0.0;
  int orders = 0;
  for (int n = 1; n <= kMaxOrder; ++n) {
    const auto s = ngrams(src, n);
    const auto h = ngrams(sys, n);
    const auto r = ngrams(gold, n);
    if (s.empty() && h.empty() && r.empty()) continue;

    const double keep = f1(compare(intersect(s, h), intersect(s, r)));
    const double add = f1(compare(subtract(h, s), subtract(r, s)));
    const double del = compare(subtract(s, h), subtract(s, r)).precision;
    sum += (keep + add + del) / 3.0;
    ++orders;
  }
  // Unreachable with a non-empty source: unigrams always exist.
  if (orders == 0) return 0.0;
  return 100.0 * sum / orders;
}

double sari_corpus(std::span<const TokenList> sources, std::span<const TokenList> hyps,
                   std::span<const TokenList> refs) {
  if (sources.size() != hyps.size() || hyps.size() != refs.size()) {
    throw Error(ErrorCode::LengthMismatch, "source, hypothesis and reference counts differ");
  }
  if (sources.empty()) throw Error(ErrorCode::EmptyInput, "empty corpus");
  double sum = 0.0;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    sum += sari_sentence(sources[i], hyps[i], refs[i]);
  }
  return sum / static_cast<double>(sources.size());
}

TokenList eval_tokens(std::string_view text) {
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) return {};
  return tokenize(text).surfaces();
}

EvalRow evaluate_outputs(const ParallelCorpus& corpus, std::span<const std::string> outputs,
                         std::string label) {
  if (corpus.pairs.size() != outputs.size()) {
    throw Error(ErrorCode::LengthMismatch,
                std::to_string(outputs.size()) + " system lines for " +
                    std::to_string(corpus.pairs.size()) + " sentence pairs");
  }
  std::vector<TokenList> sources, hyps, refs;
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    sources.push_back(eval_tokens(corpus.pairs[i].complex));
    hyps.push_back(eval_tokens(outputs[i]));
    refs.push_back(eval_tokens(corpus.pairs[i].simple));
  }
  EvalRow row;
  row.label = std::move(label);
  row.bleu = bleu_corpus(hyps, refs);
  row.sari = sari_corpus(sources, hyps, refs);
  return row;
}

EvalReport ablation_report(const ParallelCorpus& corpus, const Resources& res,
                           const PipelineConfig& cfg, unsigned parallelism) {
  if (corpus.pairs.empty()) throw Error(ErrorCode::EmptyInput, "empty parallel corpus");
  std::vector<std::string> complex;
  complex.reserve(corpus.pairs.size());
  for (const auto& p : corpus.pairs) complex.push_back(p.complex);

  const FeatureSet baseline = {FeatureKind::MlmProb, FeatureKind::Freq};
  FeatureSet with_sim = baseline;
  with_sim.insert(FeatureKind::Similarity);
  FeatureSet with_lm = with_sim;
  with_lm.insert(FeatureKind::LmLoss);

  const std::pair<const char*, FeatureSet> configs[] = {
      {kBaselineLabel, baseline}, {kSimilarityLabel, with_sim}, {kLmLabel, with_lm}};

  EvalReport report;
  for (const auto& [label, features] : configs) {
    PipelineConfig run_cfg = cfg;
    run_cfg.enabled_features = features;
    const auto results = simplify_corpus(complex, res, run_cfg, parallelism);
    std::vector<std::string> outputs;
    outputs.reserve(results.size());
    for (const auto& r : results) outputs.push_back(r.text);
    auto row = evaluate_outputs(corpus, outputs, label);
    row.features = features;
    report.rows.push_back(std::move(row));
  }
  report.bleu = report.rows.back().bleu;
  report.sari = report.rows.back().sari;
  return report;
}

std::string format_report_table(const EvalReport& report) {
  std::size_t width = 5;
  for (const auto& row : report.rows) width = std::max(width, row.label.size());
  std::string out;
  char buf[64];
  const auto pad = [&](const std::string& s) { return s + std::string(width - s.size(), ' '); };
  out += pad("Model") + "  " + "  BLEU" + "  " + "  SARI" + "\n";
  for (const auto& row : report.rows) {
    std::snprintf(buf, sizeof buf, "  %6.2f  %6.2f\n", row.bleu, row.sari);
    out += pad(row.label) + buf;
  }
  return out;
}

std::string format_report_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["bleu"] = report.bleu;
  j["sari"] = report.sari;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r;
    r["model"] = row.label;
    r["bleu"] = row.bleu;
    r["sari"] = row.sari;
    r["features"] = nlohmann::ordered_json::array();
    for (const auto f : row.features) r["features"].push_back(std::string(to_string(f)));
    j["rows"].push_back(std::move(r));
  }
  return j.dump() + "\n";
}

}  // namespace sadele
