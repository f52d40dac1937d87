#pragma once

#include <span>
#include <string>
#include <vector>

#include "sadele/core.h"
#include "sadele/lexres.h"
#include "sadele/simplify.h"

namespace sadele {

using TokenList = std::vector<std::string>;

/// Corpus BLEU (n = 1..4, single reference, no smoothing), scaled to
/// [0, 100]. Tokens are compared after Turkish casefolding. An order no
/// hypothesis is long enough to contain is left out of the geometric mean;
/// any other zero precision gives 0.
double bleu_corpus(std::span<const TokenList> hyps, std::span<const TokenList> refs);

/// SARI for one sentence against a single reference, scaled to [0, 100].
///
/// Per n-gram order the KEEP and ADD scores are F1 and the DEL score is
/// precision, all over multiset n-grams. A candidate/reference multiset pair
/// that is empty on both sides scores 1, empty on one side scores 0. Orders
/// where source, hypothesis and reference all lack n-grams are skipped.
double sari_sentence(const TokenList& source, const TokenList& hyp, const TokenList& ref);

/// Mean of sari_sentence over the corpus.
double sari_corpus(std::span<const TokenList> sources, std::span<const TokenList> hyps,
                   std::span<const TokenList> refs);

/// Whitespace/punctuation tokenization used by the evaluators; blank lines
/// yield an empty list.
TokenList eval_tokens(std::string_view text);

struct EvalRow {
  std::string label;
  double bleu = 0.0;
  double sari = 0.0;
  /// Features fused for this row; empty for externally produced output.
  FeatureSet features;
};

struct EvalReport {
  double bleu = 0.0;
  double sari = 0.0;
  std::vector<EvalRow> rows;
};

/// Scores a system output against the simple side of `corpus`.
EvalRow evaluate_outputs(const ParallelCorpus& corpus, std::span<const std::string> outputs,
                         std::string label);

inline constexpr const char* kBaselineLabel = "BERT (Prob + Freq)";
inline constexpr const char* kSimilarityLabel = "+ Similarity";
inline constexpr const char* kLmLabel = "+ LM";

/// Runs the engine three times with {MLM_PROB, FREQ}, then + SIMILARITY,
/// then + LM_LOSS. `bleu`/`sari` of the report carry the last (full) row.
EvalReport ablation_report(const ParallelCorpus& corpus, const Resources& res,
                           const PipelineConfig& cfg, unsigned parallelism = 1);

/// Aligned plain-text table, two decimals.
std::string format_report_table(const EvalReport& report);
/// Single JSON object with a "rows" array.
std::string format_report_json(const EvalReport& report);

}  // namespace sadele
