#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sadele/core.h"
#include "sadele/lexres.h"
#include "sadele/mlm.h"
#include "sadele/textproc.h"

namespace sadele {

/// Read-only resources shared by every sentence of a run.
struct Resources {
  const PosTagger& tagger;
  const FrequencyTable& frequencies;
  const EmbeddingStore& embeddings;
  const MlmBackend& backend;
};

/// MLM fillers for token `idx`, minus subword pieces, non-alphabetic
/// surfaces and case variants of the original word. Order is preserved.
std::vector<Prediction> generate_candidates(const TaggedSentence& sent, std::size_t idx,
                                            const MlmBackend& backend,
                                            const PipelineConfig& cfg);

/// Filtering step of generate_candidates, applied to an existing list.
std::vector<Prediction> filter_candidates(std::string_view original,
                                          std::span<const Prediction> raw,
                                          const PipelineConfig& cfg);

/// Token indices within cfg.lm_window of idx on each side, excluding idx.
std::vector<std::size_t> loss_positions(std::size_t token_count, std::size_t idx,
                                        const PipelineConfig& cfg);

/// Fills the four feature values of every candidate. Ranks are left unset.
std::vector<SubstituteCandidate> score_candidates(const TaggedSentence& sent, std::size_t idx,
                                                  std::span<const Prediction> raw,
                                                  const Resources& res,
                                                  const PipelineConfig& cfg);

/// Fractional (tie-averaged) ranks, 1 = best, for one raw feature column.
std::vector<double> fractional_ranks(std::span<const double> values, bool higher_is_better);

/// Assigns per-feature ranks and the fused score (mean rank over `enabled`)
/// and returns the candidates best first. Ties on the fused score go to the
/// higher MLM log-probability, then to the casefolded surface.
std::vector<SubstituteCandidate> fuse_ranks(std::vector<SubstituteCandidate> cands,
                                            const FeatureSet& enabled);

struct GateInputs {
  double orig_zipf = 0.0;
  double orig_loss = 0.0;
  double cand_zipf = 0.0;
  double cand_loss = 0.0;
};

enum class GateVerdict { Accept, FreqFail, LossFail };

/// Accept iff the candidate is strictly more frequent and has strictly lower
/// loss. Frequency is checked first.
GateVerdict gate(const GateInputs& g);

struct SentenceResult {
  std::string text;
  SimplificationTrace trace;
};

/// Single pass: complex words are found on the original sentence, each is
/// decided independently and accepted replacements are applied together.
/// Backend failures are recorded in the trace unless `strict` is set, in
/// which case they propagate.
SentenceResult simplify_sentence(std::string_view text, const Resources& res,
                                 const PipelineConfig& cfg, bool strict = false);

/// Order-preserving, deterministic for any `parallelism` >= 1. Errors on a
/// line are recorded in that line's trace and the line is passed through;
/// in strict mode backend failures propagate.
std::vector<SentenceResult> simplify_corpus(std::span<const std::string> lines,
                                            const Resources& res, const PipelineConfig& cfg,
                                            unsigned parallelism = 1, bool strict = false);

}  // namespace sadele
