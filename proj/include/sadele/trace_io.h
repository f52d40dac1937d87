#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sadele/core.h"

namespace sadele {

/// One JSON object on a single line:
///   {"text": ..., "decisions": [{"token_index", "token", "orig_zipf",
///    "orig_loss", "candidates": [{"surface", "mlm_log_prob", "zipf",
///    "similarity", "lm_loss", "ranks": {FEATURE: rank}, "fused_score"}],
///    "chosen", "reason"}]}
/// "error" appears only on failed lines or decisions.
std::string trace_to_json_line(const SimplificationTrace& trace);

/// Decision as read back from a trace line.
struct ParsedDecision {
  std::size_t token_index = 0;
  std::string token;
  double orig_zipf = 0.0;
  double orig_loss = 0.0;
  std::vector<SubstituteCandidate> candidates;
  std::optional<std::string> chosen;
  DecisionReason reason = DecisionReason::NoCandidates;
};

struct ParsedTrace {
  std::string text;
  std::vector<ParsedDecision> decisions;
  std::string error;
};

ParsedTrace parse_trace_line(const std::string& line);

}  // namespace sadele
