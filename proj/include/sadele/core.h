#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sadele/error.h"

namespace sadele {

enum class PosTag { Noun, Verb, Adj, Adv, Pron, Num, Punct, Other };

std::string_view to_string(PosTag tag);
/// Accepts the canonical names (NOUN, VERB, ...) and the short treebank
/// aliases NN, VB, JJ, RB.
std::optional<PosTag> parse_pos_tag(std::string_view name);

/// A token is a byte range [start, end) of the sentence text it came from.
struct Token {
  std::string surface;
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<PosTag> pos;

  bool operator==(const Token&) const = default;
};

struct TaggedSentence {
  std::string text;
  std::vector<Token> tokens;

  bool is_tagged() const;
  std::vector<std::string> surfaces() const;
  /// Interleaves gap text and token surfaces; equals `text` for any
  /// well-formed sentence.
  std::string reconstruct() const;
  /// Checks offsets, ordering and surface/slice agreement.
  bool well_formed() const;

  bool operator==(const TaggedSentence&) const = default;
};

enum class FeatureKind { MlmProb = 0, Freq = 1, Similarity = 2, LmLoss = 3 };

inline constexpr std::array<FeatureKind, 4> kAllFeatures = {
    FeatureKind::MlmProb, FeatureKind::Freq, FeatureKind::Similarity,
    FeatureKind::LmLoss};

std::string_view to_string(FeatureKind kind);
std::optional<FeatureKind> parse_feature(std::string_view name);

/// Higher raw value ranks first for every feature except LM loss.
constexpr bool higher_is_better(FeatureKind kind) {
  return kind != FeatureKind::LmLoss;
}

using FeatureSet = std::set<FeatureKind>;

struct PipelineConfig {
  double zipf_threshold = 4.0;
  std::set<PosTag> eligible_pos = {PosTag::Noun, PosTag::Verb, PosTag::Adj,
                                   PosTag::Adv};
  int top_k = 10;
  int lm_window = 5;
  std::string subword_marker = "##";
  FeatureSet enabled_features = {kAllFeatures.begin(), kAllFeatures.end()};
  /// Rejects identified words whose stem is not purely alphabetic.
  bool require_alphabetic = true;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Ranks are indexed by FeatureKind; a disabled feature has no rank.
using FeatureRanks = std::array<std::optional<double>, 4>;

struct SubstituteCandidate {
  std::string surface;
  double mlm_log_prob = 0.0;
  double zipf = 0.0;
  /// Cosine similarity to the original word, 0.0 when either has no vector.
  double similarity = 0.0;
  bool has_vector = false;
  double lm_loss = 0.0;
  FeatureRanks feature_ranks{};
  double fused_score = 0.0;

  double feature_value(FeatureKind kind) const;
  std::optional<double> rank(FeatureKind kind) const {
    return feature_ranks[static_cast<std::size_t>(kind)];
  }
};

enum class DecisionReason {
  Accepted,
  GateFreqFail,
  GateLossFail,
  NoCandidates,
  BackendError,
};

std::string_view to_string(DecisionReason reason);
std::optional<DecisionReason> parse_decision_reason(std::string_view name);

struct Decision {
  std::size_t token_index = 0;
  /// Fused order, best first.
  std::vector<SubstituteCandidate> candidates;
  std::optional<SubstituteCandidate> chosen;
  DecisionReason reason = DecisionReason::NoCandidates;
  double orig_zipf = 0.0;
  double orig_loss = 0.0;
  std::string error;
};

struct SimplificationTrace {
  TaggedSentence sentence;
  std::vector<Decision> decisions;
  /// Set when the whole line failed (for example an empty input line).
  std::string error;
};

}  // namespace sadele
