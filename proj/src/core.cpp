#include "sadele/core.h"

#include <utility>

namespace sadele {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EMPTY_INPUT";
    case ErrorCode::TaggerContractViolation: return "TAGGER_CONTRACT_VIOLATION";
    case ErrorCode::InvalidSubstitution: return "INVALID_SUBSTITUTION";
    case ErrorCode::ParseError: return "PARSE_ERROR";
    case ErrorCode::RangeError: return "RANGE_ERROR";
    case ErrorCode::DimMismatch: return "DIM_MISMATCH";
    case ErrorCode::LabelError: return "LABEL_ERROR";
    case ErrorCode::UntaggedInput: return "UNTAGGED_INPUT";
    case ErrorCode::LengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::IndexError: return "INDEX_ERROR";
    case ErrorCode::BackendUnavailable: return "BACKEND_UNAVAILABLE";
    case ErrorCode::BackendProtocol: return "BACKEND_PROTOCOL";
    case ErrorCode::ConfigError: return "CONFIG_ERROR";
    case ErrorCode::IoError: return "IO_ERROR";
  }
  return "UNKNOWN";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> line) {
  std::string out(to_string(code));
  if (line) out += "(line " + std::to_string(*line) + ")";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message,
             std::optional<std::size_t> line)
    : std::runtime_error(format_message(code, message, line)),
      code_(code),
      line_(line) {}

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Pron: return "PRON";
    case PosTag::Num: return "NUM";
    case PosTag::Punct: return "PUNCT";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

std::optional<PosTag> parse_pos_tag(std::string_view name) {
  static constexpr std::pair<std::string_view, PosTag> kNames[] = {
      {"NOUN", PosTag::Noun}, {"NN", PosTag::Noun},   {"VERB", PosTag::Verb},
      {"VB", PosTag::Verb},   {"ADJ", PosTag::Adj},   {"JJ", PosTag::Adj},
      {"ADV", PosTag::Adv},   {"RB", PosTag::Adv},    {"PRON", PosTag::Pron},
      {"NUM", PosTag::Num},   {"PUNCT", PosTag::Punct}, {"OTHER", PosTag::Other},
  };
  for (const auto& [key, tag] : kNames) {
    if (key == name) return tag;
  }
  return std::nullopt;
}

bool TaggedSentence::is_tagged() const {
  for (const auto& t : tokens) {
    if (!t.pos) return false;
  }
  return true;
}

std::vector<std::string> TaggedSentence::surfaces() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(t.surface);
  return out;
}

std::string TaggedSentence::reconstruct() const {
  std::string out;
  std::size_t cursor = 0;
  for (const auto& t : tokens) {
    out.append(text, cursor, t.start - cursor);
    out += t.surface;
    cursor = t.end;
  }
  out.append(text, cursor, std::string::npos);
  return out;
}

bool TaggedSentence::well_formed() const {
  std::size_t cursor = 0;
  for (const auto& t : tokens) {
    if (t.start < cursor || t.start >= t.end || t.end > text.size()) return false;
    if (text.compare(t.start, t.end - t.start, t.surface) != 0) return false;
    cursor = t.end;
  }
  return true;
}

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::MlmProb: return "MLM_PROB";
    case FeatureKind::Freq: return "FREQ";
    case FeatureKind::Similarity: return "SIMILARITY";
    case FeatureKind::LmLoss: return "LM_LOSS";
  }
  return "MLM_PROB";
}

std::optional<FeatureKind> parse_feature(std::string_view name) {
  static constexpr std::pair<std::string_view, FeatureKind> kNames[] = {
      {"MLM_PROB", FeatureKind::MlmProb}, {"prob", FeatureKind::MlmProb},
      {"FREQ", FeatureKind::Freq},        {"freq", FeatureKind::Freq},
      {"SIMILARITY", FeatureKind::Similarity}, {"sim", FeatureKind::Similarity},
      {"similarity", FeatureKind::Similarity}, {"LM_LOSS", FeatureKind::LmLoss},
      {"lm", FeatureKind::LmLoss},
  };
  for (const auto& [key, kind] : kNames) {
    if (key == name) return kind;
  }
  return std::nullopt;
}

void PipelineConfig::validate() const {
  if (!(zipf_threshold > 0.0)) {
    throw Error(ErrorCode::ConfigError, "zipf_threshold must be > 0");
  }
  if (top_k < 0) throw Error(ErrorCode::ConfigError, "top_k must be >= 0");
  if (lm_window < 0) throw Error(ErrorCode::ConfigError, "lm_window must be >= 0");
  if (!enabled_features.contains(FeatureKind::MlmProb) ||
      !enabled_features.contains(FeatureKind::Freq)) {
    throw Error(ErrorCode::ConfigError,
                "MLM_PROB and FREQ must always be enabled");
  }
}

double SubstituteCandidate::feature_value(FeatureKind kind) const {
  switch (kind) {
    case FeatureKind::MlmProb: return mlm_log_prob;
    case FeatureKind::Freq: return zipf;
    case FeatureKind::Similarity: return similarity;
    case FeatureKind::LmLoss: return lm_loss;
  }
  return 0.0;
}

std::string_view to_string(DecisionReason reason) {
  switch (reason) {
    case DecisionReason::Accepted: return "ACCEPTED";
    case DecisionReason::GateFreqFail: return "GATE_FREQ_FAIL";
    case DecisionReason::GateLossFail: return "GATE_LOSS_FAIL";
    case DecisionReason::NoCandidates: return "NO_CANDIDATES";
    case DecisionReason::BackendError: return "BACKEND_ERROR";
  }
  return "NO_CANDIDATES";
}

std::optional<DecisionReason> parse_decision_reason(std::string_view name) {
  for (auto r : {DecisionReason::Accepted, DecisionReason::GateFreqFail,
                 DecisionReason::GateLossFail, DecisionReason::NoCandidates,
                 DecisionReason::BackendError}) {
    if (to_string(r) == name) return r;
  }
  return std::nullopt;
}

}  // namespace sadele
