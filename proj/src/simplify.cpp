#include "sadele/simplify.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "sadele/cwi.h"

namespace sadele {

namespace {

bool is_backend_failure(const Error& e) {
  return e.code() == ErrorCode::BackendUnavailable || e.code() == ErrorCode::BackendProtocol;
}

std::string match_case(std::string_view original, const std::string& replacement) {
  return starts_with_upper(original) ? capitalize_tr(replacement) : replacement;
}

}  // namespace

std::vector<Prediction> filter_candidates(std::string_view original,
                                          std::span<const Prediction> raw,
                                          const PipelineConfig& cfg) {
  const auto folded_original = casefold_tr(original);
  std::vector<Prediction> out;
  for (const auto& p : raw) {
    if (!cfg.subword_marker.empty() && p.surface.starts_with(cfg.subword_marker)) continue;
    if (!is_alphabetic(p.surface)) continue;
    if (casefold_tr(p.surface) == folded_original) continue;
    out.push_back(p);
  }
  return out;
}

std::vector<Prediction> generate_candidates(const TaggedSentence& sent, std::size_t idx,
                                            const MlmBackend& backend,
                                            const PipelineConfig& cfg) {
  if (idx >= sent.tokens.size()) {
    throw Error(ErrorCode::IndexError, "token index out of range");
  }
  const auto tokens = sent.surfaces();
  const auto raw = backend.predict_masked(tokens, idx, cfg.top_k);
  return filter_candidates(sent.tokens[idx].surface, raw, cfg);
}

std::vector<std::size_t> loss_positions(std::size_t token_count, std::size_t idx,
                                        const PipelineConfig& cfg) {
  const auto window = static_cast<std::size_t>(std::max(cfg.lm_window, 0));
  const std::size_t lo = idx > window ? idx - window : 0;
  const std::size_t hi = std::min(token_count, idx + window + 1);
  std::vector<std::size_t> out;
  for (std::size_t i = lo; i < hi; ++i) {
    if (i != idx) out.push_back(i);
  }
  return out;
}

std::vector<SubstituteCandidate> score_candidates(const TaggedSentence& sent, std::size_t idx,
                                                  std::span<const Prediction> raw,
                                                  const Resources& res,
                                                  const PipelineConfig& cfg) {
  if (raw.empty()) throw Error(ErrorCode::EmptyInput, "no candidates to score");
  if (idx >= sent.tokens.size()) throw Error(ErrorCode::IndexError, "token index out of range");

  const std::string& original = sent.tokens[idx].surface;
  const auto positions = loss_positions(sent.tokens.size(), idx, cfg);
  auto tokens = sent.surfaces();

  std::vector<SubstituteCandidate> out;
  out.reserve(raw.size());
  for (const auto& p : raw) {
    SubstituteCandidate c;
    c.surface = p.surface;
    c.mlm_log_prob = p.log_prob;
    c.zipf = res.frequencies.zipf(p.surface);
    const auto sim = res.embeddings.cosine(original, p.surface);
    c.has_vector = sim.has_value();
    c.similarity = sim.value_or(0.0);
    tokens[idx] = match_case(original, p.surface);
    c.lm_loss = res.backend.masked_token_loss(tokens, positions);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<double> fractional_ranks(std::span<const double> values, bool higher_is_better) {
  // NaN sorts after every number and ties with other NaNs.
  const auto better = [higher_is_better](double a, double b) {
    if (std::isnan(a)) return false;
    if (std::isnan(b)) return true;
    return higher_is_better ? a > b : a < b;
  };
  const auto tied = [](double a, double b) {
    return (std::isnan(a) && std::isnan(b)) || a == b;
  };

  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return better(values[a], values[b]); });

  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && tied(values[order[i]], values[order[j]])) ++j;
    // Positions i..j-1 (0-based) hold rank positions i+1..j; their mean:
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

std::vector<SubstituteCandidate> fuse_ranks(std::vector<SubstituteCandidate> cands,
                                            const FeatureSet& enabled) {
  if (enabled.empty()) throw Error(ErrorCode::ConfigError, "no ranking feature enabled");
  if (cands.empty()) throw Error(ErrorCode::EmptyInput, "no candidates to rank");

  for (auto& c : cands) {
    c.feature_ranks = {};
    c.fused_score = 0.0;
  }
  std::vector<double> column(cands.size());
  for (const FeatureKind kind : enabled) {
    for (std::size_t i = 0; i < cands.size(); ++i) column[i] = cands[i].feature_value(kind);
    const auto ranks = fractional_ranks(column, higher_is_better(kind));
    for (std::size_t i = 0; i < cands.size(); ++i) {
      cands[i].feature_ranks[static_cast<std::size_t>(kind)] = ranks[i];
    }
  }
  for (auto& c : cands) {
    double sum = 0.0;
    for (const auto& r : c.feature_ranks) sum += r.value_or(0.0);
    c.fused_score = sum / static_cast<double>(enabled.size());
  }

  std::vector<std::string> folded(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) folded[i] = casefold_tr(cands[i].surface);
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = cands[a];
    const auto& cb = cands[b];
    if (ca.fused_score != cb.fused_score) return ca.fused_score < cb.fused_score;
    if (ca.mlm_log_prob != cb.mlm_log_prob) return ca.mlm_log_prob > cb.mlm_log_prob;
    if (folded[a] != folded[b]) return folded[a] < folded[b];
    return ca.surface < cb.surface;
  });

  std::vector<SubstituteCandidate> out;
  out.reserve(cands.size());
  for (auto i : order) out.push_back(std::move(cands[i]));
  return out;
}

GateVerdict gate(const GateInputs& g) {
  if (!(g.cand_zipf > g.orig_zipf)) return GateVerdict::FreqFail;
  if (!(g.cand_loss < g.orig_loss)) return GateVerdict::LossFail;
  return GateVerdict::Accept;
}

SentenceResult simplify_sentence(std::string_view text, const Resources& res,
                                 const PipelineConfig& cfg, bool strict) {
  cfg.validate();
  const auto sent = tag_sentence(tokenize(text), res.tagger);
  const auto complex = identify_complex(sent, res.frequencies, cfg);
  const auto tokens = sent.surfaces();

  SentenceResult result;
  result.trace.sentence = sent;
  std::vector<Substitution> subs;

  for (const auto idx : complex) {
    Decision d;
    d.token_index = idx;
    d.orig_zipf = res.frequencies.zipf(tokens[idx]);
    try {
      const auto raw = generate_candidates(sent, idx, res.backend, cfg);
      if (raw.empty()) {
        d.reason = DecisionReason::NoCandidates;
        result.trace.decisions.push_back(std::move(d));
        continue;
      }
      d.candidates = fuse_ranks(score_candidates(sent, idx, raw, res, cfg), cfg.enabled_features);
      d.orig_loss = res.backend.masked_token_loss(tokens, loss_positions(tokens.size(), idx, cfg));

      const auto& top = d.candidates.front();
      switch (gate({d.orig_zipf, d.orig_loss, top.zipf, top.lm_loss})) {
        case GateVerdict::Accept:
          d.reason = DecisionReason::Accepted;
          d.chosen = top;
          subs.emplace_back(idx, top.surface);
          break;
        case GateVerdict::FreqFail:
          d.reason = DecisionReason::GateFreqFail;
          break;
        case GateVerdict::LossFail:
          d.reason = DecisionReason::GateLossFail;
          break;
      }
    } catch (const Error& e) {
      if (strict || !is_backend_failure(e)) throw;
      d = Decision{};
      d.token_index = idx;
      d.orig_zipf = res.frequencies.zipf(tokens[idx]);
      d.reason = DecisionReason::BackendError;
      d.error = e.what();
    }
    result.trace.decisions.push_back(std::move(d));
  }

  result.text = apply_substitutions(sent, subs);
  return result;
}

std::vector<SentenceResult> simplify_corpus(std::span<const std::string> lines,
                                            const Resources& res, const PipelineConfig& cfg,
                                            unsigned parallelism, bool strict) {
  if (parallelism < 1) throw Error(ErrorCode::ConfigError, "parallelism must be >= 1");
  cfg.validate();

  std::vector<SentenceResult> results(lines.size());
  std::vector<std::exception_ptr> failures(lines.size());

  const auto run_line = [&](std::size_t i) {
    try {
      results[i] = simplify_sentence(lines[i], res, cfg, strict);
    } catch (const Error& e) {
      if (strict && is_backend_failure(e)) {
        failures[i] = std::current_exception();
        return;
      }
      results[i].text = lines[i];
      results[i].trace.sentence.text = lines[i];
      results[i].trace.error = e.what();
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  const std::size_t workers = std::min<std::size_t>(parallelism, lines.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < lines.size(); ++i) run_line(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < lines.size(); i = next++) run_line(i);
      });
    }
  }

  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return results;
}

}  // namespace sadele
