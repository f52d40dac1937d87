#pragma once

#include <chrono>
#include <string>

#include "sadele/mlm.h"

namespace sadele {

/// Client for the model server's JSON protocol:
///   POST /v1/mask-predict {tokens, mask_index, top_k} -> {candidates: [{token, log_prob}]}
///   POST /v1/token-loss   {tokens, positions}         -> {loss}
///   GET  /v1/health                                   -> {status, model}
///
/// Transport failures and 503 answers raise BackendUnavailable; any other
/// non-200 answer or a body that breaks the protocol raises BackendProtocol.
class HttpBackend : public MlmBackend {
 public:
  /// `base_url` such as "http://127.0.0.1:8571".
  explicit HttpBackend(std::string base_url,
                       std::chrono::milliseconds timeout = std::chrono::seconds(30));

  /// Model name reported by /v1/health; throws when the server is not ready.
  std::string health() const;

  const std::string& base_url() const { return base_url_; }

 protected:
  std::vector<Prediction> do_predict(std::span<const std::string> tokens,
                                     std::size_t mask_index, int top_k) const override;
  double do_position_loss(std::span<const std::string> tokens,
                          std::size_t position) const override;
  /// One request for the whole position set.
  double do_loss(std::span<const std::string> tokens,
                 std::span<const std::size_t> positions) const override;

 private:
  std::string post(const std::string& path, const std::string& body) const;

  std::string base_url_;
  std::chrono::milliseconds timeout_;
};

/// Name of the environment variable consulted when no --mlm-url is given.
inline constexpr const char* kMlmUrlEnv = "SADELE_MLM_URL";

}  // namespace sadele
