#include "sadele/http_backend.h"

#include <httplib.h>
#include <json.hpp>

#include <cmath>

#include "sadele/error.h"

namespace sadele {

using nlohmann::json;

namespace {

httplib::Client make_client(const std::string& base_url, std::chrono::milliseconds timeout) {
  httplib::Client client(base_url);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  return client;
}

json parse_body(const std::string& body, const char* endpoint) {
  try {
    return json::parse(body);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BackendProtocol,
                std::string(endpoint) + ": malformed JSON response: " + e.what());
  }
}

void check_status(const httplib::Result& res, const std::string& base_url, const char* endpoint) {
  if (!res) {
    throw Error(ErrorCode::BackendUnavailable,
                std::string(endpoint) + " at " + base_url + ": " + httplib::to_string(res.error()));
  }
  if (res->status == 503) {
    throw Error(ErrorCode::BackendUnavailable,
                std::string(endpoint) + ": server not ready (503)");
  }
  if (res->status != 200) {
    throw Error(ErrorCode::BackendProtocol, std::string(endpoint) + ": HTTP " +
                                                std::to_string(res->status) + " " + res->body);
  }
}

}  // namespace

HttpBackend::HttpBackend(std::string base_url, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), timeout_(timeout) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  if (base_url_.empty()) throw Error(ErrorCode::ConfigError, "empty model server URL");
}

std::string HttpBackend::post(const std::string& path, const std::string& body) const {
  // httplib::Client is not safe for concurrent use; one per request.
  auto client = make_client(base_url_, timeout_);
  auto res = client.Post(path, body, "application/json");
  check_status(res, base_url_, path.c_str());
  return res->body;
}

std::string HttpBackend::health() const {
  auto client = make_client(base_url_, timeout_);
  auto res = client.Get("/v1/health");
  check_status(res, base_url_, "/v1/health");
  const auto body = parse_body(res->body, "/v1/health");
  if (!body.is_object() || body.value("status", "") != "ok") {
    throw Error(ErrorCode::BackendUnavailable, "/v1/health: status is not ok");
  }
  return body.value("model", "");
}

std::vector<Prediction> HttpBackend::do_predict(std::span<const std::string> tokens,
                                                std::size_t mask_index, int top_k) const {
  const json request = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
                        {"mask_index", mask_index},
                        {"top_k", top_k}};
  const auto body = parse_body(post("/v1/mask-predict", request.dump()), "/v1/mask-predict");

  std::vector<Prediction> out;
  try {
    for (const auto& c : body.at("candidates")) {
      Prediction p{c.at("token").get<std::string>(), c.at("log_prob").get<double>()};
      if (p.surface.empty() || !(p.log_prob <= 0.0)) {
        throw Error(ErrorCode::BackendProtocol,
                    "/v1/mask-predict: candidate with empty token or positive log_prob");
      }
      if (!out.empty() && p.log_prob > out.back().log_prob) {
        throw Error(ErrorCode::BackendProtocol, "/v1/mask-predict: candidates not sorted");
      }
      out.push_back(std::move(p));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BackendProtocol,
                std::string("/v1/mask-predict: unexpected response shape: ") + e.what());
  }
  if (out.size() > static_cast<std::size_t>(top_k)) {
    throw Error(ErrorCode::BackendProtocol, "/v1/mask-predict: more than top_k candidates");
  }
  return out;
}

double HttpBackend::do_position_loss(std::span<const std::string> tokens,
                                     std::size_t position) const {
  const std::size_t positions[] = {position};
  return do_loss(tokens, positions);
}

double HttpBackend::do_loss(std::span<const std::string> tokens,
                            std::span<const std::size_t> positions) const {
  const json request = {{"tokens", std::vector<std::string>(tokens.begin(), tokens.end())},
                        {"positions", std::vector<std::size_t>(positions.begin(), positions.end())}};
  const auto body = parse_body(post("/v1/token-loss", request.dump()), "/v1/token-loss");
  double loss = 0.0;
  try {
    loss = body.at("loss").get<double>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BackendProtocol,
                std::string("/v1/token-loss: unexpected response shape: ") + e.what());
  }
  if (!std::isfinite(loss) || loss < 0.0) {
    throw Error(ErrorCode::BackendProtocol, "/v1/token-loss: loss must be finite and >= 0");
  }
  return loss;
}

}  // namespace sadele
