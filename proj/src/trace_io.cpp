#include "sadele/trace_io.h"

#include <json.hpp>

namespace sadele {

using nlohmann::ordered_json;

namespace {

ordered_json candidate_json(const SubstituteCandidate& c) {
  ordered_json ranks = ordered_json::object();
  for (const auto kind : kAllFeatures) {
    if (const auto r = c.rank(kind)) ranks[std::string(to_string(kind))] = *r;
  }
  ordered_json j;
  j["surface"] = c.surface;
  j["mlm_log_prob"] = c.mlm_log_prob;
  j["zipf"] = c.zipf;
  if (c.has_vector) {
    j["similarity"] = c.similarity;
  } else {
    j["similarity"] = nullptr;  // no vector: ranked as 0.0
  }
  j["lm_loss"] = c.lm_loss;
  j["ranks"] = std::move(ranks);
  j["fused_score"] = c.fused_score;
  return j;
}

}  // namespace

std::string trace_to_json_line(const SimplificationTrace& trace) {
  ordered_json j;
  j["text"] = trace.sentence.text;
  ordered_json decisions = ordered_json::array();
  for (const auto& d : trace.decisions) {
    ordered_json dj;
    dj["token_index"] = d.token_index;
    dj["token"] = d.token_index < trace.sentence.tokens.size()
                      ? trace.sentence.tokens[d.token_index].surface
                      : std::string();
    dj["orig_zipf"] = d.orig_zipf;
    dj["orig_loss"] = d.orig_loss;
    ordered_json cands = ordered_json::array();
    for (const auto& c : d.candidates) cands.push_back(candidate_json(c));
    dj["candidates"] = std::move(cands);
    if (d.chosen) {
      dj["chosen"] = d.chosen->surface;
    } else {
      dj["chosen"] = nullptr;
    }
    dj["reason"] = std::string(to_string(d.reason));
    if (!d.error.empty()) dj["error"] = d.error;
    decisions.push_back(std::move(dj));
  }
  j["decisions"] = std::move(decisions);
  if (!trace.error.empty()) j["error"] = trace.error;
  return j.dump(-1, ' ', false, ordered_json::error_handler_t::replace);
}

ParsedTrace parse_trace_line(const std::string& line) {
  ParsedTrace out;
  try {
    const auto j = ordered_json::parse(line);
    out.text = j.at("text").get<std::string>();
    out.error = j.value("error", "");
    for (const auto& dj : j.at("decisions")) {
      ParsedDecision d;
      d.token_index = dj.at("token_index").get<std::size_t>();
      d.token = dj.value("token", "");
      d.orig_zipf = dj.at("orig_zipf").get<double>();
      d.orig_loss = dj.at("orig_loss").get<double>();
      for (const auto& cj : dj.at("candidates")) {
        SubstituteCandidate c;
        c.surface = cj.at("surface").get<std::string>();
        c.mlm_log_prob = cj.at("mlm_log_prob").get<double>();
        c.zipf = cj.at("zipf").get<double>();
        c.has_vector = !cj.at("similarity").is_null();
        c.similarity = c.has_vector ? cj.at("similarity").get<double>() : 0.0;
        c.lm_loss = cj.at("lm_loss").get<double>();
        for (const auto& [name, rank] : cj.at("ranks").items()) {
          const auto kind = parse_feature(name);
          if (!kind) throw Error(ErrorCode::ParseError, "unknown feature '" + name + "'");
          c.feature_ranks[static_cast<std::size_t>(*kind)] = rank.get<double>();
        }
        c.fused_score = cj.at("fused_score").get<double>();
        d.candidates.push_back(std::move(c));
      }
      if (!dj.at("chosen").is_null()) d.chosen = dj.at("chosen").get<std::string>();
      const auto reason = parse_decision_reason(dj.at("reason").get<std::string>());
      if (!reason) throw Error(ErrorCode::ParseError, "unknown decision reason");
      d.reason = *reason;
      out.decisions.push_back(std::move(d));
    }
  } catch (const ordered_json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed trace record: ") + e.what());
  }
  return out;
}

}  // namespace sadele
