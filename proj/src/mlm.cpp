#include "sadele/mlm.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "line_reader.h"
#include "sadele/error.h"
#include "sadele/textproc.h"

namespace sadele {

std::vector<Prediction> MlmBackend::predict_masked(std::span<const std::string> tokens,
                                                   std::size_t mask_index,
                                                   int top_k) const {
  if (mask_index >= tokens.size()) {
    throw Error(ErrorCode::IndexError, "mask_index " + std::to_string(mask_index) +
                                           " out of range for " +
                                           std::to_string(tokens.size()) + " tokens");
  }
  if (top_k < 0) throw Error(ErrorCode::ConfigError, "top_k must be >= 0");
  if (top_k == 0) return {};
  auto out = do_predict(tokens, mask_index, top_k);
  if (out.size() > static_cast<std::size_t>(top_k)) out.resize(static_cast<std::size_t>(top_k));
  return out;
}

double MlmBackend::masked_token_loss(std::span<const std::string> tokens,
                                     std::span<const std::size_t> positions) const {
  std::vector<std::size_t> order(positions.begin(), positions.end());
  std::sort(order.begin(), order.end(), std::greater<>());
  if (std::adjacent_find(order.begin(), order.end()) != order.end()) {
    throw Error(ErrorCode::IndexError, "duplicate loss position");
  }
  if (!order.empty() && order.front() >= tokens.size()) {
    throw Error(ErrorCode::IndexError, "loss position " + std::to_string(order.front()) +
                                           " out of range");
  }
  if (order.empty()) return 0.0;
  return do_loss(tokens, order);
}

double MlmBackend::do_loss(std::span<const std::string> tokens,
                           std::span<const std::size_t> positions) const {
  double total = 0.0;
  for (auto p : positions) total += do_position_loss(tokens, p);
  return total;
}

TableBackend TableBackend::load(const std::filesystem::path& path) {
  TableBackend backend;
  detail::LineReader reader(path);
  std::string_view line;
  bool saw_vocab = false;
  while (reader.next(line)) {
    if (detail::skippable(line)) continue;
    const auto fields = detail::split_tabs(line);
    const auto fail = [&](const std::string& what) {
      throw Error(ErrorCode::ParseError, what, reader.line_number());
    };
    try {
      if (fields[0] == "@vocab") {
        if (fields.size() != 2) fail("expected '@vocab<TAB>N'");
        const auto n = detail::parse_int(fields[1]);
        if (!n || *n <= 0) fail("vocab size must be a positive integer");
        if (saw_vocab) fail("duplicate @vocab header");
        saw_vocab = true;
        backend.set_vocab_size(static_cast<std::size_t>(*n));
      } else if (fields[0] == "@u") {
        if (fields.size() != 3) fail("expected '@u<TAB>word<TAB>prob'");
        const auto p = detail::parse_double(fields[2]);
        if (!p) fail("unparseable probability");
        backend.set_unigram(fields[1], *p);
      } else if (fields[0] == "@b") {
        if (fields.size() != 4) fail("expected '@b<TAB>previous<TAB>word<TAB>prob'");
        const auto p = detail::parse_double(fields[3]);
        if (!p) fail("unparseable probability");
        backend.set_bigram(fields[1], fields[2], *p);
      } else {
        if (fields.size() != 3) fail("expected 'target<TAB>candidate<TAB>log_prob'");
        const auto lp = detail::parse_double(fields[2]);
        if (!lp) fail("unparseable log_prob");
        backend.add_candidate(fields[0], fields[1], *lp);
      }
    } catch (const Error& e) {
      if (e.line()) throw;
      throw Error(e.code(), e.what(), reader.line_number());
    }
  }
  if (!saw_vocab) {
    throw Error(ErrorCode::ParseError, "missing '@vocab<TAB>N' header");
  }
  backend.finalize();
  return backend;
}

void TableBackend::add_candidate(std::string_view target, std::string_view surface,
                                 double log_prob) {
  if (surface.empty() || target.empty()) {
    throw Error(ErrorCode::ParseError, "empty candidate or target");
  }
  if (!(log_prob <= 0.0) || std::isinf(log_prob)) {
    throw Error(ErrorCode::RangeError, "log_prob must be finite and <= 0");
  }
  candidates_[casefold_tr(target)].push_back({std::string(surface), log_prob});
}

void TableBackend::set_unigram(std::string_view word, double prob) {
  if (!(prob > 0.0 && prob <= 1.0)) {
    throw Error(ErrorCode::RangeError, "unigram probability must be in (0, 1]");
  }
  unigram_.insert_or_assign(casefold_tr(word), prob);
}

void TableBackend::set_bigram(std::string_view previous, std::string_view word, double prob) {
  if (!(prob > 0.0 && prob <= 1.0)) {
    throw Error(ErrorCode::RangeError, "conditional probability must be in (0, 1]");
  }
  bigram_.insert_or_assign({casefold_tr(previous), casefold_tr(word)}, prob);
}

void TableBackend::set_vocab_size(std::size_t n) {
  if (n == 0) throw Error(ErrorCode::RangeError, "vocab size must be positive");
  vocab_size_ = n;
}

void TableBackend::finalize() {
  if (vocab_size_ == 0) throw Error(ErrorCode::ConfigError, "vocab size not set");
  for (auto& [target, list] : candidates_) {
    std::stable_sort(list.begin(), list.end(), [](const Prediction& a, const Prediction& b) {
      return a.log_prob > b.log_prob;
    });
    std::set<std::string> seen;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (!seen.insert(list[i].surface).second) {
        throw Error(ErrorCode::ParseError,
                    "duplicate candidate '" + list[i].surface + "' for '" + target + "'");
      }
      if (i > 0 && list[i].log_prob == list[i - 1].log_prob) {
        throw Error(ErrorCode::ParseError,
                    "tied log_prob for '" + target + "'; candidate scores must be distinct");
      }
    }
  }
}

double TableBackend::token_probability(std::span<const std::string> tokens,
                                       std::size_t position) const {
  const auto word = casefold_tr(tokens[position]);
  if (position > 0 && !bigram_.empty()) {
    const auto it = bigram_.find({casefold_tr(tokens[position - 1]), word});
    if (it != bigram_.end()) return it->second;
  }
  const auto it = unigram_.find(word);
  return it != unigram_.end() ? it->second : 1.0 / static_cast<double>(vocab_size_);
}

std::vector<Prediction> TableBackend::do_predict(std::span<const std::string> tokens,
                                                 std::size_t mask_index, int top_k) const {
  const auto it = candidates_.find(casefold_tr(tokens[mask_index]));
  if (it == candidates_.end()) return {};
  const auto n = std::min(it->second.size(), static_cast<std::size_t>(top_k));
  return {it->second.begin(), it->second.begin() + static_cast<std::ptrdiff_t>(n)};
}

double TableBackend::do_position_loss(std::span<const std::string> tokens,
                                      std::size_t position) const {
  return -std::log(token_probability(tokens, position));
}

}  // namespace sadele
