#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sadele {

struct Prediction {
  std::string surface;
  double log_prob = 0.0;  // natural log

  bool operator==(const Prediction&) const = default;
};

/// Masked language model. Public entry points validate arguments and then
/// dispatch to the backend; implementations must be safe to call from
/// several threads at once.
class MlmBackend {
 public:
  virtual ~MlmBackend() = default;

  /// At most `top_k` whole-word fillers for tokens[mask_index], sorted by
  /// descending log-probability.
  std::vector<Prediction> predict_masked(std::span<const std::string> tokens,
                                         std::size_t mask_index, int top_k) const;

  /// Sum over `positions` (visited back to front) of -log p(true token) with
  /// only that one position masked.
  double masked_token_loss(std::span<const std::string> tokens,
                           std::span<const std::size_t> positions) const;

 protected:
  virtual std::vector<Prediction> do_predict(std::span<const std::string> tokens,
                                             std::size_t mask_index,
                                             int top_k) const = 0;
  /// Negative log-probability of tokens[position] with that position masked.
  virtual double do_position_loss(std::span<const std::string> tokens,
                                  std::size_t position) const = 0;
  /// Batched form; the default calls do_position_loss once per position in
  /// the given order. `positions` is already sorted descending.
  virtual double do_loss(std::span<const std::string> tokens,
                         std::span<const std::size_t> positions) const;
};

/// Offline backend driven by a lookup file.
///
/// Candidates are keyed by the casefolded masked word only, so predictions
/// ignore context. Token losses use a unigram table with 1/vocab_size for
/// unseen words, overridden by a left-neighbour conditional probability when
/// the table carries one for the (previous token, token) pair.
///
/// File sections (tab separated, '#' comments allowed):
///   target  candidate  log_prob
///   @u      word       prob
///   @b      previous   word  prob
///   @vocab  N
class TableBackend : public MlmBackend {
 public:
  TableBackend() = default;

  static TableBackend load(const std::filesystem::path& path);

  void add_candidate(std::string_view target, std::string_view surface, double log_prob);
  void set_unigram(std::string_view word, double prob);
  void set_bigram(std::string_view previous, std::string_view word, double prob);
  void set_vocab_size(std::size_t n);

  /// Sorts candidate lists and checks the table invariants.
  void finalize();

  std::size_t vocab_size() const { return vocab_size_; }
  double token_probability(std::span<const std::string> tokens, std::size_t position) const;

 protected:
  std::vector<Prediction> do_predict(std::span<const std::string> tokens,
                                     std::size_t mask_index, int top_k) const override;
  double do_position_loss(std::span<const std::string> tokens,
                          std::size_t position) const override;

 private:
  std::unordered_map<std::string, std::vector<Prediction>> candidates_;
  std::unordered_map<std::string, double> unigram_;
  std::map<std::pair<std::string, std::string>, double> bigram_;
  std::size_t vocab_size_ = 0;
};

}  // namespace sadele
