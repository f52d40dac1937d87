#pragma once

#include <span>
#include <vector>

#include "sadele/core.h"
#include "sadele/lexres.h"
#include "sadele/textproc.h"

namespace sadele {

/// Indices (ascending) of tokens whose POS is eligible, whose stem is
/// alphabetic (when cfg.require_alphabetic), and whose Zipf frequency is
/// strictly below cfg.zipf_threshold.
std::vector<std::size_t> identify_complex(const TaggedSentence& sent,
                                          const FrequencyTable& table,
                                          const PipelineConfig& cfg);

class CwiLabeler {
 public:
  virtual ~CwiLabeler() = default;
  /// One 0/1 label per token.
  virtual std::vector<int> label(const TaggedSentence& sent) const = 0;
};

class FrequencyLabeler : public CwiLabeler {
 public:
  FrequencyLabeler(const FrequencyTable& table, PipelineConfig cfg)
      : table_(table), cfg_(std::move(cfg)) {}
  std::vector<int> label(const TaggedSentence& sent) const override;

 private:
  const FrequencyTable& table_;
  PipelineConfig cfg_;
};

/// Replays labels recorded in a dataset, matched by exact token sequence.
/// Stands in for a learned sequence labeler whose predictions were exported
/// in the CWI block format.
class DatasetLabeler : public CwiLabeler {
 public:
  explicit DatasetLabeler(const CwiDataset& predictions);
  std::vector<int> label(const TaggedSentence& sent) const override;

 private:
  std::vector<CwiSentence> sentences_;
};

struct CwiReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

/// Precision/recall/F1 for the complex class (label 1). 0/0 ratios are 0.
CwiReport score_labels(std::span<const int> pred, std::span<const int> gold);

/// Fraction of positions where the two label sequences agree.
double overlap(std::span<const int> a, std::span<const int> b);

/// Per-token labels for every sentence of a dataset, concatenated.
std::vector<int> label_dataset(const CwiDataset& dataset, const CwiLabeler& labeler,
                               const PosTagger& tagger);

std::vector<int> flatten_labels(const CwiDataset& dataset);

}  // namespace sadele
