#include "sadele/cwi.h"

#include <algorithm>

namespace sadele {

std::vector<std::size_t> identify_complex(const TaggedSentence& sent,
                                          const FrequencyTable& table,
                                          const PipelineConfig& cfg) {
  if (!sent.is_tagged()) {
    throw Error(ErrorCode::UntaggedInput, "identify_complex needs a POS-tagged sentence");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sent.tokens.size(); ++i) {
    const Token& tok = sent.tokens[i];
    if (!cfg.eligible_pos.contains(*tok.pos)) continue;
    if (cfg.require_alphabetic && !is_alphabetic(apostrophe_stem(tok.surface))) continue;
    if (table.zipf(tok.surface) < cfg.zipf_threshold) out.push_back(i);
  }
  return out;
}

std::vector<int> FrequencyLabeler::label(const TaggedSentence& sent) const {
  std::vector<int> labels(sent.tokens.size(), 0);
  for (auto i : identify_complex(sent, table_, cfg_)) labels[i] = 1;
  return labels;
}

DatasetLabeler::DatasetLabeler(const CwiDataset& predictions)
    : sentences_(predictions.sentences) {}

std::vector<int> DatasetLabeler::label(const TaggedSentence& sent) const {
  const auto surfaces = sent.surfaces();
  for (const auto& s : sentences_) {
    if (s.tokens == surfaces) return s.labels;
  }
  throw Error(ErrorCode::LengthMismatch,
              "no recorded labels for sentence '" + sent.text + "'");
}

CwiReport score_labels(std::span<const int> pred, std::span<const int> gold) {
  if (pred.size() != gold.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "pred has " + std::to_string(pred.size()) + " labels, gold has " +
                    std::to_string(gold.size()));
  }
  CwiReport r;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == 1;
    const bool g = gold[i] == 1;
    if (g) ++r.support;
    if (p && g) ++r.true_positives;
    if (p && !g) ++r.false_positives;
    if (!p && g) ++r.false_negatives;
  }
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  r.precision = ratio(r.true_positives, r.true_positives + r.false_positives);
  r.recall = ratio(r.true_positives, r.true_positives + r.false_negatives);
  const double sum = r.precision + r.recall;
  r.f1 = sum == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / sum;
  return r;
}

double overlap(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch, "label sequences differ in length");
  }
  if (a.empty()) throw Error(ErrorCode::EmptyInput, "overlap of empty sequences");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) agree += (a[i] == b[i]);
  return static_cast<double>(agree) / static_cast<double>(a.size());
}

std::vector<int> label_dataset(const CwiDataset& dataset, const CwiLabeler& labeler,
                               const PosTagger& tagger) {
  std::vector<int> out;
  for (const auto& s : dataset.sentences) {
    const auto sent = tag_sentence(sentence_from_tokens(s.tokens), tagger);
    const auto labels = labeler.label(sent);
    if (labels.size() != s.tokens.size()) {
      throw Error(ErrorCode::LengthMismatch, "labeler returned wrong number of labels");
    }
    out.insert(out.end(), labels.begin(), labels.end());
  }
  return out;
}

std::vector<int> flatten_labels(const CwiDataset& dataset) {
  std::vector<int> out;
  for (const auto& s : dataset.sentences) {
    out.insert(out.end(), s.labels.begin(), s.labels.end());
  }
  return out;
}

}  // namespace sadele
