#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sadele {

/// Casefolded surface -> Zipf frequency (log10 occurrences per billion
/// tokens, 0..9). Missing words have frequency 0.
class FrequencyTable {
 public:
  FrequencyTable() = default;

  /// UTF-8 TSV "word<TAB>zipf". Later duplicates overwrite earlier ones.
  static FrequencyTable load(const std::filesystem::path& path);

  /// Throws RangeError outside [0, 9].
  void insert(std::string_view word, double zipf);
  double zipf(std::string_view surface) const;
  bool contains(std::string_view surface) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, double> entries_;
};

inline FrequencyTable load_frequency_table(const std::filesystem::path& path) {
  return FrequencyTable::load(path);
}

class EmbeddingStore {
 public:
  EmbeddingStore() = default;

  /// Whitespace-separated "word v1 ... vd" lines with an optional leading
  /// "count dim" header.
  static EmbeddingStore load(const std::filesystem::path& path);

  /// The first vector fixes the dimension; later vectors must match it.
  void insert(std::string_view word, std::vector<double> vector);
  const std::vector<double>* find(std::string_view surface) const;

  /// Cosine similarity, or nullopt when a word is missing or has zero norm.
  std::optional<double> cosine(std::string_view a, std::string_view b) const;

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::vector<double>> vectors_;
};

inline EmbeddingStore load_embeddings(const std::filesystem::path& path) {
  return EmbeddingStore::load(path);
}

struct CwiSentence {
  std::vector<std::string> tokens;
  std::vector<int> labels;

  bool operator==(const CwiSentence&) const = default;
};

struct CwiDataset {
  std::vector<CwiSentence> sentences;

  bool operator==(const CwiDataset&) const = default;
};

/// Block TSV: "surface<TAB>label" per token, blank line between sentences.
CwiDataset load_cwi_dataset(const std::filesystem::path& path);
void save_cwi_dataset(const CwiDataset& dataset, const std::filesystem::path& path);

struct SentencePair {
  std::string complex;
  std::string simple;

  bool operator==(const SentencePair&) const = default;
};

struct ParallelCorpus {
  std::vector<SentencePair> pairs;
};

/// UTF-8 TSV "complex<TAB>simple", one pair per line.
ParallelCorpus load_parallel(const std::filesystem::path& path);

/// One sentence per line; no comment handling, blank lines are kept.
std::vector<std::string> read_lines(const std::filesystem::path& path);

}  // namespace sadele
