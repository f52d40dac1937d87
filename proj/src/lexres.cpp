#include "sadele/lexres.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "line_reader.h"
#include "sadele/error.h"
#include "sadele/textproc.h"

namespace sadele {

using detail::LineReader;

FrequencyTable FrequencyTable::load(const std::filesystem::path& path) {
  FrequencyTable table;
  LineReader reader(path);
  std::string_view line;
  while (reader.next(line)) {
    if (detail::skippable(line)) continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::ParseError, "expected 'word<TAB>zipf'", reader.line_number());
    }
    const auto value = detail::parse_double(fields[1]);
    if (!value) {
      throw Error(ErrorCode::ParseError,
                  "unparseable zipf '" + std::string(fields[1]) + "'",
                  reader.line_number());
    }
    if (!(*value >= 0.0 && *value <= 9.0)) {
      throw Error(ErrorCode::RangeError,
                  "zipf " + std::string(fields[1]) + " outside [0, 9]",
                  reader.line_number());
    }
    table.entries_.insert_or_assign(casefold_tr(fields[0]), *value);
  }
  return table;
}

void FrequencyTable::insert(std::string_view word, double zipf) {
  if (!(zipf >= 0.0 && zipf <= 9.0)) {
    throw Error(ErrorCode::RangeError, "zipf outside [0, 9]");
  }
  entries_.insert_or_assign(casefold_tr(word), zipf);
}

double FrequencyTable::zipf(std::string_view surface) const {
  const auto it = entries_.find(casefold_tr(surface));
  return it == entries_.end() ? 0.0 : it->second;
}

bool FrequencyTable::contains(std::string_view surface) const {
  return entries_.contains(casefold_tr(surface));
}

EmbeddingStore EmbeddingStore::load(const std::filesystem::path& path) {
  EmbeddingStore store;
  LineReader reader(path);
  std::string_view line;
  std::optional<std::size_t> header_dim;
  bool first_content = true;
  while (reader.next(line)) {
    if (detail::skippable(line)) continue;
    const auto fields = detail::split_spaces(line);
    if (first_content) {
      first_content = false;
      if (fields.size() == 2) {
        const auto count = detail::parse_int(fields[0]);
        const auto dim = detail::parse_int(fields[1]);
        if (count && dim && *count >= 0 && *dim > 0) {
          header_dim = static_cast<std::size_t>(*dim);
          continue;
        }
      }
    }
    if (fields.size() < 2) {
      throw Error(ErrorCode::ParseError, "expected 'word v1 ... vd'", reader.line_number());
    }
    const std::size_t dim = fields.size() - 1;
    const std::size_t expected = store.dim_ ? store.dim_ : header_dim.value_or(dim);
    if (dim != expected) {
      throw Error(ErrorCode::DimMismatch,
                  "vector has " + std::to_string(dim) + " components, expected " +
                      std::to_string(expected),
                  reader.line_number());
    }
    std::vector<double> vector;
    vector.reserve(dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      const auto value = detail::parse_double(fields[i]);
      if (!value) {
        throw Error(ErrorCode::ParseError,
                    "non-numeric component '" + std::string(fields[i]) + "'",
                    reader.line_number());
      }
      vector.push_back(*value);
    }
    store.insert(fields[0], std::move(vector));
  }
  return store;
}

void EmbeddingStore::insert(std::string_view word, std::vector<double> vector) {
  if (vector.empty()) throw Error(ErrorCode::DimMismatch, "empty vector");
  if (dim_ == 0) {
    dim_ = vector.size();
  } else if (vector.size() != dim_) {
    throw Error(ErrorCode::DimMismatch, "vector length does not match store dimension");
  }
  vectors_.insert_or_assign(casefold_tr(word), std::move(vector));
}

const std::vector<double>* EmbeddingStore::find(std::string_view surface) const {
  const auto it = vectors_.find(casefold_tr(surface));
  return it == vectors_.end() ? nullptr : &it->second;
}

std::optional<double> EmbeddingStore::cosine(std::string_view a, std::string_view b) const {
  const auto* va = find(a);
  const auto* vb = find(b);
  if (!va || !vb) return std::nullopt;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) {
    dot += (*va)[i] * (*vb)[i];
    na += (*va)[i] * (*va)[i];
    nb += (*vb)[i] * (*vb)[i];
  }
  if (na == 0.0 || nb == 0.0) return std::nullopt;
  // Rounding can push |cos| a hair past 1 for parallel vectors.
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

CwiDataset load_cwi_dataset(const std::filesystem::path& path) {
  CwiDataset dataset;
  LineReader reader(path);
  std::string_view line;
  CwiSentence current;
  auto flush = [&] {
    if (!current.tokens.empty()) dataset.sentences.push_back(std::move(current));
    current = {};
  };
  while (reader.next(line)) {
    if (detail::is_blank(line)) {
      flush();
      continue;
    }
    if (line.front() == '#') continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::ParseError, "expected 'surface<TAB>label'", reader.line_number());
    }
    if (fields[1] != "0" && fields[1] != "1") {
      throw Error(ErrorCode::LabelError,
                  "label '" + std::string(fields[1]) + "' is not 0 or 1",
                  reader.line_number());
    }
    current.tokens.emplace_back(fields[0]);
    current.labels.push_back(fields[1] == "1" ? 1 : 0);
  }
  flush();
  return dataset;
}

void save_cwi_dataset(const CwiDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  for (const auto& sentence : dataset.sentences) {
    if (sentence.tokens.size() != sentence.labels.size()) {
      throw Error(ErrorCode::LengthMismatch, "tokens and labels differ in length");
    }
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      out << sentence.tokens[i] << '\t' << sentence.labels[i] << '\n';
    }
    out << '\n';
  }
}

ParallelCorpus load_parallel(const std::filesystem::path& path) {
  ParallelCorpus corpus;
  LineReader reader(path);
  std::string_view line;
  while (reader.next(line)) {
    if (detail::skippable(line)) continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 2) {
      throw Error(ErrorCode::ParseError, "expected 'complex<TAB>simple'", reader.line_number());
    }
    if (detail::is_blank(fields[0]) || detail::is_blank(fields[1])) {
      throw Error(ErrorCode::ParseError, "both sides of a pair must be non-empty",
                  reader.line_number());
    }
    corpus.pairs.push_back({std::string(fields[0]), std::string(fields[1])});
  }
  return corpus;
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::vector<std::string> lines;
  LineReader reader(path);
  std::string_view line;
  while (reader.next(line)) lines.emplace_back(line);
  return lines;
}

}  // namespace sadele
