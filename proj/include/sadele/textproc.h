#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sadele/core.h"

namespace sadele {

/// Lowercases with Turkish rules: 'I' -> 'ı' and 'İ' -> 'i'. Every other
/// code point uses the default simple Unicode lowercase mapping.
std::string casefold_tr(std::string_view s);

/// Uppercases the first code point with Turkish rules ('i' -> 'İ',
/// 'ı' -> 'I'); the rest of the string is left untouched.
std::string capitalize_tr(std::string_view s);

bool starts_with_upper(std::string_view s);

/// True when every code point is a letter. Empty strings are not alphabetic.
bool is_alphabetic(std::string_view s);

/// The part of a surface before the first apostrophe, so "Ankara'da" gives
/// "Ankara". Surfaces without an apostrophe are returned whole.
std::string_view apostrophe_stem(std::string_view s);

bool is_punctuation_only(std::string_view s);
bool is_numeric(std::string_view s);

/// Splits on whitespace, peels leading/trailing punctuation into separate
/// tokens and keeps internal apostrophes and hyphens. POS tags are unset.
TaggedSentence tokenize(std::string_view text);

/// Builds a sentence from pre-split tokens joined by single spaces.
TaggedSentence sentence_from_tokens(std::span<const std::string> tokens);

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual std::vector<PosTag> tag(std::span<const std::string> tokens) const = 0;
};

/// Dictionary tagger. Unknown surfaces fall back to PUNCT for punctuation,
/// NUM for numerals and `default_tag` otherwise.
class PosLexicon : public PosTagger {
 public:
  PosLexicon() = default;
  explicit PosLexicon(std::unordered_map<std::string, PosTag> entries,
                      PosTag default_tag = PosTag::Noun);

  /// UTF-8 TSV "surface<TAB>TAG"; '#' lines and blank lines are skipped.
  static PosLexicon load(const std::filesystem::path& path);

  void insert(std::string_view surface, PosTag tag);
  PosTag lookup(std::string_view surface) const;
  std::vector<PosTag> tag(std::span<const std::string> tokens) const override;

  std::size_t size() const { return entries_.size(); }
  PosTag default_tag() const { return default_tag_; }

 private:
  std::unordered_map<std::string, PosTag> entries_;
  PosTag default_tag_ = PosTag::Noun;
};

TaggedSentence tag_sentence(const TaggedSentence& sent, const PosTagger& tagger);

/// (token index, replacement surface)
using Substitution = std::pair<std::size_t, std::string>;

/// Replaces each listed token span; the replacement is capitalized when the
/// original token started with an uppercase letter.
std::string apply_substitutions(const TaggedSentence& sent,
                                std::span<const Substitution> subs);

}  // namespace sadele
