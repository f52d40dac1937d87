#include "sadele/textproc.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <set>

#include "line_reader.h"

namespace sadele {

namespace {

constexpr UChar32 kCapitalDottedI = 0x0130;
constexpr UChar32 kSmallDotlessI = 0x0131;

struct CodePoint {
  UChar32 value;  // negative for an ill-formed sequence
  std::size_t start;
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t n = 0;
  UBool error = false;
  U8_APPEND(buf, n, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(n));
}

UChar32 lower_tr(UChar32 c) {
  if (c == 'I') return kSmallDotlessI;
  if (c == kCapitalDottedI) return 'i';
  return u_tolower(c);
}

UChar32 upper_tr(UChar32 c) {
  if (c == 'i') return kCapitalDottedI;
  if (c == kSmallDotlessI) return 'I';
  return u_toupper(c);
}

bool is_mark(UChar32 c) {
  return (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

bool is_word_char(UChar32 c) {
  return c >= 0 && (u_isalpha(c) || u_isdigit(c) || is_mark(c));
}

bool is_apostrophe(UChar32 c) { return c == '\'' || c == 0x2019; }

bool is_space(UChar32 c) { return c >= 0 && u_isUWhiteSpace(c); }

}  // namespace

std::string casefold_tr(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (const auto& cp : decode(s)) {
    if (cp.value < 0) {
      out.append(s.substr(cp.start, cp.end - cp.start));
    } else {
      append_utf8(out, lower_tr(cp.value));
    }
  }
  return out;
}

std::string capitalize_tr(std::string_view s) {
  if (s.empty()) return {};
  const auto cps = decode(s.substr(0, std::min<std::size_t>(s.size(), U8_MAX_LENGTH)));
  const auto& first = cps.front();
  if (first.value < 0) return std::string(s);
  std::string out;
  append_utf8(out, upper_tr(first.value));
  out.append(s.substr(first.end));
  return out;
}

bool starts_with_upper(std::string_view s) {
  if (s.empty()) return false;
  const auto cps = decode(s.substr(0, std::min<std::size_t>(s.size(), U8_MAX_LENGTH)));
  const UChar32 c = cps.front().value;
  return c >= 0 && (u_isupper(c) || u_istitle(c));
}

bool is_alphabetic(std::string_view s) {
  const auto cps = decode(s);
  if (cps.empty()) return false;
  if (cps.front().value < 0 || !u_isalpha(cps.front().value)) return false;
  return std::all_of(cps.begin(), cps.end(), [](const CodePoint& cp) {
    return cp.value >= 0 && (u_isalpha(cp.value) || is_mark(cp.value));
  });
}

std::string_view apostrophe_stem(std::string_view s) {
  for (const auto& cp : decode(s)) {
    if (is_apostrophe(cp.value)) return s.substr(0, cp.start);
  }
  return s;
}

bool is_punctuation_only(std::string_view s) {
  const auto cps = decode(s);
  if (cps.empty()) return false;
  return std::none_of(cps.begin(), cps.end(), [](const CodePoint& cp) {
    return is_word_char(cp.value) || is_space(cp.value);
  });
}

bool is_numeric(std::string_view s) {
  const auto cps = decode(apostrophe_stem(s));
  if (cps.empty()) return false;
  if (cps.front().value < 0 || !u_isdigit(cps.front().value)) return false;
  if (!u_isdigit(cps.back().value)) return false;
  return std::all_of(cps.begin(), cps.end(), [](const CodePoint& cp) {
    return cp.value >= 0 &&
           (u_isdigit(cp.value) || cp.value == '.' || cp.value == ',');
  });
}

TaggedSentence tokenize(std::string_view text) {
  const auto cps = decode(text);
  TaggedSentence sent;
  sent.text = std::string(text);

  auto emit = [&](std::size_t start, std::size_t end) {
    sent.tokens.push_back(
        Token{std::string(text.substr(start, end - start)), start, end, std::nullopt});
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    if (is_space(cps[i].value)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < cps.size() && !is_space(cps[j].value)) ++j;

    // Chunk is cps[i, j). Peel punctuation from both ends.
    std::size_t lo = i;
    std::size_t hi = j;
    while (lo < hi && !is_word_char(cps[lo].value)) ++lo;
    while (hi > lo && !is_word_char(cps[hi - 1].value)) --hi;

    for (std::size_t k = i; k < lo; ++k) emit(cps[k].start, cps[k].end);
    if (lo < hi) emit(cps[lo].start, cps[hi - 1].end);
    for (std::size_t k = hi; k < j; ++k) emit(cps[k].start, cps[k].end);
    i = j;
  }

  if (sent.tokens.empty()) {
    throw Error(ErrorCode::EmptyInput, "text is empty or whitespace-only");
  }
  return sent;
}

TaggedSentence sentence_from_tokens(std::span<const std::string> tokens) {
  TaggedSentence sent;
  for (const auto& surface : tokens) {
    if (surface.empty()) {
      throw Error(ErrorCode::ParseError, "empty token surface");
    }
    if (!sent.text.empty()) sent.text += ' ';
    const std::size_t start = sent.text.size();
    sent.text += surface;
    sent.tokens.push_back(Token{surface, start, sent.text.size(), std::nullopt});
  }
  return sent;
}

PosLexicon::PosLexicon(std::unordered_map<std::string, PosTag> entries,
                       PosTag default_tag)
    : default_tag_(default_tag) {
  for (auto& [surface, tag] : entries) insert(surface, tag);
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
  PosLexicon lexicon;
  detail::LineReader reader(path);
  std::string_view line;
  while (reader.next(line)) {
    if (detail::skippable(line)) continue;
    const auto fields = detail::split_tabs(line);
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error(ErrorCode::ParseError, "expected 'surface<TAB>TAG'",
                  reader.line_number());
    }
    const auto tag = parse_pos_tag(fields[1]);
    if (!tag) {
      throw Error(ErrorCode::ParseError,
                  "unknown POS tag '" + std::string(fields[1]) + "'",
                  reader.line_number());
    }
    lexicon.insert(fields[0], *tag);
  }
  return lexicon;
}

void PosLexicon::insert(std::string_view surface, PosTag tag) {
  entries_.insert_or_assign(casefold_tr(surface), tag);
}

PosTag PosLexicon::lookup(std::string_view surface) const {
  if (auto it = entries_.find(casefold_tr(surface)); it != entries_.end()) {
    return it->second;
  }
  if (is_punctuation_only(surface)) return PosTag::Punct;
  if (is_numeric(surface)) return PosTag::Num;
  return default_tag_;
}

std::vector<PosTag> PosLexicon::tag(std::span<const std::string> tokens) const {
  std::vector<PosTag> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(lookup(t));
  return out;
}

TaggedSentence tag_sentence(const TaggedSentence& sent, const PosTagger& tagger) {
  if (sent.tokens.empty()) {
    throw Error(ErrorCode::EmptyInput, "cannot tag a sentence without tokens");
  }
  const auto surfaces = sent.surfaces();
  const auto tags = tagger.tag(surfaces);
  if (tags.size() != surfaces.size()) {
    throw Error(ErrorCode::TaggerContractViolation,
                "tagger returned " + std::to_string(tags.size()) + " tags for " +
                    std::to_string(surfaces.size()) + " tokens");
  }
  TaggedSentence out = sent;
  for (std::size_t i = 0; i < tags.size(); ++i) out.tokens[i].pos = tags[i];
  return out;
}

std::string apply_substitutions(const TaggedSentence& sent,
                                std::span<const Substitution> subs) {
  std::vector<const Substitution*> ordered;
  ordered.reserve(subs.size());
  std::set<std::size_t> seen;
  for (const auto& sub : subs) {
    if (sub.first >= sent.tokens.size()) {
      throw Error(ErrorCode::InvalidSubstitution,
                  "token index " + std::to_string(sub.first) + " out of range");
    }
    if (!seen.insert(sub.first).second) {
      throw Error(ErrorCode::InvalidSubstitution,
                  "duplicate token index " + std::to_string(sub.first));
    }
    ordered.push_back(&sub);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const Substitution* a, const Substitution* b) { return a->first < b->first; });

  std::string out;
  out.reserve(sent.text.size());
  std::size_t cursor = 0;
  for (const auto* sub : ordered) {
    const Token& tok = sent.tokens[sub->first];
    out.append(sent.text, cursor, tok.start - cursor);
    out += starts_with_upper(tok.surface) ? capitalize_tr(sub->second) : sub->second;
    cursor = tok.end;
  }
  out.append(sent.text, cursor, std::string::npos);
  return out;
}

}  // namespace sadele
