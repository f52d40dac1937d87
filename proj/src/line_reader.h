#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sadele/error.h"

namespace sadele::detail {

/// Reads a text file line by line, stripping a trailing '\r' and a leading
/// UTF-8 byte-order mark.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : in_(path) {
    if (!in_) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  }

  bool next(std::string_view& line) {
    if (!std::getline(in_, buffer_)) return false;
    ++line_number_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    if (line_number_ == 1 && buffer_.starts_with("\xEF\xBB\xBF")) buffer_.erase(0, 3);
    line = buffer_;
    return true;
  }

  std::size_t line_number() const { return line_number_; }

 private:
  std::ifstream in_;
  std::string buffer_;
  std::size_t line_number_ = 0;
};

inline bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t") == std::string_view::npos;
}

inline bool skippable(std::string_view line) {
  return is_blank(line) || line.front() == '#';
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto tab = line.find('\t', pos);
    out.push_back(line.substr(pos, tab - pos));
    if (tab == std::string_view::npos) break;
    pos = tab + 1;
  }
  return out;
}

inline std::vector<std::string_view> split_spaces(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    const auto begin = line.find_first_not_of(" \t", pos);
    if (begin == std::string_view::npos) break;
    auto end = line.find_first_of(" \t", begin);
    if (end == std::string_view::npos) end = line.size();
    out.push_back(line.substr(begin, end - begin));
    pos = end;
  }
  return out;
}

/// Whole-field numeric parse; rejects trailing garbage.
inline std::optional<double> parse_double(std::string_view field) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) return std::nullopt;
  return value;
}

inline std::optional<long long> parse_int(std::string_view field) {
  long long value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    return std::nullopt;
  }
  return value;
}

}  // namespace sadele::detail
