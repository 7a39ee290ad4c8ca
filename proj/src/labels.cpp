#include "pql/labels.hpp"

#include <algorithm>
#include <boost/locale/encoding_utf.hpp>
#include <stdexcept>
#include <vector>

namespace pql {

namespace {

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' ||
         c == 0x00A0 || c == 0x2007 || c == 0x202F || c == 0x3000;
}

// Simple one-to-one lower-casing for Latin, Greek and Cyrillic letters.
char32_t fold(char32_t c) {
  if (c >= U'A' && c <= U'Z') return c + 32;
  if (c >= 0x00C0 && c <= 0x00DE && c != 0x00D7) return c + 32;
  // Latin Extended-A pairs upper and lower case in adjacent code points.
  if ((c >= 0x0100 && c <= 0x0137) || (c >= 0x014A && c <= 0x0177)) return c % 2 == 0 ? c + 1 : c;
  if ((c >= 0x0139 && c <= 0x0148) || (c >= 0x0179 && c <= 0x017E)) return c % 2 == 1 ? c + 1 : c;
  if (c == 0x0178) return 0x00FF;
  if (c >= 0x0391 && c <= 0x03AB && c != 0x03A2) return c + 32;
  if (c >= 0x0410 && c <= 0x042F) return c + 32;
  if (c >= 0x0400 && c <= 0x040F) return c + 80;
  return c;
}

}  // namespace

std::u32string normalize_label(std::string_view label) {
  std::u32string raw = boost::locale::conv::utf_to_utf<char32_t>(label.data(), label.data() + label.size());
  std::u32string out;
  bool pending_space = false;
  for (char32_t c : raw) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(fold(c));
  }
  return out;
}

double similarity(std::string_view a, std::string_view b) {
  auto x = normalize_label(a), y = normalize_label(b);
  if (x.empty() || y.empty()) throw std::invalid_argument("similarity of an empty label");
  if (x.size() < y.size()) std::swap(x, y);
  std::vector<std::size_t> row(y.size() + 1);
  for (std::size_t j = 0; j <= y.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= y.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (x[i - 1] == y[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return 1.0 - static_cast<double>(row[y.size()]) / static_cast<double>(x.size());
}

std::set<std::string> similar(const std::string& label, double threshold, const Vocabulary& vocab) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw std::invalid_argument("similarity threshold outside [0,1]");
  std::set<std::string> out{label};
  for (const auto& candidate : vocab) {
    if (candidate.empty() || candidate == label) continue;
    // Small tolerance so that thresholds written as decimals (e.g. 0.75)
    // accept scores that are mathematically equal.
    if (similarity(label, candidate) >= threshold - 1e-9) out.insert(candidate);
  }
  return out;
}

}  // namespace pql
