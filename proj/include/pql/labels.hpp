#pragma once

#include <set>
#include <string>
#include <string_view>

namespace pql {

using Vocabulary = std::set<std::string>;

inline constexpr double kDefaultSimilarity = 0.75;

// Trimmed, case-folded, whitespace-collapsed form used for scoring.
std::u32string normalize_label(std::string_view label);

// 1 - lev(a, b) / max(|a|, |b|) over normalized Unicode scalar values.
// Throws std::invalid_argument on empty input.
double similarity(std::string_view a, std::string_view b);

// Labels of vocab (plus `label` itself) scoring at least `threshold`.
std::set<std::string> similar(const std::string& label, double threshold, const Vocabulary& vocab);

}  // namespace pql
