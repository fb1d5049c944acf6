#pragma once

#include <string_view>

namespace testgen::naturalness {

int levenshtein_distance(std::string_view a, std::string_view b);

// 1 - distance/max(|a|,|b|), case-folded; two empty strings are identical.
double normalized_similarity(std::string_view a, std::string_view b);

}  // namespace testgen::naturalness
