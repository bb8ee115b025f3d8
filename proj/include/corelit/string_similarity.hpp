#pragma once

#include <string>
#include <string_view>

namespace corelit {

// Jaro similarity in [0, 1]. Empty vs empty compares as 1, empty vs
// non-empty as 0.
double jaro_similarity(std::string_view a, std::string_view b);

// Jaro-Winkler similarity: Jaro plus a common-prefix boost (prefix capped at
// 4 characters, weight 0.1), applied only when the Jaro score exceeds 0.7.
double jaro_winkler_similarity(std::string_view a, std::string_view b);

enum class ReferenceNormalization {
  strip_pagination_and_lowercase,
  none,
};

// Canonical form of a raw reference string before similarity comparison:
// ASCII lowercase, "p."/"pp." pagination fragments removed, trailing
// digit/punctuation runs removed, whitespace collapsed.
std::string normalize_reference(std::string_view raw, ReferenceNormalization mode);

}  // namespace corelit
