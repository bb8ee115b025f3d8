#include "corelit/string_similarity.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace corelit {

double jaro_similarity(std::string_view a, std::string_view b) {
  const std::size_t la = a.size(), lb = b.size();
  if (la == 0 && lb == 0) return 1.0;
  if (la == 0 || lb == 0) return 0.0;

  const std::size_t longest = std::max(la, lb);
  const std::size_t window = longest / 2 > 0 ? longest / 2 - 1 : 0;

  std::vector<char> matched_a(la, 0), matched_b(lb, 0);
  std::size_t matches = 0;
  for (std::size_t i = 0; i < la; ++i) {
    const std::size_t lo = i > window ? i - window : 0;
    const std::size_t hi = std::min(lb, i + window + 1);
    for (std::size_t j = lo; j < hi; ++j) {
      if (!matched_b[j] && a[i] == b[j]) {
        matched_a[i] = matched_b[j] = 1;
        ++matches;
        break;
      }
    }
  }
  if (matches == 0) return 0.0;

  // Transpositions: matched characters out of order, counted pairwise.
  std::size_t transposed = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < la; ++i) {
    if (!matched_a[i]) continue;
    while (!matched_b[j]) ++j;
    if (a[i] != b[j]) ++transposed;
    ++j;
  }

  const double m = static_cast<double>(matches);
  const double t = static_cast<double>(transposed) / 2.0;
  return (m / static_cast<double>(la) + m / static_cast<double>(lb) + (m - t) / m) / 3.0;
}

double jaro_winkler_similarity(std::string_view a, std::string_view b) {
  double sim = jaro_similarity(a, b);
  if (sim > 0.7) {
    const std::size_t max_prefix = std::min<std::size_t>({a.size(), b.size(), 4});
    std::size_t prefix = 0;
    while (prefix < max_prefix && a[prefix] == b[prefix]) ++prefix;
    sim += static_cast<double>(prefix) * 0.1 * (1.0 - sim);
  }
  return std::min(sim, 1.0);
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool is_pagination_punct(char c) {
  return c == '-' || c == ',' || c == '.' || c == ':' || c == ';' || c == ' ';
}

// Drops "p. 123", "pp. 12-34" and similar fragments. `i` points at the 'p';
// returns the index just past the fragment, or `i` if it is not one.
std::size_t skip_pagination(const std::string& s, std::size_t i) {
  std::size_t j = i + 1;
  if (j < s.size() && s[j] == 'p') ++j;
  if (j >= s.size() || s[j] != '.') return i;
  ++j;
  std::size_t digits_start = j;
  while (digits_start < s.size() && s[digits_start] == ' ') ++digits_start;
  if (digits_start >= s.size() || !is_digit(s[digits_start])) return i;
  std::size_t k = digits_start;
  while (k < s.size() && (is_digit(s[k]) || s[k] == '-' || s[k] == ' ')) ++k;
  return k;
}

}  // namespace

std::string normalize_reference(std::string_view raw, ReferenceNormalization mode) {
  if (mode == ReferenceNormalization::none) return std::string(raw);

  std::string lowered;
  lowered.reserve(raw.size());
  for (char c : raw) {
    lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }

  // Word boundary check keeps "pp." in "supp." intact.
  std::string stripped;
  stripped.reserve(lowered.size());
  for (std::size_t i = 0; i < lowered.size();) {
    if (lowered[i] == 'p' && (i == 0 || !std::isalnum(static_cast<unsigned char>(lowered[i - 1])))) {
      std::size_t next = skip_pagination(lowered, i);
      if (next != i) {
        i = next;
        continue;
      }
    }
    stripped.push_back(lowered[i]);
    ++i;
  }

  // Trailing digit runs are almost always stray paginations or years.
  std::size_t end = stripped.size();
  while (end > 0) {
    std::size_t cut = end;
    while (cut > 0 && is_pagination_punct(stripped[cut - 1])) --cut;
    std::size_t digits_end = cut;
    while (cut > 0 && is_digit(stripped[cut - 1])) --cut;
    if (cut == digits_end) break;  // no digit run before the trailing punctuation
    end = cut;
  }
  stripped.resize(end);

  std::string out;
  out.reserve(stripped.size());
  for (char c : stripped) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
    } else {
      out.push_back(c);
    }
  }
  while (!out.empty() && (out.back() == ' ' || is_pagination_punct(out.back()))) out.pop_back();
  return out;
}

}  // namespace corelit
