#include "testgen/naturalness/levenshtein.hpp"

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

namespace testgen::naturalness {

int levenshtein_distance(std::string_view a, std::string_view b) {
    const size_t n = a.size(), m = b.size();
    if (n == 0) return static_cast<int>(m);
    if (m == 0) return static_cast<int>(n);
    std::vector<int> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= m; ++j) {
            int cost = a[i - 1] == b[j - 1] ? 0 : 1;
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

double normalized_similarity(std::string_view a, std::string_view b) {
    if (a.empty() && b.empty()) return 1.0;
    std::string la(a), lb(b);
    std::transform(la.begin(), la.end(), la.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    std::transform(lb.begin(), lb.end(), lb.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    double d = levenshtein_distance(la, lb);
    double denom = static_cast<double>(std::max(la.size(), lb.size()));
    return 1.0 - d / denom;
}

}  // namespace testgen::naturalness
