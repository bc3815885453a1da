#pragma once

// Independent reference implementations used to pin expected values. These
// stay deliberately naive (full DP tables, pairwise counting) and must not
// share code with the library paths they check.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace oracle {

inline std::size_t levenshtein_full_dp(const std::string& a, const std::string& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<std::size_t>> dp(n + 1, std::vector<std::size_t>(m + 1));
  for (std::size_t i = 0; i <= n; ++i) dp[i][0] = i;
  for (std::size_t j = 0; j <= m; ++j) dp[0][j] = j;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      dp[i][j] = std::min({dp[i - 1][j] + 1, dp[i][j - 1] + 1,
                           dp[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
  return dp[n][m];
}

inline std::size_t lcs_full_dp(const std::vector<std::string>& a,
                               const std::vector<std::string>& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1,
                                           std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j)
      dp[i][j] = a[i - 1] == b[j - 1] ? dp[i - 1][j - 1] + 1
                                      : std::max(dp[i - 1][j], dp[i][j - 1]);
  return dp[a.size()][b.size()];
}

inline double rouge_l_from_lcs(const std::vector<std::string>& ref,
                               const std::vector<std::string>& cand) {
  if (ref.empty() && cand.empty()) return 1.0;
  if (ref.empty() || cand.empty()) return 0.0;
  double lcs = static_cast<double>(lcs_full_dp(ref, cand));
  if (lcs == 0.0) return 0.0;
  double p = lcs / static_cast<double>(cand.size());
  double r = lcs / static_cast<double>(ref.size());
  return 2.0 * p * r / (p + r);
}

inline double auc_pairwise(const std::vector<std::pair<double, int>>& scored) {
  double wins = 0.0;
  std::size_t pairs = 0;
  for (const auto& [sp, lp] : scored) {
    if (!lp) continue;
    for (const auto& [sn, ln] : scored) {
      if (ln) continue;
      ++pairs;
      if (sp > sn)
        wins += 1.0;
      else if (sp == sn)
        wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace oracle
