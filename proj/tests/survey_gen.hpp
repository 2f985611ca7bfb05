#pragma once

// Synthetic Likert responses whose attribute means hit a target row.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "electre/survey.hpp"

namespace electre::testing {

inline std::vector<SurveyRecord> synthesize_store(const std::string& store, const std::array<double, 4>& target,
                                                  std::size_t respondents, std::mt19937_64& rng) {
  const std::size_t cells = kItemsPerAttribute * respondents;
  std::vector<SurveyRecord> out(respondents);
  for (std::size_t r = 0; r < respondents; ++r) out[r] = {store, store + "-" + std::to_string(r + 1), {}};

  for (std::size_t a = 0; a < kAttributes; ++a) {
    const long total = std::lround(target[a] * static_cast<double>(cells));
    const long base = total / static_cast<long>(cells);
    const long extra = total - base * static_cast<long>(cells);
    std::vector<int> values(cells, static_cast<int>(base));
    for (long k = 0; k < extra; ++k) values[static_cast<std::size_t>(k)] += 1;
    // Sum-preserving jitter so responses are not all identical.
    std::uniform_int_distribution<std::size_t> pick(0, cells - 1);
    for (std::size_t t = 0; t < cells; ++t) {
      const auto i = pick(rng);
      const auto j = pick(rng);
      if (i != j && values[i] < kLikertMax && values[j] > kLikertMin) {
        ++values[i];
        --values[j];
      }
    }
    std::shuffle(values.begin(), values.end(), rng);
    for (std::size_t r = 0; r < respondents; ++r)
      for (std::size_t q = 0; q < kItemsPerAttribute; ++q)
        out[r].items[a * kItemsPerAttribute + q] = values[r * kItemsPerAttribute + q];
  }
  return out;
}

inline std::string survey_csv(const std::vector<SurveyRecord>& records) {
  std::string out = survey_header() + "\n";
  for (const auto& r : records) {
    out += r.store_id + "," + r.respondent_id;
    for (int v : r.items) out += "," + std::to_string(v);
    out += "\n";
  }
  return out;
}

}  // namespace electre::testing
