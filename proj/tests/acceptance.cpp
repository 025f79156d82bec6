// Acceptance battery: runs every criterion at the default seed and
// prints one line per criterion.  Exit status reflects the verdict.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <vector>

#include "finsler/verify.hpp"

int main(int argc, char** argv) {
  using namespace finsler::verify;
  std::uint64_t seed = 7;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);

  std::vector<CriterionResult> results;
  try {
    results.push_back(c1_wulff_equality());
    results.push_back(c2_sharpness(seed));
    results.push_back(c3_profile_bound(seed));
    results.push_back(c4_small_volume());
    results.push_back(c5_zero_residual());
    results.push_back(c6_bm(seed));
    results.push_back(c7_content(seed));
    results.push_back(c8_trace());
    results.push_back(c9_irreversibility(seed));
    results.push_back(c10_monotonia());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 2;
  }

  int failed = 0;
  for (const auto& c : results) {
    std::printf("%s\n", one_line(c).c_str());
    if (!c.pass()) ++failed;
  }
  if (failed) {
    std::printf("%d of %zu criteria failed\n", failed, results.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", results.size());
  return 0;
}
