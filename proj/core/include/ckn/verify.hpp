#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ckn/params.hpp"

namespace ckn {

enum class VerifyLevel { kFast, kFull };

// Seed of the randomized full battery. Changing it changes the report.
inline constexpr std::uint64_t kVerifySeed = 20130611;
inline constexpr int kFullSampleCount = 100;

struct BatteryResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  double worst = 0.0;      // largest observed error, in the battery's own measure
  double tolerance = 0.0;
  std::string first_failure;
  bool passed() const noexcept { return failures == 0 && checks > 0; }
};

// Replaceable pieces, so tests can inject a faulty formula and watch the
// batteries catch it.
struct VerifyHooks {
  std::function<double(int, double, double)> a_star;
};

std::vector<CknParams> verify_sample(VerifyLevel level);

std::vector<BatteryResult> run_verify(VerifyLevel level, const VerifyHooks& hooks = {});

bool all_passed(const std::vector<BatteryResult>& results) noexcept;

}  // namespace ckn
