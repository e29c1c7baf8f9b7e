#include "ckn/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace ckn {

CknParams sample_params(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick_n(2, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = pick_n(rng);
  const double p = 1.3 + 2.7 * unit(rng);
  const double q_cap = std::min(critical_exponent(n, p), p + 5.0);
  const double q = p + (q_cap - p) * (0.08 + 0.84 * unit(rng));
  const double H = 0.2 + 2.3 * unit(rng);
  return CknParams::validate(n, p, q, p - n + p * H);
}

std::vector<CknParams> sample_params(std::mt19937_64& rng, int count) {
  std::vector<CknParams> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) out.push_back(sample_params(rng));
  return out;
}

std::vector<CknParams> reference_params() {
  return {
      CknParams::validate(3, 2.0, 4.0, 0.0),  CknParams::validate(3, 2.0, 3.0, 1.0),
      CknParams::validate(3, 2.0, 3.0, 2.0),  CknParams::validate(3, 3.0, 4.0, 0.5),
      CknParams::validate(2, 1.5, 3.0, 0.2),  CknParams::validate(4, 1.7, 2.5, -1.0),
      CknParams::validate(5, 2.5, 4.0, 3.0),  CknParams::validate(2, 3.0, 5.0, 1.5),
      CknParams::validate(3, 2.5, 6.0, -0.2), CknParams::validate(6, 2.0, 2.6, 0.0),
      CknParams::validate(2, 2.0, 7.0, 0.5),  CknParams::validate(4, 3.5, 6.0, 2.0),
  };
}

}  // namespace ckn
