#pragma once

#include <random>
#include <vector>

#include "ckn/params.hpp"

namespace ckn {

// Draws an admissible, well-conditioned tuple: n in 2..6, p in [1.3, 4],
// q - p spread over (p, min(p*, p + 5)), a = p - n + pH with H in [0.2, 2.5].
// Roughly a third of the draws have p >= n.
CknParams sample_params(std::mt19937_64& rng);

std::vector<CknParams> sample_params(std::mt19937_64& rng, int count);

// Twelve fixed tuples covering p < 2, p = 2, p > 2, p >= n, and weights on
// both sides of the threshold.
std::vector<CknParams> reference_params();

}  // namespace ckn
