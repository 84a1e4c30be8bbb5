#pragma once

#include "abmc/types.hpp"

namespace abmc::bench {

struct EssResult {
  double value = 1.0;
  bool degenerate = false;  // zero-variance input
};

/// Effective sample size of one scalar chain component:
/// M / (1 + 2 sum_k rho_k), the autocorrelation sum truncated at the first
/// nonpositive consecutive pair (initial positive sequence rule). Clamped to
/// [1, M]. Requires at least 100 samples.
EssResult ess(const Eigen::Ref<const Vector>& x);

}  // namespace abmc::bench
