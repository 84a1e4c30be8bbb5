#include "abmc/bench/ess.hpp"

#include <stdexcept>

namespace abmc::bench {

EssResult ess(const Eigen::Ref<const Vector>& x) {
  const long n = x.size();
  if (n < 100) throw std::invalid_argument("ess: need at least 100 samples");
  const double mean = x.mean();
  const Vector c = x.array() - mean;
  const double gamma0 = c.squaredNorm() / static_cast<double>(n);
  if (!(gamma0 > 0.0)) return {1.0, true};

  auto gamma = [&](long k) {
    double acc = 0.0;
    for (long i = 0; i + k < n; ++i) acc += c(i) * c(i + k);
    return acc / static_cast<double>(n);
  };

  double tau = 1.0;
  for (long k = 1; k + 1 < n; k += 2) {
    const double rho_a = gamma(k) / gamma0;
    const double rho_b = gamma(k + 1) / gamma0;
    if (rho_a + rho_b <= 0.0) break;
    tau += 2.0 * (rho_a + rho_b);
  }
  double value = static_cast<double>(n) / tau;
  if (value < 1.0) value = 1.0;
  if (value > static_cast<double>(n)) value = static_cast<double>(n);
  return {value, false};
}

}  // namespace abmc::bench
