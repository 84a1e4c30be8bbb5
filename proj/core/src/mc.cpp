#include "abmc/mc.hpp"

#include <stdexcept>

namespace abmc {

Vector mc_estimate(const std::vector<ParamVec>& samples,
                   const std::function<Vector(const ParamVec&)>& h) {
  if (samples.empty()) throw std::invalid_argument("mc_estimate: empty sample list");
  Vector acc = h(samples.front());
  for (size_t i = 1; i < samples.size(); ++i) acc += h(samples[i]);
  return acc / static_cast<double>(samples.size());
}

Vector mc_estimate(const std::vector<ParamVec>& samples, const Functional& h) {
  switch (h.kind) {
    case Functional::Kind::ComponentMean:
      return mc_estimate(samples, [](const ParamVec& x) -> Vector { return x; });
    case Functional::Kind::ComponentSecondMoment:
      return mc_estimate(samples, [](const ParamVec& x) -> Vector {
        return x.array().square().matrix();
      });
    case Functional::Kind::CdfAt:
      return mc_estimate(samples, [&h](const ParamVec& x) -> Vector {
        if (x.size() != h.t.size()) {
          throw std::invalid_argument("mc_estimate: cdf threshold dimension mismatch");
        }
        return (x.array() <= h.t.array()).cast<double>().matrix();
      });
  }
  throw std::logic_error("mc_estimate: unknown functional");
}

}  // namespace abmc
